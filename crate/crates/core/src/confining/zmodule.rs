//! Subgroups of finite abelian groups `Z_m1 + ... + Z_md` given by
//! generators, with exact membership.
//!
//! Rows are kept in echelon form with pivots dividing their modulus, and for
//! every pivot row `r` with pivot `a` in column `p` the annihilator multiple
//! `(m_p / a) r` is inserted as well. That makes greedy reduction a complete
//! membership test (the Howell property).

use crate::group::gcd;

#[derive(Clone, Debug)]
pub struct ModLattice {
    moduli: Vec<u32>,
    rows: Vec<Option<Vec<u32>>>,
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

impl ModLattice {
    pub fn new(moduli: Vec<u32>) -> Self {
        let rows = vec![None; moduli.len()];
        ModLattice { moduli, rows }
    }

    pub fn dim(&self) -> usize {
        self.moduli.len()
    }

    fn reduce(&self, v: &[i64]) -> Vec<u32> {
        assert_eq!(v.len(), self.dim(), "vector length");
        v.iter()
            .zip(&self.moduli)
            .map(|(&x, &m)| x.rem_euclid(m as i64) as u32)
            .collect()
    }

    /// `x * a + y * b`, reduced.
    fn combine(&self, a: &[u32], x: i64, b: &[u32], y: i64) -> Vec<u32> {
        a.iter()
            .zip(b)
            .zip(&self.moduli)
            .map(|((&u, &v), &m)| {
                let m = m as i64;
                ((x.rem_euclid(m) * u as i64 + y.rem_euclid(m) * v as i64) % m) as u32
            })
            .collect()
    }

    fn scale(&self, a: &[u32], k: i64) -> Vec<u32> {
        self.combine(a, k, a, 0)
    }

    pub fn insert(&mut self, v: &[i64]) {
        let mut work = vec![(self.reduce(v), 0usize)];
        while let Some((mut v, start)) = work.pop() {
            for p in start..self.dim() {
                if v[p] == 0 {
                    continue;
                }
                let m = self.moduli[p];
                let Some(r) = self.rows[p].clone() else {
                    let g = gcd(v[p], m);
                    let unit = (1..=m)
                        .find(|&u| {
                            gcd(u, m) == 1 && (u as u64 * v[p] as u64) % m as u64 == g as u64
                        })
                        .expect("a unit normalizing the pivot exists");
                    let row = self.scale(&v, unit as i64);
                    work.push((self.scale(&row, (m / g) as i64), p + 1));
                    self.rows[p] = Some(row);
                    break;
                };
                let (a, b) = (r[p] as i64, v[p] as i64);
                if b % a == 0 {
                    v = self.combine(&v, 1, &r, -(b / a));
                    continue;
                }
                let (g, x, y) = ext_gcd(a, b);
                let row = self.combine(&r, x, &v, y);
                let rest = self.combine(&r, b / g, &v, -(a / g));
                work.push((self.scale(&row, m as i64 / g), p + 1));
                self.rows[p] = Some(row);
                v = rest;
            }
        }
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        let mut v = self.reduce(v);
        for p in 0..self.dim() {
            if v[p] == 0 {
                continue;
            }
            let Some(r) = &self.rows[p] else {
                return false;
            };
            if !v[p].is_multiple_of(r[p]) {
                return false;
            }
            v = self.combine(&v, 1, r, -((v[p] / r[p]) as i64));
        }
        true
    }

    /// Number of elements of the subgroup.
    #[cfg(test)]
    pub fn size(&self) -> u128 {
        self.rows
            .iter()
            .zip(&self.moduli)
            .filter_map(|(r, &m)| {
                r.as_ref()
                    .map(|r| m as u128 / r.iter().find(|&&x| x != 0).copied().unwrap_or(m) as u128)
            })
            .product()
    }
}
