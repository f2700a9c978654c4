//! Spans over the two-element field, for elementary abelian 2-groups.

#[derive(Clone, Debug, Default)]
pub struct Gf2Span {
    words: usize,
    /// Basis rows keyed by their lowest set bit.
    rows: std::collections::BTreeMap<usize, Vec<u64>>,
}

fn lowest_bit(v: &[u64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn bit(v: &[u64], i: usize) -> bool {
    v[i / 64] >> (i % 64) & 1 == 1
}

impl Gf2Span {
    pub fn new(bits: usize) -> Self {
        Gf2Span {
            words: bits.div_ceil(64).max(1),
            rows: Default::default(),
        }
    }

    /// Packs a 0/1 vector.
    pub fn pack(&self, v: &[bool]) -> Vec<u64> {
        let mut out = vec![0u64; self.words];
        for (i, &b) in v.iter().enumerate() {
            if b {
                out[i / 64] |= 1 << (i % 64);
            }
        }
        out
    }

    fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        for (&p, row) in &self.rows {
            if bit(&v, p) {
                for (a, b) in v.iter_mut().zip(row) {
                    *a ^= b;
                }
            }
        }
        v
    }

    pub fn insert(&mut self, v: Vec<u64>) {
        let v = self.reduce(v);
        if let Some(p) = lowest_bit(&v) {
            self.rows.insert(p, v);
        }
    }

    pub fn contains(&self, v: Vec<u64>) -> bool {
        lowest_bit(&self.reduce(v)).is_none()
    }

    #[cfg(test)]
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xor_span() {
        let mut s = Gf2Span::new(70);
        let mut a = vec![false; 70];
        a[1] = true;
        a[65] = true;
        let mut b = vec![false; 70];
        b[65] = true;
        b[3] = true;
        s.insert(s.pack(&a));
        s.insert(s.pack(&b));
        let mut sum = vec![false; 70];
        sum[1] = true;
        sum[3] = true;
        assert!(s.contains(s.pack(&sum)));
        sum[4] = true;
        assert!(!s.contains(s.pack(&sum)));
        assert_eq!(s.rank(), 2);
    }
}
