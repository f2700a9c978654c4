//! Finite abelian coefficient groups `Z_{n_1} x ... x Z_{n_r}` and their
//! subgroups.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Default upper bound on `|G|`; keeps subgroup enumeration by closure cheap.
pub const DEFAULT_ORDER_BOUND: u64 = 64;

/// A coefficient: one residue per cyclic factor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coeff(pub Vec<u32>);

impl Coeff {
    pub fn zero(rank: usize) -> Self {
        Coeff(vec![0; rank])
    }

    pub fn cyclic(value: u32) -> Self {
        Coeff(vec![value])
    }

    pub fn residues(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&r| r == 0)
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            write!(f, "{}", self.0[0])
        } else {
            write!(f, "(")?;
            for (i, r) in self.0.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{r}")?;
            }
            write!(f, ")")
        }
    }
}

/// A finite abelian group given as a direct product of cyclic groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupDesc {
    orders: Vec<u32>,
}

impl GroupDesc {
    pub fn new(orders: Vec<u32>) -> Result<Self> {
        Self::with_bound(orders, DEFAULT_ORDER_BOUND)
    }

    pub fn with_bound(orders: Vec<u32>, bound: u64) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::InvalidGroup("no cyclic factors".into()));
        }
        if let Some(&n) = orders.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidGroup(format!("factor Z{n} has order < 2")));
        }
        let order = orders
            .iter()
            .try_fold(1u64, |acc, &n| acc.checked_mul(n as u64))
            .unwrap_or(u64::MAX);
        if order > bound {
            return Err(Error::BoundExceeded { order, bound });
        }
        Ok(GroupDesc { orders })
    }

    /// `Z_n`.
    pub fn cyclic(n: u32) -> Result<Self> {
        Self::new(vec![n])
    }

    /// Parses `"Z12"`, `"Z2xZ2"`, `"Z_4 x Z_2"` (case-insensitive).
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with_bound(text, DEFAULT_ORDER_BOUND)
    }

    pub fn parse_with_bound(text: &str, bound: u64) -> Result<Self> {
        let bad = || Error::InvalidGroup(format!("cannot parse group spec {text:?}"));
        let mut orders = Vec::new();
        for part in text.split(['x', 'X', '*']) {
            let part = part.trim();
            let digits = part
                .strip_prefix('Z')
                .or_else(|| part.strip_prefix('z'))
                .ok_or_else(bad)?;
            let digits = digits.strip_prefix('_').unwrap_or(digits);
            orders.push(digits.trim().parse::<u32>().map_err(|_| bad())?);
        }
        Self::with_bound(orders, bound)
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> usize {
        self.orders.iter().map(|&n| n as usize).product()
    }

    pub fn zero(&self) -> Coeff {
        Coeff::zero(self.rank())
    }

    /// Builds a coefficient, reducing each component into `[0, n_i)`.
    pub fn coeff(&self, residues: &[i64]) -> Result<Coeff> {
        self.check_rank(residues.len())?;
        Ok(Coeff(
            residues
                .iter()
                .zip(&self.orders)
                .map(|(&r, &n)| r.rem_euclid(n as i64) as u32)
                .collect(),
        ))
    }

    fn check_rank(&self, found: usize) -> Result<()> {
        if found != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found,
            });
        }
        Ok(())
    }

    pub fn validate(&self, a: &Coeff) -> Result<()> {
        self.check_rank(a.0.len())?;
        for (&r, &n) in a.0.iter().zip(&self.orders) {
            if r >= n {
                return Err(Error::CoeffOutOfRange {
                    value: r as i64,
                    modulus: n,
                });
            }
        }
        Ok(())
    }

    pub fn coeff_add(&self, a: &Coeff, b: &Coeff) -> Result<Coeff> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub(crate) fn add_unchecked(&self, a: &Coeff, b: &Coeff) -> Coeff {
        Coeff(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.orders)
                .map(|((&x, &y), &n)| (x + y) % n)
                .collect(),
        )
    }

    pub fn coeff_neg(&self, a: &Coeff) -> Coeff {
        Coeff(
            a.0.iter()
                .zip(&self.orders)
                .map(|(&x, &n)| (n - x) % n)
                .collect(),
        )
    }

    pub fn coeff_sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.add_unchecked(a, &self.coeff_neg(b))
    }

    /// `k * a` for any integer `k`.
    pub fn coeff_scale(&self, a: &Coeff, k: i64) -> Coeff {
        Coeff(
            a.0.iter()
                .zip(&self.orders)
                .map(|(&x, &n)| ((x as i64 * k).rem_euclid(n as i64)) as u32)
                .collect(),
        )
    }

    /// Least `k >= 1` with `k * a = 0`.
    pub fn coeff_order(&self, a: &Coeff) -> u64 {
        a.0.iter()
            .zip(&self.orders)
            .map(|(&x, &n)| (n / gcd(x, n)) as u64)
            .fold(1, lcm)
    }

    /// Mixed-radix index; the first factor is most significant so index
    /// order coincides with lexicographic order of residue vectors.
    pub fn index_of(&self, a: &Coeff) -> usize {
        a.0.iter()
            .zip(&self.orders)
            .fold(0usize, |acc, (&x, &n)| acc * n as usize + x as usize)
    }

    pub fn coeff_at(&self, mut index: usize) -> Coeff {
        let mut res = vec![0u32; self.rank()];
        for (slot, &n) in res.iter_mut().zip(&self.orders).rev() {
            *slot = (index % n as usize) as u32;
            index /= n as usize;
        }
        Coeff(res)
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> Vec<Coeff> {
        (0..self.order()).map(|i| self.coeff_at(i)).collect()
    }

    /// Standard generators: one unit vector per cyclic factor.
    pub fn standard_generators(&self) -> Vec<Coeff> {
        (0..self.rank())
            .map(|j| {
                let mut c = self.zero();
                c.0[j] = 1;
                c
            })
            .collect()
    }

    /// Whether `G` itself is cyclic, i.e. has an element of order `|G|`.
    pub fn is_cyclic(&self) -> bool {
        let ones = Coeff(vec![1; self.rank()]);
        self.coeff_order(&ones) == self.order() as u64
    }

    /// Addition table on element indices.
    pub(crate) fn add_table(&self) -> Vec<Vec<u16>> {
        let elems = self.elements();
        elems
            .iter()
            .map(|a| {
                elems
                    .iter()
                    .map(|b| self.index_of(&self.add_unchecked(a, b)) as u16)
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for GroupDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.orders.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "Z{n}")?;
        }
        Ok(())
    }
}

pub(crate) fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a as u32, b as u32) as u64 * b
}

/// A subgroup of a [`GroupDesc`], stored with its generators and its full
/// sorted element list. Equality and ordering use the element list only.
#[derive(Clone, Debug)]
pub struct SubgroupDesc {
    generators: Vec<Coeff>,
    elements: Vec<Coeff>,
}

impl PartialEq for SubgroupDesc {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for SubgroupDesc {}

impl std::hash::Hash for SubgroupDesc {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.elements.hash(state)
    }
}

impl PartialOrd for SubgroupDesc {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SubgroupDesc {
    /// By order, then lexicographically by element list.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.elements.len(), &self.elements).cmp(&(other.elements.len(), &other.elements))
    }
}

impl SubgroupDesc {
    pub fn generators(&self) -> &[Coeff] {
        &self.generators
    }

    pub fn elements(&self) -> &[Coeff] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, a: &Coeff) -> bool {
        self.elements.binary_search(a).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_subset_of(&self, other: &SubgroupDesc) -> bool {
        self.elements.iter().all(|e| other.contains(e))
    }

    /// A generator of maximal order (generates the subgroup iff it is cyclic).
    pub fn max_order_element(&self, g: &GroupDesc) -> Coeff {
        self.elements
            .iter()
            .max_by_key(|e| (g.coeff_order(e), std::cmp::Reverse((*e).clone())))
            .cloned()
            .unwrap_or_else(|| g.zero())
    }

    pub fn is_cyclic(&self, g: &GroupDesc) -> bool {
        g.coeff_order(&self.max_order_element(g)) == self.order() as u64
    }
}

impl fmt::Display for SubgroupDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

// Serialized in display form: "3", "(1,0)", "Z2xZ4", "{0,2,4}".
macro_rules! serialize_as_display {
    ($($t:ty),*) => {$(
        impl Serialize for $t {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }
    )*};
}

serialize_as_display!(Coeff, GroupDesc, SubgroupDesc);

/// Smallest subgroup containing `gens`, by closure under addition.
pub fn subgroup_closure(gens: &[Coeff], g: &GroupDesc) -> Result<SubgroupDesc> {
    for a in gens {
        g.validate(a)?;
    }
    let generators: Vec<Coeff> = gens
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut seen = BTreeSet::from([g.zero()]);
    let mut frontier = vec![g.zero()];
    while let Some(x) = frontier.pop() {
        for s in &generators {
            let y = g.add_unchecked(&x, s);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    Ok(SubgroupDesc {
        generators,
        elements: seen.into_iter().collect(),
    })
}

impl GroupDesc {
    pub fn trivial_subgroup(&self) -> SubgroupDesc {
        SubgroupDesc {
            generators: Vec::new(),
            elements: vec![self.zero()],
        }
    }

    pub fn whole_group(&self) -> SubgroupDesc {
        subgroup_closure(&self.standard_generators(), self).expect("standard generators are valid")
    }
}
