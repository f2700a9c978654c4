//! Finitely supported lamp configurations `Z -> G`, i.e. elements of the base
//! `A` of the wreath product, equivalently Laurent polynomials over `G`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Result;
use crate::group::{Coeff, GroupDesc};
use crate::poly::format_poly;

/// Invariant: no entry holds the zero coefficient, so structural equality is
/// group equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LampConfig {
    entries: BTreeMap<i64, Coeff>,
}

impl LampConfig {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(pos: i64, c: Coeff) -> Self {
        let mut f = Self::new();
        f.set(pos, c);
        f
    }

    /// Builds a config from `(position, coefficient)` pairs. Later pairs
    /// overwrite earlier ones; zero coefficients are dropped.
    pub fn from_entries<I: IntoIterator<Item = (i64, Coeff)>>(entries: I) -> Self {
        let mut f = Self::new();
        for (p, c) in entries {
            f.set(p, c);
        }
        f
    }

    /// Cyclic shorthand: `from_cyclic(&[(-2, 4), (0, 3)])`.
    pub fn from_cyclic(entries: &[(i64, u32)]) -> Self {
        Self::from_entries(entries.iter().map(|&(p, v)| (p, Coeff::cyclic(v))))
    }

    pub fn set(&mut self, pos: i64, c: Coeff) {
        if c.is_zero() {
            self.entries.remove(&pos);
        } else {
            self.entries.insert(pos, c);
        }
    }

    pub fn get(&self, pos: i64) -> Option<&Coeff> {
        self.entries.get(&pos)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (i64, &Coeff)> + '_ {
        self.entries.iter().map(|(&p, c)| (p, c))
    }

    pub fn support(&self) -> impl DoubleEndedIterator<Item = i64> + '_ {
        self.entries.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn min_pos(&self) -> Option<i64> {
        self.entries.keys().next().copied()
    }

    pub fn max_pos(&self) -> Option<i64> {
        self.entries.keys().next_back().copied()
    }

    /// Whether the support lies in `[lo, hi]`.
    pub fn within(&self, lo: i64, hi: i64) -> bool {
        self.min_pos().is_none_or(|m| m >= lo) && self.max_pos().is_none_or(|m| m <= hi)
    }

    /// `result(p + k) = self(p)`; `k = 1` is multiplication by `t`.
    pub fn shift(&self, k: i64) -> Self {
        LampConfig {
            entries: self
                .entries
                .iter()
                .map(|(&p, c)| (p + k, c.clone()))
                .collect(),
        }
    }

    /// Image under `t -> t^-1`: every position is negated.
    pub fn mirror(&self) -> Self {
        LampConfig {
            entries: self.entries.iter().map(|(&p, c)| (-p, c.clone())).collect(),
        }
    }

    /// Restriction to negative positions.
    pub fn negative_part(&self) -> Self {
        LampConfig {
            entries: self
                .entries
                .range(..0)
                .map(|(&p, c)| (p, c.clone()))
                .collect(),
        }
    }

    /// Restriction to positions `>= 0`.
    pub fn nonnegative_part(&self) -> Self {
        LampConfig {
            entries: self
                .entries
                .range(0..)
                .map(|(&p, c)| (p, c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for LampConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(self))
    }
}

/// Serialized in polynomial notation, e.g. `"(1,0)t^-1 + (0,1)"`.
impl serde::Serialize for LampConfig {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl GroupDesc {
    pub fn validate_config(&self, f: &LampConfig) -> Result<()> {
        f.entries.values().try_for_each(|c| self.validate(c))
    }

    /// Pointwise sum.
    pub fn config_add(&self, f: &LampConfig, h: &LampConfig) -> Result<LampConfig> {
        self.validate_config(f)?;
        self.validate_config(h)?;
        Ok(self.config_add_unchecked(f, h))
    }

    pub(crate) fn config_add_unchecked(&self, f: &LampConfig, h: &LampConfig) -> LampConfig {
        let mut out = f.clone();
        for (&p, c) in &h.entries {
            let sum = match out.entries.get(&p) {
                Some(x) => self.add_unchecked(x, c),
                None => c.clone(),
            };
            out.set(p, sum);
        }
        out
    }

    pub fn config_neg(&self, f: &LampConfig) -> LampConfig {
        LampConfig {
            entries: f
                .entries
                .iter()
                .map(|(&p, c)| (p, self.coeff_neg(c)))
                .collect(),
        }
    }

    pub fn config_sub(&self, f: &LampConfig, h: &LampConfig) -> LampConfig {
        self.config_add_unchecked(f, &self.config_neg(h))
    }

    pub fn config_scale(&self, f: &LampConfig, k: i64) -> LampConfig {
        LampConfig::from_entries(f.entries.iter().map(|(&p, c)| (p, self.coeff_scale(c, k))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifts() {
        assert_eq!(
            LampConfig::from_cyclic(&[(-2, 4)]).shift(1),
            LampConfig::from_cyclic(&[(-1, 4)])
        );
        assert_eq!(LampConfig::new().shift(7), LampConfig::new());
        // pointwise: result(p - 3) = f(p)
        assert_eq!(
            LampConfig::from_cyclic(&[(0, 1), (3, 2)]).shift(-3),
            LampConfig::from_cyclic(&[(-3, 1), (0, 2)])
        );
    }

    #[test]
    fn sums() {
        let z2 = GroupDesc::cyclic(2).unwrap();
        let f = LampConfig::from_cyclic(&[(-1, 1)]);
        assert!(z2.config_add(&f, &f).unwrap().is_empty());

        let z8 = GroupDesc::cyclic(8).unwrap();
        assert_eq!(
            z8.config_add(
                &LampConfig::from_cyclic(&[(-2, 4)]),
                &LampConfig::from_cyclic(&[(0, 3)])
            )
            .unwrap(),
            LampConfig::from_cyclic(&[(-2, 4), (0, 3)])
        );
        // 2 + 6 = 8 = 0 mod 8 at position 1
        assert_eq!(
            z8.config_add(
                &LampConfig::from_cyclic(&[(0, 4), (1, 2)]),
                &LampConfig::from_cyclic(&[(1, 6)])
            )
            .unwrap(),
            LampConfig::from_cyclic(&[(0, 4)])
        );
    }

    #[test]
    fn sum_rejects_foreign_coefficients() {
        let z2 = GroupDesc::cyclic(2).unwrap();
        let f = LampConfig::single(0, Coeff(vec![1, 1]));
        assert!(z2.config_add(&f, &LampConfig::new()).is_err());
    }

    #[test]
    fn zero_entries_are_dropped() {
        let f = LampConfig::from_cyclic(&[(0, 0), (1, 3)]);
        assert_eq!(f.len(), 1);
        assert_eq!(f.min_pos(), Some(1));
    }

    #[test]
    fn parts() {
        let f = LampConfig::from_cyclic(&[(-3, 1), (-1, 2), (0, 3), (4, 1)]);
        assert_eq!(
            f.negative_part(),
            LampConfig::from_cyclic(&[(-3, 1), (-1, 2)])
        );
        assert_eq!(
            f.nonnegative_part(),
            LampConfig::from_cyclic(&[(0, 3), (4, 1)])
        );
        assert_eq!(
            f.mirror(),
            LampConfig::from_cyclic(&[(3, 1), (1, 2), (0, 3), (-4, 1)])
        );
        assert!(f.within(-3, 4));
        assert!(!f.within(-2, 4));
    }
}
