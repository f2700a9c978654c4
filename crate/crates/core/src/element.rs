//! Elements of `G wr Z` in the normal form `t^m * b` with `b` in the base.

use std::fmt;

use crate::config::LampConfig;
use crate::error::Result;
use crate::group::GroupDesc;

/// The element `t^shift * config`, read left to right.
///
/// In the lamplighter picture the cursor ends at `shift` and the lamp stored
/// at position `p` of `config` sits at absolute position `p + shift`; see
/// [`Element::lamps`].
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element {
    pub config: LampConfig,
    pub shift: i64,
}

impl Element {
    pub fn new(config: LampConfig, shift: i64) -> Self {
        Element { config, shift }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    /// `t^k`.
    pub fn t(k: i64) -> Self {
        Element::new(LampConfig::new(), k)
    }

    /// A base element (cursor at 0).
    pub fn base(config: LampConfig) -> Self {
        Element::new(config, 0)
    }

    pub fn is_identity(&self) -> bool {
        self.shift == 0 && self.config.is_empty()
    }

    /// Lamp states at absolute positions: `config` shifted by the cursor.
    pub fn lamps(&self) -> LampConfig {
        self.config.shift(self.shift)
    }

    /// Inverse of [`Element::lamps`]: the element with cursor `cursor` and
    /// the given absolute lamp states.
    pub fn from_lamps(lamps: &LampConfig, cursor: i64) -> Self {
        Element::new(lamps.shift(-cursor), cursor)
    }

    /// Image under the automorphism `t -> t^-1`, `a -> a`.
    pub fn mirror(&self) -> Self {
        Element::new(self.config.mirror(), -self.shift)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t^{} * ({})", self.shift, self.config)
    }
}

impl GroupDesc {
    /// `(t^m1 b1)(t^m2 b2) = t^(m1+m2) (t^-m2 . b1 + b2)`, where `t^-m2 . b1`
    /// is `b1` shifted by `-m2`.
    pub fn elem_mul(&self, x: &Element, y: &Element) -> Result<Element> {
        self.validate_config(&x.config)?;
        self.validate_config(&y.config)?;
        Ok(self.elem_mul_unchecked(x, y))
    }

    pub(crate) fn elem_mul_unchecked(&self, x: &Element, y: &Element) -> Element {
        let config = self.config_add_unchecked(&x.config.shift(-y.shift), &y.config);
        Element::new(config, x.shift + y.shift)
    }

    /// `(t^m b)^-1 = b^-1 t^-m = t^-m (t^m . b^-1)`.
    pub fn elem_inv(&self, x: &Element) -> Element {
        Element::new(self.config_neg(&x.config).shift(x.shift), -x.shift)
    }

    /// `x^-1 y`, the displacement used by left-invariant word metrics.
    pub fn elem_between(&self, x: &Element, y: &Element) -> Element {
        self.elem_mul_unchecked(&self.elem_inv(x), y)
    }
}
