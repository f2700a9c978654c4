//! Exact membership in the sets described by [`QSpec`].

use crate::config::LampConfig;
use crate::error::{Error, Result};
use crate::group::GroupDesc;
use crate::metrics::Side;
use crate::poly::format_poly;

use super::gf2::Gf2Span;
use super::qspec::{ClosureFlags, QKind, QSpec};
use super::zmodule::ModLattice;

/// Span of configurations supported in `[lo, hi]`, over GF(2) when every
/// factor is `Z2`.
#[derive(Clone, Debug)]
enum Span {
    Gf2(Gf2Span),
    Mod(ModLattice),
}

#[derive(Clone, Debug)]
struct ConfigSpan {
    lo: i64,
    hi: i64,
    rank: usize,
    span: Span,
}

impl ConfigSpan {
    fn new(g: &GroupDesc, lo: i64, hi: i64) -> Self {
        let rank = g.rank();
        let dim = ((hi - lo + 1).max(0) as usize) * rank;
        let span = if g.orders().iter().all(|&n| n == 2) {
            Span::Gf2(Gf2Span::new(dim))
        } else {
            let moduli = (0..dim).map(|i| g.orders()[i % rank]).collect();
            Span::Mod(ModLattice::new(moduli))
        };
        ConfigSpan { lo, hi, rank, span }
    }

    fn dim(&self) -> usize {
        ((self.hi - self.lo + 1).max(0) as usize) * self.rank
    }

    /// Coordinates of `f` restricted to `[lo, hi]`; `None` if `f` has
    /// support outside.
    fn coords(&self, f: &LampConfig) -> Option<Vec<i64>> {
        if !f.within(self.lo, self.hi) {
            return None;
        }
        let mut v = vec![0i64; self.dim()];
        for (p, c) in f.iter() {
            for (j, &x) in c.residues().iter().enumerate() {
                v[(p - self.lo) as usize * self.rank + j] = x as i64;
            }
        }
        Some(v)
    }

    fn insert(&mut self, f: &LampConfig) {
        let v = self.coords(f).expect("generator inside span range");
        match &mut self.span {
            Span::Gf2(s) => {
                let bits: Vec<bool> = v.iter().map(|&x| x == 1).collect();
                let packed = s.pack(&bits);
                s.insert(packed);
            }
            Span::Mod(m) => m.insert(&v),
        }
    }

    fn contains(&self, f: &LampConfig) -> bool {
        let Some(v) = self.coords(f) else {
            return false;
        };
        match &self.span {
            Span::Gf2(s) => {
                let bits: Vec<bool> = v.iter().map(|&x| x == 1).collect();
                s.contains(s.pack(&bits))
            }
            Span::Mod(m) => m.contains(&v),
        }
    }
}

/// Membership tester with the linear algebra prepared once.
#[derive(Clone, Debug)]
pub struct QOracle {
    spec: QSpec,
    /// The kind with mirrors peeled off; queries are mirrored to match.
    core: QKind,
    mirrored: bool,
    depth: i64,
    span: Option<ConfigSpan>,
}

impl QOracle {
    /// Prepares for configurations reaching down to position `-depth` (in
    /// the coordinates of the unmirrored core set); deeper queries still
    /// work but rebuild the span.
    pub fn new(spec: &QSpec, depth: i64) -> Self {
        let mut core = spec.kind.clone();
        let mut mirrored = false;
        while let QKind::Mirror(inner) = core {
            core = *inner;
            mirrored = !mirrored;
        }
        let mut oracle = QOracle {
            spec: spec.clone(),
            core,
            mirrored,
            depth: depth.max(1),
            span: None,
        };
        oracle.span = oracle.build_span(oracle.depth, None);
        oracle
    }

    pub fn spec(&self) -> &QSpec {
        &self.spec
    }

    fn group(&self) -> &GroupDesc {
        &self.spec.group
    }

    /// Negative-part span for the kinds that need one.
    fn build_span(&self, depth: i64, f: Option<&LampConfig>) -> Option<ConfigSpan> {
        let g = self.group();
        match &self.core {
            QKind::SpanCounterexample { template } => {
                let width = template.max_pos().unwrap_or(0) - template.min_pos().unwrap_or(0);
                let lo = template.min_pos().unwrap_or(0) - depth - width - 2;
                let mut span = ConfigSpan::new(g, lo, -1);
                for k in 1..=(depth + width + 2) {
                    let n = template.shift(-k).negative_part();
                    if !n.is_empty() && n.within(lo, -1) {
                        span.insert(&n);
                    }
                }
                Some(span)
            }
            QKind::Custom { configs, flags } if flags.sum_closed => {
                Some(custom_span(g, configs, *flags, f))
            }
            _ => None,
        }
    }

    /// Exact membership of `f`.
    pub fn contains(&self, f: &LampConfig) -> Result<bool> {
        self.group().validate_config(f)?;
        if let Some(w) = self.spec.window {
            if !f.within(-w, w) {
                return Err(Error::SupportExceedsWindow {
                    config: format_poly(f),
                    window: w,
                });
            }
        }
        if self.mirrored {
            Ok(self.core_contains(&f.mirror()))
        } else {
            Ok(self.core_contains(f))
        }
    }

    fn core_contains(&self, f: &LampConfig) -> bool {
        match &self.core {
            QKind::QH { subgroup, side } => f.iter().all(|(p, c)| match side {
                Side::Plus => p >= 0 || subgroup.contains(c),
                Side::Minus => p <= 0 || subgroup.contains(c),
            }),
            QKind::BPlus => f.min_pos().is_none_or(|p| p >= 0),
            QKind::BMinus => f.max_pos().is_none_or(|p| p <= 0),
            QKind::FullBase => true,
            QKind::SpanCounterexample { .. } => {
                let n = f.negative_part();
                if n.is_empty() {
                    return true;
                }
                let depth = -n.min_pos().unwrap();
                if depth <= self.depth {
                    self.span.as_ref().unwrap().contains(&n)
                } else {
                    self.build_span(depth, None).unwrap().contains(&n)
                }
            }
            QKind::Custom { configs, flags } => self.custom_contains(configs, *flags, f),
            QKind::Mirror(_) => unreachable!("mirrors are peeled off"),
        }
    }

    fn custom_contains(&self, configs: &[LampConfig], flags: ClosureFlags, f: &LampConfig) -> bool {
        match (flags.sum_closed, flags.bplus_closed) {
            (true, true) => {
                let n = f.negative_part();
                n.is_empty() || self.span.as_ref().unwrap().contains(&n)
            }
            (true, false) => custom_span(self.group(), configs, flags, Some(f)).contains(f),
            (false, bplus) => {
                let proj = |x: &LampConfig| if bplus { x.negative_part() } else { x.clone() };
                let target = proj(f);
                if bplus && target.is_empty() {
                    return true;
                }
                configs.iter().any(|g| {
                    let Some(lo) = g.min_pos() else {
                        return target.is_empty();
                    };
                    let Some(flo) = f.min_pos() else {
                        return proj(g).is_empty();
                    };
                    let shifts: Vec<i64> = if flags.shift_closed {
                        // only shifts that line up the lowest terms can match
                        // exactly; with B+ absorption the top may differ
                        let hi = if bplus { -lo } else { flo - lo };
                        (0..=hi.max(0)).collect()
                    } else {
                        vec![0]
                    };
                    shifts.into_iter().any(|j| proj(&g.shift(j)) == target)
                })
            }
        }
    }
}

/// Span of the generators (and their shifts) of a sum-closed custom set.
/// With B+ absorption only negative parts matter and the span is exact;
/// without it, shifts are cut off a generator-width past `f`.
fn custom_span(
    g: &GroupDesc,
    configs: &[LampConfig],
    flags: ClosureFlags,
    f: Option<&LampConfig>,
) -> ConfigSpan {
    let lo = configs
        .iter()
        .filter_map(LampConfig::min_pos)
        .min()
        .unwrap_or(-1);
    if flags.bplus_closed {
        let lo = lo.min(-1);
        let mut span = ConfigSpan::new(g, lo, -1);
        for c in configs {
            let max_shift = if flags.shift_closed {
                -c.min_pos().unwrap_or(0)
            } else {
                0
            };
            for j in 0..=max_shift.max(0) {
                let n = c.shift(j).negative_part();
                if !n.is_empty() {
                    span.insert(&n);
                }
            }
        }
        return span;
    }
    let width = configs
        .iter()
        .map(|c| c.max_pos().unwrap_or(0) - c.min_pos().unwrap_or(0))
        .max()
        .unwrap_or(0);
    let f_hi = f.and_then(LampConfig::max_pos).unwrap_or(0);
    let f_lo = f.and_then(LampConfig::min_pos).unwrap_or(0);
    let max_shift = if flags.shift_closed {
        (f_hi - lo).max(0) + width
    } else {
        0
    };
    let hi = configs
        .iter()
        .filter_map(LampConfig::max_pos)
        .max()
        .unwrap_or(0)
        + max_shift;
    let mut span = ConfigSpan::new(g, lo.min(f_lo), hi.max(f_hi));
    for c in configs {
        for j in 0..=max_shift {
            span.insert(&c.shift(j));
        }
    }
    span
}

/// One-off membership test; prefer [`QOracle`] for repeated queries.
pub fn q_membership(f: &LampConfig, q: &QSpec) -> Result<bool> {
    let depth = f.min_pos().map_or(1, |p| (-p).max(1));
    QOracle::new(q, depth).contains(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{subgroup_closure, Coeff};

    fn klein(a: u32, b: u32) -> Coeff {
        Coeff(vec![a, b])
    }

    #[test]
    fn counterexample_facts() {
        let q = QSpec::counterexample();
        let p2 = LampConfig::from_entries([(-2, klein(0, 1)), (-1, klein(1, 0))]);
        assert!(q_membership(&p2, &q).unwrap());
        let lone = LampConfig::single(-1, klein(1, 0));
        assert!(!q_membership(&lone, &q).unwrap());
        assert!(q_membership(&LampConfig::new(), &q).unwrap());
        // boundary artifact t^1 p_2
        assert!(q_membership(&LampConfig::single(-1, klein(0, 1)), &q).unwrap());
        // p_3 + p_5 + B+ junk
        let f = LampConfig::from_entries([
            (-5, klein(0, 1)),
            (-4, klein(1, 0)),
            (-3, klein(0, 1)),
            (-2, klein(1, 0)),
            (2, klein(1, 1)),
        ]);
        assert!(q_membership(&f, &q).unwrap());
    }

    #[test]
    fn gf2_and_mod_routes_agree() {
        let q = QSpec::counterexample();
        let oracle = QOracle::new(&q, 5);
        let g = q.group.clone();
        let mut modspan = ConfigSpan {
            lo: -9,
            hi: -1,
            rank: 2,
            span: Span::Mod(ModLattice::new(vec![2; 18])),
        };
        for k in 1..=9 {
            let n = super::super::qspec::default_template()
                .shift(-k)
                .negative_part();
            if n.within(-9, -1) {
                modspan.insert(&n);
            }
        }
        // every configuration on [-4, -1]
        for code in 0..(4usize.pow(4)) {
            let f = LampConfig::from_entries(
                (0..4).map(|k| (-(k as i64) - 1, g.coeff_at(code / 4usize.pow(k) % 4))),
            );
            assert_eq!(oracle.contains(&f).unwrap(), modspan.contains(&f), "{f}");
        }
    }

    #[test]
    fn qh_predicate() {
        let g = GroupDesc::cyclic(4).unwrap();
        let h = subgroup_closure(&[Coeff::cyclic(2)], &g).unwrap();
        let q = QSpec::qh(h, Side::Plus, g);
        assert!(q_membership(&LampConfig::from_cyclic(&[(-3, 2), (1, 1)]), &q).unwrap());
        assert!(!q_membership(&LampConfig::from_cyclic(&[(-3, 1)]), &q).unwrap());
        let m = q.mirror();
        assert!(q_membership(&LampConfig::from_cyclic(&[(-3, 1), (3, 2)]), &m).unwrap());
        assert!(!q_membership(&LampConfig::from_cyclic(&[(3, 1)]), &m).unwrap());
    }

    #[test]
    fn z8_family() {
        let q = QSpec::z8_example(3);
        let f = |e: &[(i64, u32)]| LampConfig::from_cyclic(e);
        assert!(q_membership(&f(&[(-5, 4), (-4, 2), (-1, 1)]), &q).unwrap());
        // difference of f_i and t f_(i+1) leaves t^-1 up to B+
        assert!(q_membership(&f(&[(-1, 1)]), &q).unwrap());
        assert!(q_membership(&f(&[(-3, 2)]), &q).unwrap());
        assert!(!q_membership(&f(&[(-3, 1)]), &q).unwrap());
        assert!(matches!(
            q_membership(&f(&[(-30, 4)]), &q),
            Err(Error::SupportExceedsWindow { .. })
        ));
    }

    #[test]
    fn custom_without_sums() {
        let g = GroupDesc::cyclic(3).unwrap();
        let gen = LampConfig::from_cyclic(&[(-2, 1), (0, 2)]);
        let mk = |flags| {
            QSpec::new(
                QKind::Custom {
                    configs: vec![gen.clone()],
                    flags,
                },
                g.clone(),
            )
        };
        let plain = mk(ClosureFlags::default());
        assert!(q_membership(&gen, &plain).unwrap());
        assert!(!q_membership(&gen.shift(1), &plain).unwrap());
        let shifty = mk(ClosureFlags {
            shift_closed: true,
            ..Default::default()
        });
        assert!(q_membership(&gen.shift(1), &shifty).unwrap());
        assert!(!q_membership(&gen.shift(-1), &shifty).unwrap());
        let sums = mk(ClosureFlags {
            shift_closed: true,
            sum_closed: true,
            bplus_closed: false,
        });
        let twice = g.config_add_unchecked(&gen, &gen.shift(2));
        assert!(q_membership(&twice, &sums).unwrap());
        assert!(!q_membership(&LampConfig::from_cyclic(&[(0, 1)]), &sums).unwrap());
    }
}
