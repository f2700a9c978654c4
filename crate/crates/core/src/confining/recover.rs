//! Extracting the subgroup `H` from a confining subset and testing whether
//! the resulting structure really is `[S_H]`.

use serde::Serialize;

use crate::config::LampConfig;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::group::{subgroup_closure, Coeff, SubgroupDesc};
use crate::metrics::{GenSet, Side, WordMetric};

use super::check::{check_confining, CheckParams, Direction, Verdict};
use super::membership::QOracle;
use super::qspec::{QKind, QSpec};
use super::saturate::{saturate, window_members_basis, SaturationParams};

#[derive(Clone, Debug)]
pub struct RecoverParams {
    pub window: i64,
    /// Coefficients at positions `<= -depth_cutoff` count towards `H`;
    /// `None` means `ceil(window / 2)`.
    pub depth_cutoff: Option<i64>,
    pub check: CheckParams,
    pub iter_cap: usize,
}

impl RecoverParams {
    pub fn new(window: i64) -> Self {
        RecoverParams {
            window,
            depth_cutoff: None,
            check: CheckParams::with_window(window),
            iter_cap: SaturationParams::default().iter_cap,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecoveryReport {
    pub subgroup: SubgroupDesc,
    /// `Plus` when `t` confines, `Minus` when only `t^-1` does (then `H`
    /// describes `S'_H`).
    pub side: Side,
    pub window: i64,
    pub depth_cutoff: i64,
    pub certified: bool,
    /// Generator of maximal order whose lamps were looked for.
    pub generator: Option<Coeff>,
    pub saturation_window: i64,
    /// Lamp subgroup the saturation reached at depth `window`.
    pub saturated_lamps: SubgroupDesc,
    pub saturation_partial: bool,
    pub stuck: usize,
}

/// Recovers `H` as the closure of the coefficients that occur deep in
/// members of `Q`. It is certified only when `H` is cyclic and the
/// saturation derives `h t^-i` for every `i <= window` from the confining
/// rules alone, `h` a generator of `H`.
pub fn recover_subgroup(q: &QSpec, params: &RecoverParams) -> Result<RecoveryReport> {
    let w = params.window;
    let d = params.depth_cutoff.unwrap_or((w + 1) / 2);
    if d < 1 || d >= w {
        return Err(Error::InvalidArgument(format!(
            "depth cutoff must satisfy 1 <= D < W, got D = {d}, W = {w}"
        )));
    }
    let mut check = params.check.clone();
    check.window = w;
    let (side, qq) = if check_confining(q, Direction::T, &check)?.verdict
        == Verdict::StrictlyConfining
    {
        (Side::Plus, q.clone())
    } else if check_confining(q, Direction::TInv, &check)?.verdict == Verdict::StrictlyConfining {
        (Side::Minus, q.mirror())
    } else {
        return Err(Error::PreconditionViolated(
            "neither t nor t^-1 is strictly confining on the window".into(),
        ));
    };
    let g = &q.group;

    let mut members = window_members_basis(&qq, w)?;
    let oracle = QOracle::new(&qq, w);
    for p in -w..=-d {
        for c in g.elements().into_iter().skip(1) {
            let f = LampConfig::single(p, c);
            if matches!(oracle.contains(&f), Ok(true)) {
                members.push(f);
            }
        }
    }
    let deep: Vec<Coeff> = members
        .iter()
        .flat_map(|f| f.iter().filter(|&(p, _)| p <= -d).map(|(_, c)| c.clone()))
        .collect();
    let h = subgroup_closure(&deep, g)?;

    let saturation_window = qq.window.unwrap_or(2 * w).max(w);
    let st = saturate(
        &qq,
        &SaturationParams {
            window: saturation_window,
            iter_cap: params.iter_cap,
            n0: 0,
        },
    )?;
    let saturated_lamps = st
        .lamps_at(w)
        .cloned()
        .unwrap_or_else(|| g.trivial_subgroup());
    let generator = h.is_cyclic(g).then(|| h.max_order_element(g));
    let certified = !st.partial
        && generator
            .as_ref()
            .is_some_and(|gen| saturated_lamps.contains(gen));
    Ok(RecoveryReport {
        subgroup: h,
        side,
        window: w,
        depth_cutoff: d,
        certified,
        generator,
        saturation_window,
        saturated_lamps,
        saturation_partial: st.partial,
        stuck: st.stuck.len(),
    })
}

/// Lengths of one witness family in `X = Q u {t^±1}` and in `S_H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyGrowth {
    pub family: String,
    pub depths: Vec<i64>,
    pub x_lengths: Vec<u64>,
    pub sh_lengths: Vec<u64>,
    pub refuted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Outcome {
    Consistent,
    Refuted { family: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub subgroup: SubgroupDesc,
    pub side: Side,
    pub depth: i64,
    pub families: Vec<FamilyGrowth>,
    #[serde(flatten)]
    pub outcome: Outcome,
}

impl ValidationReport {
    pub fn is_refuted(&self) -> bool {
        matches!(self.outcome, Outcome::Refuted { .. })
    }
}

/// Which end of the line `q` is built around.
fn orientation(kind: &QKind) -> Side {
    match kind {
        QKind::QH { side, .. } => *side,
        QKind::BMinus => Side::Minus,
        QKind::Mirror(inner) => match orientation(inner) {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        },
        _ => Side::Plus,
    }
}

/// Unboundedness on one side only, over the deeper half of the depths.
fn diverges(depths: &[i64], x: &[u64], sh: &[u64], n: i64) -> bool {
    let tail: Vec<usize> = (0..depths.len()).filter(|&k| 2 * depths[k] > n).collect();
    if tail.is_empty() {
        return false;
    }
    let x_flat = tail.iter().all(|&k| x[k] <= 1 && sh[k] >= depths[k] as u64);
    let sh_flat = tail.iter().all(|&k| sh[k] <= 1 && x[k] >= depths[k] as u64);
    x_flat || sh_flat
}

/// Compares `|.|_X` with `|.|_{S_H}` along the witness families: members
/// of `Q` have `X`-length one, so a family of members whose `S_H`-length
/// grows linearly refutes `[X] = [S_H]`, and so does the reverse.
pub fn validate_equivalence(q: &QSpec, h: &SubgroupDesc, depth: i64) -> Result<ValidationReport> {
    let g = &q.group;
    let side = orientation(&q.kind);
    let qq = match side {
        Side::Plus => q.clone(),
        Side::Minus => q.mirror(),
    };
    let oracle = QOracle::new(&qq, depth + 2);
    let member = |f: &LampConfig| -> Result<bool> {
        match oracle.contains(f) {
            Ok(b) => Ok(b),
            Err(Error::SupportExceedsWindow { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    };
    let sh = WordMetric::new(g, &GenSet::qp(Side::Plus, h.clone()))?;
    let sh_len = |f: &LampConfig| sh.len(&Element::base(f.clone()));
    let mut families = Vec::new();
    let mut push = |name: &str, rows: Vec<(i64, u64, u64)>| {
        let depths: Vec<i64> = rows.iter().map(|r| r.0).collect();
        let x: Vec<u64> = rows.iter().map(|r| r.1).collect();
        let s: Vec<u64> = rows.iter().map(|r| r.2).collect();
        let refuted = diverges(&depths, &x, &s, depth);
        families.push(FamilyGrowth {
            family: name.into(),
            depths,
            x_lengths: x,
            sh_lengths: s,
            refuted,
        });
    };

    let mut core = &qq.kind;
    while let QKind::Mirror(inner) = core {
        core = inner;
    }
    if let QKind::SpanCounterexample { template } = core {
        let mut rows = Vec::new();
        for i in 1..=depth {
            let p = template.shift(-i);
            if member(&p)? {
                rows.push((i, 1, sh_len(&p)));
            }
        }
        push("p_i", rows);
    }

    let outside: Vec<Coeff> = g
        .elements()
        .into_iter()
        .filter(|c| !h.contains(c))
        .collect();
    let mut rows = Vec::new();
    for i in 1..=depth {
        for c in &outside {
            let f = LampConfig::single(-i, c.clone());
            if member(&f)? {
                rows.push((i, 1, sh_len(&f)));
                break;
            }
        }
    }
    push("lamps-outside-h", rows);

    // for Q_K the X-length is the exact S_K length
    if let QKind::QH {
        subgroup: k,
        side: Side::Plus,
    } = core
    {
        if let Some(c) = h.elements().iter().find(|c| !k.contains(c)) {
            let xk = WordMetric::new(g, &GenSet::qp(Side::Plus, k.clone()))?;
            let rows = (1..=depth)
                .map(|i| {
                    let f = LampConfig::single(-i, c.clone());
                    (i, xk.len(&Element::base(f.clone())), sh_len(&f))
                })
                .collect();
            push("lamps-inside-h", rows);
        }
    }

    let outcome = match families.iter().find(|f| f.refuted) {
        Some(f) => Outcome::Refuted {
            family: f.family.clone(),
        },
        None => Outcome::Consistent,
    };
    Ok(ValidationReport {
        subgroup: h.clone(),
        side,
        depth,
        families,
        outcome,
    })
}
