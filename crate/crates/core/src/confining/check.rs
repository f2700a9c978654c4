//! Windowed verification of the confining conditions
//! (a) `tQ ⊆ Q`, (b) every `f` has `t^n f ∈ Q` for some `n >= 0`,
//! (c) `t^{n0}(Q + Q) ⊆ Q`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::LampConfig;
use crate::error::{Error, Result};
use crate::group::GroupDesc;
use crate::metrics::Side;

use super::membership::QOracle;
use super::qspec::{QKind, QSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    #[serde(rename = "t")]
    T,
    #[serde(rename = "t^-1")]
    TInv,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckParams {
    pub window: i64,
    pub n0_max: i64,
    /// Random candidates (and as many sampled members) when the window is
    /// too large to enumerate.
    pub sample_budget: usize,
    pub seed: u64,
    /// Enumerate every window configuration when there are at most this
    /// many.
    pub exact_limit: u128,
    /// Check every member pair for (c) when there are at most this many,
    /// otherwise this many random pairs.
    pub pair_limit: u64,
}

impl Default for CheckParams {
    fn default() -> Self {
        CheckParams {
            window: 4,
            n0_max: 4,
            sample_budget: 2000,
            seed: 0,
            exact_limit: 1 << 16,
            pair_limit: 200_000,
        }
    }
}

impl CheckParams {
    pub fn with_window(window: i64) -> Self {
        CheckParams {
            window,
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CondA {
    pub pass: bool,
    /// A member whose shift left `Q`.
    pub violation: Option<LampConfig>,
    /// A member of `Q` outside `tQ`.
    pub strictness_witness: Option<LampConfig>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CondB {
    pub pass: bool,
    /// Largest shift needed over the candidates.
    pub max_n: Option<i64>,
    /// A candidate with no admissible shift up to `2W`.
    pub failure: Option<LampConfig>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CondC {
    pub pass: bool,
    pub n0: Option<i64>,
    pub pairs_checked: u64,
    /// A pair sum that no `n0 <= n0_max` pushes into `Q`.
    pub failure: Option<LampConfig>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    StrictlyConfining,
    /// Confining without a strictness witness: the lineal case.
    ConfiningNotStrict,
    NotConfining,
    /// The report's own `window` field carries the window when serialized.
    Inconclusive {
        #[serde(skip)]
        window: i64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfiningReport {
    pub direction: Direction,
    pub window: i64,
    pub mode: Mode,
    pub candidates: usize,
    pub members: usize,
    pub cond_a: CondA,
    pub cond_b: CondB,
    pub cond_c: CondC,
    #[serde(flatten)]
    pub verdict: Verdict,
    pub lineal: bool,
}

impl ConfiningReport {
    fn mirror_witnesses(mut self) -> Self {
        let m = |f: &mut Option<LampConfig>| *f = f.as_ref().map(LampConfig::mirror);
        m(&mut self.cond_a.violation);
        m(&mut self.cond_a.strictness_witness);
        m(&mut self.cond_b.failure);
        m(&mut self.cond_c.failure);
        self
    }
}

/// Checks whether `t` (or `t^-1`) confines `A` into `Q` on the window.
/// The `t^-1` check runs the `t` check on the mirror image and maps the
/// witnesses back.
pub fn check_confining(
    q: &QSpec,
    direction: Direction,
    params: &CheckParams,
) -> Result<ConfiningReport> {
    match direction {
        Direction::T => check_t(q, params),
        Direction::TInv => {
            let mut r = check_t(&q.mirror(), params)?.mirror_witnesses();
            r.direction = Direction::TInv;
            Ok(r)
        }
    }
}

struct Tester {
    oracle: QOracle,
}

impl Tester {
    /// `None` when `f` lies outside the set's own window.
    fn member(&self, f: &LampConfig) -> Result<Option<bool>> {
        match self.oracle.contains(f) {
            Ok(b) => Ok(Some(b)),
            Err(Error::SupportExceedsWindow { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

fn window_config(g: &GroupDesc, window: i64, mut index: u128) -> LampConfig {
    let n = g.order() as u128;
    LampConfig::from_entries((-window..=window).map(|p| {
        let c = g.coeff_at((index % n) as usize);
        index /= n;
        (p, c)
    }))
}

fn random_config(g: &GroupDesc, lo: i64, hi: i64, rng: &mut ChaCha8Rng) -> LampConfig {
    LampConfig::from_entries((lo..=hi).map(|p| (p, g.coeff_at(rng.gen_range(0..g.order())))))
}

/// A random element of `Q` supported in the window (best effort: custom
/// sets without sum closure may produce non-members, which callers filter).
pub(crate) fn sample_member(q: &QSpec, window: i64, rng: &mut ChaCha8Rng) -> LampConfig {
    let mut kind = &q.kind;
    let mut mirrored = false;
    while let QKind::Mirror(inner) = kind {
        kind = inner;
        mirrored = !mirrored;
    }
    let g = &q.group;
    let w = window;
    let f = match kind {
        QKind::QH { subgroup, side } => {
            let h = subgroup.elements();
            LampConfig::from_entries((-w..=w).map(|p| {
                let constrained = match side {
                    Side::Plus => p < 0,
                    Side::Minus => p > 0,
                };
                let c = if constrained {
                    h[rng.gen_range(0..h.len())].clone()
                } else {
                    g.coeff_at(rng.gen_range(0..g.order()))
                };
                (p, c)
            }))
        }
        QKind::BPlus => random_config(g, 0, w, rng),
        QKind::BMinus => random_config(g, -w, 0, rng),
        QKind::FullBase => random_config(g, -w, w, rng),
        QKind::SpanCounterexample { template } => {
            let mut f = random_config(g, 0, w, rng);
            for k in 1..=w - template.min_pos().unwrap_or(0) {
                let p = template.shift(-k);
                if rng.gen_bool(0.5) && p.within(-w, w) {
                    let times = rng.gen_range(1..=g.order() as i64);
                    f = g.config_add_unchecked(&f, &g.config_scale(&p, times));
                }
            }
            f
        }
        QKind::Custom { configs, flags } => {
            let max_shift = if flags.shift_closed { 2 * w } else { 0 };
            let gens: Vec<LampConfig> = configs
                .iter()
                .flat_map(|c| (0..=max_shift).map(move |j| c.shift(j)))
                .filter(|c| c.within(-w, w))
                .collect();
            let mut f = LampConfig::new();
            if flags.sum_closed {
                for c in &gens {
                    if rng.gen_bool(0.3) {
                        let times = rng.gen_range(1..=g.order() as i64);
                        f = g.config_add_unchecked(&f, &g.config_scale(c, times));
                    }
                }
            } else if !gens.is_empty() {
                f = gens[rng.gen_range(0..gens.len())].clone();
            }
            if flags.bplus_closed {
                f = g.config_add_unchecked(&f, &random_config(g, 0, w, rng));
            }
            f
        }
        QKind::Mirror(_) => unreachable!(),
    };
    if mirrored {
        f.mirror()
    } else {
        f
    }
}

/// Single lamps ordered by position `0, 1, -1, 2, -2, ...` and then by
/// coefficient.
fn single_lamps(g: &GroupDesc, window: i64) -> Vec<LampConfig> {
    let mut positions = vec![0];
    for k in 1..=window {
        positions.push(k);
        positions.push(-k);
    }
    positions
        .into_iter()
        .flat_map(|p| {
            g.elements()
                .into_iter()
                .skip(1)
                .map(move |c| LampConfig::single(p, c))
        })
        .collect()
}

fn check_t(q: &QSpec, params: &CheckParams) -> Result<ConfiningReport> {
    let w = params.window;
    if w < 0 {
        return Err(Error::InvalidArgument(format!("negative window {w}")));
    }
    let g = &q.group;
    let tester = Tester {
        oracle: QOracle::new(q, 2 * w + 2),
    };
    let total = (g.order() as u128).checked_pow((2 * w + 1) as u32);
    let exhaustive = total.is_some_and(|t| t <= params.exact_limit);
    if !exhaustive && params.sample_budget == 0 {
        return Err(Error::WindowTooLarge { window: w });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let candidates: Vec<LampConfig> = if exhaustive {
        (0..total.unwrap())
            .map(|i| window_config(g, w, i))
            .collect()
    } else {
        let mut c: Vec<LampConfig> = (0..params.sample_budget)
            .map(|_| random_config(g, -w, w, &mut rng))
            .collect();
        c.extend((0..params.sample_budget).map(|_| sample_member(q, w, &mut rng)));
        c.extend(single_lamps(g, w));
        c.push(LampConfig::new());
        c.sort();
        c.dedup();
        c
    };
    let mut members = Vec::new();
    for f in &candidates {
        if tester.member(f)? == Some(true) {
            members.push(f.clone());
        }
    }

    // (a)
    let mut violation = None;
    for f in &members {
        if tester.member(&f.shift(1))? == Some(false) {
            violation = Some(f.clone());
            break;
        }
    }
    let mut strictness_witness = None;
    for f in single_lamps(g, w).iter().chain(&members) {
        if tester.member(f)? == Some(true) && tester.member(&f.shift(-1))? == Some(false) {
            strictness_witness = Some(f.clone());
            break;
        }
    }
    let cond_a = CondA {
        pass: violation.is_none(),
        violation,
        strictness_witness,
    };

    // (b)
    let mut max_n = Some(0);
    let mut failure = None;
    'outer: for f in &candidates {
        for n in 0..=2 * w {
            if tester.member(&f.shift(n))? == Some(true) {
                max_n = max_n.map(|m: i64| m.max(n));
                continue 'outer;
            }
        }
        failure = Some(f.clone());
        max_n = None;
        break;
    }
    let cond_b = CondB {
        pass: failure.is_none(),
        max_n,
        failure,
    };

    // (c)
    let m = members.len() as u64;
    let all_pairs = m * (m + 1) / 2;
    let sums: Vec<LampConfig> = if all_pairs <= params.pair_limit {
        let mut s = Vec::with_capacity(all_pairs as usize);
        for i in 0..members.len() {
            for j in i..members.len() {
                s.push(g.config_add_unchecked(&members[i], &members[j]));
            }
        }
        s
    } else {
        (0..params.pair_limit)
            .map(|_| {
                let a = &members[rng.gen_range(0..members.len())];
                let b = &members[rng.gen_range(0..members.len())];
                g.config_add_unchecked(a, b)
            })
            .collect()
    };
    let mut n0 = None;
    let mut c_failure = None;
    'n0: for k in 0..=params.n0_max {
        for s in &sums {
            if tester.member(&s.shift(k))? == Some(false) {
                c_failure = Some(s.clone());
                continue 'n0;
            }
        }
        n0 = Some(k);
        c_failure = None;
        break;
    }
    let cond_c = CondC {
        pass: n0.is_some(),
        n0,
        pairs_checked: sums.len() as u64,
        failure: c_failure,
    };

    let verdict = if !cond_a.pass {
        Verdict::NotConfining
    } else if !cond_b.pass || !cond_c.pass {
        Verdict::Inconclusive { window: w }
    } else if cond_a.strictness_witness.is_some() {
        Verdict::StrictlyConfining
    } else {
        Verdict::ConfiningNotStrict
    };
    Ok(ConfiningReport {
        direction: Direction::T,
        window: w,
        mode: if exhaustive {
            Mode::Exhaustive
        } else {
            Mode::Sampled
        },
        candidates: candidates.len(),
        members: members.len(),
        lineal: verdict == Verdict::ConfiningNotStrict,
        cond_a,
        cond_b,
        cond_c,
        verdict,
    })
}
