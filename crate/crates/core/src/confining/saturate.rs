//! Building elements of `Q` from the confining conditions alone.
//!
//! Every derived configuration comes from a seed (checked by membership), a
//! positive shift (condition (a)) or a sum followed by `t^{n0}` (condition
//! (c)). The derivation order follows the recovery argument: reduce to
//! negative parts, recover the leading coefficient deeper and deeper, strip
//! terms whose coefficients are already available as lamps at that depth,
//! and otherwise combine the element with itself or a shift of itself so the
//! two leading terms stop interfering.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;

use crate::config::LampConfig;
use crate::error::{Error, Result};
use crate::group::{subgroup_closure, Coeff, GroupDesc, SubgroupDesc};
use crate::metrics::Side;

use super::membership::QOracle;
use super::qspec::{QKind, QSpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum Rule {
    Seed,
    Shift { from: usize, by: i64 },
    SumShift { left: usize, right: usize, n0: i64 },
}

/// Why a step was taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Step {
    Seed,
    Reduce,
    Recover,
    Eliminate,
    Case3a,
    Case3b,
    Case3c,
    Spread,
    Materialize,
    Closure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub config: LampConfig,
    #[serde(flatten)]
    pub rule: Rule,
    pub step: Step,
}

#[derive(Clone, Debug, Serialize)]
pub struct SaturationState {
    pub window: i64,
    pub n0: i64,
    /// `trace[i].config` is the `i`-th known member.
    pub trace: Vec<TraceEntry>,
    /// For each depth `d`, the coefficients `c` with `c t^-d'` known for some
    /// `d' >= d`, closed to a subgroup.
    pub lamps: BTreeMap<i64, SubgroupDesc>,
    /// Elements left with two leading coefficients of equal order generating
    /// different subgroups.
    pub stuck: Vec<LampConfig>,
    pub partial: bool,
    pub iterations: usize,
}

impl SaturationState {
    pub fn known(&self) -> impl Iterator<Item = &LampConfig> {
        self.trace.iter().map(|e| &e.config)
    }

    pub fn len(&self) -> usize {
        self.trace.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trace.is_empty()
    }

    pub fn contains(&self, f: &LampConfig) -> bool {
        self.trace.iter().any(|e| &e.config == f)
    }

    /// Lamps available at depth `d` (trivial when none are).
    pub fn lamps_at(&self, d: i64) -> Option<&SubgroupDesc> {
        self.lamps.get(&d)
    }

    /// Known configurations that fail membership; empty for a sound run.
    pub fn unsound(&self, q: &QSpec) -> Result<Vec<LampConfig>> {
        let oracle = QOracle::new(q, self.window);
        let mut bad = Vec::new();
        for f in self.known() {
            if !oracle.contains(f)? {
                bad.push(f.clone());
            }
        }
        Ok(bad)
    }

    /// Replays the trace, checking every rule reproduces its configuration.
    pub fn replay_ok(&self, g: &GroupDesc) -> bool {
        self.trace.iter().enumerate().all(|(i, e)| match e.rule {
            Rule::Seed => true,
            Rule::Shift { from, by } => {
                from < i && by >= 1 && self.trace[from].config.shift(by) == e.config
            }
            Rule::SumShift { left, right, n0 } => {
                left < i
                    && right < i
                    && g.config_add_unchecked(&self.trace[left].config, &self.trace[right].config)
                        .shift(n0)
                        == e.config
            }
        })
    }
}

/// Parameters for [`saturate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationParams {
    pub window: i64,
    pub iter_cap: usize,
    pub n0: i64,
}

impl Default for SaturationParams {
    fn default() -> Self {
        SaturationParams {
            window: 4,
            iter_cap: 100_000,
            n0: 0,
        }
    }
}

/// Members of `Q` in the window that generate `Q ∩ window` for the built-in
/// kinds: lamps, generators of the defining families, and their shifts.
pub fn window_members_basis(q: &QSpec, window: i64) -> Result<Vec<LampConfig>> {
    let mut kind = &q.kind;
    let mut mirrored = false;
    while let QKind::Mirror(inner) = kind {
        kind = inner;
        mirrored = !mirrored;
    }
    let g = &q.group;
    let w = window;
    let lamps = |lo: i64, hi: i64, coeffs: &[Coeff]| -> Vec<LampConfig> {
        (lo..=hi)
            .flat_map(|p| coeffs.iter().map(move |c| LampConfig::single(p, c.clone())))
            .collect()
    };
    let std = g.standard_generators();
    let mut out = match kind {
        QKind::QH { subgroup, side } => {
            let h: Vec<Coeff> = subgroup.generators().to_vec();
            match side {
                Side::Plus => [lamps(-w, -1, &h), lamps(0, w, &std)].concat(),
                Side::Minus => [lamps(-w, 0, &std), lamps(1, w, &h)].concat(),
            }
        }
        QKind::BPlus => lamps(0, w, &std),
        QKind::BMinus => lamps(-w, 0, &std),
        QKind::FullBase => lamps(-w, w, &std),
        QKind::SpanCounterexample { template } => {
            let mut v = lamps(0, w, &std);
            for k in 1..=w + template.max_pos().unwrap_or(0) {
                let p = template.shift(-k);
                if p.within(-w, w) {
                    v.push(p);
                }
            }
            v
        }
        QKind::Custom { configs, flags } => {
            let max_shift = if flags.shift_closed { 2 * w } else { 0 };
            let mut v: Vec<LampConfig> = configs
                .iter()
                .flat_map(|c| (0..=max_shift).map(move |j| c.shift(j)))
                .filter(|c| c.within(-w, w) && !c.is_empty())
                .collect();
            if flags.bplus_closed {
                v.extend(lamps(0, w, &std));
            }
            v
        }
        QKind::Mirror(_) => unreachable!(),
    };
    if mirrored {
        out = out.iter().map(LampConfig::mirror).collect();
    }
    let oracle = QOracle::new(q, w);
    let mut kept = Vec::new();
    for f in out {
        if matches!(oracle.contains(&f), Ok(true)) && !kept.contains(&f) {
            kept.push(f);
        }
    }
    Ok(kept)
}

struct Engine {
    g: GroupDesc,
    oracle: QOracle,
    window: i64,
    n0: i64,
    cap: usize,
    st: SaturationState,
    index: HashMap<LampConfig, usize>,
    /// Known single lamps at negative positions.
    lamp_idx: BTreeMap<(i64, Coeff), usize>,
    lamp_cache: Option<BTreeMap<i64, SubgroupDesc>>,
}

impl Engine {
    fn tick(&mut self) -> bool {
        self.st.iterations += 1;
        if self.st.iterations > self.cap {
            self.st.partial = true;
        }
        !self.st.partial
    }

    fn add(&mut self, config: LampConfig, rule: Rule, step: Step) -> Option<usize> {
        if !config.within(-self.window, self.window) {
            return None;
        }
        if let Some(&i) = self.index.get(&config) {
            return Some(i);
        }
        let i = self.st.trace.len();
        if config.len() == 1 {
            let (p, c) = config.iter().next().unwrap();
            if p < 0 {
                self.lamp_idx.insert((p, c.clone()), i);
                self.lamp_cache = None;
            }
        }
        self.index.insert(config.clone(), i);
        self.st.trace.push(TraceEntry { config, rule, step });
        Some(i)
    }

    fn cfg(&self, i: usize) -> &LampConfig {
        &self.st.trace[i].config
    }

    fn seed(&mut self, f: LampConfig, step: Step) -> Option<usize> {
        if let Some(&i) = self.index.get(&f) {
            return Some(i);
        }
        match self.oracle.contains(&f) {
            Ok(true) => self.add(f, Rule::Seed, step),
            _ => None,
        }
    }

    fn shift(&mut self, i: usize, by: i64, step: Step) -> Option<usize> {
        if by == 0 {
            return Some(i);
        }
        let f = self.cfg(i).shift(by);
        self.add(f, Rule::Shift { from: i, by }, step)
    }

    fn sum(&mut self, a: usize, b: usize, step: Step) -> Option<usize> {
        let f = self
            .g
            .config_add_unchecked(self.cfg(a), self.cfg(b))
            .shift(self.n0);
        self.add(
            f,
            Rule::SumShift {
                left: a,
                right: b,
                n0: self.n0,
            },
            step,
        )
    }

    /// `L_d` for every depth `1..=window`.
    fn lamp_groups(&mut self) -> &BTreeMap<i64, SubgroupDesc> {
        if self.lamp_cache.is_none() {
            let mut out = BTreeMap::new();
            let mut coeffs: Vec<Coeff> = Vec::new();
            for d in (1..=self.window).rev() {
                coeffs.extend(
                    self.lamp_idx
                        .range((-d, Coeff::zero(0))..(-d + 1, Coeff::zero(0)))
                        .map(|((_, c), _)| c.clone()),
                );
                out.insert(d, subgroup_closure(&coeffs, &self.g).expect("valid lamps"));
            }
            self.lamp_cache = Some(out);
        }
        self.lamp_cache.as_ref().unwrap()
    }

    fn lamp_group(&mut self, d: i64) -> SubgroupDesc {
        let trivial = self.g.trivial_subgroup();
        self.lamp_groups().get(&d).cloned().unwrap_or(trivial)
    }

    /// `c t^p` as a known member, built from deeper lamps when possible.
    fn ensure_lamp(&mut self, c: &Coeff, p: i64) -> Option<usize> {
        if c.is_zero() {
            return None;
        }
        let f = LampConfig::single(p, c.clone());
        if let Some(&i) = self.index.get(&f) {
            return Some(i);
        }
        if p >= 0 {
            return self.seed(f, Step::Seed);
        }
        if !self.lamp_group(-p).contains(c) {
            return None;
        }
        // deepest known source for each coefficient at positions <= p
        let mut sources: BTreeMap<Coeff, (i64, usize)> = BTreeMap::new();
        for (&(q, ref d), &i) in self.lamp_idx.range(..(p + 1, Coeff::zero(0))) {
            sources.entry(d.clone()).or_insert((q, i));
        }
        // shortest sum of source coefficients reaching c
        let mut prev: HashMap<Coeff, (Coeff, Coeff)> = HashMap::new();
        let mut queue = VecDeque::from([self.g.zero()]);
        prev.insert(self.g.zero(), (self.g.zero(), self.g.zero()));
        while let Some(x) = queue.pop_front() {
            if &x == c {
                break;
            }
            for s in sources.keys() {
                let y = self.g.add_unchecked(&x, s);
                if !prev.contains_key(&y) {
                    prev.insert(y.clone(), (x.clone(), s.clone()));
                    queue.push_back(y);
                }
            }
        }
        let mut path = Vec::new();
        let mut x = c.clone();
        while !x.is_zero() {
            let (px, s) = prev.get(&x)?.clone();
            path.push(s);
            x = px;
        }
        let mut acc: Option<usize> = None;
        for s in path {
            let (q, i) = sources[&s];
            let moved = self.shift(i, p - q, Step::Spread)?;
            acc = Some(match acc {
                None => moved,
                Some(a) => self.sum(a, moved, Step::Spread)?,
            });
        }
        acc
    }

    /// Strips the non-negative part using a B+ member.
    fn reduce(&mut self, i: usize) -> Option<usize> {
        let nn = self.cfg(i).nonnegative_part();
        if nn.is_empty() {
            return Some(i);
        }
        let b = self.g.config_neg(&nn);
        let bi = self.seed(b, Step::Seed)?;
        self.sum(i, bi, Step::Reduce)
    }

    fn leading_two(f: &LampConfig) -> Option<((i64, Coeff), (i64, Coeff))> {
        let mut it = f.iter();
        let (p1, c1) = it.next()?;
        let (p2, c2) = it.next()?;
        Some(((p1, c1.clone()), (p2, c2.clone())))
    }

    /// Pushes one source element through the recovery steps.
    fn process(&mut self, start: usize) {
        let Some(mut cur) = self.reduce(start) else {
            return;
        };
        loop {
            if !self.tick() {
                return;
            }
            // strip terms that known lamps can cancel
            let terms: Vec<(i64, Coeff)> = self
                .cfg(cur)
                .iter()
                .filter(|&(p, _)| p < 0)
                .map(|(p, c)| (p, c.clone()))
                .collect();
            for (p, c) in terms {
                if self.lamp_group(-p).contains(&c) {
                    let neg = self.g.coeff_neg(&c);
                    let Some(l) = self.ensure_lamp(&neg, p) else {
                        continue;
                    };
                    match self.sum(cur, l, Step::Eliminate) {
                        Some(n) => cur = n,
                        None => return,
                    }
                }
            }
            let f = self.cfg(cur).clone();
            let Some(((p1, g1), (p2, g2))) = Self::leading_two(&f) else {
                return;
            };
            let (j1, j2) = (-p1, -p2);
            if j2 <= 0 {
                return;
            }
            if !self.lamp_group(j1 - j2).contains(&g1) {
                let recovered = self
                    .shift(cur, j2, Step::Recover)
                    .and_then(|s| self.reduce(s));
                if recovered.is_some() {
                    continue;
                }
            }
            let (n, m) = (self.g.coeff_order(&g1), self.g.coeff_order(&g2));
            let same_cyclic = n == m
                && subgroup_closure(std::slice::from_ref(&g1), &self.g).ok()
                    == subgroup_closure(std::slice::from_ref(&g2), &self.g).ok();
            let next = if same_cyclic {
                let l = (1..n as i64)
                    .find(|&l| {
                        self.g
                            .add_unchecked(&self.g.coeff_scale(&g1, l), &g2)
                            .is_zero()
                    })
                    .unwrap_or(0);
                let Some(s) = self.shift(cur, j1 - j2, Step::Case3a) else {
                    return;
                };
                let mut acc = Some(cur);
                for _ in 0..l {
                    acc = acc.and_then(|a| self.sum(a, s, Step::Case3a));
                }
                acc.and_then(|a| self.reduce(a))
            } else if n != m {
                let (times, step) = if n > m {
                    (m, Step::Case3b)
                } else {
                    (n, Step::Case3c)
                };
                let mut acc = Some(cur);
                for _ in 1..times {
                    acc = acc.and_then(|a| self.sum(a, cur, step));
                }
                acc.and_then(|a| self.reduce(a))
            } else {
                self.st.stuck.push(f);
                return;
            };
            match next {
                Some(n) if n != cur => cur = n,
                _ => return,
            }
        }
    }

    /// Builds every configuration on `positions` with coefficients from
    /// `coeffs`, each as a known lamp plus a smaller configuration.
    fn materialize(&mut self, positions: &[i64], coeffs: &[Coeff]) {
        let mut layer: Vec<Option<usize>> = vec![None];
        for &p in positions {
            let mut next = Vec::with_capacity(layer.len() * coeffs.len());
            for &base in &layer {
                for c in coeffs {
                    if !self.tick() {
                        return;
                    }
                    if c.is_zero() {
                        next.push(base);
                        continue;
                    }
                    let Some(l) = self.ensure_lamp(c, p) else {
                        return;
                    };
                    let built = match base {
                        None => Some(l),
                        Some(b) => self.sum(b, l, Step::Materialize),
                    };
                    match built {
                        Some(i) => next.push(Some(i)),
                        None => return,
                    }
                }
            }
            layer = next;
        }
    }

    /// Plain closure under the two rules, for `n0 > 0`.
    fn closure_rounds(&mut self) {
        let mut frontier = 0;
        while frontier < self.st.trace.len() {
            let end = self.st.trace.len();
            for i in frontier..end {
                if !self.tick() {
                    return;
                }
                self.shift(i, 1, Step::Closure);
                for j in 0..=i {
                    self.sum(i, j, Step::Closure);
                }
            }
            frontier = end;
        }
    }
}

/// Closure of `Q ∩ window` under the confining rules, starting from the
/// built-in basis. Reaching `iter_cap` marks the state partial.
pub fn saturate(q: &QSpec, params: &SaturationParams) -> Result<SaturationState> {
    let w = params.window;
    if w < 1 {
        return Err(Error::InvalidArgument(format!(
            "saturation window must be >= 1, got {w}"
        )));
    }
    let mut e = Engine {
        g: q.group.clone(),
        oracle: QOracle::new(q, w),
        window: w,
        n0: params.n0,
        cap: params.iter_cap,
        st: SaturationState {
            window: w,
            n0: params.n0,
            trace: Vec::new(),
            lamps: BTreeMap::new(),
            stuck: Vec::new(),
            partial: false,
            iterations: 0,
        },
        index: HashMap::new(),
        lamp_idx: BTreeMap::new(),
        lamp_cache: None,
    };
    e.seed(LampConfig::new(), Step::Seed);
    let seeds = window_members_basis(q, w)?;
    let sources: Vec<usize> = seeds
        .into_iter()
        .filter_map(|f| e.seed(f, Step::Seed))
        .collect();
    if params.n0 == 0 {
        loop {
            let before = e.lamp_groups().clone();
            for &s in &sources {
                if e.cfg(s).negative_part().is_empty() {
                    continue;
                }
                e.st.stuck.retain(|_| true);
                e.process(s);
                if e.st.partial {
                    break;
                }
            }
            if e.st.partial || *e.lamp_groups() == before {
                break;
            }
        }
        e.st.stuck.sort();
        e.st.stuck.dedup();
        // Q~_H on the depths where the full lamp group is available
        let l1 = e.lamp_group(1);
        let depth = (1..=w)
            .take_while(|&d| e.lamp_group(d) == l1)
            .last()
            .unwrap_or(0);
        if !l1.is_trivial() && (l1.order() as f64).powi(depth as i32) <= 4096.0 {
            let positions: Vec<i64> = (-depth..=-1).collect();
            e.materialize(&positions, l1.elements());
        }
        // B+ on the window
        if (e.g.order() as f64).powi(w as i32 + 1) <= 4096.0
            && e.g.elements().iter().skip(1).all(|c| {
                matches!(
                    e.oracle.contains(&LampConfig::single(0, c.clone())),
                    Ok(true)
                )
            })
        {
            let positions: Vec<i64> = (0..=w).collect();
            let all = e.g.elements();
            e.materialize(&positions, &all);
        }
    } else {
        e.closure_rounds();
    }
    e.st.lamps = e.lamp_groups().clone();
    Ok(e.st)
}
