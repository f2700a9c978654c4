//! Word metrics on `G wr Z` for the generating-set families `S_H`, `S'_H`,
//! the lineal set `A u {t}`, the finite standard set and the whole group.
//!
//! All closed forms work in the lamplighter picture: an element is a set of
//! lamp states at absolute positions ([`Element::lamps`]) plus a final cursor.
//! Right multiplication by `t^{+-1}` moves the cursor; right multiplication by
//! a base element `q` adds `q` translated to the cursor. For `Q_H` a single
//! application at cursor `c` can set anything at positions `>= c` and only
//! `H`-values below `c`, so one application at the leftmost non-`H` lamp (or
//! anywhere on the way when that is not needed) is optimal.

mod bfs;
mod delta;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::LampConfig;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::group::{Coeff, GroupDesc, SubgroupDesc};
use crate::poly::parse_coeff_list;

pub use bfs::{bfs_wordlen, BfsTable, DEFAULT_STATE_LIMIT};
pub use delta::{delta_four_point, four_point_defect, DeltaEstimate};

/// Which side of the origin is constrained to `H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `Q_H`: negative positions in `H`; `t` confines.
    Plus,
    /// `Q'_H`: positive positions in `H`; `t^-1` confines.
    Minus,
}

/// Symbolic generating set. Every variant is used symmetrized.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenSet {
    /// Unit vectors of the cyclic factors and `t`.
    Standard,
    /// `S_H = {Q_H, t^{+-1}}`.
    QPlus(SubgroupDesc),
    /// `S'_H = {Q'_H, t^{+-1}}`.
    QMinus(SubgroupDesc),
    /// `A u {t}`.
    Lineal,
    /// The whole group.
    Trivial,
}

impl GenSet {
    pub fn qp(side: Side, h: SubgroupDesc) -> Self {
        match side {
            Side::Plus => GenSet::QPlus(h),
            Side::Minus => GenSet::QMinus(h),
        }
    }

    /// Parses `standard`, `lineal`, `trivial`, `qp+:{...}`, `qp-:{...}` where
    /// the braces list generators of `H`.
    pub fn parse(text: &str, g: &GroupDesc) -> Result<Self> {
        let text = text.trim();
        match text {
            "standard" => return Ok(GenSet::Standard),
            "lineal" => return Ok(GenSet::Lineal),
            "trivial" | "elliptic" => return Ok(GenSet::Trivial),
            _ => {}
        }
        let (side, rest) = if let Some(rest) = text.strip_prefix("qp+:") {
            (Side::Plus, rest)
        } else if let Some(rest) = text.strip_prefix("qp-:") {
            (Side::Minus, rest)
        } else {
            return Err(Error::Parse {
                pos: 0,
                msg: format!("unknown structure {text:?}; expected standard|lineal|trivial|qp+:{{..}}|qp-:{{..}}"),
            });
        };
        let gens = parse_coeff_list(rest, g).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse { pos: pos + 4, msg },
            other => other,
        })?;
        Ok(GenSet::qp(side, crate::group::subgroup_closure(&gens, g)?))
    }

    pub fn subgroup(&self) -> Option<&SubgroupDesc> {
        match self {
            GenSet::QPlus(h) | GenSet::QMinus(h) => Some(h),
            _ => None,
        }
    }

    /// Whether `x` is a letter of the symmetrized generating set.
    pub fn contains(&self, x: &Element, g: &GroupDesc) -> bool {
        if x.config.is_empty() && x.shift.abs() == 1 {
            return true;
        }
        match self {
            GenSet::Trivial => true,
            _ if x.shift != 0 => false,
            GenSet::Lineal => true,
            GenSet::QPlus(h) => x.config.iter().all(|(p, c)| p >= 0 || h.contains(c)),
            GenSet::QMinus(h) => x.config.iter().all(|(p, c)| p <= 0 || h.contains(c)),
            GenSet::Standard => {
                x.config.len() == 1
                    && x.config.get(0).is_some_and(|c| {
                        g.standard_generators()
                            .iter()
                            .any(|e| e == c || g.coeff_neg(e) == *c)
                    })
            }
        }
    }
}

impl fmt::Display for GenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenSet::Standard => write!(f, "standard"),
            GenSet::Lineal => write!(f, "lineal"),
            GenSet::Trivial => write!(f, "trivial"),
            GenSet::QPlus(h) => write!(f, "qp+:{h}"),
            GenSet::QMinus(h) => write!(f, "qp-:{h}"),
        }
    }
}

/// One application of a generator while the cursor sits at `position`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Burst {
    /// Index into [`WalkPlan::visits`] at which the generator is applied.
    pub step: usize,
    pub position: i64,
    #[serde(serialize_with = "ser_element")]
    pub generator: Element,
}

fn ser_element<S: serde::Serializer>(x: &Element, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Witness for a word length: a cursor walk with generator bursts.
/// `cost = (visits.len() - 1) + bursts.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WalkPlan {
    pub visits: Vec<i64>,
    pub bursts: Vec<Burst>,
    pub cost: u64,
}

impl WalkPlan {
    pub fn travel(&self) -> u64 {
        (self.visits.len() - 1) as u64
    }

    /// Multiplies the plan out letter by letter.
    pub fn replay(&self, g: &GroupDesc) -> Element {
        let mut acc = Element::identity();
        let mut bursts = self.bursts.iter().peekable();
        for (i, &v) in self.visits.iter().enumerate() {
            while let Some(b) = bursts.next_if(|b| b.step == i) {
                acc = g.elem_mul_unchecked(&acc, &b.generator);
            }
            if let Some(&next) = self.visits.get(i + 1) {
                acc = g.elem_mul_unchecked(&acc, &Element::t(next - v));
            }
        }
        acc
    }

    /// Structural validity: unit cursor steps, letters from `gens`, cost
    /// bookkeeping.
    pub fn check(&self, gens: &GenSet, g: &GroupDesc) -> Result<()> {
        let bad = |msg: String| Err(Error::PreconditionViolated(msg));
        if self.visits.first() != Some(&0) {
            return bad("walk must start at 0".into());
        }
        if self.visits.windows(2).any(|w| (w[1] - w[0]).abs() != 1) {
            return bad("walk has a non-unit step".into());
        }
        for b in &self.bursts {
            if self.visits.get(b.step) != Some(&b.position) {
                return bad(format!("burst at step {} is not at the cursor", b.step));
            }
            if !gens.contains(&b.generator, g) {
                return bad(format!("{} is not a letter of {gens}", b.generator));
            }
        }
        if self.cost != self.travel() + self.bursts.len() as u64 {
            return bad("cost does not match walk".into());
        }
        Ok(())
    }
}

struct PlanBuilder {
    visits: Vec<i64>,
    bursts: Vec<Burst>,
}

impl PlanBuilder {
    fn new() -> Self {
        PlanBuilder {
            visits: vec![0],
            bursts: Vec::new(),
        }
    }

    fn cursor(&self) -> i64 {
        *self.visits.last().unwrap()
    }

    fn walk_to(&mut self, target: i64) {
        let mut c = self.cursor();
        while c != target {
            c += (target - c).signum();
            self.visits.push(c);
        }
    }

    fn burst(&mut self, generator: Element) {
        self.bursts.push(Burst {
            step: self.visits.len() - 1,
            position: self.cursor(),
            generator,
        });
    }

    fn finish(self) -> WalkPlan {
        let cost = (self.visits.len() - 1 + self.bursts.len()) as u64;
        WalkPlan {
            visits: self.visits,
            bursts: self.bursts,
            cost,
        }
    }
}

/// A generating set bound to a group, with the per-coefficient data the
/// closed forms need precomputed.
#[derive(Clone, Debug)]
pub struct WordMetric {
    group: GroupDesc,
    gens: GenSet,
    /// Shortest `{+-e_j}`-words for each coefficient, by element index.
    coeff_words: Vec<Vec<Coeff>>,
}

impl WordMetric {
    pub fn new(group: &GroupDesc, gens: &GenSet) -> Result<Self> {
        if let Some(h) = gens.subgroup() {
            for c in h.elements() {
                group.validate(c)?;
            }
        }
        let coeff_words = match gens {
            GenSet::Standard => coeff_geodesics(group),
            _ => Vec::new(),
        };
        Ok(WordMetric {
            group: group.clone(),
            gens: gens.clone(),
            coeff_words,
        })
    }

    pub fn group(&self) -> &GroupDesc {
        &self.group
    }

    pub fn gens(&self) -> &GenSet {
        &self.gens
    }

    /// Word length `|x|`.
    pub fn len(&self, x: &Element) -> u64 {
        let lamps = x.lamps();
        let m = x.shift;
        match &self.gens {
            GenSet::Trivial => u64::from(!x.is_identity()),
            GenSet::Lineal => m.unsigned_abs() + u64::from(!lamps.is_empty()),
            GenSet::QPlus(h) => {
                if lamps.is_empty() {
                    return m.unsigned_abs();
                }
                1 + detour(qp_burst_site(&lamps, h, m, Side::Plus), m)
            }
            GenSet::QMinus(h) => {
                if lamps.is_empty() {
                    return m.unsigned_abs();
                }
                1 + detour(qp_burst_site(&lamps, h, m, Side::Minus), m)
            }
            GenSet::Standard => {
                let lamp_cost: u64 = lamps
                    .iter()
                    .map(|(_, c)| self.coeff_words[self.group.index_of(c)].len() as u64)
                    .sum();
                let (cost, _) = standard_walk(&lamps, m);
                lamp_cost + cost
            }
        }
    }

    /// `d(x, y) = |x^-1 y|`.
    pub fn dist(&self, x: &Element, y: &Element) -> u64 {
        self.len(&self.group.elem_between(x, y))
    }

    /// A geodesic witness whose cost equals [`WordMetric::len`].
    pub fn plan(&self, x: &Element) -> WalkPlan {
        let lamps = x.lamps();
        let m = x.shift;
        let mut b = PlanBuilder::new();
        match &self.gens {
            GenSet::Trivial => {
                if !x.is_identity() {
                    b.burst(x.clone());
                }
            }
            GenSet::Lineal => {
                if !lamps.is_empty() {
                    b.burst(Element::base(lamps.clone()));
                }
                b.walk_to(m);
            }
            GenSet::QPlus(h) | GenSet::QMinus(h) => {
                if !lamps.is_empty() {
                    let side = if matches!(self.gens, GenSet::QPlus(_)) {
                        Side::Plus
                    } else {
                        Side::Minus
                    };
                    let c = qp_burst_site(&lamps, h, m, side);
                    b.walk_to(c);
                    b.burst(Element::base(lamps.shift(-c)));
                }
                b.walk_to(m);
            }
            GenSet::Standard => {
                let (_, waypoints) = standard_walk(&lamps, m);
                let mut done = std::collections::BTreeSet::new();
                let mut visit = |b: &mut PlanBuilder| {
                    let c = b.cursor();
                    if let Some(coeff) = lamps.get(c) {
                        if done.insert(c) {
                            for letter in &self.coeff_words[self.group.index_of(coeff)] {
                                b.burst(Element::base(LampConfig::single(0, letter.clone())));
                            }
                        }
                    }
                };
                visit(&mut b);
                for w in waypoints {
                    while b.cursor() != w {
                        let next = b.cursor() + (w - b.cursor()).signum();
                        b.walk_to(next);
                        visit(&mut b);
                    }
                }
            }
        }
        b.finish()
    }
}

/// Cursor travel `0 -> c -> m`.
fn detour(c: i64, m: i64) -> u64 {
    c.unsigned_abs() + (m - c).unsigned_abs()
}

/// Where a single `Q_H` (or `Q'_H`) letter can realize `lamps` at least cost.
fn qp_burst_site(lamps: &LampConfig, h: &SubgroupDesc, m: i64, side: Side) -> i64 {
    let mut off_h = lamps.iter().filter(|(_, c)| !h.contains(c)).map(|(p, _)| p);
    match side {
        Side::Plus => match off_h.next() {
            Some(lo) if lo < m.min(0) => lo,
            _ => m.min(0),
        },
        Side::Minus => match off_h.next_back() {
            Some(hi) if hi > m.max(0) => hi,
            _ => m.max(0),
        },
    }
}

/// Shortest walk from 0 to `m` visiting every lamp; returns the travel and
/// the waypoints after the start.
fn standard_walk(lamps: &LampConfig, m: i64) -> (u64, Vec<i64>) {
    let lo = lamps.min_pos().unwrap_or(0).min(0).min(m);
    let hi = lamps.max_pos().unwrap_or(0).max(0).max(m);
    let left_first = (0 - lo) + (hi - lo) + (hi - m);
    let right_first = hi + (hi - lo) + (m - lo);
    if left_first <= right_first {
        (left_first as u64, vec![lo, hi, m])
    } else {
        (right_first as u64, vec![hi, lo, m])
    }
}

/// BFS over `Cay(G, {+-e_j})`, returning one geodesic word per element index.
fn coeff_geodesics(g: &GroupDesc) -> Vec<Vec<Coeff>> {
    let mut letters = Vec::new();
    for e in g.standard_generators() {
        let neg = g.coeff_neg(&e);
        if neg != e {
            letters.push(neg);
        }
        letters.push(e);
    }
    let mut words: Vec<Option<Vec<Coeff>>> = vec![None; g.order()];
    words[0] = Some(Vec::new());
    let mut queue = std::collections::VecDeque::from([g.zero()]);
    while let Some(x) = queue.pop_front() {
        let wx = words[g.index_of(&x)].clone().unwrap();
        for l in &letters {
            let y = g.add_unchecked(&x, l);
            let slot = &mut words[g.index_of(&y)];
            if slot.is_none() {
                let mut w = wx.clone();
                w.push(l.clone());
                *slot = Some(w);
                queue.push_back(y);
            }
        }
    }
    words.into_iter().map(Option::unwrap).collect()
}

fn check_element(g: &GroupDesc, x: &Element) -> Result<()> {
    g.validate_config(&x.config)
}

/// `|x|` for `S_H` (`side = Plus`) or `S'_H` (`side = Minus`), with a witness.
pub fn wordlen_qp(
    x: &Element,
    h: &SubgroupDesc,
    side: Side,
    g: &GroupDesc,
) -> Result<(u64, WalkPlan)> {
    check_element(g, x)?;
    let metric = WordMetric::new(g, &GenSet::qp(side, h.clone()))?;
    Ok((metric.len(x), metric.plan(x)))
}

/// `|x|` for the finite standard generating set, with a witness.
pub fn wordlen_standard(x: &Element, g: &GroupDesc) -> Result<(u64, WalkPlan)> {
    check_element(g, x)?;
    let metric = WordMetric::new(g, &GenSet::Standard)?;
    Ok((metric.len(x), metric.plan(x)))
}

/// `|x|` for `A u {t}`, with a witness.
pub fn wordlen_lineal(x: &Element, g: &GroupDesc) -> Result<(u64, WalkPlan)> {
    check_element(g, x)?;
    let metric = WordMetric::new(g, &GenSet::Lineal)?;
    Ok((metric.len(x), metric.plan(x)))
}

/// The Busemann character of every structure here: the cursor shift.
pub fn busemann(x: &Element) -> i64 {
    x.shift
}
