//! Subgroup lattices and the poset `B(G)` of hyperbolic structures on
//! `G wr Z` built from the generating sets `S_H`, `S'_H`, `A u {t}` and the
//! whole group.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use crate::config::LampConfig;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::group::{subgroup_closure, GroupDesc, SubgroupDesc};
use crate::metrics::{GenSet, WordMetric};

/// All subgroups (or all proper ones), ordered by order and then by element
/// list.
pub fn enumerate_subgroups(g: &GroupDesc, proper_only: bool) -> Vec<SubgroupDesc> {
    let elems = g.elements();
    let mut found = BTreeSet::from([g.trivial_subgroup()]);
    let mut frontier = vec![g.trivial_subgroup()];
    while let Some(s) = frontier.pop() {
        for x in &elems {
            if s.contains(x) {
                continue;
            }
            let mut gens = s.generators().to_vec();
            gens.push(x.clone());
            let t = subgroup_closure(&gens, g).expect("elements of g are valid");
            if found.insert(t.clone()) {
                frontier.push(t);
            }
        }
    }
    found
        .into_iter()
        .filter(|s| !proper_only || s.order() < g.order())
        .collect()
}

/// `2 * #{d | n : d < n}`: the number of quasi-parabolic structures on
/// `Z_n wr Z`.
pub fn qp_count(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "qp_count needs n >= 2, got {n}"
        )));
    }
    Ok(2 * (1..n).filter(|d| n.is_multiple_of(*d)).count() as u64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructureKind {
    Elliptic,
    Lineal,
    QuasiParabolic,
    /// Part of the classification; lamplighters never carry one.
    GeneralType,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StructureNode {
    pub id: usize,
    pub kind: StructureKind,
    pub descriptor: GenSet,
    /// Identifies the poset the node was built in.
    owner: u64,
}

impl StructureNode {
    fn new(id: usize, descriptor: GenSet, owner: u64) -> Self {
        let kind = match descriptor {
            GenSet::Trivial => StructureKind::Elliptic,
            GenSet::Lineal => StructureKind::Lineal,
            GenSet::QPlus(_) | GenSet::QMinus(_) => StructureKind::QuasiParabolic,
            GenSet::Standard => StructureKind::GeneralType,
        };
        StructureNode {
            id,
            kind,
            descriptor,
            owner,
        }
    }

    fn label(&self) -> String {
        match &self.descriptor {
            GenSet::QPlus(h) => format!("qp+ {h}"),
            GenSet::QMinus(h) => format!("qp- {h}"),
            GenSet::Trivial => "elliptic".into(),
            GenSet::Lineal => "lineal".into(),
            GenSet::Standard => "standard".into(),
        }
    }
}

/// Domination between the structures of `B(G)`: `x <= y`.
fn dominated(x: &GenSet, y: &GenSet) -> bool {
    use GenSet::*;
    match (x, y) {
        (Trivial, _) => true,
        (Lineal, Lineal | QPlus(_) | QMinus(_)) => true,
        (QPlus(h), QPlus(k)) | (QMinus(h), QMinus(k)) => k.is_subset_of(h),
        _ => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Equivalent,
    /// The first argument is strictly dominated by the second.
    Below,
    Above,
    Incomparable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExactComparison {
    pub relation: Relation,
    /// True when `B(G)` is all of `H(G wr Z)` (G cyclic); otherwise the
    /// answer holds within `B(G)` only.
    pub complete: bool,
}

#[derive(Clone, Debug)]
pub struct Poset {
    group: GroupDesc,
    nodes: Vec<StructureNode>,
    /// Strict order as (lower, upper) id pairs.
    relation: BTreeSet<(usize, usize)>,
    hasse: Vec<(usize, usize)>,
}

static NEXT_POSET: AtomicU64 = AtomicU64::new(0);

/// `B(G)`: the elliptic and lineal structures plus `[S_H]`, `[S'_H]` for
/// every proper subgroup `H`.
pub fn build_b_poset(g: &GroupDesc) -> Poset {
    let subgroups = enumerate_subgroups(g, true);
    let mut descs = vec![GenSet::Trivial, GenSet::Lineal];
    descs.extend(subgroups.iter().cloned().map(GenSet::QPlus));
    descs.extend(subgroups.into_iter().map(GenSet::QMinus));
    let owner = NEXT_POSET.fetch_add(1, Ordering::Relaxed);
    let nodes: Vec<StructureNode> = descs
        .into_iter()
        .enumerate()
        .map(|(i, d)| StructureNode::new(i, d, owner))
        .collect();
    let mut relation = BTreeSet::new();
    for x in &nodes {
        for y in &nodes {
            if x.id != y.id && dominated(&x.descriptor, &y.descriptor) {
                relation.insert((x.id, y.id));
            }
        }
    }
    let hasse = relation
        .iter()
        .copied()
        .filter(|&(a, c)| {
            !nodes
                .iter()
                .any(|b| relation.contains(&(a, b.id)) && relation.contains(&(b.id, c)))
        })
        .collect();
    Poset {
        group: g.clone(),
        nodes,
        relation,
        hasse,
    }
}

#[derive(Serialize)]
struct NodeJson<'a> {
    id: usize,
    kind: StructureKind,
    subgroup: Option<String>,
    side: Option<&'a str>,
    descriptor: String,
}

#[derive(Serialize)]
struct PosetJson<'a> {
    group: String,
    nodes: Vec<NodeJson<'a>>,
    hasse: &'a [(usize, usize)],
}

impl Poset {
    pub fn group(&self) -> &GroupDesc {
        &self.group
    }

    pub fn nodes(&self) -> &[StructureNode] {
        &self.nodes
    }

    /// Strict relation pairs `(lower, upper)`.
    pub fn relation(&self) -> &BTreeSet<(usize, usize)> {
        &self.relation
    }

    /// Covering pairs `(lower, upper)`.
    pub fn hasse(&self) -> &[(usize, usize)] {
        &self.hasse
    }

    pub fn node(&self, desc: &GenSet) -> Option<&StructureNode> {
        self.nodes.iter().find(|n| &n.descriptor == desc)
    }

    pub fn count(&self, kind: StructureKind) -> usize {
        self.nodes.iter().filter(|n| n.kind == kind).count()
    }

    pub fn less(&self, x: usize, y: usize) -> bool {
        self.relation.contains(&(x, y))
    }

    fn check_node(&self, n: &StructureNode) -> Result<()> {
        match self.nodes.get(n.id) {
            Some(m) if m == n => Ok(()),
            _ => Err(Error::ForeignNode(format!(
                "{} (id {})",
                n.descriptor, n.id
            ))),
        }
    }

    pub fn compare_exact(&self, x: &StructureNode, y: &StructureNode) -> Result<ExactComparison> {
        self.check_node(x)?;
        self.check_node(y)?;
        let relation = if x.id == y.id {
            Relation::Equivalent
        } else if self.less(x.id, y.id) {
            Relation::Below
        } else if self.less(y.id, x.id) {
            Relation::Above
        } else {
            Relation::Incomparable
        };
        Ok(ExactComparison {
            relation,
            complete: self.group.is_cyclic(),
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let nodes = self
            .nodes
            .iter()
            .map(|n| NodeJson {
                id: n.id,
                kind: n.kind,
                subgroup: n.descriptor.subgroup().map(|h| h.to_string()),
                side: match n.descriptor {
                    GenSet::QPlus(_) => Some("plus"),
                    GenSet::QMinus(_) => Some("minus"),
                    _ => None,
                },
                descriptor: n.descriptor.to_string(),
            })
            .collect();
        serde_json::to_value(PosetJson {
            group: self.group.to_string(),
            nodes,
            hasse: &self.hasse,
        })
        .expect("poset serializes")
    }

    /// Graphviz rendering of the covering relation, smaller structures at
    /// the bottom.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"B({})\" {{", self.group);
        let _ = writeln!(out, "  rankdir=BT;");
        for n in &self.nodes {
            let _ = writeln!(out, "  n{} [label=\"{}\"];", n.id, n.label());
        }
        for (a, b) in &self.hasse {
            let _ = writeln!(out, "  n{a} -> n{b};");
        }
        out.push_str("}\n");
        out
    }
}

/// Outcome of measuring one family of elements in another metric.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Growth {
    /// Constant over the second half of the schedule; evidence only.
    Bounded {
        value: u64,
        depth: usize,
    },
    Growing {
        sequence: Vec<u64>,
    },
}

impl Growth {
    pub fn is_bounded(&self) -> bool {
        matches!(self, Growth::Bounded { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmpiricalComparison {
    /// `sup |s|_Y` over letters `s` of `X`; bounded means `Y <= X`.
    pub sup_x_in_y: Growth,
    pub sup_y_in_x: Growth,
}

/// Letters of `X` supported in `[-window, window]`, plus `t`. Exhaustive
/// when that is at most this many elements, otherwise restricted to
/// letters with at most two lamps.
const EXHAUSTIVE_LETTERS: u128 = 200_000;

fn window_letters(x: &GenSet, g: &GroupDesc, window: i64) -> Vec<Element> {
    let mut out = vec![Element::t(1)];
    let positions: Vec<i64> = (-window..=window).collect();
    let allowed = |p: i64| -> Vec<crate::group::Coeff> {
        match x {
            GenSet::QPlus(h) if p < 0 => h.elements().to_vec(),
            GenSet::QMinus(h) if p > 0 => h.elements().to_vec(),
            _ => g.elements(),
        }
    };
    match x {
        GenSet::Standard => {
            for e in g.standard_generators() {
                out.push(Element::base(LampConfig::single(0, e)));
            }
        }
        GenSet::Trivial => {
            // every element is a letter; the window box stands in for them
            for p in &positions {
                for c in g.elements().into_iter().skip(1) {
                    out.push(Element::base(LampConfig::single(*p, c)));
                }
                out.push(Element::t(*p));
            }
        }
        _ => {
            let sizes: Vec<Vec<_>> = positions.iter().map(|&p| allowed(p)).collect();
            let total = sizes.iter().map(|s| s.len() as u128).product::<u128>();
            if total <= EXHAUSTIVE_LETTERS {
                let mut configs = vec![LampConfig::new()];
                for (&p, opts) in positions.iter().zip(&sizes) {
                    let prev = std::mem::take(&mut configs);
                    for f in prev {
                        for c in opts {
                            let mut f = f.clone();
                            f.set(p, c.clone());
                            configs.push(f);
                        }
                    }
                }
                out.extend(configs.into_iter().map(Element::base));
            } else {
                for (i, &p) in positions.iter().enumerate() {
                    for a in &sizes[i] {
                        out.push(Element::base(LampConfig::single(p, a.clone())));
                        for (j, &q) in positions.iter().enumerate().skip(i + 1) {
                            for b in &sizes[j] {
                                let f = LampConfig::from_entries([(p, a.clone()), (q, b.clone())]);
                                out.push(Element::base(f));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Letters of `X` at scale `i`: the families used to separate structures.
fn witness_family(x: &GenSet, g: &GroupDesc, i: i64) -> Vec<Element> {
    let lamp = |p: i64, c: &crate::group::Coeff| Element::base(LampConfig::single(p, c.clone()));
    let mut out = Vec::new();
    for c in g.elements().iter().skip(1) {
        match x {
            GenSet::QPlus(h) => {
                if h.contains(c) {
                    out.push(lamp(-i, c));
                }
                out.push(lamp(i, c));
            }
            GenSet::QMinus(h) => {
                if h.contains(c) {
                    out.push(lamp(i, c));
                }
                out.push(lamp(-i, c));
            }
            GenSet::Lineal | GenSet::Trivial => {
                out.push(lamp(-i, c));
                out.push(lamp(i, c));
            }
            GenSet::Standard => {}
        }
    }
    if matches!(x, GenSet::Trivial) {
        out.push(Element::t(i));
    }
    out
}

fn sup_in(x: &GenSet, y: &WordMetric, g: &GroupDesc, window: i64, depth: usize) -> Growth {
    let base = window_letters(x, g, window)
        .iter()
        .map(|s| y.len(s))
        .max()
        .unwrap_or(0);
    let sequence: Vec<u64> = (1..=depth as i64)
        .map(|i| {
            witness_family(x, g, i)
                .iter()
                .map(|s| y.len(s))
                .max()
                .unwrap_or(0)
                .max(base)
        })
        .collect();
    let tail = &sequence[depth / 2..];
    match tail.first() {
        Some(&v) if tail.iter().all(|&w| w == v) => Growth::Bounded { value: v, depth },
        None => Growth::Bounded { value: base, depth },
        _ => Growth::Growing { sequence },
    }
}

/// Empirical domination test between two generating sets over `G`.
pub fn compare_empirical(
    x: &GenSet,
    y: &GenSet,
    g: &GroupDesc,
    window: i64,
    depth: usize,
) -> Result<EmpiricalComparison> {
    let mx = WordMetric::new(g, x)?;
    let my = WordMetric::new(g, y)?;
    Ok(EmpiricalComparison {
        sup_x_in_y: sup_in(x, &my, g, window, depth),
        sup_y_in_x: sup_in(y, &mx, g, window, depth),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Coeff;

    fn z(n: u32) -> GroupDesc {
        GroupDesc::cyclic(n).unwrap()
    }

    #[test]
    fn subgroups_of_z12() {
        let subs = enumerate_subgroups(&z(12), true);
        let shown: Vec<String> = subs.iter().map(|s| s.to_string()).collect();
        assert_eq!(
            shown,
            ["{0}", "{0,6}", "{0,4,8}", "{0,3,6,9}", "{0,2,4,6,8,10}"]
        );
        assert_eq!(enumerate_subgroups(&z(12), false).len(), 6);
        assert_eq!(enumerate_subgroups(&z(2), true).len(), 1);
    }

    #[test]
    fn subgroups_of_klein() {
        let g = GroupDesc::parse("Z2xZ2").unwrap();
        let subs: Vec<String> = enumerate_subgroups(&g, true)
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(
            subs,
            ["{(0,0)}", "{(0,0),(0,1)}", "{(0,0),(1,0)}", "{(0,0),(1,1)}"]
        );
    }

    #[test]
    fn node_counts() {
        for (g, nodes, qp) in [("Z2", 4, 2), ("Z12", 12, 10), ("Z2xZ2", 10, 8)] {
            let p = build_b_poset(&GroupDesc::parse(g).unwrap());
            assert_eq!(p.nodes().len(), nodes, "{g}");
            assert_eq!(p.count(StructureKind::QuasiParabolic), qp, "{g}");
            assert_eq!(p.count(StructureKind::Elliptic), 1);
            assert_eq!(p.count(StructureKind::Lineal), 1);
        }
    }

    #[test]
    fn qp_counts() {
        assert_eq!(qp_count(2).unwrap(), 2);
        assert_eq!(qp_count(6).unwrap(), 6);
        assert_eq!(qp_count(12).unwrap(), 10);
        assert!(qp_count(1).is_err());
    }

    #[test]
    fn exact_comparisons() {
        let g = z(4);
        let p = build_b_poset(&g);
        let h0 = g.trivial_subgroup();
        let h2 = subgroup_closure(&[Coeff::cyclic(2)], &g).unwrap();
        let a = p.node(&GenSet::QPlus(h0.clone())).unwrap();
        let b = p.node(&GenSet::QPlus(h2.clone())).unwrap();
        assert_eq!(p.compare_exact(b, a).unwrap().relation, Relation::Below);
        assert_eq!(p.compare_exact(a, b).unwrap().relation, Relation::Above);
        let m = p.node(&GenSet::QMinus(h2)).unwrap();
        assert_eq!(
            p.compare_exact(a, m).unwrap().relation,
            Relation::Incomparable
        );
        let l = p.node(&GenSet::Lineal).unwrap();
        let cmp = p.compare_exact(l, a).unwrap();
        assert_eq!(cmp.relation, Relation::Below);
        assert!(cmp.complete);

        let other = build_b_poset(&z(6));
        let foreign = other.node(&GenSet::QPlus(z(6).trivial_subgroup())).unwrap();
        assert!(matches!(
            p.compare_exact(a, foreign),
            Err(Error::ForeignNode(_))
        ));
    }

    #[test]
    fn empirical_examples() {
        let g = z(4);
        let h0 = GenSet::QPlus(g.trivial_subgroup());
        let h2 = GenSet::QPlus(subgroup_closure(&[Coeff::cyclic(2)], &g).unwrap());
        let r = compare_empirical(&h0, &h2, &g, 2, 10).unwrap();
        assert_eq!(
            r.sup_x_in_y,
            Growth::Bounded {
                value: 1,
                depth: 10
            }
        );
        assert!(!r.sup_y_in_x.is_bounded());

        let m = GenSet::QMinus(g.trivial_subgroup());
        let r = compare_empirical(&h0, &m, &g, 2, 10).unwrap();
        assert!(!r.sup_x_in_y.is_bounded() && !r.sup_y_in_x.is_bounded());

        let r = compare_empirical(&h2, &h2, &g, 2, 10).unwrap();
        assert_eq!(
            r.sup_x_in_y,
            Growth::Bounded {
                value: 1,
                depth: 10
            }
        );
        assert_eq!(
            r.sup_y_in_x,
            Growth::Bounded {
                value: 1,
                depth: 10
            }
        );
    }

    #[test]
    fn dot_is_stable() {
        let p = build_b_poset(&z(2));
        assert_eq!(p.to_dot(), build_b_poset(&z(2)).to_dot());
        assert!(p.to_dot().contains("n0 -> n1;"));
    }
}
