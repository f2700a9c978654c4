mod common;

use common::{element, group};
use proptest::prelude::*;
use wreathscope::metrics::{busemann, delta_four_point, wordlen_qp, BfsTable, DEFAULT_STATE_LIMIT};
use wreathscope::structures::enumerate_subgroups;
use wreathscope::{Element, GenSet, GroupDesc, LampConfig, Side, WordMetric};

fn variants(g: &GroupDesc) -> Vec<GenSet> {
    let mut v = vec![GenSet::Standard, GenSet::Lineal, GenSet::Trivial];
    for h in enumerate_subgroups(g, false) {
        v.push(GenSet::QPlus(h.clone()));
        v.push(GenSet::QMinus(h));
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn distance_is_a_metric(
        (x, y, z) in (element(&group("Z4"), 4), element(&group("Z4"), 4), element(&group("Z4"), 4)),
    ) {
        let g = group("Z4");
        for gens in variants(&g) {
            let m = WordMetric::new(&g, &gens).unwrap();
            prop_assert_eq!(m.dist(&x, &y), m.dist(&y, &x), "{}", gens);
            prop_assert!(m.dist(&x, &z) <= m.dist(&x, &y) + m.dist(&y, &z), "{}", gens);
            prop_assert_eq!(m.dist(&x, &x), 0);
        }
    }

    #[test]
    fn plans_replay_to_the_element(x in element(&group("Z2xZ2"), 5)) {
        let g = group("Z2xZ2");
        for gens in variants(&g) {
            let m = WordMetric::new(&g, &gens).unwrap();
            let plan = m.plan(&x);
            prop_assert!(plan.check(&gens, &g).is_ok(), "{}", gens);
            prop_assert_eq!(plan.cost, m.len(&x));
            prop_assert_eq!(plan.replay(&g), x.clone());
        }
    }

    #[test]
    fn larger_subgroup_gives_shorter_words(x in element(&group("Z12"), 5)) {
        let g = group("Z12");
        let subs = enumerate_subgroups(&g, false);
        for side in [Side::Plus, Side::Minus] {
            for h in &subs {
                for k in subs.iter().filter(|k| h.is_subset_of(k)) {
                    let (lh, _) = wordlen_qp(&x, h, side, &g).unwrap();
                    let (lk, _) = wordlen_qp(&x, k, side, &g).unwrap();
                    prop_assert!(lk <= lh, "H={} K={} {:?}", h, k, side);
                }
            }
        }
    }

    #[test]
    fn mirror_swaps_sides(x in element(&group("Z6"), 5)) {
        let g = group("Z6");
        for h in enumerate_subgroups(&g, false) {
            let (minus, _) = wordlen_qp(&x, &h, Side::Minus, &g).unwrap();
            let (plus, _) = wordlen_qp(&x.mirror(), &h, Side::Plus, &g).unwrap();
            prop_assert_eq!(minus, plus);
        }
    }

    #[test]
    fn busemann_is_a_homomorphism(
        (a, b) in (element(&group("Z3"), 6), element(&group("Z3"), 6)),
    ) {
        let g = group("Z3");
        let ab = g.elem_mul(&a, &b).unwrap();
        prop_assert_eq!(busemann(&ab), busemann(&a) + busemann(&b));
    }
}

#[test]
fn non_subgroup_lamps_grow_linearly() {
    for text in ["Z2", "Z6", "Z2xZ2"] {
        let g = group(text);
        let all = enumerate_subgroups(&g, false);
        for h in enumerate_subgroups(&g, true) {
            let c = g.elements().into_iter().find(|c| !h.contains(c)).unwrap();
            for i in 1..=50 {
                let f = Element::base(LampConfig::single(-i, c.clone()));
                assert_eq!(
                    wordlen_qp(&f, &h, Side::Plus, &g).unwrap().0,
                    2 * i as u64 + 1
                );
                for k in &all {
                    assert_eq!(wordlen_qp(&f, k, Side::Minus, &g).unwrap().0, 1);
                }
            }
        }
    }
}

#[test]
fn bfs_is_monotone_and_stabilizes() {
    let g = group("Z2");
    for gens in variants(&g) {
        let small = BfsTable::build(&g, &gens, 3, 3, DEFAULT_STATE_LIMIT).unwrap();
        let large = BfsTable::build(&g, &gens, 5, 5, DEFAULT_STATE_LIMIT).unwrap();
        let metric = WordMetric::new(&g, &gens).unwrap();
        for code in 0..(1u32 << 5) {
            let f = LampConfig::from_cyclic(
                &(0..5)
                    .map(|k| (k as i64 - 2, code >> k & 1))
                    .collect::<Vec<_>>(),
            );
            for m in -2..=2 {
                let x = Element::from_lamps(&f, m);
                let a = small.distance(&x).unwrap();
                let b = large.distance(&x).unwrap();
                assert!(b <= a || a.is_none(), "{gens} {x}");
                assert_eq!(b, Some(metric.len(&x)), "{gens} {x}");
            }
        }
    }
}

#[test]
fn delta_estimates_are_reproducible() {
    let g = group("Z2");
    let gens = GenSet::QPlus(g.trivial_subgroup());
    let a = delta_four_point(&g, &gens, 6, 300, 9).unwrap();
    let b = delta_four_point(&g, &gens, 6, 300, 9).unwrap();
    assert_eq!(a, b);
}
