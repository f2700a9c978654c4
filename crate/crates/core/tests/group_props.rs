mod common;

use common::{coeff, config, element, group};
use proptest::prelude::*;
use wreathscope::poly::{format_poly, parse_poly};
use wreathscope::{subgroup_closure, Element};

macro_rules! per_group {
    ($($name:ident => $g:literal),* $(,)?) => {$(
        mod $name {
            use super::*;

            proptest! {
                #![proptest_config(ProptestConfig::with_cases(1000))]

                #[test]
                fn multiplication_is_a_group_law(
                    (a, b, c) in (element(&group($g), 5), element(&group($g), 5), element(&group($g), 5)),
                ) {
                    let g = group($g);
                    let ab_c = g.elem_mul(&g.elem_mul(&a, &b).unwrap(), &c).unwrap();
                    let a_bc = g.elem_mul(&a, &g.elem_mul(&b, &c).unwrap()).unwrap();
                    prop_assert_eq!(ab_c, a_bc);
                    prop_assert_eq!(g.elem_mul(&a, &Element::identity()).unwrap(), a.clone());
                    prop_assert_eq!(g.elem_mul(&Element::identity(), &a).unwrap(), a.clone());
                    let inv = g.elem_inv(&a);
                    prop_assert!(g.elem_mul(&a, &inv).unwrap().is_identity());
                    prop_assert!(g.elem_mul(&inv, &a).unwrap().is_identity());
                }

                #[test]
                fn format_then_parse_round_trips(f in config(&group($g), 6)) {
                    let g = group($g);
                    let text = format_poly(&f);
                    let back = parse_poly(&text, &g).unwrap();
                    prop_assert_eq!(&back, &f);
                    prop_assert_eq!(format_poly(&back), text);
                }
            }
        }
    )*};
}

per_group!(z2 => "Z2", z3 => "Z3", z8 => "Z8", klein => "Z2xZ2");

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn shift_is_a_bijection(f in config(&group("Z3"), 5), k in -20i64..=20) {
        prop_assert_eq!(f.shift(k).shift(-k), f);
    }

    #[test]
    fn shift_distributes_over_addition(
        (f, h) in (config(&group("Z2xZ2"), 5), config(&group("Z2xZ2"), 5)),
        k in -10i64..=10,
    ) {
        let g = group("Z2xZ2");
        let lhs = g.config_add(&f, &h).unwrap().shift(k);
        let rhs = g.config_add(&f.shift(k), &h.shift(k)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closure_is_idempotent_and_monotone(
        a in proptest::collection::vec(coeff(&group("Z2xZ2")), 0..3),
        b in proptest::collection::vec(coeff(&group("Z2xZ2")), 0..3),
    ) {
        let g = group("Z2xZ2");
        let s = subgroup_closure(&a, &g).unwrap();
        prop_assert_eq!(subgroup_closure(s.elements(), &g).unwrap(), s.clone());
        let both: Vec<_> = a.iter().chain(&b).cloned().collect();
        prop_assert!(s.is_subset_of(&subgroup_closure(&both, &g).unwrap()));
    }

    #[test]
    fn parse_gives_canonical_order(
        terms in proptest::collection::btree_map(-9i64..=9, 1u32..8, 1..6),
    ) {
        // the same terms written in decreasing order come back increasing
        let g = group("Z8");
        let text: Vec<String> = terms.iter().rev().map(|(p, c)| format!("{c}t^{p}")).collect();
        let f = parse_poly(&text.join(" + "), &g).unwrap();
        let canonical = format_poly(&f);
        let exps: Vec<i64> = f.support().collect();
        prop_assert!(exps.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(parse_poly(&canonical, &g).unwrap(), f);
    }
}
