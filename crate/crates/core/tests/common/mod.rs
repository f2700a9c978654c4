#![allow(dead_code)]

use proptest::prelude::*;
use wreathscope::{Coeff, Element, GroupDesc, LampConfig};

pub fn group(text: &str) -> GroupDesc {
    GroupDesc::parse(text).unwrap()
}

pub fn coeff(g: &GroupDesc) -> impl Strategy<Value = Coeff> {
    let elems = g.elements();
    (0..elems.len()).prop_map(move |i| elems[i].clone())
}

/// Configurations supported in `[-radius, radius]`.
pub fn config(g: &GroupDesc, radius: i64) -> impl Strategy<Value = LampConfig> {
    proptest::collection::vec(coeff(g), (2 * radius + 1) as usize).prop_map(move |cs| {
        LampConfig::from_entries(
            cs.into_iter()
                .enumerate()
                .map(|(k, c)| (k as i64 - radius, c)),
        )
    })
}

pub fn element(g: &GroupDesc, radius: i64) -> impl Strategy<Value = Element> {
    (config(g, radius), -radius..=radius).prop_map(|(f, m)| Element::new(f, m))
}
