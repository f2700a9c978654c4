//! Four-point estimates of the hyperbolicity constant on a ball.
//!
//! This is an estimator: it reports the worst defect seen among sampled
//! quadruples, which bounds the true `delta` from below only.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::LampConfig;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::group::GroupDesc;

use super::{GenSet, WordMetric};

/// Consecutive rejected draws after which the ball is declared empty.
const MAX_REJECTIONS: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaEstimate {
    pub radius: i64,
    pub samples: usize,
    /// `2 * delta`, kept integral; `delta = twice_delta / 2`.
    pub twice_delta: u64,
    /// A quadruple attaining the maximum, if any defect was positive.
    #[serde(skip)]
    pub witness: Option<[Element; 4]>,
}

impl DeltaEstimate {
    pub fn delta(&self) -> f64 {
        self.twice_delta as f64 / 2.0
    }
}

/// Difference between the two largest of the three pair sums (this is
/// `2 * delta` for the quadruple).
pub fn four_point_defect(metric: &WordMetric, q: &[Element; 4]) -> u64 {
    let d = |i: usize, j: usize| metric.dist(&q[i], &q[j]);
    let mut sums = [d(0, 1) + d(2, 3), d(0, 2) + d(1, 3), d(0, 3) + d(1, 2)];
    sums.sort_unstable();
    sums[2] - sums[1]
}

/// Samples `samples` quadruples of elements with lamps and cursor in
/// `[-radius, radius]` and word length at most `radius`, and returns the
/// largest four-point defect observed.
pub fn delta_four_point(
    g: &GroupDesc,
    gens: &GenSet,
    radius: i64,
    samples: usize,
    seed: u64,
) -> Result<DeltaEstimate> {
    let metric = WordMetric::new(g, gens)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = DeltaEstimate {
        radius,
        samples,
        twice_delta: 0,
        witness: None,
    };
    if radius < 0 {
        return Err(Error::EmptySampleDomain(format!(
            "negative radius {radius}"
        )));
    }
    for _ in 0..samples {
        let q = [
            sample_ball(&metric, radius, &mut rng)?,
            sample_ball(&metric, radius, &mut rng)?,
            sample_ball(&metric, radius, &mut rng)?,
            sample_ball(&metric, radius, &mut rng)?,
        ];
        let defect = four_point_defect(&metric, &q);
        if defect > best.twice_delta {
            best.twice_delta = defect;
            best.witness = Some(q);
        }
    }
    Ok(best)
}

/// Rejection sampler: a random interval around 0 filled with random lamps,
/// a cursor inside it, kept if it lies in the ball.
fn sample_ball(metric: &WordMetric, radius: i64, rng: &mut ChaCha8Rng) -> Result<Element> {
    let g = metric.group();
    for _ in 0..MAX_REJECTIONS {
        let lo = -rng.gen_range(0..=radius);
        let hi = rng.gen_range(0..=radius);
        let lamps = LampConfig::from_entries(
            (lo..=hi).map(|p| (p, g.coeff_at(rng.gen_range(0..g.order())))),
        );
        let x = Element::from_lamps(&lamps, rng.gen_range(lo..=hi));
        if metric.len(&x) <= radius as u64 {
            return Ok(x);
        }
    }
    Err(Error::EmptySampleDomain(format!(
        "no element of length <= {radius} found for {}",
        metric.gens()
    )))
}
