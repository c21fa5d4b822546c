//! Monte Carlo estimation with Wilson confidence intervals.
//!
//! Every estimator keys trial t to the random stream (seed, stream, t), so
//! estimates are a pure function of their arguments: reruns and different
//! worker counts give byte-identical results. Success counts are integers
//! folded associatively, which keeps parallel reduction order irrelevant.

mod corridor;
mod cost;
mod quantities;
mod scale;
pub(crate) mod solve;
mod status;

pub use corridor::{corridor_kappa, KappaReport};
pub use cost::{uniqueness_zone_and_cost, CostReport};
pub use quantities::{
    giant_prob, min_two_point_over_ball, mu_ph, tail_ko, two_point, BallMinEstimate,
};
pub use scale::{delta_scale, delta_scale_of_r, l_scale, ln_r_scale, phi, phi_inv, r_scale};
pub use solve::{solve_p, GiantEvent, ThresholdResult};
pub use status::{green_status, orange_status, CorridorParams, GreenReport, GreenVia, OrangeReport};

use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{invalid, Result};

/// Confidence level used when a caller does not pick one.
pub const DEFAULT_CONFIDENCE: f64 = 0.95;

/// A Bernoulli probability estimate with a Wilson score interval.
#[derive(Clone, Debug, Serialize)]
pub struct MCEstimate {
    pub point: f64,
    pub successes: u64,
    pub trials: u64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub confidence: f64,
}

impl MCEstimate {
    /// Wraps a raw success count. The Wilson interval is used because it
    /// stays inside [0,1] and behaves sanely at 0 and full success counts,
    /// where the Wald interval collapses to a point.
    pub fn from_successes(successes: u64, trials: u64, confidence: f64) -> Result<MCEstimate> {
        if trials == 0 {
            return Err(invalid("trials", "need at least one trial"));
        }
        if successes > trials {
            return Err(invalid("successes", "more successes than trials"));
        }
        if !(0.0 < confidence && confidence < 1.0) {
            return Err(invalid("confidence", format!("level {confidence} outside (0,1)")));
        }
        let (ci_low, ci_high) = wilson_interval(successes, trials, confidence);
        Ok(MCEstimate {
            point: successes as f64 / trials as f64,
            successes,
            trials,
            ci_low,
            ci_high,
            confidence,
        })
    }

    /// Normal-approximation standard error of the point estimate.
    pub fn std_error(&self) -> f64 {
        (self.point * (1.0 - self.point) / self.trials as f64).sqrt()
    }
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    let z = normal_quantile(1.0 - (1.0 - confidence) / 2.0);
    let t = trials as f64;
    let p = successes as f64 / t;
    let z2 = z * z;
    let denom = 1.0 + z2 / t;
    let center = (p + z2 / (2.0 * t)) / denom;
    let half = z * (p * (1.0 - p) / t + z2 / (4.0 * t * t)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Standard normal quantile.
pub(crate) fn normal_quantile(q: f64) -> f64 {
    Normal::new(0.0, 1.0)
        .expect("standard normal parameters are valid")
        .inverse_cdf(q)
}

/// Estimates P(event) over independent trials. The closure receives
/// (base_seed, trial) and must derive all its randomness from them.
pub fn mc_probability<F>(
    event: F,
    trials: u64,
    base_seed: u64,
    confidence: f64,
) -> Result<MCEstimate>
where
    F: Fn(u64, u64) -> bool + Sync,
{
    if trials == 0 {
        return Err(invalid("trials", "need at least one trial"));
    }
    let successes = (0..trials)
        .into_par_iter()
        .map(|t| event(base_seed, t) as u64)
        .sum();
    MCEstimate::from_successes(successes, trials, confidence)
}

/// Smallest integer k with k >= x, guarding against float noise: values
/// within a relative 1e-9 of an integer count as that integer. Needed for
/// thresholds like |V|^{2/3}, where cbrt-and-square lands a hair above the
/// exact integer on perfect cubes.
pub fn int_threshold(x: f64) -> u64 {
    assert!(x.is_finite() && x >= 0.0, "threshold must be finite and nonnegative");
    let nearest = x.round();
    if (x - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest as u64
    } else {
        x.ceil() as u64
    }
}
