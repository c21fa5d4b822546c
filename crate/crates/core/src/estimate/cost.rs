//! Uniqueness zone and its cost functional.
//!
//! The zone is the largest inner scale b (up to an eighth of the cube-root
//! scale) at which two distinct crossing clusters of the cube-root sphere
//! are already rare: estimated P(Piv[4b, n^{1/3}]) at most 1/ln n. The scan
//! runs descending and accepts the first b whose confidence upper bound sits
//! below the threshold, so the reported zone is statistically certified and
//! the cost is never understated. When no b is certified the zone falls back
//! to 1, the most conservative choice.

use rayon::prelude::*;
use serde::Serialize;

use super::{wilson_interval, MCEstimate, DEFAULT_CONFIDENCE};
use crate::error::{invalid, Error, Result};
use crate::graph::{metric_profile, FiniteGraph};
use crate::perc::{config_at, crossing_min_dists, sample_weights_trial};

/// Uniqueness zone scan result.
#[derive(Clone, Debug, Serialize)]
pub struct CostReport {
    /// Volume scale the zone was computed at.
    pub n: u64,
    /// Sphere radius: floor of n^{1/3}.
    pub sphere_radius: u32,
    /// The zone: largest certified b, or 1 as the conservative fallback.
    pub zone: u32,
    /// Whether the zone passed the confidence test (false only for the
    /// fallback).
    pub certified: bool,
    /// The pivotal probability threshold 1/ln n.
    pub threshold: f64,
    /// Estimated P(Piv[4 zone, n^{1/3}]).
    pub piv_prob_at_zone: MCEstimate,
    /// Cost functional [ln ln n / min(ln n, ln Gr(zone))]^{1/4}.
    pub cost: f64,
}

/// Scans for the uniqueness zone at volume scale n and evaluates its cost.
pub fn uniqueness_zone_and_cost(
    g: &FiniteGraph,
    p: f64,
    n: u64,
    trials: u64,
    seed: u64,
) -> Result<CostReport> {
    if trials == 0 {
        return Err(invalid("trials", "need at least one trial"));
    }
    if n < 27 {
        return Err(invalid("n", format!("volume scale {n} must be >= 27")));
    }
    let sphere_radius = floor_guarded((n as f64).cbrt());
    let b_max = floor_guarded((n as f64).cbrt() / 8.0);
    if b_max < 1 {
        return Err(Error::ScaleInfeasible(format!(
            "no inner scales: floor(n^(1/3)/8) = 0 at n = {n}"
        )));
    }
    let profile = metric_profile(g, 0);
    if sphere_radius > profile.diameter {
        return Err(Error::ScaleInfeasible(format!(
            "sphere radius {sphere_radius} exceeds diameter {}",
            profile.diameter
        )));
    }
    let dist = &profile.distances;

    // One restricted clustering per trial serves every inner scale: the
    // pivotal event at inner scale m holds iff the second-smallest sphere
    // cluster distance is <= m.
    let seconds: Vec<Option<u32>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let sample = sample_weights_trial(g, seed, t);
            let cfg = config_at(&sample, p);
            crossing_min_dists(g, &cfg, dist, sphere_radius).1
        })
        .collect();
    let successes_at = |b: u32| {
        seconds
            .iter()
            .filter(|s| s.is_some_and(|d| d <= 4 * b))
            .count() as u64
    };

    let threshold = 1.0 / (n as f64).ln();
    let mut zone = 1;
    let mut certified = false;
    for b in (1..=b_max).rev() {
        let upper = wilson_interval(successes_at(b), trials, DEFAULT_CONFIDENCE).1;
        if upper <= threshold {
            zone = b;
            certified = true;
            break;
        }
    }
    let growth = profile.growth_at(zone) as f64;
    let loglog = (n as f64).ln().ln();
    let cost = (loglog / (n as f64).ln().min(growth.ln())).powf(0.25);
    Ok(CostReport {
        n,
        sphere_radius,
        zone,
        certified,
        threshold,
        piv_prob_at_zone: MCEstimate::from_successes(
            successes_at(zone),
            trials,
            DEFAULT_CONFIDENCE,
        )?,
        cost,
    })
}

/// Floor with a relative 1e-9 guard so perfect cubes stay exact.
fn floor_guarded(x: f64) -> u32 {
    let nearest = x.round();
    if (x - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest as u32
    } else {
        x.floor() as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extreme_parameters_give_the_full_zone() {
        let g = FiniteGraph::generate("torus:16x16").unwrap();
        // n = 4096: sphere radius 16 = diameter, b_max = 2.
        for p in [0.0, 1.0] {
            let rep = uniqueness_zone_and_cost(&g, p, 4096, 200, 7).unwrap();
            assert_eq!(rep.sphere_radius, 16);
            assert_eq!(rep.zone, 2, "p = {p}");
            assert!(rep.certified);
            assert_eq!(rep.piv_prob_at_zone.point, 0.0);
        }
    }

    #[test]
    fn cost_formula_is_reproduced() {
        let g = FiniteGraph::generate("torus:16x16").unwrap();
        let rep = uniqueness_zone_and_cost(&g, 0.0, 4096, 100, 7).unwrap();
        let n = 4096f64;
        let growth = metric_profile(&g, 0).growth_at(rep.zone) as f64;
        let expect = (n.ln().ln() / n.ln().min(growth.ln())).powf(0.25);
        assert!((rep.cost - expect).abs() < 1e-12);
        assert!((rep.threshold - 1.0 / n.ln()).abs() < 1e-15);
    }

    #[test]
    fn infeasible_scales_error() {
        let g = FiniteGraph::generate("torus:16x16").unwrap();
        // Cube root below 8 leaves no inner scale.
        assert!(matches!(
            uniqueness_zone_and_cost(&g, 0.5, 300, 50, 7),
            Err(Error::ScaleInfeasible(_))
        ));
        // Sphere radius beyond the diameter cannot be crossed.
        assert!(matches!(
            uniqueness_zone_and_cost(&g, 0.5, 8000, 50, 7),
            Err(Error::ScaleInfeasible(_))
        ));
        assert!(uniqueness_zone_and_cost(&g, 0.5, 20, 50, 7).is_err());
    }

    #[test]
    fn perfect_cube_radius_is_exact() {
        assert_eq!(floor_guarded((1728f64).cbrt()), 12);
        assert_eq!(floor_guarded((1728f64).cbrt() / 8.0), 1);
        assert_eq!(floor_guarded(11.9999999999), 12);
        assert_eq!(floor_guarded(11.9), 11);
    }
}
