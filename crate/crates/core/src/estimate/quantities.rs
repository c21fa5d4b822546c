//! Estimators for the basic percolation quantities: two-point functions,
//! volume tails, giant-cluster probabilities, and the ghost quantity.

use rayon::prelude::*;
use serde::Serialize;

use super::{int_threshold, mc_probability, MCEstimate, DEFAULT_CONFIDENCE};
use crate::error::{invalid, Result};
use crate::graph::{ball, FiniteGraph, VertexId};
use crate::perc::{
    clusters, config_at, connected, ghost_connected, sample_ghost_trial, sample_weights_trial,
};

/// Estimated connection probability P_p(u <-> v).
pub fn two_point(
    g: &FiniteGraph,
    p: f64,
    u: VertexId,
    v: VertexId,
    trials: u64,
    seed: u64,
) -> Result<MCEstimate> {
    check_vertex(g, u)?;
    check_vertex(g, v)?;
    mc_probability(
        |s, t| {
            let sample = sample_weights_trial(g, s, t);
            let cfg = config_at(&sample, p);
            connected(g, &cfg, u, v)
        },
        trials,
        seed,
        DEFAULT_CONFIDENCE,
    )
}

/// Minimum over a ball of estimated two-point probabilities, on shared
/// samples.
#[derive(Clone, Debug, Serialize)]
pub struct BallMinEstimate {
    pub estimate: MCEstimate,
    /// Vertex attaining the minimum; ties break to the smallest id.
    pub argmin: VertexId,
    /// Ball radius after clamping to the diameter.
    pub radius: u32,
}

/// Minimum of P_p(o <-> u) over u in B_r(o), estimated on shared samples:
/// each trial is clustered once and scored against every ball vertex, so all
/// per-vertex estimates are coupled and their pointwise minimum is exact.
/// A radius past the diameter clamps to the whole graph.
pub fn min_two_point_over_ball(
    g: &FiniteGraph,
    p: f64,
    r: f64,
    trials: u64,
    seed: u64,
) -> Result<BallMinEstimate> {
    if trials == 0 {
        return Err(invalid("trials", "need at least one trial"));
    }
    if !r.is_finite() || r < 0.0 {
        return Err(invalid("r", format!("radius must be finite and >= 0, got {r}")));
    }
    let diam = crate::graph::metric_profile(g, 0).diameter;
    let radius = (r.floor() as u64).min(diam as u64) as u32;
    let members = ball(g, 0, radius as f64)?;
    let counts = (0..trials)
        .into_par_iter()
        .map(|t| {
            let sample = sample_weights_trial(g, seed, t);
            let cfg = config_at(&sample, p);
            let rep = clusters(g, &cfg);
            let root = rep.label_of(0);
            members
                .iter()
                .map(|&u| (rep.label_of(u) == root) as u64)
                .collect::<Vec<u64>>()
        })
        .reduce(
            || vec![0u64; members.len()],
            |mut acc, row| {
                for (a, b) in acc.iter_mut().zip(row) {
                    *a += b;
                }
                acc
            },
        );
    let (&argmin, &successes) = members
        .iter()
        .zip(counts.iter())
        .min_by_key(|&(&u, &c)| (c, u))
        .map(|(u, c)| (u, c))
        .expect("ball contains at least the root");
    Ok(BallMinEstimate {
        estimate: MCEstimate::from_successes(successes, trials, DEFAULT_CONFIDENCE)?,
        argmin,
        radius,
    })
}

/// Estimated volume-tail probability P_p(|K_o| >= n) at the root.
pub fn tail_ko(g: &FiniteGraph, p: f64, n: u32, trials: u64, seed: u64) -> Result<MCEstimate> {
    if n == 0 {
        return Err(invalid("n", "volume threshold must be >= 1"));
    }
    mc_probability(
        |s, t| {
            let sample = sample_weights_trial(g, s, t);
            let cfg = config_at(&sample, p);
            clusters(g, &cfg).cluster_size_of(0) >= n
        },
        trials,
        seed,
        DEFAULT_CONFIDENCE,
    )
}

/// Estimated giant-cluster probability P_p(density of K_1 >= alpha).
pub fn giant_prob(
    g: &FiniteGraph,
    p: f64,
    alpha: f64,
    trials: u64,
    seed: u64,
) -> Result<MCEstimate> {
    if !(0.0 < alpha && alpha <= 1.0) {
        return Err(invalid("alpha", format!("density level {alpha} outside (0,1]")));
    }
    let threshold = int_threshold(alpha * g.vertex_count() as f64).max(1) as u32;
    mc_probability(
        |s, t| {
            let sample = sample_weights_trial(g, s, t);
            let cfg = config_at(&sample, p);
            clusters(g, &cfg).k1 >= threshold
        },
        trials,
        seed,
        DEFAULT_CONFIDENCE,
    )
}

/// Estimated ghost quantity: the probability that the root reaches a green
/// vertex under the product of percolation at p and an independent ghost
/// field of intensity 1 - e^{-h}.
pub fn mu_ph(g: &FiniteGraph, p: f64, h: f64, trials: u64, seed: u64) -> Result<MCEstimate> {
    if !(h >= 0.0) {
        return Err(invalid("h", format!("field strength {h} must be >= 0")));
    }
    let q = -f64::exp_m1(-h);
    mc_probability(
        |s, t| {
            let sample = sample_weights_trial(g, s, t);
            let cfg = config_at(&sample, p);
            let ghost = sample_ghost_trial(g, q, s, t)
                .expect("intensity derived from h >= 0 is always valid");
            ghost_connected(g, &cfg, &ghost, 0)
        },
        trials,
        seed,
        DEFAULT_CONFIDENCE,
    )
}

fn check_vertex(g: &FiniteGraph, v: VertexId) -> Result<()> {
    if v >= g.vertex_count() {
        return Err(invalid("vertex", format!("vertex id {v} out of range")));
    }
    Ok(())
}

/// Exact two-point probability on a cycle: the two arcs between u and v
/// succeed independently except for double-counting the all-open cycle.
#[cfg(test)]
pub(crate) fn cycle_two_point_exact(len: u32, p: f64, dist: u32) -> f64 {
    let a = p.powi(dist as i32);
    let b = p.powi((len - dist) as i32);
    a + b - a * b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_extremes() {
        let g = FiniteGraph::generate("cycle:100").unwrap();
        let one = two_point(&g, 1.0, 0, 50, 64, 1).unwrap();
        assert_eq!(one.point, 1.0);
        let zero = two_point(&g, 0.0, 0, 50, 64, 1).unwrap();
        assert_eq!(zero.point, 0.0);
        assert!(two_point(&g, 0.5, 0, 100, 64, 1).is_err());
    }

    #[test]
    fn two_point_matches_cycle_formula() {
        let g = FiniteGraph::generate("cycle:100").unwrap();
        let trials = 20_000;
        let est = two_point(&g, 0.8, 0, 10, trials, 77).unwrap();
        let exact = cycle_two_point_exact(100, 0.8, 10);
        assert!((exact - 0.10737).abs() < 1e-4, "oracle value drifted: {exact}");
        let sigma = (exact * (1.0 - exact) / trials as f64).sqrt();
        assert!(
            (est.point - exact).abs() < 3.0 * sigma,
            "estimate {} vs exact {exact}",
            est.point
        );
    }

    #[test]
    fn ball_minimum_matches_per_vertex_estimates() {
        let g = FiniteGraph::generate("torus:6x6").unwrap();
        let trials = 400;
        let min = min_two_point_over_ball(&g, 0.45, 2.0, trials, 5).unwrap();
        // Same seed, same trial keys: independent estimates must agree.
        let per_vertex: Vec<(VertexId, u64)> = ball(&g, 0, 2.0)
            .unwrap()
            .into_iter()
            .map(|u| {
                let est = two_point(&g, 0.45, 0, u, trials, 5).unwrap();
                (u, est.successes)
            })
            .collect();
        let (bu, bc) = per_vertex
            .iter()
            .map(|&(u, c)| (c, u))
            .min()
            .map(|(c, u)| (u, c))
            .unwrap();
        assert_eq!(min.argmin, bu);
        assert_eq!(min.estimate.successes, bc);
    }

    #[test]
    fn ball_radius_clamps_to_diameter() {
        let g = FiniteGraph::generate("cycle:12").unwrap();
        let whole = min_two_point_over_ball(&g, 1.0, 99.0, 16, 2).unwrap();
        assert_eq!(whole.radius, 6);
        assert_eq!(whole.estimate.point, 1.0);
        assert!(min_two_point_over_ball(&g, 0.5, -1.0, 16, 2).is_err());
    }

    #[test]
    fn tail_is_total_at_volume_one() {
        let g = FiniteGraph::generate("torus:4x4").unwrap();
        let est = tail_ko(&g, 0.3, 1, 50, 9).unwrap();
        assert_eq!(est.point, 1.0);
        assert!(tail_ko(&g, 0.3, 0, 50, 9).is_err());
    }

    #[test]
    fn giant_prob_matches_cycle4_enumeration() {
        // On cycle:4, |K_1| >= 2 iff some edge is open: 1 - (1-p)^4.
        let g = FiniteGraph::generate("cycle:4").unwrap();
        let trials = 20_000;
        let est = giant_prob(&g, 0.5, 0.5, trials, 31).unwrap();
        let exact = 1.0 - 0.5f64.powi(4);
        let sigma = (exact * (1.0 - exact) / trials as f64).sqrt();
        assert!((est.point - exact).abs() < 3.0 * sigma, "estimate {}", est.point);
        let sure = giant_prob(&g, 1.0, 1.0, 32, 31).unwrap();
        assert_eq!(sure.point, 1.0);
        assert!(giant_prob(&g, 0.5, 0.0, 32, 31).is_err());
        assert!(giant_prob(&g, 0.5, 1.5, 32, 31).is_err());
    }

    #[test]
    fn ghost_quantity_limits_and_closed_form() {
        let g = FiniteGraph::generate("torus:4x4").unwrap();
        let none = mu_ph(&g, 0.5, 0.0, 64, 3).unwrap();
        assert_eq!(none.point, 0.0);
        let all = mu_ph(&g, 0.5, f64::INFINITY, 64, 3).unwrap();
        assert_eq!(all.point, 1.0);
        assert!(mu_ph(&g, 0.5, -0.1, 64, 3).is_err());
        // At p = 0 only the root can be its own witness: mu = q.
        let trials = 20_000;
        let h = 0.7;
        let q = -f64::exp_m1(-h);
        let est = mu_ph(&g, 0.0, h, trials, 3).unwrap();
        let sigma = (q * (1.0 - q) / trials as f64).sqrt();
        assert!((est.point - q).abs() < 3.0 * sigma, "estimate {}", est.point);
    }
}
