//! Threshold solving: find the p at which a monotone giant-cluster event
//! reaches a target probability.
//!
//! Instead of stochastic bisection, each trial's evolution curve yields the
//! exact per-sample critical parameter (the first breakpoint where the
//! largest cluster reaches the threshold). P_p(event) = P(critical <= p),
//! so the solved p is the target-quantile of the critical-value
//! distribution, estimated by order statistics with a binomial bracket.
//! Monotonicity holds by construction and each batch of curves is reused
//! across the whole parameter axis.

use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{Binomial, DiscreteCDF};

use super::{int_threshold, DEFAULT_CONFIDENCE};
use crate::error::{invalid, Error, Result};
use crate::graph::FiniteGraph;
use crate::perc::{evolution_curve, sample_weights_trial};

/// Monotone events solvable by per-sample critical values.
#[derive(Clone, Copy, Debug, Serialize)]
pub enum GiantEvent {
    /// Largest cluster reaches an absolute size.
    K1AtLeast(u32),
    /// Largest cluster reaches a density in (0,1].
    DensityAtLeast(f64),
}

impl GiantEvent {
    /// Absolute size threshold on this graph.
    pub fn size_threshold(&self, g: &FiniteGraph) -> Result<u32> {
        match *self {
            GiantEvent::K1AtLeast(k) => Ok(k),
            GiantEvent::DensityAtLeast(alpha) => {
                if !(0.0 < alpha && alpha <= 1.0) {
                    return Err(invalid("alpha", format!("density level {alpha} outside (0,1]")));
                }
                Ok(int_threshold(alpha * g.vertex_count() as f64).max(1) as u32)
            }
        }
    }

    fn describe(&self, g: &FiniteGraph) -> String {
        match *self {
            GiantEvent::K1AtLeast(k) => format!("P_p(|K_1| >= {k}) on {}", g.spec_string()),
            GiantEvent::DensityAtLeast(a) => {
                format!("P_p(density of K_1 >= {a}) on {}", g.spec_string())
            }
        }
    }
}

/// A solved threshold with its certified bracket.
#[derive(Clone, Debug, Serialize)]
pub struct ThresholdResult {
    /// Point estimate: the empirical target-quantile of per-sample
    /// critical values.
    pub p: f64,
    /// Order-statistic confidence bracket around the true quantile.
    pub bracket: (f64, f64),
    pub target: f64,
    pub trials: u64,
    pub description: String,
}

/// Trial-count cap: curves double until the bracket closes, and a tolerance
/// that is still open here is declared infeasible.
const MAX_CURVES: u64 = 1 << 17;

/// Solves P_p(event) = target for p, to bracket width <= tol.
pub fn solve_p(
    g: &FiniteGraph,
    event: GiantEvent,
    target: f64,
    tol: f64,
    trials_per_eval: u64,
    seed: u64,
) -> Result<ThresholdResult> {
    if !(0.0 < target && target < 1.0) {
        return Err(invalid("target", format!("target level {target} outside (0,1)")));
    }
    if !(tol > 0.0) {
        return Err(invalid("tol", format!("tolerance {tol} must be positive")));
    }
    let threshold = event.size_threshold(g)?;
    if threshold <= 1 {
        return Err(Error::TargetUnreachable(
            "event holds at every p: a single vertex already meets the threshold".into(),
        ));
    }
    if threshold > g.vertex_count() {
        return Err(Error::TargetUnreachable(format!(
            "event fails at every p: threshold {threshold} exceeds {} vertices",
            g.vertex_count()
        )));
    }

    let mut criticals: Vec<f64> = Vec::new();
    let mut trials = trials_per_eval.clamp(16, MAX_CURVES);
    loop {
        let fresh: Vec<f64> = (criticals.len() as u64..trials)
            .into_par_iter()
            .map(|t| {
                let sample = sample_weights_trial(g, seed, t);
                evolution_curve(g, &sample)
                    .critical_p(threshold)
                    .expect("threshold <= |V| is reached by the full configuration")
            })
            .collect();
        criticals.extend(fresh);
        let mut sorted = criticals.clone();
        sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("criticals are never NaN"));
        let (lo, hi) = quantile_bracket(&sorted, target, DEFAULT_CONFIDENCE);
        if hi - lo <= tol {
            let point_idx = ((target * trials as f64).ceil() as usize).clamp(1, sorted.len());
            return Ok(ThresholdResult {
                p: sorted[point_idx - 1],
                bracket: (lo, hi),
                target,
                trials,
                description: event.describe(g),
            });
        }
        if trials >= MAX_CURVES {
            return Err(Error::BudgetExceeded(format!(
                "bracket [{lo:.6}, {hi:.6}] still wider than {tol} after {trials} curves"
            )));
        }
        trials = (trials * 2).min(MAX_CURVES);
    }
}

/// Order-statistic confidence bracket for the q-quantile of a sorted sample:
/// indices chosen so the binomial count of values below the true quantile
/// lands inside them with the requested confidence.
pub(crate) fn quantile_bracket(sorted: &[f64], q: f64, confidence: f64) -> (f64, f64) {
    let n = sorted.len() as u64;
    let beta = 1.0 - confidence;
    let bin = Binomial::new(q, n).expect("q in (0,1), n >= 1");
    let lo_rank = binomial_rank(&bin, n, beta / 2.0).clamp(1, n);
    let hi_rank = (binomial_rank(&bin, n, 1.0 - beta / 2.0) + 1).clamp(1, n);
    (sorted[lo_rank as usize - 1], sorted[hi_rank as usize - 1])
}

/// Smallest k in 0..=n with P(Bin <= k) >= p. The statrs default searcher
/// panics whenever cdf(0) already reaches p, so bisect by hand.
fn binomial_rank(bin: &Binomial, n: u64, p: f64) -> u64 {
    if bin.cdf(0) >= p {
        return 0;
    }
    let (mut lo, mut hi) = (0u64, n);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if bin.cdf(mid) >= p {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle4_median_matches_closed_form() {
        // |K_1| >= 2 iff any edge opens: P = 1 - (1-p)^4 = 1/2 at
        // p = 1 - 2^{-1/4}.
        let g = FiniteGraph::generate("cycle:4").unwrap();
        let res = solve_p(&g, GiantEvent::K1AtLeast(2), 0.5, 0.01, 4000, 11).unwrap();
        let exact = 1.0 - 0.5f64.powf(0.25);
        assert!(res.bracket.1 - res.bracket.0 <= 0.01);
        assert!(
            (res.p - exact).abs() < 0.015,
            "solved {} vs exact {exact}",
            res.p
        );
        assert!(res.bracket.0 <= res.p && res.p <= res.bracket.1);
    }

    #[test]
    fn density_event_matches_size_event() {
        let g = FiniteGraph::generate("cycle:4").unwrap();
        let a = solve_p(&g, GiantEvent::DensityAtLeast(0.5), 0.5, 0.02, 2000, 7).unwrap();
        let b = solve_p(&g, GiantEvent::K1AtLeast(2), 0.5, 0.02, 2000, 7).unwrap();
        assert_eq!(a.p, b.p);
    }

    #[test]
    fn unreachable_targets_error() {
        let g = FiniteGraph::generate("cycle:4").unwrap();
        assert!(matches!(
            solve_p(&g, GiantEvent::K1AtLeast(1), 0.5, 0.01, 100, 1),
            Err(Error::TargetUnreachable(_))
        ));
        assert!(matches!(
            solve_p(&g, GiantEvent::K1AtLeast(5), 0.5, 0.01, 100, 1),
            Err(Error::TargetUnreachable(_))
        ));
        assert!(solve_p(&g, GiantEvent::K1AtLeast(2), 0.0, 0.01, 100, 1).is_err());
        assert!(solve_p(&g, GiantEvent::K1AtLeast(2), 0.5, 0.0, 100, 1).is_err());
    }

    #[test]
    fn impossible_tolerance_exhausts_budget() {
        let g = FiniteGraph::generate("cycle:4").unwrap();
        // Order statistics cannot certify a 1e-12 bracket from finitely
        // many continuous draws at this cap.
        let err = solve_p(&g, GiantEvent::K1AtLeast(2), 0.5, 1e-12, 100, 1);
        assert!(matches!(err, Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn deterministic_in_seed() {
        let g = FiniteGraph::generate("torus:4x4").unwrap();
        let a = solve_p(&g, GiantEvent::DensityAtLeast(0.5), 0.5, 0.05, 500, 3).unwrap();
        let b = solve_p(&g, GiantEvent::DensityAtLeast(0.5), 0.5, 0.05, 500, 3).unwrap();
        assert_eq!(a.p, b.p);
        assert_eq!(a.bracket, b.bracket);
        assert_eq!(a.trials, b.trials);
    }
}
