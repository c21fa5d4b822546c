//! Orange and green scale predicates.
//!
//! A scale n is orange at time t when the minimum two-point probability
//! over the ball B_n exceeds the small quantity delta(n) at parameter
//! phi(t). Green additionally demands either high growth (the scale escapes
//! the low-growth set) or a corridor bound: the tube-restricted connection
//! probability at corridor length R^2(n) stays above delta(R(n)). R^2(n) is
//! astronomically large at any feasible size, so the corridor length clamps
//! to the diameter and the report says so.

use serde::Serialize;

use super::corridor::{corridor_kappa, KappaReport};
use super::quantities::{min_two_point_over_ball, BallMinEstimate};
use super::scale::{delta_scale, delta_scale_of_r, phi};
use crate::error::{invalid, Result};
use crate::graph::{is_low_growth, metric_profile, FiniteGraph};

/// Orange verdict with its margin.
#[derive(Clone, Debug, Serialize)]
pub struct OrangeReport {
    pub orange: bool,
    /// Minimum two-point estimate minus the delta(n) threshold.
    pub margin: f64,
    pub threshold: f64,
    pub p: f64,
    pub n: u64,
    pub min_two_point: BallMinEstimate,
}

/// Which green disjunct fired.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GreenVia {
    /// The scale is not in the low-growth set, so orange suffices.
    HighGrowth,
    /// The corridor bound held.
    Corridor,
}

/// Green verdict, recording the path taken through the definition.
#[derive(Clone, Debug, Serialize)]
pub struct GreenReport {
    pub green: bool,
    pub orange: OrangeReport,
    pub low_growth: bool,
    pub via: Option<GreenVia>,
    /// Corridor estimate when it was consulted.
    pub corridor: Option<KappaReport>,
    /// The delta(R(n)) threshold the corridor is tested against.
    pub corridor_threshold: f64,
    /// True when the corridor length R^2(n) was clamped to the diameter.
    pub clamped: bool,
}

/// Corridor evaluation budget for the green predicate.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CorridorParams {
    pub trials: u64,
    pub paths_budget: usize,
    /// Exponent of the low-growth test: n is low-growth when
    /// Gr(n) <= e^{(ln n)^exponent}.
    pub growth_exponent: f64,
}

impl Default for CorridorParams {
    fn default() -> Self {
        CorridorParams {
            trials: 400,
            paths_budget: 4,
            growth_exponent: 100.0,
        }
    }
}

/// Whether scale n is orange at time t: minimum two-point probability over
/// B_n at parameter phi(t) at least delta(n).
pub fn orange_status(
    g: &FiniteGraph,
    n: u64,
    t: f64,
    trials: u64,
    seed: u64,
) -> Result<OrangeReport> {
    if n < 3 {
        return Err(invalid("n", format!("scale must be >= 3, got {n}")));
    }
    let p = phi(t);
    let threshold = delta_scale(n as f64)?;
    let min_two_point = min_two_point_over_ball(g, p, n as f64, trials, seed)?;
    let margin = min_two_point.estimate.point - threshold;
    Ok(OrangeReport {
        orange: margin >= 0.0,
        margin,
        threshold,
        p,
        n,
        min_two_point,
    })
}

/// Whether scale n is green at time t: orange, and either the scale escapes
/// the low-growth set or the corridor bound holds across the graph.
pub fn green_status(
    g: &FiniteGraph,
    n: u64,
    t: f64,
    trials: u64,
    corridor_params: CorridorParams,
    seed: u64,
) -> Result<GreenReport> {
    let orange = orange_status(g, n, t, trials, seed)?;
    let corridor_threshold = delta_scale_of_r(n as f64)?;
    let n_u32 = u32::try_from(n).map_err(|_| invalid("n", format!("scale {n} too large")))?;
    let low_growth = is_low_growth(g, n_u32, corridor_params.growth_exponent)?;

    // Corridor length R^2(n) = e^{(ln n)^81}; compare in log space against
    // the diameter. At every feasible n this clamps.
    let diameter = metric_profile(g, 0).diameter.max(1);
    let ln_r2 = (n as f64).ln().powi(81);
    let clamped = ln_r2 > (diameter as f64).ln();
    let length = if clamped { diameter as u64 } else { ln_r2.exp() as u64 };

    if !orange.orange {
        return Ok(GreenReport {
            green: false,
            orange,
            low_growth,
            via: None,
            corridor: None,
            corridor_threshold,
            clamped,
        });
    }
    if !low_growth {
        return Ok(GreenReport {
            green: true,
            orange,
            low_growth,
            via: Some(GreenVia::HighGrowth),
            corridor: None,
            corridor_threshold,
            clamped,
        });
    }
    let kappa = corridor_kappa(
        g,
        orange.p,
        length,
        n as f64,
        corridor_params.trials,
        corridor_params.paths_budget,
        seed,
    )?;
    let green = kappa.estimate.point >= corridor_threshold;
    Ok(GreenReport {
        green,
        orange,
        low_growth,
        via: green.then_some(GreenVia::Corridor),
        corridor: Some(kappa),
        corridor_threshold,
        clamped,
    })
}
