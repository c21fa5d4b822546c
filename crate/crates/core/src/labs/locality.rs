//! Threshold locality: q(G) across a converging family and its contrasts.
//!
//! q(G) is the parameter where the median sample first carries a giant of
//! density 1/2, solved by per-sample critical values. Square tori converge
//! toward the planar critical point 1/2; stretched tori and cycles keep
//! their thresholds near 1. A second battery measures the transition window
//! (the p-range over which the giant probability climbs from 0.1 to 0.9)
//! and asserts it shrinks as square tori grow.

use std::time::Instant;

use crate::error::{invalid, Result};
use crate::estimate::{solve_p, GiantEvent, ThresholdResult};
use crate::graph::FiniteGraph;

use super::{
    classify_spec, derive_seed, exact, triage_le, Bracketed, ExperimentManifest, Family,
    LabReport, LabRow, Verdict,
};

const LAB_ID: u64 = 2;

/// Threshold estimates per graph plus convergence and contrast checks.
pub fn lab_threshold_locality(manifest: &ExperimentManifest) -> Result<LabReport> {
    let started = Instant::now();
    manifest.validate()?;
    if manifest.alpha_levels.is_empty() {
        return Err(invalid("alpha_levels", "locality needs a density level for the window check"));
    }
    let graphs = manifest.generate_graphs()?;
    let tol = &manifest.tolerances;
    let alpha = manifest.alpha_levels[0];
    let mut rows = Vec::new();

    // (vertex count, spec, threshold) for the square-torus family.
    let mut square: Vec<(u32, String, Bracketed)> = Vec::new();

    for (gi, g) in graphs.iter().enumerate() {
        let seed = derive_seed(manifest.base_seed, LAB_ID, gi as u64);
        let spec = g.spec_string().to_string();
        let q = solve_threshold(g, GiantEvent::DensityAtLeast(0.5), 0.5, tol.solve_tol,
            manifest.trials, seed)?;
        rows.push(LabRow::info(
            "threshold",
            &spec,
            format!("alpha=0.5 target=0.5 tol={}", tol.solve_tol),
            q.point,
            0.5,
            format!("q(G)={:.4}, bracket [{:.4},{:.4}]", q.point, q.lo, q.hi),
        ));
        match classify_spec(&spec) {
            Family::SquareTorus => square.push((g.vertex_count(), spec, q)),
            Family::StretchedTorus => rows.push(floor_row(
                "stretched-threshold-floor",
                &spec,
                q,
                tol.q_floor_stretched,
            )),
            Family::Cycle => rows.push(floor_row("cycle-threshold-floor", &spec, q, tol.q_floor_cycle)),
            Family::Other => {}
        }
    }

    square.sort_by_key(|(n, _, _)| *n);

    if let Some((_, spec, q)) = square.last() {
        let (win_lo, win_hi) = tol.q_window;
        let verdict = if win_lo <= q.lo && q.hi <= win_hi {
            Verdict::Pass
        } else if q.hi < win_lo || q.lo > win_hi {
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        };
        rows.push(LabRow {
            check: "limit-window".into(),
            graph: spec.clone(),
            params: format!("window=[{win_lo},{win_hi}]"),
            lhs: q.point,
            rhs: win_hi,
            margin: 0.0,
            verdict,
            note: format!(
                "largest square torus threshold bracket [{:.4},{:.4}] against the window",
                q.lo, q.hi
            ),
        });
    }

    for pair in square.windows(2) {
        let (_, small_spec, small) = &pair[0];
        let (_, big_spec, big) = &pair[1];
        let lhs = distance_to_half(*big);
        let rhs = distance_to_half(*small);
        let slack = Bracketed {
            point: rhs.point + tol.trend_slack,
            lo: rhs.lo + tol.trend_slack,
            hi: rhs.hi + tol.trend_slack,
        };
        rows.push(LabRow {
            check: "threshold-converges".into(),
            graph: big_spec.clone(),
            params: format!("versus {small_spec} slack={}", tol.trend_slack),
            lhs: lhs.point,
            rhs: slack.point,
            margin: tol.trend_slack,
            verdict: triage_le(lhs, slack),
            note: format!(
                "|q - 1/2| = {:.4} at {big_spec} vs {:.4} at {small_spec}",
                lhs.point, rhs.point
            ),
        });
    }

    // Transition window widths for the square family, largest size last.
    let mut widths: Vec<(String, Bracketed)> = Vec::new();
    for (gi, g) in graphs.iter().enumerate() {
        let spec = g.spec_string().to_string();
        if classify_spec(&spec) != Family::SquareTorus {
            continue;
        }
        let seed = derive_seed(manifest.base_seed, LAB_ID, 1000 + gi as u64);
        let event = GiantEvent::DensityAtLeast(alpha);
        let low = solve_threshold(g, event, 0.1, tol.solve_tol, manifest.trials, seed)?;
        let high = solve_threshold(g, event, 0.9, tol.solve_tol, manifest.trials, seed)?;
        let width = Bracketed {
            point: high.point - low.point,
            lo: (high.lo - low.hi).max(0.0),
            hi: high.hi - low.lo,
        };
        let log_v = f64::from(g.vertex_count()).ln();
        rows.push(LabRow::info(
            "transition-window",
            &spec,
            format!("alpha={alpha}"),
            width.point,
            width.point * log_v,
            format!(
                "p-window [{:.4},{:.4}] where the giant probability climbs 0.1 to 0.9; \
                 width*log|V|={:.3}",
                low.point, high.point,
                width.point * log_v
            ),
        ));
        widths.push((spec, width));
    }
    for pair in widths.windows(2) {
        let (small_spec, small) = &pair[0];
        let (big_spec, big) = &pair[1];
        rows.push(LabRow {
            check: "window-shrinks".into(),
            graph: big_spec.clone(),
            params: format!("versus {small_spec} alpha={alpha}"),
            lhs: big.point,
            rhs: small.point,
            margin: 0.0,
            verdict: triage_le(*big, *small),
            note: format!(
                "window width {:.4} at {big_spec} vs {:.4} at {small_spec}",
                big.point, small.point
            ),
        });
    }

    Ok(LabReport::finish("locality", manifest, rows, started))
}

fn solve_threshold(
    g: &FiniteGraph,
    event: GiantEvent,
    target: f64,
    tol: f64,
    trials: u64,
    seed: u64,
) -> Result<Bracketed> {
    let ThresholdResult { p, bracket, .. } = solve_p(g, event, target, tol, trials, seed)?;
    Ok(Bracketed {
        point: p,
        lo: bracket.0,
        hi: bracket.1,
    })
}

fn floor_row(check: &str, spec: &str, q: Bracketed, floor: f64) -> LabRow {
    LabRow {
        check: check.into(),
        graph: spec.into(),
        params: format!("floor={floor}"),
        lhs: floor,
        rhs: q.point,
        margin: 0.0,
        verdict: triage_le(exact(floor), q),
        note: format!("threshold bracket [{:.4},{:.4}] must sit above the floor", q.lo, q.hi),
    }
}

/// |q - 1/2| with the bracket mapped through the absolute value.
fn distance_to_half(q: Bracketed) -> Bracketed {
    let d = |x: f64| (x - 0.5).abs();
    let contains_half = q.lo <= 0.5 && 0.5 <= q.hi;
    Bracketed {
        point: d(q.point),
        lo: if contains_half { 0.0 } else { d(q.lo).min(d(q.hi)) },
        hi: d(q.lo).max(d(q.hi)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labs::Tolerances;

    fn manifest(graphs: &[&str], trials: u64) -> ExperimentManifest {
        ExperimentManifest {
            experiment: String::new(),
            graphs: graphs.iter().map(|s| s.to_string()).collect(),
            p_values: vec![],
            scales: vec![],
            alpha_levels: vec![0.5],
            delta_sprinkles: vec![],
            trials,
            base_seed: 13,
            tolerances: Tolerances { solve_tol: 0.05, ..Tolerances::default() },
        }
    }

    #[test]
    fn needs_an_alpha_level() {
        let mut m = manifest(&["torus:8x8"], 64);
        m.alpha_levels.clear();
        assert!(lab_threshold_locality(&m).is_err());
    }

    #[test]
    fn cycle_threshold_sits_high() {
        let m = manifest(&["cycle:512"], 200);
        let report = lab_threshold_locality(&m).unwrap();
        let row = report.find_row("cycle-threshold-floor", "cycle:512").unwrap();
        // Half the cycle must be one open run; that forces p near 1.
        assert!(row.rhs > 0.9, "threshold {}", row.rhs);
        assert_eq!(row.verdict, Verdict::Pass);
    }

    #[test]
    fn square_tori_emit_trend_and_window_rows() {
        let m = manifest(&["torus:8x8", "torus:16x16"], 200);
        let report = lab_threshold_locality(&m).unwrap();
        assert!(report.find_row("limit-window", "torus:16x16").is_some());
        assert!(report.find_row("threshold-converges", "torus:16x16").is_some());
        assert!(report.find_row("window-shrinks", "torus:16x16").is_some());
        let window = report.find_row("transition-window", "torus:8x8").unwrap();
        assert!(window.lhs > 0.0);
    }

    #[test]
    fn absolute_distance_bracket_is_sound() {
        let q = Bracketed { point: 0.52, lo: 0.49, hi: 0.55 };
        let d = distance_to_half(q);
        assert_eq!(d.lo, 0.0);
        assert!((d.hi - 0.05).abs() < 1e-12);
        let q = Bracketed { point: 0.6, lo: 0.58, hi: 0.62 };
        let d = distance_to_half(q);
        assert!((d.lo - 0.08).abs() < 1e-12 && (d.hi - 0.12).abs() < 1e-12);
    }
}
