//! Largest-cluster statistics across a graph family, straddling the
//! threshold.
//!
//! The dichotomy under test: below the threshold the medians of
//! |K_1|/log|V| are stable across sizes, above it the medians of the giant
//! density |K_1|/|V| are stable and bounded away from zero. Which regime a
//! parameter falls in is decided from the measured densities themselves, so
//! the same manifest works for any family.

use std::time::Instant;

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::graph::FiniteGraph;
use crate::perc::{clusters, config_at, sample_weights_trial};

use super::{
    derive_seed, exact, median_with_bracket, quantile_with_bracket, triage_le, Bracketed,
    ExperimentManifest, LabReport, LabRow, Verdict,
};

const LAB_ID: u64 = 1;

/// Per-size largest-cluster sweep with cross-size stability checks.
pub fn lab_sharpness_sweep(manifest: &ExperimentManifest) -> Result<LabReport> {
    let started = Instant::now();
    manifest.validate()?;
    if manifest.graphs.len() < 3 {
        return Err(invalid("graphs", "sharpness needs a family at three sizes or more"));
    }
    if manifest.p_values.is_empty() {
        return Err(invalid("p_values", "sharpness needs a parameter grid"));
    }
    let graphs = manifest.generate_graphs()?;
    let tol = &manifest.tolerances;
    let family = manifest.graphs.join("+");
    let mut rows = Vec::new();

    for (pi, &p) in manifest.p_values.iter().enumerate() {
        let mut log_norm: Vec<Bracketed> = Vec::new();
        let mut density: Vec<Bracketed> = Vec::new();
        let mut min_sample_density = f64::INFINITY;

        for (gi, g) in graphs.iter().enumerate() {
            let seed =
                derive_seed(manifest.base_seed, LAB_ID, (pi * graphs.len() + gi) as u64);
            let k1s: Vec<f64> = k1_samples(g, p, manifest.trials, seed)
                .into_iter()
                .map(f64::from)
                .collect();
            let log_v = f64::from(g.vertex_count()).ln();
            let vol = f64::from(g.vertex_count());
            let norm: Vec<f64> = k1s.iter().map(|k| k / log_v).collect();
            let dens: Vec<f64> = k1s.iter().map(|k| k / vol).collect();
            let m_norm = median_with_bracket(&norm);
            let m_dens = median_with_bracket(&dens);
            let q10 = quantile_with_bracket(&k1s, 0.1);
            let q50 = quantile_with_bracket(&k1s, 0.5);
            let q90 = quantile_with_bracket(&k1s, 0.9);
            min_sample_density =
                min_sample_density.min(dens.iter().copied().fold(f64::INFINITY, f64::min));
            rows.push(LabRow::info(
                "k1-quantiles",
                g.spec_string(),
                format!("p={p} trials={}", manifest.trials),
                m_norm.point,
                m_dens.point,
                format!(
                    "k1 q10={} q50={} q90={}; median k1/log|V|={:.4} in [{:.4},{:.4}]; \
                     median density={:.4} in [{:.4},{:.4}]",
                    q10.point, q50.point, q90.point, m_norm.point, m_norm.lo, m_norm.hi,
                    m_dens.point, m_dens.lo, m_dens.hi
                ),
            ));
            log_norm.push(m_norm);
            density.push(m_dens);
        }

        let max_density = density.iter().map(|b| b.point).fold(f64::NEG_INFINITY, f64::max);
        let min_density = density.iter().map(|b| b.point).fold(f64::INFINITY, f64::min);

        if p == 1.0 {
            // All edges open: the giant is the whole graph in every sample.
            let verdict =
                if min_sample_density == 1.0 { Verdict::Pass } else { Verdict::Fail };
            rows.push(LabRow {
                check: "full-parameter-exact".into(),
                graph: family.clone(),
                params: format!("p={p}"),
                lhs: 1.0,
                rhs: min_sample_density,
                margin: 0.0,
                verdict,
                note: "density of K_1 must equal 1 in every sample at p=1".into(),
            });
            continue;
        }

        if max_density <= tol.subcritical_ceiling {
            let ratio = ratio_bracket(&log_norm);
            rows.push(LabRow {
                check: "subcritical-log-stability".into(),
                graph: family.clone(),
                params: format!("p={p}"),
                lhs: ratio.point,
                rhs: tol.log_stability_factor,
                margin: 0.0,
                verdict: triage_le(ratio, exact(tol.log_stability_factor)),
                note: format!(
                    "cross-size ratio of median k1/log|V|, bracket [{:.4},{:.4}]",
                    ratio.lo, ratio.hi
                ),
            });
        } else if min_density >= tol.density_floor {
            let spread = spread_bracket(&density);
            rows.push(LabRow {
                check: "supercritical-density-stability".into(),
                graph: family.clone(),
                params: format!("p={p}"),
                lhs: spread.point,
                rhs: tol.density_spread,
                margin: 0.0,
                verdict: triage_le(spread, exact(tol.density_spread)),
                note: format!(
                    "cross-size spread of median density, bracket [{:.4},{:.4}]",
                    spread.lo, spread.hi
                ),
            });
            let floor = min_bracket(&density);
            rows.push(LabRow {
                check: "supercritical-density-floor".into(),
                graph: family.clone(),
                params: format!("p={p}"),
                lhs: tol.density_floor,
                rhs: floor.point,
                margin: 0.0,
                verdict: triage_le(exact(tol.density_floor), floor),
                note: format!(
                    "smallest median density across sizes, bracket [{:.4},{:.4}]",
                    floor.lo, floor.hi
                ),
            });
        } else {
            rows.push(LabRow::info(
                "near-threshold",
                &family,
                format!("p={p}"),
                min_density,
                max_density,
                "densities straddle the dichotomy cut; no stability assertion".into(),
            ));
        }
    }

    Ok(LabReport::finish("sharpness", manifest, rows, started))
}

/// Largest-cluster size per trial, in trial order.
fn k1_samples(g: &FiniteGraph, p: f64, trials: u64, seed: u64) -> Vec<u32> {
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let sample = sample_weights_trial(g, seed, t);
            clusters(g, &config_at(&sample, p)).k1
        })
        .collect()
}

/// Bracket for max/min over per-size medians. The true maximum lies in
/// [max of lows, max of highs] and the true minimum in [min of lows, min of
/// highs], so the endpoint quotients bound the true ratio.
fn ratio_bracket(values: &[Bracketed]) -> Bracketed {
    let max = fold_bracket(values, f64::max);
    let min = fold_bracket(values, f64::min);
    Bracketed {
        point: max.point / min.point,
        lo: (max.lo / min.hi).max(1.0),
        hi: max.hi / min.lo,
    }
}

fn spread_bracket(values: &[Bracketed]) -> Bracketed {
    let max = fold_bracket(values, f64::max);
    let min = fold_bracket(values, f64::min);
    Bracketed {
        point: max.point - min.point,
        lo: (max.lo - min.hi).max(0.0),
        hi: max.hi - min.lo,
    }
}

fn min_bracket(values: &[Bracketed]) -> Bracketed {
    fold_bracket(values, f64::min)
}

fn fold_bracket(values: &[Bracketed], f: fn(f64, f64) -> f64) -> Bracketed {
    let mut iter = values.iter();
    let first = *iter.next().expect("family has at least one size");
    iter.fold(first, |acc, b| Bracketed {
        point: f(acc.point, b.point),
        lo: f(acc.lo, b.lo),
        hi: f(acc.hi, b.hi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labs::Tolerances;

    fn manifest(graphs: &[&str], p_values: &[f64], trials: u64) -> ExperimentManifest {
        ExperimentManifest {
            experiment: String::new(),
            graphs: graphs.iter().map(|s| s.to_string()).collect(),
            p_values: p_values.to_vec(),
            scales: vec![],
            alpha_levels: vec![],
            delta_sprinkles: vec![],
            trials,
            base_seed: 9,
            tolerances: Tolerances::default(),
        }
    }

    #[test]
    fn needs_three_sizes_and_a_grid() {
        assert!(lab_sharpness_sweep(&manifest(&["cycle:8", "cycle:16"], &[0.5], 8)).is_err());
        assert!(lab_sharpness_sweep(&manifest(
            &["cycle:8", "cycle:16", "cycle:32"],
            &[],
            8
        ))
        .is_err());
    }

    #[test]
    fn full_parameter_is_exact_and_passes() {
        let m = manifest(&["cycle:8", "cycle:16", "cycle:32"], &[1.0], 8);
        let report = lab_sharpness_sweep(&m).unwrap();
        let row = report.find_row("full-parameter-exact", "cycle:8+cycle:16+cycle:32").unwrap();
        assert_eq!(row.verdict, Verdict::Pass);
        assert_eq!(row.rhs, 1.0);
        assert_eq!(report.aggregate, Verdict::Pass);
    }

    #[test]
    fn subcritical_cycles_have_stable_log_medians() {
        // On a cycle at fixed p the largest cluster is the longest open run,
        // which grows like log n / log(1/p): exactly the stable regime.
        let m = manifest(&["cycle:256", "cycle:512", "cycle:1024"], &[0.5], 300);
        let report = lab_sharpness_sweep(&m).unwrap();
        let row = report
            .find_row("subcritical-log-stability", "cycle:256+cycle:512+cycle:1024")
            .unwrap();
        assert!(row.lhs < 2.0, "ratio {} should be small", row.lhs);
        assert_ne!(row.verdict, Verdict::Fail);
    }

    #[test]
    fn report_is_reproducible_modulo_wall_time() {
        let m = manifest(&["cycle:16", "cycle:32", "cycle:64"], &[0.5, 1.0], 32);
        let mut a = lab_sharpness_sweep(&m).unwrap();
        let mut b = lab_sharpness_sweep(&m).unwrap();
        a.provenance.wall_ms = 0;
        b.provenance.wall_ms = 0;
        assert_eq!(a.to_json_pretty(), b.to_json_pretty());
    }

    #[test]
    fn bracket_folds_bound_the_point() {
        let vals = [
            Bracketed { point: 2.0, lo: 1.8, hi: 2.2 },
            Bracketed { point: 3.0, lo: 2.7, hi: 3.3 },
        ];
        let r = ratio_bracket(&vals);
        assert!((r.point - 1.5).abs() < 1e-12);
        assert!(r.lo <= r.point && r.point <= r.hi);
        let s = spread_bracket(&vals);
        assert!((s.point - 1.0).abs() < 1e-12);
        assert!(s.lo <= s.point && s.point <= s.hi);
    }
}
