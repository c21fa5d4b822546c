//! Gradual emergence: the largest sprinkle jump of the giant density.
//!
//! Per sample, J(delta) = sup_p [alpha(p+delta) - alpha(p)] computed exactly
//! from the evolution curve's breakpoints. Square tori grow their giant
//! gradually (small J), while cycles and stretched tori jump: the giant
//! appears in essentially one sprinkle.

use std::time::Instant;

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::graph::FiniteGraph;
use crate::perc::{evolution_curve, sample_weights_trial};

use super::{
    classify_spec, derive_seed, exact, median_with_bracket, triage_le, ExperimentManifest,
    Family, LabReport, LabRow, Verdict,
};

const LAB_ID: u64 = 4;

/// Distribution of the jump statistic J(delta) per graph and sprinkle.
pub fn lab_gradual_emergence(manifest: &ExperimentManifest) -> Result<LabReport> {
    let started = Instant::now();
    manifest.validate()?;
    if manifest.delta_sprinkles.is_empty() {
        return Err(invalid("delta_sprinkles", "emergence needs a sprinkle grid"));
    }
    let graphs = manifest.generate_graphs()?;
    let tol = &manifest.tolerances;
    let mut rows = Vec::new();

    for (gi, g) in graphs.iter().enumerate() {
        let spec = g.spec_string().to_string();
        for (di, &delta) in manifest.delta_sprinkles.iter().enumerate() {
            let seed = derive_seed(
                manifest.base_seed,
                LAB_ID,
                (gi * manifest.delta_sprinkles.len() + di) as u64,
            );
            let jumps = jump_samples(g, delta, manifest.trials, seed)?;
            let med = median_with_bracket(&jumps);
            let max = jumps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let min = jumps.iter().copied().fold(f64::INFINITY, f64::min);
            rows.push(LabRow::info(
                "jump-distribution",
                &spec,
                format!("delta={delta} trials={}", manifest.trials),
                med.point,
                max,
                format!(
                    "median J={:.4} in [{:.4},{:.4}]; sample range [{:.4},{:.4}]",
                    med.point, med.lo, med.hi, min, max
                ),
            ));

            if delta == 1.0 {
                // A full sweep goes from the empty to the complete
                // configuration: J = 1 - 1/|V| in every sample, exactly.
                let expect = 1.0 - 1.0 / f64::from(g.vertex_count());
                let exact_everywhere = jumps.iter().all(|&j| j == expect);
                rows.push(LabRow {
                    check: "full-sprinkle-exact".into(),
                    graph: spec.clone(),
                    params: format!("delta={delta}"),
                    lhs: med.point,
                    rhs: expect,
                    margin: 0.0,
                    verdict: if exact_everywhere { Verdict::Pass } else { Verdict::Fail },
                    note: "J(1) = 1 - 1/|V| must hold sample by sample".into(),
                });
                continue;
            }

            match classify_spec(&spec) {
                Family::SquareTorus => rows.push(LabRow {
                    check: "gradual-on-square-torus".into(),
                    graph: spec.clone(),
                    params: format!("delta={delta} ceiling={}", tol.emergence_upper),
                    lhs: med.point,
                    rhs: tol.emergence_upper,
                    margin: 0.0,
                    verdict: triage_le(med, exact(tol.emergence_upper)),
                    note: format!("median jump bracket [{:.4},{:.4}]", med.lo, med.hi),
                }),
                Family::StretchedTorus | Family::Cycle => rows.push(LabRow {
                    check: "abrupt-on-stretched".into(),
                    graph: spec.clone(),
                    params: format!("delta={delta} floor={}", tol.emergence_lower),
                    lhs: tol.emergence_lower,
                    rhs: med.point,
                    margin: 0.0,
                    verdict: triage_le(exact(tol.emergence_lower), med),
                    note: format!("median jump bracket [{:.4},{:.4}]", med.lo, med.hi),
                }),
                Family::Other => {}
            }
        }
    }

    Ok(LabReport::finish("emergence", manifest, rows, started))
}

/// J(delta) per trial, in trial order.
fn jump_samples(g: &FiniteGraph, delta: f64, trials: u64, seed: u64) -> Result<Vec<f64>> {
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let sample = sample_weights_trial(g, seed, t);
            evolution_curve(g, &sample).max_density_jump(delta)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labs::Tolerances;

    fn manifest(graphs: &[&str], deltas: &[f64], trials: u64) -> ExperimentManifest {
        ExperimentManifest {
            experiment: String::new(),
            graphs: graphs.iter().map(|s| s.to_string()).collect(),
            p_values: vec![],
            scales: vec![],
            alpha_levels: vec![],
            delta_sprinkles: deltas.to_vec(),
            trials,
            base_seed: 21,
            tolerances: Tolerances::default(),
        }
    }

    #[test]
    fn needs_a_sprinkle_grid() {
        assert!(lab_gradual_emergence(&manifest(&["cycle:16"], &[], 8)).is_err());
    }

    #[test]
    fn full_sprinkle_is_exact_on_every_graph() {
        let m = manifest(&["cycle:12", "torus:4x4"], &[1.0], 16);
        let report = lab_gradual_emergence(&m).unwrap();
        for spec in ["cycle:12", "torus:4x4"] {
            let row = report.find_row("full-sprinkle-exact", spec).unwrap();
            assert_eq!(row.verdict, Verdict::Pass, "on {spec}");
        }
        assert_eq!(report.aggregate, Verdict::Pass);
    }

    #[test]
    fn cycles_jump_abruptly() {
        let m = manifest(&["cycle:512"], &[0.05], 100);
        let report = lab_gradual_emergence(&m).unwrap();
        let row = report.find_row("abrupt-on-stretched", "cycle:512").unwrap();
        assert!(row.rhs >= 0.5, "median jump {}", row.rhs);
        assert_eq!(row.verdict, Verdict::Pass);
    }

    #[test]
    fn jump_never_exceeds_one_nor_drops_below_zero() {
        let jumps = jump_samples(
            &FiniteGraph::generate("torus:4x4").unwrap(),
            0.3,
            64,
            5,
        )
        .unwrap();
        assert!(jumps.iter().all(|&j| (0.0..=1.0).contains(&j)));
    }
}
