//! Deterministic geometry audit: coarse one-dimensionality per graph.
//!
//! For every manifest graph this lab checks the ball-removal property
//! (removing B_r never disconnects the exterior of B_2r), the minimality of
//! exposed spheres as root-to-sphere cutsets, and the cycle-space
//! connectivity of randomized minimal cutsets; then it reports the
//! cycle-space bracket, both circle certificates, and the derived gamma
//! interval, classifying each graph as circle-like fast, stretched, or not
//! circle-like.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::geometry::{
    cutset_audit, delta_bracket, exposed_sphere, gamma_quantities, gh_circle_lower,
    gh_circle_upper, is_r_connected, removal_components, shrink_to_minimal_cutset,
};
use crate::graph::{metric_profile, sphere, FiniteGraph, MetricProfile};
use crate::perc::rng::{derive_rng, STREAM_GENERIC};

use super::{derive_seed, ExperimentManifest, LabReport, LabRow, Verdict};

const LAB_ID: u64 = 6;

/// Property checks, certificates, and a one-dimensionality call per graph.
pub fn lab_geometry_audit(manifest: &ExperimentManifest) -> Result<LabReport> {
    let started = Instant::now();
    manifest.validate()?;
    let graphs = manifest.generate_graphs()?;
    let tol = &manifest.tolerances;
    let scale_cap = manifest.scales.iter().copied().max().unwrap_or(u32::MAX);
    let mut rows = Vec::new();

    for (gi, g) in graphs.iter().enumerate() {
        let spec = g.spec_string().to_string();
        let profile = metric_profile(g, 0);
        let seed = derive_seed(manifest.base_seed, LAB_ID, gi as u64);

        rows.push(ball_removal_row(g, &profile, scale_cap)?);
        rows.push(exposed_minimal_row(g, &profile, scale_cap)?);

        let bracket = delta_bracket(g, tol.search_budget)?;
        rows.push(LabRow::info(
            "cycle-space-bracket",
            &spec,
            format!("budget={}", tol.search_budget),
            bracket.delta_lower.map_or(f64::NAN, f64::from),
            bracket.delta_upper.map_or(f64::NAN, f64::from),
            format!(
                "method {:?}, rank {}, ball radius {:?}",
                bracket.method, bracket.rank_full, bracket.ball_radius
            ),
        ));
        rows.push(timar_row(g, &profile, bracket.delta_upper, tol.timar_instances, seed)?);

        let upper = gh_circle_upper(g);
        let lower = gh_circle_lower(g);
        rows.push(LabRow {
            check: "circle-certificate-sandwich".into(),
            graph: spec.clone(),
            params: String::new(),
            lhs: lower.value,
            rhs: upper.value,
            margin: 0.0,
            verdict: if lower.value <= upper.value { Verdict::Pass } else { Verdict::Fail },
            note: "certified lower bound must not exceed the certified upper bound".into(),
        });

        let gamma = gamma_quantities(g);
        let ln_diam = f64::from(profile.diameter.max(1)).ln();
        let flag = if gamma.ln_gamma_plus_upper <= ln_diam {
            "circle-like fast"
        } else if gamma.exceeds_graph {
            "not circle-like"
        } else {
            "stretched"
        };
        rows.push(LabRow::info(
            "one-dimensionality",
            &spec,
            format!("diameter={}", profile.diameter),
            gamma.gamma_lower,
            gamma.gamma_upper,
            format!(
                "{flag}; gamma in [{:.4},{:.4}], ln gamma+ in [{:.3},{:.3}], \
                 circle distance in [{:.4},{:.4}]",
                gamma.gamma_lower,
                gamma.gamma_upper,
                gamma.ln_gamma_plus_lower,
                gamma.ln_gamma_plus_upper,
                lower.value,
                upper.value
            ),
        ));
    }

    Ok(LabReport::finish("geometry", manifest, rows, started))
}

/// Removing B_r(o) must leave the strict exterior of B_2r(o) in one
/// component, for every r with 4r+2 <= diameter.
fn ball_removal_row(g: &FiniteGraph, profile: &MetricProfile, cap: u32) -> Result<LabRow> {
    let spec = g.spec_string();
    let max_r = (profile.diameter.saturating_sub(2) / 4).min(cap);
    if max_r == 0 {
        return Ok(LabRow::info(
            "ball-removal",
            spec,
            String::new(),
            f64::NAN,
            f64::NAN,
            format!("no radius satisfies 4r+2 <= diameter {}", profile.diameter),
        ));
    }
    let mut failures = Vec::new();
    for r in 1..=max_r {
        let removed: Vec<u32> = members_with(profile, |d| d <= r);
        let probe: Vec<u32> = members_with(profile, |d| d > 2 * r);
        let parts = removal_components(g, &removed, &probe)?;
        if parts.parts.len() != 1 {
            failures.push((r, parts.parts.len()));
        }
    }
    let verdict = if failures.is_empty() { Verdict::Pass } else { Verdict::Fail };
    Ok(LabRow {
        check: "ball-removal".into(),
        graph: spec.into(),
        params: format!("r=1..{max_r}"),
        lhs: failures.len() as f64,
        rhs: 0.0,
        margin: 0.0,
        verdict,
        note: if failures.is_empty() {
            format!("exterior stays connected for all {max_r} radii")
        } else {
            format!("disconnected exteriors at {failures:?}")
        },
    })
}

/// The exposed sphere at radius n must be a minimal (o, S_2n+1)-cutset for
/// every n <= diameter/3 whose outer sphere exists.
fn exposed_minimal_row(g: &FiniteGraph, profile: &MetricProfile, cap: u32) -> Result<LabRow> {
    let spec = g.spec_string();
    let max_n = (profile.diameter / 3).min(cap);
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 1..=max_n {
        if 2 * n + 1 > profile.diameter {
            break;
        }
        let exposed = exposed_sphere(g, 0, n)?;
        let outer = sphere(g, 0, f64::from(2 * n + 1))?;
        let audit = cutset_audit(g, &exposed.members, &[0], &outer)?;
        checked += 1;
        if !(audit.is_cutset && audit.is_minimal) {
            failures.push(n);
        }
    }
    if checked == 0 {
        return Ok(LabRow::info(
            "exposed-sphere-minimal",
            spec,
            String::new(),
            f64::NAN,
            f64::NAN,
            format!("no radius satisfies 3n <= diameter {}", profile.diameter),
        ));
    }
    Ok(LabRow {
        check: "exposed-sphere-minimal".into(),
        graph: spec.into(),
        params: format!("n=1..{max_n}"),
        lhs: failures.len() as f64,
        rhs: 0.0,
        margin: 0.0,
        verdict: if failures.is_empty() { Verdict::Pass } else { Verdict::Fail },
        note: if failures.is_empty() {
            format!("minimal cutset at all {checked} radii")
        } else {
            format!("not minimal at n={failures:?}")
        },
    })
}

/// Randomized minimal cutsets must be connected at the cycle-space scale:
/// a minimal (a,b)-cutset cannot split into parts further apart than the
/// longest generating cycle reaches.
fn timar_row(
    g: &FiniteGraph,
    profile: &MetricProfile,
    delta_upper: Option<u32>,
    instances: u32,
    seed: u64,
) -> Result<LabRow> {
    let spec = g.spec_string();
    let Some(r) = delta_upper else {
        return Ok(LabRow::info(
            "minimal-cutset-connectivity",
            spec,
            String::new(),
            f64::NAN,
            f64::NAN,
            "cycle-space bracket undetermined within budget; connectivity not graded".into(),
        ));
    };
    if profile.diameter < 2 {
        return Ok(LabRow::info(
            "minimal-cutset-connectivity",
            spec,
            String::new(),
            f64::NAN,
            f64::NAN,
            "graph too small for a separating sphere".into(),
        ));
    }
    let mut rng = derive_rng(seed, STREAM_GENERIC, 0);
    let n = g.vertex_count();
    let mut checked = 0;
    let mut disconnected = 0;
    for _ in 0..instances {
        let a = rng.gen_range(0..n);
        let dist = metric_profile(g, a);
        let far: Vec<u32> = members_with(&dist, |d| d >= 2);
        let b = far[rng.gen_range(0..far.len())];
        let radius = rng.gen_range(1..dist.distances[b as usize]);
        let mut order = sphere(g, a, f64::from(radius))?;
        order.shuffle(&mut rng);
        let cutset = shrink_to_minimal_cutset(g, &order, &[a], &[b])?;
        checked += 1;
        if !is_r_connected(g, &cutset, r)?.connected {
            disconnected += 1;
        }
    }
    Ok(LabRow {
        check: "minimal-cutset-connectivity".into(),
        graph: spec.into(),
        params: format!("instances={checked} r={r}"),
        lhs: f64::from(disconnected),
        rhs: 0.0,
        margin: 0.0,
        verdict: if disconnected == 0 { Verdict::Pass } else { Verdict::Fail },
        note: format!("{checked} randomized minimal cutsets checked at connectivity scale {r}"),
    })
}

fn members_with(profile: &MetricProfile, keep: impl Fn(u32) -> bool) -> Vec<u32> {
    profile
        .distances
        .iter()
        .enumerate()
        .filter(|(_, &d)| keep(d))
        .map(|(v, _)| v as u32)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labs::Tolerances;

    fn manifest(graphs: &[&str]) -> ExperimentManifest {
        ExperimentManifest {
            experiment: String::new(),
            graphs: graphs.iter().map(|s| s.to_string()).collect(),
            p_values: vec![],
            scales: vec![],
            alpha_levels: vec![],
            delta_sprinkles: vec![],
            trials: 1,
            base_seed: 19,
            tolerances: Tolerances { timar_instances: 8, ..Tolerances::default() },
        }
    }

    #[test]
    fn long_cycle_is_circle_like_fast() {
        let report = lab_geometry_audit(&manifest(&["cycle:64"])).unwrap();
        let row = report.find_row("one-dimensionality", "cycle:64").unwrap();
        assert!(row.note.contains("circle-like fast"), "note: {}", row.note);
        for check in ["ball-removal", "exposed-sphere-minimal", "minimal-cutset-connectivity"] {
            let row = report.find_row(check, "cycle:64").unwrap();
            assert_eq!(row.verdict, Verdict::Pass, "{check}: {}", row.note);
        }
        assert_eq!(report.aggregate, Verdict::Pass);
    }

    #[test]
    fn small_torus_reports_exact_cycle_space() {
        let report = lab_geometry_audit(&manifest(&["torus:4x4"])).unwrap();
        let row = report.find_row("cycle-space-bracket", "torus:4x4").unwrap();
        assert_eq!(row.lhs, 2.0);
        assert_eq!(row.rhs, 2.0);
        let timar = report.find_row("minimal-cutset-connectivity", "torus:4x4").unwrap();
        assert_eq!(timar.verdict, Verdict::Pass, "{}", timar.note);
    }

    #[test]
    fn tiny_graphs_report_unchecked_scales() {
        let report = lab_geometry_audit(&manifest(&["cycle:4"])).unwrap();
        let ball = report.find_row("ball-removal", "cycle:4").unwrap();
        assert_eq!(ball.verdict, Verdict::Info);
        let sandwich = report.find_row("circle-certificate-sandwich", "cycle:4").unwrap();
        assert_eq!(sandwich.verdict, Verdict::Pass);
    }

    #[test]
    fn scale_cap_limits_the_radius_sweep() {
        let mut m = manifest(&["cycle:64"]);
        m.scales = vec![2];
        let report = lab_geometry_audit(&m).unwrap();
        let row = report.find_row("ball-removal", "cycle:64").unwrap();
        assert_eq!(row.params, "r=1..2");
    }
}
