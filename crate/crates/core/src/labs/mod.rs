//! Named, reproducible experiments over the estimator stack.
//!
//! A lab takes an [`ExperimentManifest`], runs a fixed battery of checks,
//! and returns a [`LabReport`]: one row per check with both sides of the
//! inequality it probed, a statistical margin, and a verdict. Reports are a
//! pure function of the manifest; the wall-time provenance field is the only
//! thing that varies between reruns.
//!
//! Verdicts are three-valued on purpose. A row passes only when its claim
//! holds with room to spare at the confidence bracket's worst case, fails
//! only when even the best case violates it, and is `inconclusive` in
//! between, so an underpowered run can never launder noise into a pass.

mod density;
mod emergence;
mod geometry_audit;
mod inequality;
mod locality;
mod sharpness;

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::FiniteGraph;
use crate::perc::rng::splitmix64;

pub use density::lab_sharp_density;
pub use emergence::lab_gradual_emergence;
pub use geometry_audit::lab_geometry_audit;
pub use inequality::lab_inequality_suite;
pub use locality::lab_threshold_locality;
pub use sharpness::lab_sharpness_sweep;

/// Default base seed for lab runs; shared with the CLI default.
pub const DEFAULT_BASE_SEED: u64 = 0xC1C1E5EED;

/// Input to every lab: graph list, parameter grids, trial budget, seed, and
/// the tolerance knobs the checks compare against. Unused grids may stay
/// empty; each lab validates the ones it needs.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentManifest {
    /// Lab name this manifest is meant for; empty means "any".
    #[serde(default)]
    pub experiment: String,
    /// Graph spec strings, e.g. "torus:64x64".
    pub graphs: Vec<String>,
    /// Percolation parameters.
    #[serde(default)]
    pub p_values: Vec<f64>,
    /// Cluster-size / radius scales.
    #[serde(default)]
    pub scales: Vec<u32>,
    /// Density levels.
    #[serde(default)]
    pub alpha_levels: Vec<f64>,
    /// Sprinkling increments.
    #[serde(default)]
    pub delta_sprinkles: Vec<f64>,
    /// Monte Carlo trials (samples) per check.
    pub trials: u64,
    #[serde(default = "default_seed")]
    pub base_seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
}

fn default_seed() -> u64 {
    DEFAULT_BASE_SEED
}

/// Comparison thresholds for the lab checks, all overridable per manifest.
/// Numeric defaults are the shipped desk-scale values.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Largest allowed cross-size ratio of median |K_1|/log|V| below the
    /// threshold (sharpness).
    pub log_stability_factor: f64,
    /// Largest allowed cross-size spread of median giant density above the
    /// threshold (sharpness).
    pub density_spread: f64,
    /// Smallest supercritical median giant density (sharpness).
    pub density_floor: f64,
    /// Median density below which a parameter counts as subcritical
    /// (sharpness dichotomy classification).
    pub subcritical_ceiling: f64,
    /// Bracket width passed to the threshold solver (locality, density).
    pub solve_tol: f64,
    /// Window the largest square torus' threshold must land in (locality).
    pub q_window: (f64, f64),
    /// Threshold floor for stretched tori (locality).
    pub q_floor_stretched: f64,
    /// Threshold floor for cycles (locality).
    pub q_floor_cycle: f64,
    /// Slack allowed in the |q - 1/2| convergence comparison (locality).
    pub trend_slack: f64,
    /// Percolation parameter for the ghost-tail comparison (inequality).
    pub ghost_p: f64,
    /// Field strength h for the ghost-tail comparison (inequality).
    pub ghost_h: f64,
    /// Cluster-size threshold m for the ghost-tail comparison (inequality).
    pub ghost_m: u32,
    /// Percolation parameter for the two-arm decay check (inequality).
    pub two_arm_p: f64,
    /// Asserted ceiling for the two-arm ratio across a scale doubling
    /// (inequality).
    pub two_arm_ratio: f64,
    /// Percolation parameter for the tail-to-two-point check (inequality).
    pub pair_p: f64,
    /// Cluster-size threshold for the tail-to-two-point check (inequality).
    pub pair_n: u32,
    /// Cluster-size threshold n in the variance bound Var|X| <= n^2 E|X|
    /// (inequality).
    pub variance_n: u32,
    /// Success counts at or below this are treated as noise (inequality).
    pub noise_floor: u64,
    /// Median jump ceiling for square tori (emergence).
    pub emergence_upper: f64,
    /// Median jump floor for stretched graphs (emergence).
    pub emergence_lower: f64,
    /// Work budget for cycle-space bracketing (geometry).
    pub search_budget: u64,
    /// Randomized minimal-cutset instances per graph (geometry).
    pub timar_instances: u32,
    /// Largest fraction of inconclusive rows an aggregate pass tolerates.
    pub max_inconclusive: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            log_stability_factor: 2.0,
            density_spread: 0.05,
            density_floor: 0.2,
            subcritical_ceiling: 0.1,
            solve_tol: 0.01,
            q_window: (0.48, 0.53),
            q_floor_stretched: 0.7,
            q_floor_cycle: 0.95,
            trend_slack: 0.01,
            ghost_p: 0.6,
            ghost_h: 0.02,
            ghost_m: 100,
            two_arm_p: 0.5,
            two_arm_ratio: 0.75,
            pair_p: 0.55,
            pair_n: 50,
            variance_n: 50,
            noise_floor: 10,
            emergence_upper: 0.35,
            emergence_lower: 0.5,
            search_budget: 200_000_000,
            timar_instances: 20,
            max_inconclusive: 0.2,
        }
    }
}

impl ExperimentManifest {
    /// Parses a manifest from JSON and validates it.
    pub fn from_json(text: &str) -> Result<ExperimentManifest> {
        let manifest: ExperimentManifest = serde_json::from_str(text)
            .map_err(|e| invalid("manifest", format!("manifest does not parse: {e}")))?;
        manifest.validate()?;
        Ok(manifest)
    }

    /// Checks the manifest-level invariants: specs parse, grids hold legal
    /// values, trial count is positive. Grid presence is checked by each lab.
    pub fn validate(&self) -> Result<()> {
        if self.graphs.is_empty() {
            return Err(invalid("graphs", "manifest lists no graphs"));
        }
        for spec in &self.graphs {
            FiniteGraph::generate(spec)?;
        }
        if self.trials == 0 {
            return Err(invalid("trials", "need at least one trial"));
        }
        for &p in &self.p_values {
            if !(0.0..=1.0).contains(&p) {
                return Err(invalid("p_values", format!("parameter {p} outside [0,1]")));
            }
        }
        for &a in &self.alpha_levels {
            if !(0.0 < a && a <= 1.0) {
                return Err(invalid("alpha_levels", format!("level {a} outside (0,1]")));
            }
        }
        for &d in &self.delta_sprinkles {
            if !(0.0 < d && d <= 1.0) {
                return Err(invalid("delta_sprinkles", format!("sprinkle {d} outside (0,1]")));
            }
        }
        if !(0.0..=1.0).contains(&self.tolerances.max_inconclusive) {
            return Err(invalid("max_inconclusive", "fraction must lie in [0,1]"));
        }
        Ok(())
    }

    /// Errors unless the manifest's declared experiment matches `lab` (an
    /// empty declaration matches anything).
    pub fn expect_experiment(&self, lab: &str) -> Result<()> {
        if !self.experiment.is_empty() && self.experiment != lab {
            return Err(invalid(
                "experiment",
                format!("manifest is for '{}', not '{lab}'", self.experiment),
            ));
        }
        Ok(())
    }

    /// The graphs, generated in manifest order.
    pub(crate) fn generate_graphs(&self) -> Result<Vec<FiniteGraph>> {
        self.graphs.iter().map(|s| FiniteGraph::generate(s)).collect()
    }
}

/// Row outcome. `Info` rows report numbers without asserting anything and do
/// not count toward the aggregate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
    Info,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Info => "info",
        };
        f.write_str(s)
    }
}

/// One checked claim: `lhs <= rhs` with `margin` of statistical slack, or a
/// reported quantity when the verdict is `Info`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LabRow {
    /// What was checked, e.g. "two-arm-decay".
    pub check: String,
    /// Graph spec the check ran on.
    pub graph: String,
    /// Human-readable inputs, e.g. "p=0.5 n=8".
    pub params: String,
    pub lhs: f64,
    pub rhs: f64,
    /// Statistical allowance added to rhs when grading.
    pub margin: f64,
    pub verdict: Verdict,
    /// Free-form detail: witnesses, confidence brackets, skip reasons.
    pub note: String,
}

impl LabRow {
    /// An ungraded row reporting a quantity.
    pub(crate) fn info(
        check: &str,
        graph: &str,
        params: String,
        lhs: f64,
        rhs: f64,
        note: String,
    ) -> LabRow {
        LabRow {
            check: check.to_string(),
            graph: graph.to_string(),
            params,
            lhs,
            rhs,
            margin: 0.0,
            verdict: Verdict::Info,
            note,
        }
    }
}

/// Everything needed to reproduce a report, plus the one field that varies.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Provenance {
    pub experiment: String,
    pub base_seed: u64,
    pub code_version: String,
    /// Wall-clock duration of the run. Excluded from reproducibility
    /// comparisons; everything else in a report is seed-determined.
    pub wall_ms: u64,
}

/// A completed lab run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LabReport {
    pub provenance: Provenance,
    pub rows: Vec<LabRow>,
    pub aggregate: Verdict,
}

impl LabReport {
    pub(crate) fn finish(
        experiment: &str,
        manifest: &ExperimentManifest,
        rows: Vec<LabRow>,
        started: Instant,
    ) -> LabReport {
        let aggregate = aggregate_verdict(&rows, manifest.tolerances.max_inconclusive);
        LabReport {
            provenance: Provenance {
                experiment: experiment.to_string(),
                base_seed: manifest.base_seed,
                code_version: env!("CARGO_PKG_VERSION").to_string(),
                wall_ms: started.elapsed().as_millis() as u64,
            },
            rows,
            aggregate,
        }
    }

    /// Process exit code contract: 0 pass, 1 fail, 2 inconclusive.
    pub fn exit_code(&self) -> i32 {
        match self.aggregate {
            Verdict::Pass | Verdict::Info => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields all serialize")
    }

    /// First row matching a check name, if any. Convenience for tests and
    /// for labs that feed on each other's numbers.
    pub fn find_row(&self, check: &str, graph: &str) -> Option<&LabRow> {
        self.rows.iter().find(|r| r.check == check && r.graph == graph)
    }
}

/// Zero fails and a bounded fraction of inconclusive graded rows pass; any
/// fail fails. Info rows are ungraded and do not count.
fn aggregate_verdict(rows: &[LabRow], max_inconclusive: f64) -> Verdict {
    let graded: Vec<&LabRow> = rows.iter().filter(|r| r.verdict != Verdict::Info).collect();
    if graded.iter().any(|r| r.verdict == Verdict::Fail) {
        return Verdict::Fail;
    }
    let inconclusive = graded.iter().filter(|r| r.verdict == Verdict::Inconclusive).count();
    if !graded.is_empty() && inconclusive as f64 > max_inconclusive * graded.len() as f64 {
        return Verdict::Inconclusive;
    }
    Verdict::Pass
}

/// Runs the named lab. Names match the CLI's `lab` subcommand.
pub fn run_lab(name: &str, manifest: &ExperimentManifest) -> Result<LabReport> {
    manifest.validate()?;
    manifest.expect_experiment(name)?;
    match name {
        "sharpness" => lab_sharpness_sweep(manifest),
        "locality" => lab_threshold_locality(manifest),
        "inequality" => lab_inequality_suite(manifest),
        "emergence" => lab_gradual_emergence(manifest),
        "density" => lab_sharp_density(manifest),
        "geometry" => lab_geometry_audit(manifest),
        other => Err(invalid("lab", format!("unknown lab '{other}'"))),
    }
}

/// All lab names `run_lab` accepts, in a stable order.
pub const LAB_NAMES: [&str; 6] =
    ["sharpness", "locality", "inequality", "emergence", "density", "geometry"];

/// Independent sub-seed for row group `index` of lab `lab_id`. Distinct
/// coordinates give unrelated streams, so checks never share randomness.
pub(crate) fn derive_seed(base_seed: u64, lab_id: u64, index: u64) -> u64 {
    let mut state = base_seed;
    let _ = splitmix64(&mut state);
    state ^= lab_id;
    let _ = splitmix64(&mut state);
    state ^= index;
    splitmix64(&mut state)
}

/// Coarse family classification by spec string, used where a lab applies
/// different expectations to converging and contrast families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Family {
    /// torus:NxN (and higher-dimensional tori with equal sides).
    SquareTorus,
    /// A torus with aspect ratio >= 16: long direction dominates.
    StretchedTorus,
    Cycle,
    Other,
}

pub(crate) fn classify_spec(spec: &str) -> Family {
    if let Some(rest) = spec.strip_prefix("cycle:") {
        if rest.parse::<u64>().is_ok() {
            return Family::Cycle;
        }
    }
    if let Some(rest) = spec.strip_prefix("torus:") {
        let sides: Vec<u64> = rest.split('x').filter_map(|s| s.parse().ok()).collect();
        if sides.len() >= 2 && sides.len() == rest.split('x').count() {
            let lo = *sides.iter().min().expect("sides nonempty");
            let hi = *sides.iter().max().expect("sides nonempty");
            if lo == hi {
                return Family::SquareTorus;
            }
            if hi >= 16 * lo {
                return Family::StretchedTorus;
            }
        }
    }
    Family::Other
}

/// Point estimate with a confidence interval, for quantile statistics.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Bracketed {
    pub point: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Empirical q-quantile of a sample with an order-statistic confidence
/// bracket. Sorts a copy; NaN values must not occur.
pub(crate) fn quantile_with_bracket(values: &[f64], q: f64) -> Bracketed {
    assert!(!values.is_empty(), "quantile of an empty sample");
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("sample values are never NaN"));
    let point_idx = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    let (lo, hi) =
        crate::estimate::solve::quantile_bracket(&sorted, q, crate::estimate::DEFAULT_CONFIDENCE);
    Bracketed {
        point: sorted[point_idx - 1],
        lo,
        hi,
    }
}

pub(crate) fn median_with_bracket(values: &[f64]) -> Bracketed {
    quantile_with_bracket(values, 0.5)
}

/// Grades `lhs <= rhs` when both sides carry confidence brackets: pass needs
/// the worst case to hold, fail needs even the best case to violate, and
/// anything the brackets cannot settle is inconclusive.
pub(crate) fn triage_le(lhs: Bracketed, rhs: Bracketed) -> Verdict {
    let point_ok = lhs.point <= rhs.point;
    let worst_ok = lhs.hi <= rhs.lo;
    let best_ok = lhs.lo <= rhs.hi;
    match (point_ok, worst_ok, best_ok) {
        (true, true, _) => Verdict::Pass,
        (false, _, false) => Verdict::Fail,
        _ => Verdict::Inconclusive,
    }
}

/// A known constant as a degenerate bracket.
pub(crate) fn exact(value: f64) -> Bracketed {
    Bracketed {
        point: value,
        lo: value,
        hi: value,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_manifest() -> ExperimentManifest {
        ExperimentManifest {
            experiment: String::new(),
            graphs: vec!["cycle:12".into()],
            p_values: vec![0.5],
            scales: vec![2],
            alpha_levels: vec![0.5],
            delta_sprinkles: vec![0.25],
            trials: 16,
            base_seed: 7,
            tolerances: Tolerances::default(),
        }
    }

    #[test]
    fn manifest_roundtrips_through_json() {
        let m = tiny_manifest();
        let text = serde_json::to_string(&m).unwrap();
        let back = ExperimentManifest::from_json(&text).unwrap();
        assert_eq!(back.graphs, m.graphs);
        assert_eq!(back.base_seed, 7);
        assert_eq!(back.tolerances.ghost_m, 100);
    }

    #[test]
    fn minimal_manifest_uses_defaults() {
        let m = ExperimentManifest::from_json(r#"{"graphs": ["cycle:8"], "trials": 4}"#).unwrap();
        assert_eq!(m.base_seed, DEFAULT_BASE_SEED);
        assert_eq!(m.tolerances.max_inconclusive, 0.2);
        assert!(m.p_values.is_empty());
    }

    #[test]
    fn bad_manifests_are_rejected() {
        for (text, what) in [
            (r#"{"graphs": [], "trials": 4}"#, "empty graph list"),
            (r#"{"graphs": ["cycle:two"], "trials": 4}"#, "unparsable spec"),
            (r#"{"graphs": ["cycle:8"], "trials": 0}"#, "zero trials"),
            (r#"{"graphs": ["cycle:8"], "trials": 4, "p_values": [1.5]}"#, "p out of range"),
            (
                r#"{"graphs": ["cycle:8"], "trials": 4, "delta_sprinkles": [0.0]}"#,
                "zero sprinkle",
            ),
            (r#"{"graphs": ["cycle:8"], "trials": 4, "bogus": 1}"#, "unknown field"),
        ] {
            assert!(ExperimentManifest::from_json(text).is_err(), "accepted {what}");
        }
    }

    #[test]
    fn experiment_name_must_match_when_present() {
        let mut m = tiny_manifest();
        m.experiment = "sharpness".into();
        assert!(m.expect_experiment("sharpness").is_ok());
        assert!(m.expect_experiment("density").is_err());
        m.experiment = String::new();
        assert!(m.expect_experiment("density").is_ok());
    }

    #[test]
    fn aggregate_follows_fail_then_inconclusive_rule() {
        let row = |verdict| LabRow {
            check: "c".into(),
            graph: "g".into(),
            params: String::new(),
            lhs: 0.0,
            rhs: 1.0,
            margin: 0.0,
            verdict,
            note: String::new(),
        };
        let pass = row(Verdict::Pass);
        let fail = row(Verdict::Fail);
        let inc = row(Verdict::Inconclusive);
        let info = row(Verdict::Info);
        assert_eq!(aggregate_verdict(&[pass.clone(), info.clone()], 0.2), Verdict::Pass);
        assert_eq!(
            aggregate_verdict(&[pass.clone(), fail.clone(), inc.clone()], 1.0),
            Verdict::Fail
        );
        // 1 inconclusive of 4 graded is 25% > 20%.
        assert_eq!(
            aggregate_verdict(
                &[pass.clone(), pass.clone(), pass.clone(), inc.clone()],
                0.2
            ),
            Verdict::Inconclusive
        );
        // Exactly at the bound counts as within it.
        assert_eq!(
            aggregate_verdict(
                &[pass.clone(), pass.clone(), pass.clone(), pass.clone(), inc.clone()],
                0.2
            ),
            Verdict::Pass
        );
        // Info rows alone pass vacuously.
        assert_eq!(aggregate_verdict(&[info.clone()], 0.2), Verdict::Pass);
    }

    #[test]
    fn triage_separates_certified_from_noise() {
        let b = |point: f64, lo: f64, hi: f64| Bracketed { point, lo, hi };
        assert_eq!(triage_le(b(0.2, 0.1, 0.3), b(0.6, 0.5, 0.7)), Verdict::Pass);
        assert_eq!(triage_le(b(0.8, 0.75, 0.85), b(0.6, 0.5, 0.7)), Verdict::Fail);
        // Overlapping brackets cannot be settled either way.
        assert_eq!(triage_le(b(0.55, 0.4, 0.7), b(0.6, 0.5, 0.7)), Verdict::Inconclusive);
        assert_eq!(triage_le(b(0.65, 0.5, 0.8), b(0.6, 0.45, 0.75)), Verdict::Inconclusive);
    }

    #[test]
    fn quantiles_use_order_statistics() {
        let values: Vec<f64> = (1..=100).map(f64::from).collect();
        let med = median_with_bracket(&values);
        assert_eq!(med.point, 50.0);
        assert!(med.lo >= 38.0 && med.lo <= 50.0);
        assert!(med.hi >= 50.0 && med.hi <= 62.0);
        let q9 = quantile_with_bracket(&values, 0.9);
        assert_eq!(q9.point, 90.0);
    }

    #[test]
    fn spec_classification_matches_shapes() {
        assert_eq!(classify_spec("torus:64x64"), Family::SquareTorus);
        assert_eq!(classify_spec("torus:4x4096"), Family::StretchedTorus);
        assert_eq!(classify_spec("torus:4x8"), Family::Other);
        assert_eq!(classify_spec("cycle:4096"), Family::Cycle);
        assert_eq!(classify_spec("circulant:30:2,3"), Family::Other);
    }

    #[test]
    fn derived_seeds_separate_labs_and_rows() {
        let a = derive_seed(1, 1, 0);
        let b = derive_seed(1, 1, 1);
        let c = derive_seed(1, 2, 0);
        let d = derive_seed(2, 1, 0);
        assert!(a != b && a != c && a != d && b != c);
        assert_eq!(a, derive_seed(1, 1, 0));
    }

    #[test]
    fn unknown_lab_name_is_an_error() {
        let m = tiny_manifest();
        assert!(run_lab("fireworks", &m).is_err());
    }
}
