//! Correlation-inequality suite: four Monte Carlo checks of cluster-tail
//! comparisons.
//!
//! Each row estimates both sides of an inequality and asserts
//! LHS <= RHS + 3 sigma, with sigma the delta-method standard error of the
//! comparison. Checks whose estimates sit at the noise floor come back
//! `inconclusive`: zero observed signal is never allowed to pass.
//!
//! The four checks, named by what they measure:
//! - ghost-tail-comparison: reducing p by the ghost quantity mu and paying
//!   e^{-hm} shrinks the cluster-size tail.
//! - two-arm-decay: the probability that an edge separates two large
//!   clusters drops by a fixed factor when the volume scale quadruples.
//! - tail-to-two-point: volume tails lower-bound the two-point connection
//!   via positive association, up to the measured defect term.
//! - cluster-count-variance: the vertex count in large clusters has
//!   variance at most n^2 times its mean.

use std::time::Instant;

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::estimate::{mu_ph, tail_ko};
use crate::graph::{metric_profile, FiniteGraph};
use crate::perc::{clusters, config_at, sample_weights_trial};

use super::{derive_seed, ExperimentManifest, LabReport, LabRow, Tolerances, Verdict};

const LAB_ID: u64 = 3;

/// Runs all four inequality checks on every manifest graph.
pub fn lab_inequality_suite(manifest: &ExperimentManifest) -> Result<LabReport> {
    let started = Instant::now();
    manifest.validate()?;
    if manifest.scales.is_empty() {
        return Err(invalid("scales", "inequality needs a volume-scale grid for two-arm decay"));
    }
    if manifest.p_values.is_empty() {
        return Err(invalid("p_values", "inequality needs a parameter grid for the variance check"));
    }
    let graphs = manifest.generate_graphs()?;
    let tol = &manifest.tolerances;
    let mut rows = Vec::new();

    for (gi, g) in graphs.iter().enumerate() {
        let base = derive_seed(manifest.base_seed, LAB_ID, gi as u64);
        rows.push(ghost_tail_row(g, tol, manifest.trials, base)?);
        rows.extend(two_arm_rows(g, tol, &manifest.scales, manifest.trials, base));
        rows.push(pair_row(g, tol, manifest.trials, base));
        rows.extend(variance_rows(g, tol, &manifest.p_values, manifest.trials, base));
    }

    Ok(LabReport::finish("inequality", manifest, rows, started))
}

/// Tail comparison under a ghost-reduced parameter:
/// P_{(1-mu)p}(|K_o| >= m) <= P_p(|K_o| >= m) e^{-hm} / (1-mu).
fn ghost_tail_row(
    g: &FiniteGraph,
    tol: &Tolerances,
    trials: u64,
    base: u64,
) -> Result<LabRow> {
    let (p, h, m) = (tol.ghost_p, tol.ghost_h, tol.ghost_m);
    let spec = g.spec_string();
    let params = format!("p={p} h={h} m={m}");
    if p == 1.0 {
        // Both tails are identically 1 and the comparison is vacuous.
        return Ok(LabRow::info(
            "ghost-tail-comparison",
            spec,
            params,
            1.0,
            1.0,
            "skipped: degenerate at p=1".into(),
        ));
    }
    let mu = mu_ph(g, p, h, trials, derive_seed(base, 10, 0))?;
    if mu.point >= 1.0 {
        return Ok(LabRow {
            check: "ghost-tail-comparison".into(),
            graph: spec.into(),
            params,
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: 0.0,
            verdict: Verdict::Inconclusive,
            note: "ghost estimate saturated at 1; the right side is unbounded".into(),
        });
    }
    let reduced = (1.0 - mu.point) * p;
    let lhs = tail_ko(g, reduced, m, trials, derive_seed(base, 10, 1))?;
    let baseline = tail_ko(g, p, m, trials, derive_seed(base, 10, 2))?;
    let shrink = f64::exp(-h * f64::from(m)) / (1.0 - mu.point);
    let rhs = baseline.point * shrink;
    // The right side carries two estimates: the baseline tail (scaled by
    // shrink) and mu, which enters through 1/(1-mu).
    let mu_sensitivity = rhs / (1.0 - mu.point);
    let sigma = (baseline.std_error() * shrink)
        .hypot(mu_sensitivity * mu.std_error())
        .hypot(lhs.std_error());
    let margin = 3.0 * sigma;
    let verdict = if baseline.successes <= tol.noise_floor {
        Verdict::Inconclusive
    } else if lhs.point <= rhs + margin {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(LabRow {
        check: "ghost-tail-comparison".into(),
        graph: spec.into(),
        params,
        lhs: lhs.point,
        rhs,
        margin,
        verdict,
        note: format!(
            "mu={:.4}, reduced p={reduced:.4}, baseline tail={:.4} ({} successes)",
            mu.point, baseline.point, baseline.successes
        ),
    })
}

/// Two-arm decay across a volume quadrupling:
/// P(T_{e,4n}) / P(T_{e,n}) <= ratio + 3 sigma, on shared samples.
fn two_arm_rows(
    g: &FiniteGraph,
    tol: &Tolerances,
    scales: &[u32],
    trials: u64,
    base: u64,
) -> Vec<LabRow> {
    let p = tol.two_arm_p;
    let (u, v) = g.endpoints(0);
    let spec = g.spec_string();
    let mut rows = Vec::new();
    for (ni, &n) in scales.iter().enumerate() {
        let seed = derive_seed(base, 20, ni as u64);
        let big = n.saturating_mul(4);
        let counts: [u64; 4] = mask_counts(trials, |t| {
            let sample = sample_weights_trial(g, seed, t);
            let rep = clusters(g, &config_at(&sample, p));
            let distinct = !rep.same_cluster(u, v);
            let (su, sv) = (rep.cluster_size_of(u), rep.cluster_size_of(v));
            let small_arms = distinct && su >= n && sv >= n;
            let big_arms = distinct && su >= big && sv >= big;
            usize::from(small_arms) | (usize::from(big_arms) << 1)
        });
        debug_assert_eq!(counts[2], 0, "the 4n event implies the n event");
        let nx = counts[1] + counts[3];
        let ny = counts[3] + counts[2];
        let params = format!("p={p} n={n} e=({u},{v})");
        if nx <= tol.noise_floor || ny <= tol.noise_floor {
            rows.push(LabRow {
                check: "two-arm-decay".into(),
                graph: spec.into(),
                params,
                lhs: f64::NAN,
                rhs: tol.two_arm_ratio,
                margin: 0.0,
                verdict: Verdict::Inconclusive,
                note: format!(
                    "below noise floor: {nx} and {ny} successes of {trials} trials"
                ),
            });
            continue;
        }
        let t = trials as f64;
        let px = nx as f64 / t;
        let py = ny as f64 / t;
        let ratio = py / px;
        // The 4n event is nested in the n event, which cancels most of the
        // shared-sample covariance; what remains of the relative variance is
        // (1-py)/py - (1-px)/px, never negative since py <= px.
        let rel_var = ((1.0 - py) / py - (1.0 - px) / px).max(0.0) / t;
        let margin = 3.0 * ratio * rel_var.sqrt();
        rows.push(LabRow {
            check: "two-arm-decay".into(),
            graph: spec.into(),
            params,
            lhs: ratio,
            rhs: tol.two_arm_ratio,
            margin,
            verdict: if ratio <= tol.two_arm_ratio + margin {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            note: format!("P(T_n)={px:.4} ({nx}), P(T_4n)={py:.4} ({ny})"),
        });
    }
    rows
}

/// Volume tails lower-bound the two-point function:
/// P(|K_o| >= n) P(|K_u| >= n) - P(both large, separated) <= P(o <-> u).
fn pair_row(g: &FiniteGraph, tol: &Tolerances, trials: u64, base: u64) -> LabRow {
    let (p, n) = (tol.pair_p, tol.pair_n);
    let spec = g.spec_string();
    let profile = metric_profile(g, 0);
    let far = profile
        .distances
        .iter()
        .position(|&d| d == profile.diameter)
        .expect("some vertex attains the diameter") as u32;
    let seed = derive_seed(base, 30, 0);
    let counts: [u64; 16] = mask_counts(trials, |t| {
        let sample = sample_weights_trial(g, seed, t);
        let rep = clusters(g, &config_at(&sample, p));
        let a = rep.cluster_size_of(0) >= n;
        let b = rep.cluster_size_of(far) >= n;
        let connected = rep.same_cluster(0, far);
        let split = a && b && !connected;
        usize::from(a)
            | (usize::from(b) << 1)
            | (usize::from(split) << 2)
            | (usize::from(connected) << 3)
    });
    let t = trials as f64;
    let prob_of = |bit: usize| bit_count(&counts, 1 << bit) as f64 / t;
    let (pa, pb, pc, pd) = (prob_of(0), prob_of(1), prob_of(2), prob_of(3));
    let pab = bit_count(&counts, 0b11) as f64 / t;
    let lhs = pa * pb - pc;
    // Split and connected partition the both-large event, so the graded
    // statistic is exactly pa*pb - pab. Its linearization cancels almost
    // completely when the tails are nearly independent, and the plug-in
    // variance of what remains is carried by the both-fail cell, which is
    // easily unseen at this sample size. Cauchy-Schwarz on the linear terms
    // gives a sound margin instead of an optimistic one.
    let sd_sum = pb * (pa * (1.0 - pa)).sqrt()
        + pa * (pb * (1.0 - pb)).sqrt()
        + (pab * (1.0 - pab)).sqrt();
    let margin = 3.0 * sd_sum / t.sqrt();
    let na = bit_count(&counts, 1);
    let nb = bit_count(&counts, 2);
    let verdict = if na <= tol.noise_floor || nb <= tol.noise_floor {
        Verdict::Inconclusive
    } else if lhs <= pd + margin {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    LabRow {
        check: "tail-to-two-point".into(),
        graph: spec.into(),
        params: format!("p={p} n={n} u=0 v={far}"),
        lhs,
        rhs: pd,
        margin,
        verdict,
        note: format!(
            "tails {pa:.4}/{pb:.4}, split-pair {pc:.4}, two-point {pd:.4} at distance {}",
            profile.diameter
        ),
    }
}

/// Variance bound for the vertex count in large clusters:
/// Var|X| <= n^2 E|X| with X = {u : |K_u| >= n}.
fn variance_rows(
    g: &FiniteGraph,
    tol: &Tolerances,
    p_values: &[f64],
    trials: u64,
    base: u64,
) -> Vec<LabRow> {
    let n = tol.variance_n;
    let spec = g.spec_string();
    let mut rows = Vec::new();
    for (pi, &p) in p_values.iter().enumerate() {
        let seed = derive_seed(base, 40, pi as u64);
        let params = format!("p={p} n={n}");
        if trials < 2 {
            rows.push(LabRow {
                check: "cluster-count-variance".into(),
                graph: spec.into(),
                params,
                lhs: f64::NAN,
                rhs: f64::NAN,
                margin: 0.0,
                verdict: Verdict::Inconclusive,
                note: "variance needs at least two trials".into(),
            });
            continue;
        }
        // Exact integer power sums of x = |X| per trial; x <= |V| keeps
        // x^4 far inside u128.
        let sums = (0..trials)
            .into_par_iter()
            .map(|t| {
                let sample = sample_weights_trial(g, seed, t);
                let rep = clusters(g, &config_at(&sample, p));
                let x: u128 = rep
                    .sizes
                    .iter()
                    .filter(|&&s| s >= n)
                    .map(|&s| u128::from(s))
                    .sum();
                [x, x * x, x * x * x, x * x * x * x]
            })
            .reduce(
                || [0u128; 4],
                |mut a, b| {
                    for (ai, bi) in a.iter_mut().zip(b) {
                        *ai += bi;
                    }
                    a
                },
            );
        let t = trials as f64;
        let raw: Vec<f64> = sums.iter().map(|&s| s as f64 / t).collect();
        let mean = raw[0];
        let m2 = raw[1] - mean * mean;
        let m4 = raw[3] - 4.0 * mean * raw[2] + 6.0 * mean * mean * raw[1]
            - 3.0 * mean.powi(4);
        let sample_var = m2 * t / (t - 1.0);
        let rhs = f64::from(n) * f64::from(n) * mean;
        let se_var = ((m4 - m2 * m2).max(0.0) / t).sqrt();
        let se_rhs = f64::from(n) * f64::from(n) * (m2.max(0.0) / t).sqrt();
        let margin = 3.0 * se_var.hypot(se_rhs);
        let verdict = if sums[0] == 0 {
            Verdict::Inconclusive
        } else if sample_var <= rhs + margin {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        rows.push(LabRow {
            check: "cluster-count-variance".into(),
            graph: spec.into(),
            params,
            lhs: sample_var,
            rhs,
            margin,
            verdict,
            note: format!("mean |X|={mean:.2}, sample variance={sample_var:.2}"),
        });
    }
    rows
}

/// Joint indicator-pattern counts over trials: slot k counts trials whose
/// indicator bitmask is k, so every moment of the indicators is an exact
/// integer ratio and parallel reduction order cannot matter.
fn mask_counts<const K: usize>(trials: u64, pattern: impl Fn(u64) -> usize + Sync) -> [u64; K] {
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut slot = [0u64; K];
            slot[pattern(t)] += 1;
            slot
        })
        .reduce(
            || [0u64; K],
            |mut a, b| {
                for (ai, bi) in a.iter_mut().zip(b) {
                    *ai += bi;
                }
                a
            },
        )
}

/// Trials whose pattern has all the bits of `mask` set.
fn bit_count<const K: usize>(counts: &[u64; K], mask: usize) -> u64 {
    counts
        .iter()
        .enumerate()
        .filter(|(k, _)| k & mask == mask)
        .map(|(_, &c)| c)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labs::Tolerances;

    fn manifest(graphs: &[&str], trials: u64, tolerances: Tolerances) -> ExperimentManifest {
        ExperimentManifest {
            experiment: String::new(),
            graphs: graphs.iter().map(|s| s.to_string()).collect(),
            p_values: vec![0.5],
            scales: vec![1],
            alpha_levels: vec![],
            delta_sprinkles: vec![],
            trials,
            base_seed: 17,
            tolerances,
        }
    }

    #[test]
    fn needs_scale_and_parameter_grids() {
        let mut m = manifest(&["cycle:12"], 8, Tolerances::default());
        m.scales.clear();
        assert!(lab_inequality_suite(&m).is_err());
        let mut m = manifest(&["cycle:12"], 8, Tolerances::default());
        m.p_values.clear();
        assert!(lab_inequality_suite(&m).is_err());
    }

    #[test]
    fn ghost_row_skips_degenerate_full_parameter() {
        let tol = Tolerances { ghost_p: 1.0, ..Tolerances::default() };
        let m = manifest(&["cycle:12"], 8, tol);
        let report = lab_inequality_suite(&m).unwrap();
        let row = report.find_row("ghost-tail-comparison", "cycle:12").unwrap();
        assert_eq!(row.verdict, Verdict::Info);
        assert!(row.note.contains("degenerate"));
    }

    #[test]
    fn ghost_row_passes_where_the_tail_is_visible() {
        let tol = Tolerances { ghost_p: 0.8, ghost_h: 0.05, ghost_m: 4, ..Tolerances::default() };
        let m = manifest(&["cycle:32"], 2000, tol);
        let report = lab_inequality_suite(&m).unwrap();
        let row = report.find_row("ghost-tail-comparison", "cycle:32").unwrap();
        assert_eq!(row.verdict, Verdict::Pass, "lhs {} rhs {} margin {}", row.lhs, row.rhs, row.margin);
    }

    #[test]
    fn impossible_big_arms_come_back_inconclusive() {
        // Two disjoint clusters of 8 vertices cannot fit in a 12-cycle, so
        // the 4n estimate has zero successes and the ratio is unpowered.
        let tol = Tolerances { two_arm_p: 0.5, ..Tolerances::default() };
        let mut m = manifest(&["cycle:12"], 400, tol);
        m.scales = vec![2];
        let report = lab_inequality_suite(&m).unwrap();
        let row = report.find_row("two-arm-decay", "cycle:12").unwrap();
        assert_eq!(row.verdict, Verdict::Inconclusive);
        assert!(row.note.contains("noise floor"));
    }

    #[test]
    fn pair_row_holds_on_a_dense_cycle() {
        let tol = Tolerances { pair_p: 0.9, pair_n: 3, ..Tolerances::default() };
        let m = manifest(&["cycle:12"], 3000, tol);
        let report = lab_inequality_suite(&m).unwrap();
        let row = report.find_row("tail-to-two-point", "cycle:12").unwrap();
        assert_ne!(row.verdict, Verdict::Fail, "lhs {} rhs {} margin {}", row.lhs, row.rhs, row.margin);
        assert!(row.lhs <= 1.0 && row.rhs <= 1.0);
    }

    #[test]
    fn variance_bound_holds_with_signal() {
        let tol = Tolerances { variance_n: 2, ..Tolerances::default() };
        let m = manifest(&["cycle:16"], 1000, tol);
        let report = lab_inequality_suite(&m).unwrap();
        let row = report.find_row("cluster-count-variance", "cycle:16").unwrap();
        assert_eq!(row.verdict, Verdict::Pass, "lhs {} rhs {}", row.lhs, row.rhs);
    }

    #[test]
    fn variance_at_full_parameter_is_exactly_zero() {
        let tol = Tolerances { variance_n: 2, ..Tolerances::default() };
        let mut m = manifest(&["cycle:16"], 64, tol);
        m.p_values = vec![1.0];
        let report = lab_inequality_suite(&m).unwrap();
        let row = report.find_row("cluster-count-variance", "cycle:16").unwrap();
        assert_eq!(row.lhs, 0.0);
        assert_eq!(row.verdict, Verdict::Pass);
    }

    #[test]
    fn mask_counting_is_exact() {
        // Pattern cycles 0,1,2,3 over 40 trials: ten of each.
        let counts: [u64; 4] = mask_counts(40, |t| (t % 4) as usize);
        assert_eq!(counts, [10, 10, 10, 10]);
        assert_eq!(bit_count(&counts, 0b01), 20);
        assert_eq!(bit_count(&counts, 0b11), 10);
        assert_eq!(bit_count(&counts, 0), 40);
    }
}
