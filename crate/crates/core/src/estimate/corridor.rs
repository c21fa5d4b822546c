//! Corridor function: tube-restricted connection along witness geodesics.
//!
//! The corridor function is an infimum over all paths of bounded length,
//! which is infeasible to enumerate. This estimator evaluates the
//! tube-restricted connection probability on a sampled family of geodesics
//! from the root and reports the minimum, an upper estimate of the true
//! infimum. On vertex-transitive graphs geodesics are the plausible
//! minimizers, and the report keeps the witness so a claim can be rechecked.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use super::{MCEstimate, DEFAULT_CONFIDENCE};
use crate::error::{invalid, Error, Result};
use crate::graph::{floor_radius, metric_profile, FiniteGraph, VertexId};
use crate::perc::rng::{derive_rng, STREAM_PATH};
use crate::perc::{config_at, sample_weights_trial, tube_membership, Config};
use rand_chacha::rand_core::RngCore;

/// Corridor estimate together with the witness path that attained it.
#[derive(Clone, Debug, Serialize)]
pub struct KappaReport {
    /// Minimum tube-restricted connection estimate over the sampled paths.
    pub estimate: MCEstimate,
    /// The minimizing geodesic, root first.
    pub witness: Vec<VertexId>,
    /// Path length actually used, after clamping to the diameter.
    pub length: u32,
    /// True when the requested length exceeded the diameter.
    pub clamped: bool,
    /// Tube radius (floored).
    pub tube_radius: u32,
    pub paths_evaluated: usize,
}

/// Upper estimate of the corridor function kappa_p(m, n): the minimum over
/// sampled geodesics of length min(m, diameter) of the probability that the
/// geodesic's endpoints connect inside the tube of radius n around it.
/// All paths are scored against the same trial configurations.
pub fn corridor_kappa(
    g: &FiniteGraph,
    p: f64,
    m: u64,
    n: f64,
    trials: u64,
    paths_budget: usize,
    seed: u64,
) -> Result<KappaReport> {
    if m < 1 {
        return Err(invalid("m", "corridor length must be >= 1"));
    }
    if paths_budget < 1 {
        return Err(invalid("paths_budget", "need at least one witness path"));
    }
    if trials < 1 {
        return Err(invalid("trials", "need at least one trial"));
    }
    let tube_radius = floor_radius(n)?;
    let profile = metric_profile(g, 0);
    let length = m.min(profile.diameter as u64) as u32;
    let dist = profile.distances;
    let mut layer: Vec<VertexId> = (0..g.vertex_count())
        .filter(|&v| dist[v as usize] == length)
        .collect();
    if layer.is_empty() {
        return Err(Error::NoPath(format!(
            "no vertex at distance {length} from the root on {}",
            g.spec_string()
        )));
    }

    // Distinct endpoints by partial Fisher-Yates over the sorted layer.
    let mut rng = derive_rng(seed, STREAM_PATH, 0);
    let picks = paths_budget.min(layer.len());
    for i in 0..picks {
        let j = i + (rng.next_u64() % (layer.len() - i) as u64) as usize;
        layer.swap(i, j);
    }
    let paths: Vec<Vec<VertexId>> = layer[..picks]
        .iter()
        .map(|&end| geodesic_to_root(g, &dist, end))
        .collect();
    let tubes: Vec<Vec<bool>> = paths
        .iter()
        .map(|path| tube_membership(g, path, tube_radius))
        .collect();

    let counts = (0..trials)
        .into_par_iter()
        .map(|t| {
            let sample = sample_weights_trial(g, seed, t);
            let cfg = config_at(&sample, p);
            paths
                .iter()
                .zip(tubes.iter())
                .map(|(path, tube)| {
                    open_path_exists(g, &cfg, tube, path[0], *path.last().unwrap()) as u64
                })
                .collect::<Vec<u64>>()
        })
        .reduce(
            || vec![0u64; paths.len()],
            |mut acc, row| {
                for (a, b) in acc.iter_mut().zip(row) {
                    *a += b;
                }
                acc
            },
        );

    let (best_idx, &successes) = counts
        .iter()
        .enumerate()
        .min_by_key(|&(i, &c)| (c, i))
        .expect("at least one path was sampled");
    Ok(KappaReport {
        estimate: MCEstimate::from_successes(successes, trials, DEFAULT_CONFIDENCE)?,
        witness: paths[best_idx].clone(),
        length,
        clamped: m > profile.diameter as u64,
        tube_radius,
        paths_evaluated: paths.len(),
    })
}

/// Geodesic from the root to `end`, following at each step the
/// smallest-id neighbor one layer closer to the root. Deterministic given
/// the graph.
fn geodesic_to_root(g: &FiniteGraph, dist: &[u32], end: VertexId) -> Vec<VertexId> {
    let mut path = vec![end];
    let mut cur = end;
    while dist[cur as usize] > 0 {
        let step = g
            .neighbors(cur)
            .iter()
            .copied()
            .find(|&u| dist[u as usize] + 1 == dist[cur as usize])
            .expect("BFS layers always have a predecessor");
        path.push(step);
        cur = step;
    }
    path.reverse();
    path
}

/// Whether an open path inside the marked vertex set joins start to goal.
fn open_path_exists(
    g: &FiniteGraph,
    config: &Config,
    inside: &[bool],
    start: VertexId,
    goal: VertexId,
) -> bool {
    if start == goal {
        return true;
    }
    let mut seen = vec![false; g.vertex_count() as usize];
    let mut queue = VecDeque::new();
    seen[start as usize] = true;
    queue.push_back(start);
    while let Some(x) = queue.pop_front() {
        for &y in g.neighbors(x) {
            if seen[y as usize] || !inside[y as usize] {
                continue;
            }
            let e = g.edge_between(x, y).expect("adjacency implies an edge id");
            if !config.open[e as usize] {
                continue;
            }
            if y == goal {
                return true;
            }
            seen[y as usize] = true;
            queue.push_back(y);
        }
    }
    false
}
