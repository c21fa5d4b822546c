//! Weight samples, thresholded configurations, and ghost fields.

use rand_chacha::rand_core::RngCore;
use serde::Serialize;

use super::clusters::clusters;
use super::rng::{derive_rng, unit_open, STREAM_EDGE, STREAM_GHOST};
use crate::error::{invalid, Result};
use crate::graph::{EdgeId, FiniteGraph, VertexId};

/// One draw of i.i.d. uniform edge weights, the shared randomness behind the
/// monotone coupling: thresholding the same sample at increasing p yields
/// nested configurations.
#[derive(Clone, Debug, Serialize)]
pub struct PercolationSample {
    /// Weight per edge id, each strictly inside (0,1).
    pub weights: Vec<f64>,
    pub seed: u64,
    pub trial: u64,
}

/// A bond configuration: which edges are open.
#[derive(Clone, Debug, Serialize)]
pub struct Config {
    /// Open indicator per edge id.
    pub open: Vec<bool>,
    /// Parameter the configuration was thresholded at, or None when it was
    /// constructed from an explicit edge list.
    pub p: Option<f64>,
}

impl Config {
    /// Configuration opening exactly the listed edges.
    pub fn from_open_edges(g: &FiniteGraph, edges: &[EdgeId]) -> Result<Config> {
        let mut open = vec![false; g.edge_count() as usize];
        for &e in edges {
            let slot = open
                .get_mut(e as usize)
                .ok_or_else(|| invalid("edge", format!("edge id {e} out of range")))?;
            *slot = true;
        }
        Ok(Config { open, p: None })
    }

    pub fn open_count(&self) -> usize {
        self.open.iter().filter(|&&o| o).count()
    }

    pub fn open_edge_ids(&self) -> Vec<EdgeId> {
        (0..self.open.len() as EdgeId)
            .filter(|&e| self.open[e as usize])
            .collect()
    }
}

/// Independent ghost marks: each vertex is green with probability q.
#[derive(Clone, Debug, Serialize)]
pub struct GhostField {
    /// Green indicator per vertex id.
    pub green: Vec<bool>,
    pub q: f64,
    pub seed: u64,
    pub trial: u64,
}

/// Edge weights for trial 0 of the given seed.
pub fn sample_weights(g: &FiniteGraph, seed: u64) -> PercolationSample {
    sample_weights_trial(g, seed, 0)
}

/// Edge weights for an arbitrary trial index. Weight i is the i-th draw of
/// the (seed, edge-stream, trial) generator, so a single (graph, seed, trial)
/// triple pins the whole sample.
pub fn sample_weights_trial(g: &FiniteGraph, seed: u64, trial: u64) -> PercolationSample {
    let mut rng = derive_rng(seed, STREAM_EDGE, trial);
    let weights = (0..g.edge_count())
        .map(|_| unit_open(rng.next_u64()))
        .collect();
    PercolationSample {
        weights,
        seed,
        trial,
    }
}

/// Thresholds a sample at parameter p (clamped into [0,1]): open edges are
/// exactly those with weight <= p. Weights avoid 0 and 1, so p = 0 closes
/// everything and p = 1 opens everything.
pub fn config_at(sample: &PercolationSample, p: f64) -> Config {
    let p = clamp_unit(p);
    Config {
        open: sample.weights.iter().map(|&w| w <= p).collect(),
        p: Some(p),
    }
}

/// Ghost field for trial 0 of the given seed.
pub fn sample_ghost(g: &FiniteGraph, q: f64, seed: u64) -> Result<GhostField> {
    sample_ghost_trial(g, q, seed, 0)
}

/// Ghost field for an arbitrary trial index, drawn from a stream independent
/// of the edge weights so the product measure factorizes.
pub fn sample_ghost_trial(g: &FiniteGraph, q: f64, seed: u64, trial: u64) -> Result<GhostField> {
    if !(0.0..=1.0).contains(&q) {
        return Err(invalid("q", format!("ghost intensity {q} outside [0,1]")));
    }
    let mut rng = derive_rng(seed, STREAM_GHOST, trial);
    let green = (0..g.vertex_count())
        .map(|_| unit_open(rng.next_u64()) < q)
        .collect();
    Ok(GhostField {
        green,
        q,
        seed,
        trial,
    })
}

/// Whether v reaches a green vertex through open edges (v itself being green
/// counts: the path of length zero).
pub fn ghost_connected(
    g: &FiniteGraph,
    config: &Config,
    ghost: &GhostField,
    v: VertexId,
) -> bool {
    let report = clusters(g, config);
    let target = report.label_of(v);
    (0..g.vertex_count())
        .any(|u| ghost.green[u as usize] && report.label_of(u) == target)
}

/// Clamp into [0,1]; NaN maps to 0 so a malformed parameter opens nothing.
pub(crate) fn clamp_unit(p: f64) -> f64 {
    if p >= 1.0 {
        1.0
    } else if p > 0.0 {
        p
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle6() -> FiniteGraph {
        FiniteGraph::generate("cycle:6").unwrap()
    }

    #[test]
    fn weights_are_reproducible_and_open() {
        let g = cycle6();
        let a = sample_weights(&g, 41);
        let b = sample_weights(&g, 41);
        assert_eq!(a.weights, b.weights);
        assert_ne!(a.weights, sample_weights(&g, 42).weights);
        assert!(a.weights.iter().all(|&w| 0.0 < w && w < 1.0));
    }

    #[test]
    fn threshold_extremes_and_clamping() {
        let g = cycle6();
        let s = sample_weights(&g, 9);
        assert_eq!(config_at(&s, 0.0).open_count(), 0);
        assert_eq!(config_at(&s, -2.0).open_count(), 0);
        assert_eq!(config_at(&s, 1.0).open_count(), 6);
        let clamped = config_at(&s, 1.2);
        assert_eq!(clamped.open_count(), 6);
        assert_eq!(clamped.p, Some(1.0));
    }

    #[test]
    fn thresholds_are_monotone_in_p() {
        let g = FiniteGraph::generate("torus:8x8").unwrap();
        let s = sample_weights(&g, 3);
        let lo = config_at(&s, 0.3);
        let hi = config_at(&s, 0.7);
        for e in 0..g.edge_count() as usize {
            assert!(!lo.open[e] || hi.open[e]);
        }
    }

    #[test]
    fn explicit_config_round_trips() {
        let g = cycle6();
        let c = Config::from_open_edges(&g, &[0, 3]).unwrap();
        assert_eq!(c.open_edge_ids(), vec![0, 3]);
        assert_eq!(c.p, None);
        assert!(Config::from_open_edges(&g, &[6]).is_err());
    }

    #[test]
    fn ghost_extremes() {
        let g = cycle6();
        let none = sample_ghost(&g, 0.0, 5).unwrap();
        assert!(none.green.iter().all(|&b| !b));
        let all = sample_ghost(&g, 1.0, 5).unwrap();
        assert!(all.green.iter().all(|&b| b));
        assert!(sample_ghost(&g, 1.5, 5).is_err());
        assert!(sample_ghost(&g, f64::NAN, 5).is_err());
    }

    #[test]
    fn ghost_connection_uses_open_edges_only() {
        let g = cycle6();
        // Green at vertex 2 only; open edges 0-1 and 1-2.
        let mut ghost = sample_ghost(&g, 0.0, 1).unwrap();
        ghost.green[2] = true;
        let config = Config::from_open_edges(&g, &[0, 1]).unwrap();
        assert!(ghost_connected(&g, &config, &ghost, 0));
        assert!(ghost_connected(&g, &config, &ghost, 2));
        assert!(!ghost_connected(&g, &config, &ghost, 4));
    }
}
