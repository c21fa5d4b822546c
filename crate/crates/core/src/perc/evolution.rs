//! Single-pass cluster evolution over a weight sample.
//!
//! Inserting edges in weight order sweeps the whole parameter range of the
//! monotone coupling in one union-find pass: the configuration after s steps
//! equals the threshold configuration at any p between breakpoint s and
//! breakpoint s+1. All fixed-sample curve queries (largest cluster, second
//! largest, density jumps, per-sample critical points) read off this curve.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::Serialize;

use super::sample::{clamp_unit, PercolationSample};
use super::unionfind::DisjointSets;
use crate::error::{invalid, Result};
use crate::graph::FiniteGraph;

/// Full evolution of cluster statistics over one weight sample.
#[derive(Clone, Debug, Serialize)]
pub struct EvolutionCurve {
    /// Sorted edge weights; crossing breakpoint i opens one more edge.
    pub breakpoints: Vec<f64>,
    /// Largest cluster size after s edges are open, s = 0..=|E|.
    pub k1_at_step: Vec<u32>,
    /// Second largest cluster size after s edges; 0 once a single cluster
    /// covers the graph.
    pub k2_at_step: Vec<u32>,
    vertex_count: u32,
}

/// Builds the evolution curve by inserting edges in increasing weight order.
///
/// The second-largest size is tracked exactly with a lazy max-heap: every
/// merge pushes the surviving (size, root) pair, and stale entries (root no
/// longer a root, or size outdated) are discarded when they surface.
pub fn evolution_curve(g: &FiniteGraph, sample: &PercolationSample) -> EvolutionCurve {
    let n = g.vertex_count();
    let m = g.edge_count() as usize;
    let mut order: Vec<u32> = (0..m as u32).collect();
    order.sort_unstable_by(|&a, &b| {
        sample.weights[a as usize]
            .partial_cmp(&sample.weights[b as usize])
            .expect("weights are never NaN")
            .then(a.cmp(&b))
    });

    let mut ds = DisjointSets::new(n);
    let mut heap: BinaryHeap<(u32, Reverse<u32>)> = BinaryHeap::with_capacity(n as usize + m);
    for v in 0..n {
        heap.push((1, Reverse(v)));
    }
    let mut k1_at_step = Vec::with_capacity(m + 1);
    let mut k2_at_step = Vec::with_capacity(m + 1);
    let mut k1 = 1u32.min(n);
    k1_at_step.push(k1);
    k2_at_step.push(second_largest(&mut ds, &mut heap));
    for &e in &order {
        let (u, v) = g.endpoints(e);
        if let Some(root) = ds.union(u, v) {
            let size = ds.root_size(root);
            k1 = k1.max(size);
            heap.push((size, Reverse(root)));
            k2_at_step.push(second_largest(&mut ds, &mut heap));
        } else {
            k2_at_step.push(*k2_at_step.last().expect("step 0 exists"));
        }
        k1_at_step.push(k1);
    }
    EvolutionCurve {
        breakpoints: order.iter().map(|&e| sample.weights[e as usize]).collect(),
        k1_at_step,
        k2_at_step,
        vertex_count: n,
    }
}

/// Current second-largest cluster size. Pops stale heap entries, then peeks
/// past the maximum; pushed entries are restored so the heap stays complete.
fn second_largest(ds: &mut DisjointSets, heap: &mut BinaryHeap<(u32, Reverse<u32>)>) -> u32 {
    let top = match pop_live(ds, heap) {
        Some(t) => t,
        None => return 0,
    };
    let second = pop_live(ds, heap);
    let value = second.map_or(0, |(s, _)| s);
    heap.push(top);
    if let Some(entry) = second {
        heap.push(entry);
    }
    value
}

fn pop_live(
    ds: &mut DisjointSets,
    heap: &mut BinaryHeap<(u32, Reverse<u32>)>,
) -> Option<(u32, Reverse<u32>)> {
    while let Some(&(size, Reverse(root))) = heap.peek() {
        if ds.is_root(root) && ds.root_size(root) == size {
            return heap.pop();
        }
        heap.pop();
    }
    None
}

impl EvolutionCurve {
    pub fn vertex_count(&self) -> u32 {
        self.vertex_count
    }

    /// Number of edges open at parameter p (clamped), i.e. weights <= p.
    pub fn steps_open_at(&self, p: f64) -> usize {
        let p = clamp_unit(p);
        self.breakpoints.partition_point(|&w| w <= p)
    }

    /// Largest cluster size at parameter p on this sample.
    pub fn k1_at(&self, p: f64) -> u32 {
        self.k1_at_step[self.steps_open_at(p)]
    }

    /// Second largest cluster size at parameter p on this sample.
    pub fn k2_at(&self, p: f64) -> u32 {
        self.k2_at_step[self.steps_open_at(p)]
    }

    /// Largest cluster density at parameter p on this sample.
    pub fn alpha_at(&self, p: f64) -> f64 {
        self.k1_at(p) as f64 / self.vertex_count as f64
    }

    /// Smallest p at which the largest cluster reaches the threshold, or
    /// None when even the fully open configuration stays below it.
    pub fn critical_p(&self, k1_threshold: u32) -> Option<f64> {
        let first = self
            .k1_at_step
            .partition_point(|&k1| k1 < k1_threshold);
        match first {
            0 => Some(0.0),
            s if s <= self.breakpoints.len() => Some(self.breakpoints[s - 1]),
            _ => None,
        }
    }

    /// Largest jump of the density curve over a window of width delta:
    /// sup over p of alpha(p + delta) - alpha(p), computed exactly.
    ///
    /// The supremum is attained either at p = 0 or with the window's right
    /// edge sitting on a breakpoint, so only |E| + 1 candidates exist.
    pub fn max_density_jump(&self, delta: f64) -> Result<f64> {
        if !(delta > 0.0) {
            return Err(invalid("delta", format!("window width {delta} must be positive")));
        }
        let alpha =
            |steps: usize| self.k1_at_step[steps] as f64 / self.vertex_count as f64;
        let mut best = alpha(self.steps_open_at(delta)) - alpha(0);
        for (i, &w) in self.breakpoints.iter().enumerate() {
            if w <= delta {
                continue; // window anchored at p = 0 already covers this jump
            }
            let hi = self.breakpoints.partition_point(|&x| x <= w);
            debug_assert!(hi > i);
            let lo = self.steps_open_at(w - delta);
            best = best.max(alpha(hi) - alpha(lo));
        }
        Ok(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perc::sample::{config_at, sample_weights};
    use crate::perc::{clusters, Config};

    #[test]
    fn endpoints_of_the_curve() {
        let g = FiniteGraph::generate("torus:4x4").unwrap();
        let s = sample_weights(&g, 2);
        let curve = evolution_curve(&g, &s);
        assert_eq!(curve.k1_at_step[0], 1);
        assert_eq!(curve.k2_at_step[0], 1);
        assert_eq!(*curve.k1_at_step.last().unwrap(), 16);
        assert_eq!(*curve.k2_at_step.last().unwrap(), 0);
        assert_eq!(curve.breakpoints.len(), 32);
        assert!(curve.breakpoints.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn curve_matches_direct_clustering() {
        let g = FiniteGraph::generate("torus:6x6").unwrap();
        let s = sample_weights(&g, 17);
        let curve = evolution_curve(&g, &s);
        for p in [0.0, 0.2, 0.45, 0.5, 0.55, 0.8, 1.0] {
            let rep = clusters(&g, &config_at(&s, p));
            assert_eq!(curve.k1_at(p), rep.k1, "k1 at p={p}");
            assert_eq!(curve.k2_at(p), rep.k2, "k2 at p={p}");
        }
    }

    #[test]
    fn k2_drops_to_zero_only_when_spanning() {
        let g = FiniteGraph::generate("cycle:12").unwrap();
        let s = sample_weights(&g, 23);
        let curve = evolution_curve(&g, &s);
        for (step, &k2) in curve.k2_at_step.iter().enumerate() {
            assert_eq!(k2 == 0, curve.k1_at_step[step] == 12, "step {step}");
        }
    }

    #[test]
    fn critical_p_is_the_first_reaching_weight() {
        let g = FiniteGraph::generate("cycle:4").unwrap();
        let s = sample_weights(&g, 5);
        let curve = evolution_curve(&g, &s);
        assert_eq!(curve.critical_p(1), Some(0.0));
        assert_eq!(curve.critical_p(5), None);
        let p = curve.critical_p(3).unwrap();
        assert!(curve.k1_at(p) >= 3);
        // Just below the critical weight the threshold is not yet met.
        assert!(curve.k1_at(p - 1e-12) < 3);
    }

    #[test]
    fn density_jump_window_of_width_one() {
        let g = FiniteGraph::generate("torus:4x4").unwrap();
        let s = sample_weights(&g, 8);
        let curve = evolution_curve(&g, &s);
        let j = curve.max_density_jump(1.0).unwrap();
        assert!((j - 15.0 / 16.0).abs() < 1e-12);
        assert!(curve.max_density_jump(0.0).is_err());
    }

    #[test]
    fn density_jump_matches_grid_scan() {
        let g = FiniteGraph::generate("torus:4x4").unwrap();
        let s = sample_weights(&g, 13);
        let curve = evolution_curve(&g, &s);
        let delta = 0.05;
        let exact = curve.max_density_jump(delta).unwrap();
        let mut scanned: f64 = 0.0;
        for i in 0..=2000 {
            let p = i as f64 / 2000.0;
            scanned = scanned.max(curve.alpha_at(p + delta) - curve.alpha_at(p));
        }
        assert!(exact >= scanned - 1e-12);
        // The scan hits every breakpoint within 5e-4, so it cannot lag far.
        assert!(exact <= scanned + 1.0 / 16.0 + 1e-12);
    }

    #[test]
    fn explicit_ladder_tracks_k2_exactly() {
        // Path-like growth on cycle:6 via explicit configs at each step.
        let g = FiniteGraph::generate("cycle:6").unwrap();
        let s = sample_weights(&g, 3);
        let curve = evolution_curve(&g, &s);
        let mut order: Vec<u32> = (0..6).collect();
        order.sort_by(|&a, &b| s.weights[a as usize].partial_cmp(&s.weights[b as usize]).unwrap());
        for steps in 0..=6 {
            let cfg = Config::from_open_edges(&g, &order[..steps]).unwrap();
            let rep = clusters(&g, &cfg);
            assert_eq!(curve.k1_at_step[steps], rep.k1);
            assert_eq!(curve.k2_at_step[steps], rep.k2);
        }
    }
}
