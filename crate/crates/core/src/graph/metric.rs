//! BFS-exact metric structure: distances, growth, balls, spheres.
//!
//! All radius parameters accept reals; non-integer radii are floored.

use std::collections::VecDeque;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::graph::{FiniteGraph, VertexId};

/// Rooted distance table with growth sequence.
///
/// `growth[n]` counts vertices at distance <= n; `growth[diameter] = |V|`.
/// The diameter is the root's eccentricity, which equals the graph diameter
/// for the transitive generated families. Set `PERC_LAB_VERIFY_DIAMETER=1`
/// to recompute it as all-pairs eccentricity on graphs with |V| <= 2000.
#[derive(Debug, Clone, Serialize)]
pub struct MetricProfile {
    pub root: VertexId,
    pub distances: Vec<u32>,
    pub growth: Vec<u64>,
    pub diameter: u32,
}

impl MetricProfile {
    #[must_use]
    pub fn dist(&self, v: VertexId) -> u32 {
        self.distances[v as usize]
    }

    /// Gr(n): vertices at distance <= n, clamped to |V| past the diameter.
    #[must_use]
    pub fn growth_at(&self, n: u32) -> u64 {
        let i = (n as usize).min(self.growth.len() - 1);
        self.growth[i]
    }
}

/// Single-source BFS distances.
pub(crate) fn bfs_distances(g: &FiniteGraph, root: VertexId) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.vertex_count() as usize];
    let mut queue = VecDeque::from([root]);
    dist[root as usize] = 0;
    while let Some(v) = queue.pop_front() {
        let d = dist[v as usize];
        for &u in g.neighbors(v) {
            if dist[u as usize] == u32::MAX {
                dist[u as usize] = d + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

/// BFS-exact distances, growth table, and diameter from `root`.
pub fn metric_profile(g: &FiniteGraph, root: VertexId) -> MetricProfile {
    assert!(root < g.vertex_count(), "root {root} out of range");
    let distances = bfs_distances(g, root);
    let diameter = *distances.iter().max().expect("nonempty graph");
    let mut growth = vec![0u64; diameter as usize + 1];
    for &d in &distances {
        growth[d as usize] += 1;
    }
    for i in 1..growth.len() {
        growth[i] += growth[i - 1];
    }
    if verify_diameter_enabled() && g.vertex_count() <= 2000 {
        let all_pairs = (0..g.vertex_count())
            .map(|v| *bfs_distances(g, v).iter().max().unwrap())
            .max()
            .unwrap();
        assert_eq!(
            all_pairs, diameter,
            "root eccentricity differs from all-pairs diameter on {} (graph not transitive?)",
            g.spec_string()
        );
    }
    MetricProfile { root, distances, growth, diameter }
}

fn verify_diameter_enabled() -> bool {
    static FLAG: OnceLock<bool> = OnceLock::new();
    *FLAG.get_or_init(|| std::env::var_os("PERC_LAB_VERIFY_DIAMETER").is_some())
}

pub(crate) fn floor_radius(r: f64) -> Result<u32> {
    if !r.is_finite() || r < 0.0 {
        return Err(invalid("r", format!("radius must be finite and >= 0, got {r}")));
    }
    Ok(r.floor().min(u32::MAX as f64) as u32)
}

/// B_r(root) as a sorted vertex list. Non-integer radii floor.
pub fn ball(g: &FiniteGraph, root: VertexId, r: f64) -> Result<Vec<VertexId>> {
    let r = floor_radius(r)?;
    let dist = bfs_distances(g, root);
    Ok((0..g.vertex_count()).filter(|&v| dist[v as usize] <= r).collect())
}

/// S_r(root) as a sorted vertex list; empty when floor(r) exceeds the
/// diameter.
pub fn sphere(g: &FiniteGraph, root: VertexId, r: f64) -> Result<Vec<VertexId>> {
    let r = floor_radius(r)?;
    let dist = bfs_distances(g, root);
    Ok((0..g.vertex_count()).filter(|&v| dist[v as usize] == r).collect())
}

/// Low-growth scale test: Gr(n) <= e^((log n)^exponent), compared in log
/// space. The literature's exponent of 100 is vacuous at desk scale, so it
/// is a parameter (default 100 upstream) to make the predicate exercisable.
pub fn is_low_growth(g: &FiniteGraph, n: u32, exponent: f64) -> Result<bool> {
    if n < 3 {
        return Err(invalid("n", format!("low-growth scales start at 3, got {n}")));
    }
    if !(exponent > 1.0) {
        return Err(invalid("exponent", format!("need exponent > 1, got {exponent}")));
    }
    let growth = metric_profile(g, 0).growth_at(n);
    Ok((growth as f64).ln() <= (n as f64).ln().powf(exponent))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_profile() {
        let g = FiniteGraph::generate("cycle:6").unwrap();
        let mp = metric_profile(&g, 0);
        assert_eq!(mp.distances, vec![0, 1, 2, 3, 2, 1]);
        assert_eq!(mp.diameter, 3);
        assert_eq!(mp.growth, vec![1, 3, 5, 6]);
    }

    #[test]
    fn torus_growth() {
        let g = FiniteGraph::generate("torus:8x8").unwrap();
        let mp = metric_profile(&g, 0);
        assert_eq!(mp.growth_at(1), 5);
        assert_eq!(mp.growth_at(2), 13);
        assert_eq!(mp.growth_at(100), 64);
    }

    #[test]
    fn stretched_torus_diameter() {
        let g = FiniteGraph::generate("torus:4x64").unwrap();
        assert_eq!(metric_profile(&g, 0).diameter, 34);
    }

    #[test]
    fn torus_diameter_is_sum_of_axis_radii() {
        for (spec, want) in [("torus:4x4", 4), ("torus:8x8", 8), ("torus:3x5x7", 1 + 2 + 3)] {
            let g = FiniteGraph::generate(spec).unwrap();
            assert_eq!(metric_profile(&g, 0).diameter, want, "{spec}");
        }
    }

    #[test]
    fn sphere_and_ball() {
        let g = FiniteGraph::generate("cycle:12").unwrap();
        assert_eq!(sphere(&g, 0, 2.0).unwrap(), vec![2, 10]);
        assert_eq!(sphere(&g, 0, 2.9).unwrap(), vec![2, 10]);
        assert_eq!(sphere(&g, 0, 7.0).unwrap(), Vec::<VertexId>::new());
        assert_eq!(ball(&g, 0, 0.0).unwrap(), vec![0]);
        assert_eq!(sphere(&g, 0, 0.0).unwrap(), vec![0]);
        assert_eq!(ball(&g, 0, 1.5).unwrap(), vec![0, 1, 11]);
        assert!(ball(&g, 0, -1.0).is_err());
        assert!(ball(&g, 0, f64::NAN).is_err());
    }

    #[test]
    fn low_growth_predicate() {
        let torus = FiniteGraph::generate("torus:64x64").unwrap();
        assert!(is_low_growth(&torus, 10, 100.0).unwrap());
        let cycle = FiniteGraph::generate("cycle:100").unwrap();
        assert!(is_low_growth(&cycle, 50, 100.0).unwrap());
        // Gr(3) = 7 on a cycle exceeds e^{(log 3)^2} ~ 3.35.
        assert!(!is_low_growth(&cycle, 3, 2.0).unwrap());
        assert!(is_low_growth(&cycle, 3, 1.0).is_err());
        assert!(is_low_growth(&cycle, 2, 100.0).is_err());
    }

    #[test]
    fn growth_matches_sphere_sizes() {
        let g = FiniteGraph::generate("torus:4x64").unwrap();
        let mp = metric_profile(&g, 0);
        for n in 1..=mp.diameter {
            let s = sphere(&g, 0, n as f64).unwrap().len() as u64;
            assert_eq!(mp.growth_at(n) - mp.growth_at(n - 1), s);
        }
    }
}
