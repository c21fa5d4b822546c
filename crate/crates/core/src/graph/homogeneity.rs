//! Sanity check that generated graphs look the same around every vertex.
//!
//! Full vertex-transitivity is guaranteed by construction for generated
//! specs; this check is a test aid that compares rooted r-balls for sampled
//! vertex pairs by explicit isomorphism search, so fixture graphs and
//! loader bugs surface quickly.

use crate::error::{invalid, Result};
use crate::graph::metric::bfs_distances;
use crate::graph::{FiniteGraph, VertexId};

/// Ball sizes past this make the isomorphism search unreasonable; affected
/// pairs are reported as skipped, not failed.
const MAX_BALL: usize = 40;

#[derive(Debug, Clone)]
pub struct HomogeneityReport {
    /// True when every checked pair had isomorphic rooted balls.
    pub homogeneous: bool,
    pub first_failure: Option<(VertexId, VertexId)>,
    /// Pairs that could not be checked, with the reason.
    pub skipped: Vec<((VertexId, VertexId), String)>,
}

/// Tests rooted-ball isomorphism B_r(u) =~ B_r(v) for each sampled pair.
pub fn check_local_homogeneity(
    g: &FiniteGraph,
    r: f64,
    sample_pairs: &[(VertexId, VertexId)],
) -> Result<HomogeneityReport> {
    if !r.is_finite() || r < 0.0 {
        return Err(invalid("r", format!("radius must be finite and >= 0, got {r}")));
    }
    let r = r.floor() as u32;
    let mut report =
        HomogeneityReport { homogeneous: true, first_failure: None, skipped: Vec::new() };
    for &(u, v) in sample_pairs {
        if u >= g.vertex_count() || v >= g.vertex_count() {
            return Err(invalid("sample_pairs", format!("vertex pair ({u},{v}) out of range")));
        }
        let bu = RootedBall::extract(g, u, r);
        let bv = RootedBall::extract(g, v, r);
        let size = bu.order.len().max(bv.order.len());
        if size > MAX_BALL {
            report.skipped.push(((u, v), format!(
                "ball size {size} exceeds isomorphism search limit {MAX_BALL}"
            )));
            continue;
        }
        if !rooted_isomorphic(&bu, &bv) {
            report.homogeneous = false;
            report.first_failure.get_or_insert((u, v));
        }
    }
    Ok(report)
}

/// Induced subgraph on B_r(root), vertices ordered by (distance, id) with
/// the root first, adjacency as bitmask rows.
struct RootedBall {
    order: Vec<VertexId>,
    dist: Vec<u32>,
    adj: Vec<u64>,
    degree: Vec<u32>,
}

impl RootedBall {
    fn extract(g: &FiniteGraph, root: VertexId, r: u32) -> RootedBall {
        let gdist = bfs_distances(g, root);
        let mut order: Vec<VertexId> =
            (0..g.vertex_count()).filter(|&v| gdist[v as usize] <= r).collect();
        order.sort_by_key(|&v| (gdist[v as usize], v));
        let index: std::collections::HashMap<VertexId, usize> =
            order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adj = vec![0u64; order.len()];
        let mut degree = vec![0u32; order.len()];
        // Bitmask rows only fit 64 vertices; larger balls are skipped by the
        // caller's size check before any isomorphism work.
        if order.len() <= 64 {
            for (i, &v) in order.iter().enumerate() {
                for &w in g.neighbors(v) {
                    if let Some(&j) = index.get(&w) {
                        adj[i] |= 1 << j;
                        degree[i] += 1;
                    }
                }
            }
        }
        let dist = order.iter().map(|&v| gdist[v as usize]).collect();
        RootedBall { order, dist, adj, degree }
    }
}

fn rooted_isomorphic(a: &RootedBall, b: &RootedBall) -> bool {
    let n = a.order.len();
    if n != b.order.len() {
        return false;
    }
    // Cheap invariant: the multiset of (distance, in-ball degree) must match.
    let profile = |ball: &RootedBall| {
        let mut p: Vec<(u32, u32)> =
            ball.dist.iter().copied().zip(ball.degree.iter().copied()).collect();
        p.sort_unstable();
        p
    };
    if profile(a) != profile(b) {
        return false;
    }
    // Backtracking over vertices in BFS-layer order, root pinned to root.
    let mut map = vec![usize::MAX; n];
    let mut used = 0u64;
    backtrack(a, b, 0, &mut map, &mut used)
}

fn backtrack(a: &RootedBall, b: &RootedBall, i: usize, map: &mut [usize], used: &mut u64) -> bool {
    let n = map.len();
    if i == n {
        return true;
    }
    for cand in 0..n {
        if *used & (1 << cand) != 0 {
            continue;
        }
        if b.dist[cand] != a.dist[i] || b.degree[cand] != a.degree[i] {
            continue;
        }
        if i == 0 && cand != 0 {
            // Roots must correspond (both are at local index 0).
            continue;
        }
        // Adjacency to already-mapped vertices must agree exactly.
        let mut ok = true;
        for j in 0..i {
            let a_edge = a.adj[i] & (1 << j) != 0;
            let b_edge = b.adj[cand] & (1 << map[j]) != 0;
            if a_edge != b_edge {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        map[i] = cand;
        *used |= 1 << cand;
        if backtrack(a, b, i + 1, map, used) {
            return true;
        }
        *used &= !(1 << cand);
        map[i] = usize::MAX;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_pairs(g: &FiniteGraph) -> Vec<(VertexId, VertexId)> {
        (1..g.vertex_count()).map(|v| (0, v)).collect()
    }

    #[test]
    fn cycle_is_homogeneous() {
        let g = FiniteGraph::generate("cycle:20").unwrap();
        let report = check_local_homogeneity(&g, 3.0, &all_pairs(&g)).unwrap();
        assert!(report.homogeneous);
        assert!(report.skipped.is_empty());
    }

    #[test]
    fn torus_is_homogeneous() {
        let g = FiniteGraph::generate("torus:6x6").unwrap();
        let report = check_local_homogeneity(&g, 2.0, &all_pairs(&g)).unwrap();
        assert!(report.homogeneous);
    }

    #[test]
    fn path_fixture_fails_at_endpoint() {
        let g = FiniteGraph::from_edge_list(5, &[(0, 1), (1, 2), (2, 3), (3, 4)], "fixture:path5")
            .unwrap();
        let report = check_local_homogeneity(&g, 1.0, &[(0, 2)]).unwrap();
        assert!(!report.homogeneous);
        assert_eq!(report.first_failure, Some((0, 2)));
    }

    #[test]
    fn oversized_ball_is_skipped_not_failed() {
        let g = FiniteGraph::generate("torus:8x8").unwrap();
        let report = check_local_homogeneity(&g, 10.0, &[(0, 1)]).unwrap();
        assert!(report.homogeneous);
        assert_eq!(report.skipped.len(), 1);
    }
}
