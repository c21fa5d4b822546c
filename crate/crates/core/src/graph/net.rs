//! Greedy 2r-separated nets with a spanning tree over a 5r proximity graph.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::graph::metric::bfs_distances;
use crate::graph::{FiniteGraph, VertexId};

/// A maximal 2r-separated center set whose B_2r balls cover the graph,
/// plus a spanning tree of the centers' 5r proximity graph.
///
/// Invariants: centers pairwise at distance >= 2r, every vertex within 2r
/// of a center, `parent[root] = root`, and the parent map connects all
/// centers through hops of length <= 5r.
#[derive(Debug, Clone, Serialize)]
pub struct Net {
    pub centers: Vec<VertexId>,
    pub parent: BTreeMap<VertexId, VertexId>,
    pub radius: u32,
}

/// Greedy maximal 2r-separated set seeded at the root, scanning vertices in
/// canonical order. Maximality makes the B_2r center balls cover V.
pub fn build_net(g: &FiniteGraph, r: f64) -> Result<Net> {
    if !r.is_finite() || r < 1.0 {
        return Err(invalid("r", format!("net radius must be >= 1, got {r}")));
    }
    let r = r.floor() as u32;
    let n = g.vertex_count() as usize;
    let sep = 2 * r;

    // Distance from each vertex to the nearest chosen center.
    let mut min_dist = vec![u32::MAX; n];
    let mut centers = Vec::new();
    let mut center_dists: Vec<Vec<u32>> = Vec::new();
    for v in 0..g.vertex_count() {
        if min_dist[v as usize] < sep {
            continue;
        }
        let dist = bfs_distances(g, v);
        for (slot, &d) in min_dist.iter_mut().zip(&dist) {
            *slot = (*slot).min(d);
        }
        centers.push(v);
        center_dists.push(dist);
    }

    // Spanning tree over the proximity graph (center pairs within 5r) by
    // BFS from the root center; connectivity holds because consecutive
    // centers along any path in G are within 2r + 2r + 1 <= 5r hops.
    let root = centers[0];
    let mut parent = BTreeMap::new();
    parent.insert(root, root);
    let mut queue = VecDeque::from([0usize]);
    while let Some(ci) = queue.pop_front() {
        for cj in 0..centers.len() {
            if parent.contains_key(&centers[cj]) {
                continue;
            }
            if center_dists[ci][centers[cj] as usize] <= 5 * r {
                parent.insert(centers[cj], centers[ci]);
                queue.push_back(cj);
            }
        }
    }
    if parent.len() != centers.len() {
        return Err(Error::Disconnected(format!(
            "net proximity graph on {} is disconnected at r = {r}",
            g.spec_string()
        )));
    }
    Ok(Net { centers, parent, radius: r })
}
