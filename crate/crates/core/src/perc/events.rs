//! Configuration events beyond plain connectivity: two-arm separation,
//! pivotal-geometry events, and tube connection.

use std::collections::VecDeque;

use super::clusters::clusters;
use super::sample::Config;
use super::unionfind::DisjointSets;
use crate::error::{invalid, Error, Result};
use crate::graph::{bfs_distances, floor_radius, EdgeId, FiniteGraph, VertexId};

/// Two-arm event at edge e with volume n: the endpoints of e lie in distinct
/// clusters, each of size at least n. Distinctness forces e itself closed.
pub fn two_arm_event(g: &FiniteGraph, config: &Config, e: EdgeId, n: u32) -> bool {
    let (u, v) = g.endpoints(e);
    let rep = clusters(g, config);
    !rep.same_cluster(u, v) && rep.cluster_size_of(u) >= n && rep.cluster_size_of(v) >= n
}

/// Pivotal-geometry event at the root: at least two distinct clusters of the
/// configuration restricted to the ball B_n join B_m to the sphere S_n.
///
/// Fails with a scale error when S_n is empty, since "joining B_m to S_n" is
/// vacuous past the diameter.
pub fn piv_event(
    g: &FiniteGraph,
    config: &Config,
    root: VertexId,
    m: u32,
    n: u32,
) -> Result<bool> {
    if m >= n {
        return Err(invalid("m", format!("inner scale {m} must be below outer scale {n}")));
    }
    let dist = bfs_distances(g, root);
    if !dist.iter().any(|&d| d == n) {
        return Err(Error::ScaleInfeasible(format!(
            "sphere of radius {n} around vertex {root} is empty"
        )));
    }
    let (first, second) = crossing_min_dists(g, config, &dist, n);
    let _ = first;
    Ok(second.is_some_and(|d| d <= m))
}

/// Two smallest root-distances among clusters of the configuration
/// restricted to B_n that touch S_n. Returned ascending; None entries mean
/// fewer than one (resp. two) such clusters exist.
///
/// Shared by the pivotal event and the uniqueness-zone scan: the second
/// value being <= m is exactly the pivotal event at inner scale m, and
/// scanning it over m gives every inner scale at once.
pub(crate) fn crossing_min_dists(
    g: &FiniteGraph,
    config: &Config,
    dist: &[u32],
    n: u32,
) -> (Option<u32>, Option<u32>) {
    let vn = g.vertex_count() as usize;
    let mut ds = DisjointSets::new(g.vertex_count());
    for (e, &(u, v)) in g.edge_list().iter().enumerate() {
        if config.open[e] && dist[u as usize] <= n && dist[v as usize] <= n {
            ds.union(u, v);
        }
    }
    // Min distance per root, only for clusters touching the sphere.
    let mut min_dist = vec![u32::MAX; vn];
    for v in 0..vn as u32 {
        if dist[v as usize] == n {
            let r = ds.find(v) as usize;
            min_dist[r] = min_dist[r].min(dist[v as usize]);
        }
    }
    for v in 0..vn as u32 {
        if dist[v as usize] <= n {
            let r = ds.find(v) as usize;
            if min_dist[r] != u32::MAX {
                min_dist[r] = min_dist[r].min(dist[v as usize]);
            }
        }
    }
    let mut first = None;
    let mut second = None;
    for (r, &d) in min_dist.iter().enumerate() {
        if d == u32::MAX || !ds.is_root(r as u32) {
            continue;
        }
        if first.is_none() || d < first.unwrap() {
            second = first;
            first = Some(d);
        } else if second.is_none() || d < second.unwrap() {
            second = Some(d);
        }
    }
    (first, second)
}

/// Whether the two endpoints of a walk are joined by an open path that stays
/// inside the tube B_r(walk), the set of vertices within distance r of some
/// walk vertex.
pub fn tube_connected(
    g: &FiniteGraph,
    config: &Config,
    walk: &[VertexId],
    r: f64,
) -> Result<bool> {
    let r = floor_radius(r)?;
    if walk.is_empty() {
        return Err(invalid("walk", "walk must contain at least one vertex"));
    }
    for &v in walk {
        if v >= g.vertex_count() {
            return Err(invalid("walk", format!("vertex id {v} out of range")));
        }
    }
    for pair in walk.windows(2) {
        if g.edge_between(pair[0], pair[1]).is_none() {
            return Err(invalid(
                "walk",
                format!("vertices {} and {} are not adjacent", pair[0], pair[1]),
            ));
        }
    }
    let start = walk[0];
    let goal = *walk.last().expect("walk is nonempty");
    if start == goal {
        return Ok(true);
    }
    let inside = tube_membership(g, walk, r);
    // Open-edge search restricted to the tube.
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
                return Ok(true);
            }
            seen[y as usize] = true;
            queue.push_back(y);
        }
    }
    Ok(false)
}

/// Indicator of the tube B_r(walk) via multi-source BFS from walk vertices.
pub(crate) fn tube_membership(g: &FiniteGraph, walk: &[VertexId], r: u32) -> Vec<bool> {
    let mut dist = vec![u32::MAX; g.vertex_count() as usize];
    let mut queue = VecDeque::new();
    // Duplicate walk vertices enqueue once.
    for &v in walk {
        if dist[v as usize] != 0 {
            dist[v as usize] = 0;
            queue.push_back(v);
        }
    }
    while let Some(x) = queue.pop_front() {
        if dist[x as usize] == r {
            continue;
        }
        for &y in g.neighbors(x) {
            if dist[y as usize] == u32::MAX {
                dist[y as usize] = dist[x as usize] + 1;
                queue.push_back(y);
            }
        }
    }
    dist.into_iter().map(|d| d != u32::MAX).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_arm_needs_disjoint_large_clusters() {
        let g = FiniteGraph::generate("cycle:12").unwrap();
        // Open two arcs of length 3 on either side of the edge 0-1.
        let open: Vec<EdgeId> = [(1, 2), (2, 3), (3, 4), (0, 11), (11, 10), (10, 9)]
            .iter()
            .map(|&(a, b)| g.edge_between(a, b).unwrap())
            .collect();
        let cfg = Config::from_open_edges(&g, &open).unwrap();
        let e01 = g.edge_between(0, 1).unwrap();
        assert!(two_arm_event(&g, &cfg, e01, 4));
        assert!(!two_arm_event(&g, &cfg, e01, 5));
        // Joining the arcs kills the event at every volume.
        let mut joined = open.clone();
        joined.push(g.edge_between(4, 5).unwrap());
        joined.push(g.edge_between(5, 6).unwrap());
        joined.push(g.edge_between(6, 7).unwrap());
        joined.push(g.edge_between(7, 8).unwrap());
        joined.push(g.edge_between(8, 9).unwrap());
        let cfg2 = Config::from_open_edges(&g, &joined).unwrap();
        assert!(!two_arm_event(&g, &cfg2, e01, 1));
    }

    #[test]
    fn piv_event_counts_crossing_clusters() {
        let g = FiniteGraph::generate("cycle:12").unwrap();
        // Two disjoint arcs from B_1(0) out to S_4(0) = {4, 8}.
        let open: Vec<EdgeId> = [(1, 2), (2, 3), (3, 4), (11, 10), (10, 9), (9, 8)]
            .iter()
            .map(|&(a, b)| g.edge_between(a, b).unwrap())
            .collect();
        let cfg = Config::from_open_edges(&g, &open).unwrap();
        assert!(piv_event(&g, &cfg, 0, 1, 4).unwrap());
        // Inner scale 0 requires both arms to start at the root itself.
        assert!(!piv_event(&g, &cfg, 0, 0, 4).unwrap());
        // One arc removed leaves a single crossing cluster.
        let cfg_one = Config::from_open_edges(&g, &open[..3]).unwrap();
        assert!(!piv_event(&g, &cfg_one, 0, 1, 4).unwrap());
        assert!(piv_event(&g, &cfg, 0, 4, 4).is_err());
        assert!(piv_event(&g, &cfg, 0, 1, 9).is_err());
    }

    #[test]
    fn tube_connection_respects_the_radius() {
        let g = FiniteGraph::generate("torus:6x6").unwrap();
        // Walk along the top row from (0,0) to (0,3): vertices 0,1,2,3.
        let walk = [0u32, 1, 2, 3];
        // Open a detour through row 1: 0-6, 6-7, 7-8, 8-9, 9-3.
        let open: Vec<EdgeId> = [(0, 6), (6, 7), (7, 8), (8, 9), (3, 9)]
            .iter()
            .map(|&(a, b)| g.edge_between(a, b).unwrap())
            .collect();
        let cfg = Config::from_open_edges(&g, &open).unwrap();
        assert!(tube_connected(&g, &cfg, &walk, 1.0).unwrap());
        assert!(tube_connected(&g, &cfg, &walk, 1.9).unwrap());
        // Radius 0 restricts to the walk itself, where nothing is open.
        assert!(!tube_connected(&g, &cfg, &walk, 0.0).unwrap());
        assert!(tube_connected(&g, &cfg, &[5], 0.0).unwrap());
        assert!(tube_connected(&g, &cfg, &[0, 7], 1.0).is_err());
        assert!(tube_connected(&g, &cfg, &[], 1.0).is_err());
        assert!(tube_connected(&g, &cfg, &walk, -1.0).is_err());
    }

    #[test]
    fn degenerate_tube_detour_outside_radius_fails() {
        let g = FiniteGraph::generate("cycle:12").unwrap();
        // Endpoints 0 and 2; the only open route is the long way around.
        let long_way: Vec<EdgeId> = (2..12)
            .map(|i| g.edge_between(i, (i + 1) % 12).unwrap())
            .collect();
        let cfg = Config::from_open_edges(&g, &long_way).unwrap();
        let walk = [0u32, 1, 2];
        assert!(!tube_connected(&g, &cfg, &walk, 1.0).unwrap());
        // A radius big enough to swallow the cycle admits the long route.
        assert!(tube_connected(&g, &cfg, &walk, 6.0).unwrap());
    }
}
