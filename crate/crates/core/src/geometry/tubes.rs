//! Greedy packing of disjoint tubes between two vertex sets.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::graph::{metric_profile, sphere, FiniteGraph, VertexId};

/// Where tubes must start and end.
#[derive(Clone, Debug, Serialize)]
pub enum TubeEndpoints {
    /// From S_n(root) to S_{4n}(root); requires 4n <= diameter.
    Spheres,
    /// Two explicit disjoint crossing sets; `root` and `n` are recorded but
    /// play no role.
    Sets { a: Vec<VertexId>, b: Vec<VertexId> },
}

/// A family of paths with pairwise disjoint r-neighborhoods, each of length
/// at most l, found greedily (shortest first, deleting the 2r-neighborhood
/// of every extracted path). The count is a certified lower bound on the
/// maximum packing, with no optimality claim.
#[derive(Clone, Debug, Serialize)]
pub struct TubeFamily {
    pub n: u32,
    pub k: u32,
    pub r: u32,
    pub l: u32,
    pub endpoints: TubeEndpoints,
    /// Vertex sequences, extraction order (nondecreasing length).
    pub tubes: Vec<Vec<VertexId>>,
    /// Whether the family witnesses (k, r, l)-plentiful tubes: at least k
    /// tubes were found (each already has length <= l by construction).
    pub success: bool,
}

/// Greedy tube search between the endpoint sets.
///
/// Deleting the 2r-neighborhood of each extracted path keeps every later
/// path at graph distance > 2r, which is exactly disjointness of the
/// r-neighborhoods. Extraction stops when the shortest residual path
/// exceeds l, so every returned tube satisfies the length bound.
pub fn plentiful_tubes(
    g: &FiniteGraph,
    root: VertexId,
    n: u32,
    k: u32,
    r: u32,
    l: u32,
    endpoints: TubeEndpoints,
) -> Result<TubeFamily> {
    if root >= g.vertex_count() {
        return Err(invalid("root", format!("vertex {root} out of range")));
    }
    let (a, b) = match &endpoints {
        TubeEndpoints::Spheres => {
            if n == 0 {
                return Err(invalid("n", "sphere tubes need n >= 1"));
            }
            let diameter = metric_profile(g, root).diameter;
            if 4 * n > diameter {
                return Err(Error::ScaleInfeasible(format!(
                    "outer sphere radius {} exceeds the diameter {diameter}",
                    4 * n
                )));
            }
            (sphere(g, root, n as f64)?, sphere(g, root, 4.0 * n as f64)?)
        }
        TubeEndpoints::Sets { a, b } => {
            for (name, set) in [("a", a), ("b", b)] {
                if set.is_empty() {
                    return Err(invalid("endpoints", format!("endpoint set {name} is empty")));
                }
                if let Some(&v) = set.iter().find(|&&v| v >= g.vertex_count()) {
                    return Err(invalid("endpoints", format!("vertex {v} out of range")));
                }
            }
            if a.iter().any(|v| b.contains(v)) {
                return Err(invalid("endpoints", "endpoint sets must be disjoint"));
            }
            (a.clone(), b.clone())
        }
    };

    let mut alive = vec![true; g.vertex_count() as usize];
    let mut tubes = Vec::new();
    while let Some(path) = shortest_residual_path(g, &a, &b, &alive) {
        if path.len() as u32 - 1 > l {
            break;
        }
        // Kill B_2r(path) so the next path keeps distance > 2r.
        let mut depth = vec![u32::MAX; g.vertex_count() as usize];
        let mut queue = VecDeque::new();
        for &v in &path {
            depth[v as usize] = 0;
            alive[v as usize] = false;
            queue.push_back(v);
        }
        while let Some(v) = queue.pop_front() {
            if depth[v as usize] == 2 * r {
                continue;
            }
            for &u in g.neighbors(v) {
                if depth[u as usize] == u32::MAX {
                    depth[u as usize] = depth[v as usize] + 1;
                    alive[u as usize] = false;
                    queue.push_back(u);
                }
            }
        }
        tubes.push(path);
    }
    let success = tubes.len() as u32 >= k;
    Ok(TubeFamily { n, k, r, l, endpoints, tubes, success })
}

/// Shortest path from a to b through surviving vertices, or None.
fn shortest_residual_path(
    g: &FiniteGraph,
    a: &[VertexId],
    b: &[VertexId],
    alive: &[bool],
) -> Option<Vec<VertexId>> {
    let mut target = vec![false; g.vertex_count() as usize];
    for &v in b {
        if alive[v as usize] {
            target[v as usize] = true;
        }
    }
    let mut parent = vec![u32::MAX; g.vertex_count() as usize];
    let mut queue = VecDeque::new();
    for &v in a {
        if alive[v as usize] && parent[v as usize] == u32::MAX {
            parent[v as usize] = v;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        if target[v as usize] {
            let mut path = vec![v];
            let mut w = v;
            while parent[w as usize] != w {
                w = parent[w as usize];
                path.push(w);
            }
            path.reverse();
            return Some(path);
        }
        for &u in g.neighbors(v) {
            if alive[u as usize] && parent[u as usize] == u32::MAX {
                parent[u as usize] = v;
                queue.push_back(u);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::bfs_distances;

    /// Direct recomputation of the family invariants.
    fn audit(g: &FiniteGraph, fam: &TubeFamily, a: &[VertexId], b: &[VertexId]) {
        for path in &fam.tubes {
            assert!(path.len() as u32 - 1 <= fam.l, "tube too long");
            assert!(a.contains(path.first().unwrap()));
            assert!(b.contains(path.last().unwrap()));
            for w in path.windows(2) {
                assert!(g.edge_between(w[0], w[1]).is_some(), "not a path");
            }
        }
        for (i, t1) in fam.tubes.iter().enumerate() {
            for t2 in fam.tubes.iter().skip(i + 1) {
                let min_dist = t1
                    .iter()
                    .map(|&v| {
                        let d = bfs_distances(g, v);
                        t2.iter().map(|&u| d[u as usize]).min().unwrap()
                    })
                    .min()
                    .unwrap();
                assert!(min_dist > 2 * fam.r, "r-neighborhoods overlap");
            }
        }
    }

    #[test]
    fn cycle_arcs_pack_without_padding() {
        let g = FiniteGraph::generate("cycle:12").unwrap();
        let fam = plentiful_tubes(&g, 0, 1, 2, 0, 3, TubeEndpoints::Spheres).unwrap();
        assert_eq!(fam.tubes, vec![vec![1, 2, 3, 4], vec![11, 10, 9, 8]]);
        assert!(fam.success);
        audit(&g, &fam, &[1, 11], &[4, 8]);
    }

    #[test]
    fn cycle_arcs_collide_at_radius_one() {
        let g = FiniteGraph::generate("cycle:12").unwrap();
        // The two arc paths have 1-neighborhoods meeting at the root and at
        // the antipode side, so only one r=1 tube fits.
        let fam = plentiful_tubes(&g, 0, 1, 2, 1, 6, TubeEndpoints::Spheres).unwrap();
        assert_eq!(fam.tubes.len(), 1);
        assert!(!fam.success);
    }

    #[test]
    fn torus_fits_two_wide_tubes() {
        let g = FiniteGraph::generate("torus:16x16").unwrap();
        let fam = plentiful_tubes(&g, 0, 2, 2, 1, 10, TubeEndpoints::Spheres).unwrap();
        assert!(fam.success, "found {} tubes", fam.tubes.len());
        assert!(fam.tubes.len() >= 2);
        let a = sphere(&g, 0, 2.0).unwrap();
        let b = sphere(&g, 0, 8.0).unwrap();
        audit(&g, &fam, &a, &b);
    }

    #[test]
    fn explicit_crossing_sets() {
        let g = FiniteGraph::generate("cycle:12").unwrap();
        let sets = TubeEndpoints::Sets { a: vec![11, 1], b: vec![5, 7] };
        let fam = plentiful_tubes(&g, 0, 0, 2, 0, 4, sets).unwrap();
        assert_eq!(fam.tubes.len(), 2);
        assert!(fam.success);
        audit(&g, &fam, &[11, 1], &[5, 7]);
    }

    #[test]
    fn infeasible_scales_error() {
        let g = FiniteGraph::generate("cycle:12").unwrap();
        let r = plentiful_tubes(&g, 0, 2, 1, 0, 12, TubeEndpoints::Spheres);
        assert!(matches!(r, Err(Error::ScaleInfeasible(_))));
        let r = plentiful_tubes(&g, 0, 0, 1, 0, 12, TubeEndpoints::Spheres);
        assert!(matches!(r, Err(Error::InvalidParam { .. })));
        let sets = TubeEndpoints::Sets { a: vec![0, 3], b: vec![3, 6] };
        assert!(plentiful_tubes(&g, 0, 0, 1, 0, 12, sets).is_err());
    }
}
