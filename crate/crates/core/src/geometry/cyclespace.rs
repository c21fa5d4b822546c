//! The cycle space diameter: the smallest m such that every cycle is a
//! GF(2) sum of cycles with extrinsic diameter <= m.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::graph::{bfs_distances, metric_profile, EdgeId, FiniteGraph, VertexId};

/// How the bracket was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DeltaMethod {
    /// The cycle space is trivial; the diameter is 0 by convention.
    ZeroDimensional,
    /// One-dimensional cycle space: the diameter of its single cycle.
    UniqueCycle,
    /// Exact value from enumerating every simple cycle (small graphs).
    Exhaustive,
    /// Factor-2 bracket from ball-local generation.
    BallLocal,
    /// The work budget ran out before any bound was certified.
    NotDetermined,
}

/// Two-sided bracket on the cycle space diameter.
///
/// Lower bound: ball cycle spaces at radius m*-1 do not span, and every
/// cycle of extrinsic diameter <= m*-1 lies in such a ball, so no family of
/// cycles below m* generates. Upper bound: cycles inside B_m(v) have
/// extrinsic diameter <= 2m, so a spanning radius m* certifies 2m*.
#[derive(Clone, Debug, Serialize)]
pub struct CycleSpaceBracket {
    pub delta_lower: Option<u32>,
    pub delta_upper: Option<u32>,
    /// Cycle space dimension |E| - |V| + 1.
    pub rank_full: u32,
    /// Spanning ball radius m*, when the ball-local route was used.
    pub ball_radius: Option<u32>,
    pub method: DeltaMethod,
}

/// Largest vertex count for which exact enumeration is attempted.
const EXHAUSTIVE_MAX_VERTICES: u32 = 64;

struct BudgetHit;

type Budgeted<T> = std::result::Result<T, BudgetHit>;

/// Incremental GF(2) row space over edge-set bitvectors, with a shared
/// work meter (one unit per row word touched).
struct Gf2Basis {
    rows: Vec<(usize, Vec<u64>)>,
    words: usize,
    work: u64,
    budget: u64,
}

impl Gf2Basis {
    fn new(edge_count: u32, budget: u64) -> Self {
        Gf2Basis {
            rows: Vec::new(),
            words: (edge_count as usize).div_ceil(64),
            work: 0,
            budget,
        }
    }

    fn rank(&self) -> u32 {
        self.rows.len() as u32
    }

    fn spend(&mut self, units: u64) -> Budgeted<()> {
        self.work += units;
        if self.work > self.budget {
            return Err(BudgetHit);
        }
        Ok(())
    }

    /// Reduces `row` against the basis; inserts and returns true when it is
    /// independent of the rows seen so far.
    fn insert(&mut self, mut row: Vec<u64>) -> Budgeted<bool> {
        loop {
            self.spend(self.words as u64)?;
            let Some(lead) = leading_bit(&row) else {
                return Ok(false);
            };
            match self.rows.binary_search_by_key(&lead, |&(p, _)| p) {
                Ok(i) => {
                    let pivot = &self.rows[i].1;
                    for (a, b) in row.iter_mut().zip(pivot) {
                        *a ^= b;
                    }
                }
                Err(i) => {
                    self.rows.insert(i, (lead, row));
                    return Ok(true);
                }
            }
        }
    }
}

fn leading_bit(row: &[u64]) -> Option<usize> {
    row.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn edge_row(words: usize, edges: &[EdgeId]) -> Vec<u64> {
    let mut row = vec![0u64; words];
    for &e in edges {
        row[e as usize / 64] ^= 1u64 << (e % 64);
    }
    row
}

/// Edge ids of the tree path root..v given BFS parent pointers.
fn path_edges(g: &FiniteGraph, parent: &[VertexId], mut v: VertexId) -> Vec<EdgeId> {
    let mut edges = Vec::new();
    while parent[v as usize] != v {
        let p = parent[v as usize];
        edges.push(g.edge_between(v, p).expect("tree edge"));
        v = p;
    }
    edges
}

/// Fundamental cycle of non-tree edge (u, v): the two root paths cancel on
/// their common prefix under XOR, leaving the cycle through (u, v).
fn fundamental_cycle(g: &FiniteGraph, parent: &[VertexId], u: VertexId, v: VertexId) -> Vec<EdgeId> {
    let mut edges = path_edges(g, parent, u);
    edges.extend(path_edges(g, parent, v));
    edges.push(g.edge_between(u, v).expect("non-tree edge"));
    edges
}

/// Brackets the cycle space diameter, spending at most `budget` work units
/// (GF(2) row words touched plus enumeration steps). A spent budget is not
/// an error: the bracket comes back flagged `NotDetermined`.
pub fn delta_bracket(g: &FiniteGraph, budget: u64) -> Result<CycleSpaceBracket> {
    if budget == 0 {
        return Err(invalid("budget", "budget must be positive"));
    }
    let rank_full = g.edge_count() + 1 - g.vertex_count();
    if rank_full == 0 {
        return Ok(CycleSpaceBracket {
            delta_lower: Some(0),
            delta_upper: Some(0),
            rank_full,
            ball_radius: None,
            method: DeltaMethod::ZeroDimensional,
        });
    }
    if rank_full == 1 {
        let d = unique_cycle_diameter(g);
        return Ok(CycleSpaceBracket {
            delta_lower: Some(d),
            delta_upper: Some(d),
            rank_full,
            ball_radius: None,
            method: DeltaMethod::UniqueCycle,
        });
    }
    if g.vertex_count() <= EXHAUSTIVE_MAX_VERTICES {
        if let Ok(d) = exhaustive_delta(g, rank_full, budget) {
            return Ok(CycleSpaceBracket {
                delta_lower: Some(d),
                delta_upper: Some(d),
                rank_full,
                ball_radius: None,
                method: DeltaMethod::Exhaustive,
            });
        }
    }
    let diameter = metric_profile(g, 0).diameter;
    match spanning_radius(g, rank_full, diameter, budget) {
        Ok(m) => Ok(CycleSpaceBracket {
            delta_lower: Some(m),
            delta_upper: Some((2 * m).min(diameter)),
            rank_full,
            ball_radius: Some(m),
            method: DeltaMethod::BallLocal,
        }),
        Err(BudgetHit) => Ok(CycleSpaceBracket {
            delta_lower: None,
            delta_upper: None,
            rank_full,
            ball_radius: None,
            method: DeltaMethod::NotDetermined,
        }),
    }
}

/// Extrinsic diameter of the single cycle of a corank-1 graph.
fn unique_cycle_diameter(g: &FiniteGraph) -> u32 {
    let parent = bfs_tree(g, 0, None);
    let (u, v) = g
        .edge_list()
        .iter()
        .copied()
        .find(|&(u, v)| parent[u as usize] != v && parent[v as usize] != u)
        .expect("corank 1 has a non-tree edge");
    // XOR first: the two root paths overlap on their common prefix, and
    // those vertices are not on the cycle.
    let words = (g.edge_count() as usize).div_ceil(64);
    let row = edge_row(words, &fundamental_cycle(g, &parent, u, v));
    let mut on_cycle = vec![false; g.vertex_count() as usize];
    let mut vertices = Vec::new();
    for e in 0..g.edge_count() {
        if row[e as usize / 64] & (1u64 << (e % 64)) == 0 {
            continue;
        }
        let (a, b) = g.endpoints(e);
        for w in [a, b] {
            if !on_cycle[w as usize] {
                on_cycle[w as usize] = true;
                vertices.push(w);
            }
        }
    }
    vertices
        .iter()
        .map(|&w| {
            let dist = bfs_distances(g, w);
            vertices.iter().map(|&x| dist[x as usize]).max().unwrap()
        })
        .max()
        .unwrap()
}

/// BFS tree parents; roots point at themselves. With `within` set, the
/// search stays inside that vertex set (which must contain `root`).
fn bfs_tree(g: &FiniteGraph, root: VertexId, within: Option<&[bool]>) -> Vec<VertexId> {
    let mut parent = vec![u32::MAX; g.vertex_count() as usize];
    parent[root as usize] = root;
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &u in g.neighbors(v) {
            if parent[u as usize] == u32::MAX && within.is_none_or(|w| w[u as usize]) {
                parent[u as usize] = v;
                queue.push_back(u);
            }
        }
    }
    parent
}

/// Exact cycle space diameter: enumerate every simple cycle, then insert
/// them into a GF(2) basis in ascending diameter order. The diameter that
/// completes the rank is the answer.
fn exhaustive_delta(g: &FiniteGraph, rank_full: u32, budget: u64) -> Budgeted<u32> {
    let n = g.vertex_count() as usize;
    let dist: Vec<Vec<u32>> = (0..g.vertex_count()).map(|v| bfs_distances(g, v)).collect();
    let mut basis = Gf2Basis::new(g.edge_count(), budget);
    let mut cycles: Vec<(u32, Vec<EdgeId>)> = Vec::new();

    // Canonical enumeration: each cycle is walked exactly once, anchored at
    // its smallest vertex with the smaller second endpoint first.
    let mut path: Vec<VertexId> = Vec::new();
    let mut in_path = vec![false; n];
    for anchor in 0..g.vertex_count() {
        path.push(anchor);
        in_path[anchor as usize] = true;
        dfs_cycles(g, anchor, &mut path, &mut in_path, &mut basis, &mut cycles, &dist)?;
        in_path[anchor as usize] = false;
        path.pop();
    }

    cycles.sort_by_key(|&(d, _)| d);
    for (d, edges) in cycles {
        let row = edge_row(basis.words, &edges);
        if basis.insert(row)? && basis.rank() == rank_full {
            return Ok(d);
        }
    }
    unreachable!("simple cycles span the cycle space of a connected graph");
}

fn dfs_cycles(
    g: &FiniteGraph,
    anchor: VertexId,
    path: &mut Vec<VertexId>,
    in_path: &mut [bool],
    basis: &mut Gf2Basis,
    cycles: &mut Vec<(u32, Vec<EdgeId>)>,
    dist: &[Vec<u32>],
) -> Budgeted<()> {
    let last = *path.last().unwrap();
    for &u in g.neighbors(last) {
        basis.spend(1)?;
        if u == anchor && path.len() >= 3 {
            // Direction canon: second vertex smaller than the closing one.
            if path[1] < last {
                let diameter = path
                    .iter()
                    .flat_map(|&a| path.iter().map(move |&b| dist[a as usize][b as usize]))
                    .max()
                    .unwrap();
                let edges: Vec<EdgeId> = path
                    .windows(2)
                    .map(|w| g.edge_between(w[0], w[1]).unwrap())
                    .chain([g.edge_between(last, anchor).unwrap()])
                    .collect();
                cycles.push((diameter, edges));
            }
            continue;
        }
        if u <= anchor || in_path[u as usize] {
            continue;
        }
        path.push(u);
        in_path[u as usize] = true;
        dfs_cycles(g, anchor, path, in_path, basis, cycles, dist)?;
        in_path[u as usize] = false;
        path.pop();
    }
    Ok(())
}

/// Smallest m such that the fundamental cycles of every induced ball B_m(v)
/// jointly span the cycle space, found by binary search (monotone in m,
/// and guaranteed at m = diameter).
fn spanning_radius(
    g: &FiniteGraph,
    rank_full: u32,
    diameter: u32,
    budget: u64,
) -> Budgeted<u32> {
    let mut spent = 0u64;
    let mut lo = 1u32;
    let mut hi = diameter;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let (full, used) = balls_span(g, rank_full, mid, budget - spent)?;
        spent += used;
        if full {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

fn balls_span(
    g: &FiniteGraph,
    rank_full: u32,
    m: u32,
    budget: u64,
) -> Budgeted<(bool, u64)> {
    let mut basis = Gf2Basis::new(g.edge_count(), budget);
    for v in 0..g.vertex_count() {
        let dist = bfs_distances(g, v);
        basis.spend(g.vertex_count() as u64)?;
        let within: Vec<bool> = dist.iter().map(|&d| d <= m).collect();
        let parent = bfs_tree(g, v, Some(&within));
        for &(a, b) in g.edge_list() {
            if !within[a as usize] || !within[b as usize] {
                continue;
            }
            if parent[a as usize] == b || parent[b as usize] == a {
                continue;
            }
            let row = edge_row(basis.words, &fundamental_cycle(g, &parent, a, b));
            if basis.insert(row)? && basis.rank() == rank_full {
                return Ok((true, basis.work));
            }
        }
    }
    Ok((false, basis.work))
}

#[cfg(test)]
mod tests {
    use super::*;

    const BUDGET: u64 = 200_000_000;

    #[test]
    fn tree_has_trivial_cycle_space() {
        let edges = [(0, 1), (1, 2), (1, 3), (3, 4)];
        let g = FiniteGraph::from_edge_list(5, &edges, "fixture:tree5").unwrap();
        let b = delta_bracket(&g, BUDGET).unwrap();
        assert_eq!(b.method, DeltaMethod::ZeroDimensional);
        assert_eq!((b.delta_lower, b.delta_upper), (Some(0), Some(0)));
        assert_eq!(b.rank_full, 0);
    }

    #[test]
    fn single_cycle_diameter_is_half_length() {
        for n in [9u32, 12] {
            let g = FiniteGraph::generate(&format!("cycle:{n}")).unwrap();
            let b = delta_bracket(&g, BUDGET).unwrap();
            assert_eq!(b.method, DeltaMethod::UniqueCycle);
            assert_eq!(b.delta_lower, Some(n / 2));
            assert_eq!(b.delta_upper, Some(n / 2));
            assert_eq!(b.rank_full, 1);
        }
    }

    #[test]
    fn small_torus_exact_at_two() {
        let g = FiniteGraph::generate("torus:4x4").unwrap();
        let b = delta_bracket(&g, BUDGET).unwrap();
        assert_eq!(b.rank_full, 17);
        assert_eq!(b.method, DeltaMethod::Exhaustive);
        assert_eq!((b.delta_lower, b.delta_upper), (Some(2), Some(2)));
    }

    #[test]
    fn stretched_torus_brackets_the_long_wrap() {
        let g = FiniteGraph::generate("torus:4x32").unwrap();
        let b = delta_bracket(&g, BUDGET).unwrap();
        assert_eq!(b.method, DeltaMethod::BallLocal);
        // The 32-wrap loop forces radius 16; diameter 18 caps the upper end.
        assert_eq!(b.ball_radius, Some(16));
        assert_eq!(b.delta_lower, Some(16));
        assert_eq!(b.delta_upper, Some(18));
    }

    #[test]
    fn starved_budget_comes_back_flagged() {
        let g = FiniteGraph::generate("torus:4x32").unwrap();
        let b = delta_bracket(&g, 50).unwrap();
        assert_eq!(b.method, DeltaMethod::NotDetermined);
        assert!(b.delta_lower.is_none() && b.delta_upper.is_none());
        assert_eq!(b.rank_full, 129);
        assert!(delta_bracket(&g, 0).is_err());
    }
}
