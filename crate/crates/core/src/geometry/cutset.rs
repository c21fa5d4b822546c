//! Cutset audits and r-connectedness of vertex sets.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::graph::{bfs_distances, FiniteGraph, VertexId};

/// Outcome of an r-connectedness check.
///
/// A set is r-connected when the auxiliary graph joining members at graph
/// distance <= r is connected. When it is not, `partition` holds two
/// nonempty sides with every cross pair at distance > r.
#[derive(Clone, Debug, Serialize)]
pub struct RConnectivity {
    pub connected: bool,
    pub partition: Option<(Vec<VertexId>, Vec<VertexId>)>,
}

/// Audit of a claimed vertex cutset between two sets.
#[derive(Clone, Debug, Serialize)]
pub struct CutsetReport {
    pub cutset: Vec<VertexId>,
    pub is_cutset: bool,
    /// True when no proper subset separates; single-vertex removals are a
    /// sufficient test for vertex cutsets.
    pub is_minimal: bool,
    pub witness: Option<CutsetWitness>,
}

/// Evidence attached to a failed audit.
#[derive(Clone, Debug, Serialize)]
pub enum CutsetWitness {
    /// The cutset still separates without this vertex.
    RemovableVertex(VertexId),
    /// A source-to-target path avoiding the claimed cutset.
    ViolatingPath(Vec<VertexId>),
}

/// Components of `probe` after deleting `removed` from the graph.
#[derive(Clone, Debug, Serialize)]
pub struct ProbeComponents {
    /// Nonempty parts, each sorted, ordered by smallest member.
    pub parts: Vec<Vec<VertexId>>,
    /// Probe vertices discarded because they were also in `removed`.
    pub dropped: Vec<VertexId>,
}

impl ProbeComponents {
    /// `removed` disconnects the probe set iff it splits into >= 2 parts.
    #[must_use]
    pub fn disconnects(&self) -> bool {
        self.parts.len() >= 2
    }
}

fn check_set(g: &FiniteGraph, name: &'static str, set: &[VertexId]) -> Result<()> {
    if let Some(&v) = set.iter().find(|&&v| v >= g.vertex_count()) {
        return Err(invalid(name, format!("vertex {v} out of range")));
    }
    Ok(())
}

fn dedup_sorted(set: &[VertexId]) -> Vec<VertexId> {
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    s
}

/// Whether `set` cannot be split into two halves at graph distance > r.
pub fn is_r_connected(g: &FiniteGraph, set: &[VertexId], r: u32) -> Result<RConnectivity> {
    check_set(g, "set", set)?;
    let set = dedup_sorted(set);
    if set.is_empty() {
        return Err(invalid("set", "r-connectedness needs a nonempty set"));
    }
    // Auxiliary adjacency from one BFS per member.
    let dist: Vec<Vec<u32>> = set.iter().map(|&v| bfs_distances(g, v)).collect();
    let k = set.len();
    let mut side = vec![false; k];
    let mut queue = VecDeque::from([0usize]);
    side[0] = true;
    while let Some(i) = queue.pop_front() {
        for j in 0..k {
            if !side[j] && dist[i][set[j] as usize] <= r {
                side[j] = true;
                queue.push_back(j);
            }
        }
    }
    if side.iter().all(|&s| s) {
        return Ok(RConnectivity { connected: true, partition: None });
    }
    let (a, b): (Vec<_>, Vec<_>) = (0..k).partition(|&i| side[i]);
    Ok(RConnectivity {
        connected: false,
        partition: Some((
            a.into_iter().map(|i| set[i]).collect(),
            b.into_iter().map(|i| set[i]).collect(),
        )),
    })
}

/// Components of the graph minus `removed`, restricted to `probe`. Probe
/// vertices inside `removed` are dropped and reported, not an error.
pub fn removal_components(
    g: &FiniteGraph,
    removed: &[VertexId],
    probe: &[VertexId],
) -> Result<ProbeComponents> {
    check_set(g, "removed", removed)?;
    check_set(g, "probe", probe)?;
    let mut blocked = vec![false; g.vertex_count() as usize];
    for &v in removed {
        blocked[v as usize] = true;
    }
    let probe = dedup_sorted(probe);
    let (live, dropped): (Vec<_>, Vec<_>) = probe.into_iter().partition(|&v| !blocked[v as usize]);
    let mut component = vec![u32::MAX; g.vertex_count() as usize];
    let mut next = 0u32;
    for v in 0..g.vertex_count() {
        if blocked[v as usize] || component[v as usize] != u32::MAX {
            continue;
        }
        component[v as usize] = next;
        let mut queue = VecDeque::from([v]);
        while let Some(w) = queue.pop_front() {
            for &u in g.neighbors(w) {
                if !blocked[u as usize] && component[u as usize] == u32::MAX {
                    component[u as usize] = next;
                    queue.push_back(u);
                }
            }
        }
        next += 1;
    }
    let mut parts: Vec<Vec<VertexId>> = Vec::new();
    let mut part_of = vec![usize::MAX; next as usize];
    for v in live {
        let c = component[v as usize] as usize;
        if part_of[c] == usize::MAX {
            part_of[c] = parts.len();
            parts.push(Vec::new());
        }
        parts[part_of[c]].push(v);
    }
    Ok(ProbeComponents { parts, dropped })
}

/// Shortest path from `sources` to `targets` through unblocked vertices,
/// as a vertex sequence, or None when every path is blocked.
fn path_avoiding(
    g: &FiniteGraph,
    sources: &[VertexId],
    targets: &[VertexId],
    blocked: &[bool],
) -> Option<Vec<VertexId>> {
    let mut target = vec![false; g.vertex_count() as usize];
    for &v in targets {
        target[v as usize] = true;
    }
    let mut parent = vec![u32::MAX; g.vertex_count() as usize];
    let mut queue = VecDeque::new();
    for &v in sources {
        if blocked[v as usize] || parent[v as usize] != u32::MAX {
            continue;
        }
        parent[v as usize] = v;
        queue.push_back(v);
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
            if !blocked[u as usize] && parent[u as usize] == u32::MAX {
                parent[u as usize] = v;
                queue.push_back(u);
            }
        }
    }
    None
}

fn disjoint_blocked(
    g: &FiniteGraph,
    cutset: &[VertexId],
    a: &[VertexId],
    b: &[VertexId],
) -> Result<Vec<bool>> {
    check_set(g, "cutset", cutset)?;
    check_set(g, "a", a)?;
    check_set(g, "b", b)?;
    if a.is_empty() || b.is_empty() {
        return Err(invalid("a", "cutset audits need nonempty source and target sets"));
    }
    let mut role = vec![0u8; g.vertex_count() as usize];
    for &v in a {
        role[v as usize] = 1;
    }
    for &v in b {
        if role[v as usize] != 0 {
            return Err(invalid("b", format!("vertex {v} is in both endpoint sets")));
        }
        role[v as usize] = 2;
    }
    let mut blocked = vec![false; g.vertex_count() as usize];
    for &v in cutset {
        if role[v as usize] != 0 {
            return Err(invalid("cutset", format!("vertex {v} overlaps an endpoint set")));
        }
        blocked[v as usize] = true;
    }
    Ok(blocked)
}

/// Audits whether `cutset` is a minimal vertex cutset between `a` and `b`.
///
/// Separation is checked by BFS avoidance; minimality by verifying each
/// single-vertex removal restores a path. The sets must be pairwise
/// disjoint.
pub fn cutset_audit(
    g: &FiniteGraph,
    cutset: &[VertexId],
    a: &[VertexId],
    b: &[VertexId],
) -> Result<CutsetReport> {
    let mut blocked = disjoint_blocked(g, cutset, a, b)?;
    let cutset = dedup_sorted(cutset);
    if let Some(path) = path_avoiding(g, a, b, &blocked) {
        return Ok(CutsetReport {
            cutset,
            is_cutset: false,
            is_minimal: false,
            witness: Some(CutsetWitness::ViolatingPath(path)),
        });
    }
    for &v in &cutset {
        blocked[v as usize] = false;
        let restored = path_avoiding(g, a, b, &blocked).is_some();
        blocked[v as usize] = true;
        if !restored {
            return Ok(CutsetReport {
                cutset,
                is_cutset: true,
                is_minimal: false,
                witness: Some(CutsetWitness::RemovableVertex(v)),
            });
        }
    }
    Ok(CutsetReport { cutset, is_cutset: true, is_minimal: true, witness: None })
}

/// Greedily deletes vertices from `cutset` (in the order given) while it
/// still separates `a` from `b`, returning a minimal sub-cutset.
///
/// One pass suffices: a vertex kept at its turn stays necessary, because
/// failing to separate is preserved when the blocking set shrinks further.
/// Callers control determinism or randomization through the slice order.
pub fn shrink_to_minimal_cutset(
    g: &FiniteGraph,
    cutset: &[VertexId],
    a: &[VertexId],
    b: &[VertexId],
) -> Result<Vec<VertexId>> {
    let mut blocked = disjoint_blocked(g, cutset, a, b)?;
    if path_avoiding(g, a, b, &blocked).is_some() {
        return Err(invalid("cutset", "the given set does not separate the endpoints"));
    }
    let mut seen = vec![false; g.vertex_count() as usize];
    let mut kept = Vec::new();
    for &v in cutset {
        if seen[v as usize] {
            continue;
        }
        seen[v as usize] = true;
        blocked[v as usize] = false;
        if path_avoiding(g, a, b, &blocked).is_some() {
            blocked[v as usize] = true;
            kept.push(v);
        }
    }
    kept.sort_unstable();
    Ok(kept)
}
