//! Finite vertex-transitive graph families and their metric structure.
//!
//! Graphs are built from a small spec mini-language:
//!
//! * `cycle:<n>` for the n-cycle (n >= 3),
//! * `torus:<n1>x<n2>[x...]` for a product of cycles (each axis >= 3),
//! * `circulant:<n>:<s1,s2,...>` for Z_n with step set {±s_i},
//! * `cayley:<path>` for an explicit multiplication table plus a symmetric
//!   generator set, loaded from a file.
//!
//! Vertex 0 is the canonical root. Vertex numbering is deterministic:
//! row-major for tori (last axis fastest), group-element order for Cayley
//! graphs. Edge ids are positions in the canonical edge list.

mod cayley;
mod homogeneity;
mod metric;
mod net;

pub use homogeneity::{check_local_homogeneity, HomogeneityReport};
pub use metric::{ball, is_low_growth, metric_profile, sphere, MetricProfile};
pub use net::{build_net, Net};

pub(crate) use metric::{bfs_distances, floor_radius};

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{invalid, Error, Result};

/// Dense vertex index, stable for a given [`FiniteGraph`].
pub type VertexId = u32;
/// Position in [`FiniteGraph::edge_list`].
pub type EdgeId = u32;

/// Immutable undirected graph in adjacency form.
///
/// Invariants: connected, simple, adjacency symmetric and sorted, edge list
/// free of duplicate pairs. Generated specs are degree-regular by
/// construction; fixture graphs built with [`FiniteGraph::from_edge_list`]
/// may not be.
#[derive(Debug, Clone)]
pub struct FiniteGraph {
    vertex_count: u32,
    adjacency: Vec<Vec<VertexId>>,
    edge_list: Vec<(VertexId, VertexId)>,
    edge_ids: HashMap<(VertexId, VertexId), EdgeId>,
    degree: u32,
    spec_string: String,
}

impl FiniteGraph {
    /// Builds a graph from a spec string. See the module docs for the
    /// mini-language. The result is connected, simple, and degree-regular,
    /// with deterministic vertex numbering and edge order.
    pub fn generate(spec: &str) -> Result<FiniteGraph> {
        let err = |at: usize, msg: &str| Error::GraphSpec {
            spec: spec.to_string(),
            at,
            msg: msg.to_string(),
        };
        let (kind, rest) = match spec.find(':') {
            Some(i) => (&spec[..i], &spec[i + 1..]),
            None => return Err(err(0, "expected '<kind>:<params>'")),
        };
        let body_at = kind.len() + 1;
        match kind {
            "cycle" => {
                let n: u32 = rest
                    .parse()
                    .map_err(|_| err(body_at, "expected an integer vertex count"))?;
                if n < 3 {
                    return Err(err(body_at, "n below minimum (cycle needs n >= 3)"));
                }
                let edges: Vec<_> = (0..n).map(|i| ordered(i, (i + 1) % n)).collect();
                Self::from_parts(n, edges, spec)
            }
            "torus" => {
                let mut dims = Vec::new();
                let mut at = body_at;
                for part in rest.split('x') {
                    let n: u32 = part
                        .parse()
                        .map_err(|_| err(at, "expected an integer axis length"))?;
                    if n < 3 {
                        return Err(err(at, "n below minimum (torus axes need n >= 3)"));
                    }
                    dims.push(n);
                    at += part.len() + 1;
                }
                if dims.len() < 2 {
                    return Err(err(body_at, "expected at least two axis lengths"));
                }
                let vertex_count: u64 = dims.iter().map(|&d| d as u64).product();
                if vertex_count > u32::MAX as u64 {
                    return Err(err(body_at, "torus too large"));
                }
                // Row-major index, last axis fastest.
                let strides: Vec<u64> = {
                    let mut s = vec![1u64; dims.len()];
                    for i in (0..dims.len() - 1).rev() {
                        s[i] = s[i + 1] * dims[i + 1] as u64;
                    }
                    s
                };
                let mut edges = Vec::with_capacity(vertex_count as usize * dims.len());
                for v in 0..vertex_count {
                    for (axis, &n) in dims.iter().enumerate() {
                        let c = (v / strides[axis]) % n as u64;
                        let u = if c + 1 == n as u64 {
                            v - strides[axis] * (n as u64 - 1)
                        } else {
                            v + strides[axis]
                        };
                        edges.push(ordered(v as u32, u as u32));
                    }
                }
                Self::from_parts(vertex_count as u32, edges, spec)
            }
            "circulant" => {
                let (n_str, steps_str) = rest
                    .split_once(':')
                    .ok_or_else(|| err(body_at, "expected '<n>:<s1,s2,...>'"))?;
                let n: u32 = n_str
                    .parse()
                    .map_err(|_| err(body_at, "expected an integer vertex count"))?;
                if n < 3 {
                    return Err(err(body_at, "n below minimum (circulant needs n >= 3)"));
                }
                let steps_at = body_at + n_str.len() + 1;
                let mut steps = Vec::new();
                for part in steps_str.split(',') {
                    let s: u32 = part
                        .parse()
                        .map_err(|_| err(steps_at, "expected an integer step"))?;
                    let s = s % n;
                    if s == 0 {
                        return Err(err(steps_at, "step is 0 mod n (self-loop)"));
                    }
                    let s = s.min(n - s);
                    if steps.contains(&s) {
                        return Err(err(steps_at, "duplicate step (same edge set twice)"));
                    }
                    steps.push(s);
                }
                steps.sort_unstable();
                let mut seen = HashMap::new();
                let mut edges = Vec::new();
                for v in 0..n {
                    for &s in &steps {
                        let pair = ordered(v, (v + s) % n);
                        if seen.insert(pair, ()).is_none() {
                            edges.push(pair);
                        }
                    }
                }
                Self::from_parts(n, edges, spec)
            }
            "cayley" => cayley::load(rest, spec),
            _ => Err(err(0, "unknown kind (expected cycle, torus, circulant, or cayley)")),
        }
    }

    /// Fixture constructor for tests and audits: validates that the edge
    /// list is simple and the graph connected, but does not require degree
    /// regularity. `name` becomes the spec string.
    pub fn from_edge_list(
        vertex_count: u32,
        edges: &[(VertexId, VertexId)],
        name: &str,
    ) -> Result<FiniteGraph> {
        let normalized: Vec<_> = edges.iter().map(|&(u, v)| ordered(u, v)).collect();
        Self::from_parts(vertex_count, normalized, name)
    }

    fn from_parts(
        vertex_count: u32,
        edge_list: Vec<(VertexId, VertexId)>,
        spec: &str,
    ) -> Result<FiniteGraph> {
        if vertex_count == 0 {
            return Err(invalid("vertex_count", "graph has no vertices"));
        }
        let mut adjacency = vec![Vec::new(); vertex_count as usize];
        let mut edge_ids = HashMap::with_capacity(edge_list.len());
        for (id, &(u, v)) in edge_list.iter().enumerate() {
            if u == v {
                return Err(invalid("edges", format!("self-loop at vertex {u}")));
            }
            if u >= vertex_count || v >= vertex_count {
                return Err(invalid("edges", format!("edge ({u},{v}) out of range")));
            }
            if edge_ids.insert((u, v), id as EdgeId).is_some() {
                return Err(invalid("edges", format!("duplicate edge ({u},{v})")));
            }
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        let graph = FiniteGraph {
            vertex_count,
            adjacency,
            edge_list,
            edge_ids,
            degree: 0,
            spec_string: spec.to_string(),
        };
        // Connectivity check doubles as the "generators do not generate"
        // test for Cayley and circulant specs.
        let reached = graph.bfs_reach(0);
        if reached != vertex_count as usize {
            return Err(Error::Disconnected(format!(
                "{spec}: {reached} of {vertex_count} vertices reachable from vertex 0"
            )));
        }
        let degree = graph.adjacency[0].len() as u32;
        Ok(FiniteGraph { degree, ..graph })
    }

    fn bfs_reach(&self, root: VertexId) -> usize {
        let mut seen = vec![false; self.vertex_count as usize];
        let mut queue = std::collections::VecDeque::from([root]);
        seen[root as usize] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &u in self.neighbors(v) {
                if !seen[u as usize] {
                    seen[u as usize] = true;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
        count
    }

    #[must_use]
    pub fn vertex_count(&self) -> u32 {
        self.vertex_count
    }

    #[must_use]
    pub fn edge_count(&self) -> u32 {
        self.edge_list.len() as u32
    }

    /// Degree of vertex 0; the common degree for generated (regular) specs.
    #[must_use]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[must_use]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v as usize]
    }

    #[must_use]
    pub fn edge_list(&self) -> &[(VertexId, VertexId)] {
        &self.edge_list
    }

    /// Endpoints of an edge, as the canonical (min, max) pair.
    #[must_use]
    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edge_list[e as usize]
    }

    #[must_use]
    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.edge_ids.get(&ordered(u, v)).copied()
    }

    #[must_use]
    pub fn spec_string(&self) -> &str {
        &self.spec_string
    }

    /// Edge-list text export, one `u v` line per edge in edge-id order.
    #[must_use]
    pub fn to_edge_text(&self) -> String {
        let mut out = String::with_capacity(self.edge_list.len() * 8);
        for &(u, v) in &self.edge_list {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

fn ordered(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}
