//! Cluster decomposition of a configuration.

use serde::Serialize;

use super::sample::Config;
use super::unionfind::DisjointSets;
use crate::graph::{FiniteGraph, VertexId};

/// Clusters of a configuration, labeled canonically: label k is the k-th
/// cluster encountered when scanning vertex ids in order, so labels are
/// independent of union-find internals.
#[derive(Clone, Debug, Serialize)]
pub struct ClusterReport {
    /// Cluster label per vertex id.
    pub label: Vec<u32>,
    /// Cluster size per label.
    pub sizes: Vec<u32>,
    /// Largest cluster size.
    pub k1: u32,
    /// Second largest cluster size; 0 when a single cluster covers the graph.
    pub k2: u32,
    vertex_count: u32,
}

impl ClusterReport {
    pub fn cluster_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn label_of(&self, v: VertexId) -> u32 {
        self.label[v as usize]
    }

    pub fn cluster_size_of(&self, v: VertexId) -> u32 {
        self.sizes[self.label[v as usize] as usize]
    }

    pub fn same_cluster(&self, u: VertexId, v: VertexId) -> bool {
        self.label[u as usize] == self.label[v as usize]
    }

    /// Density of a vertex-set size: size / |V|.
    pub fn density(&self, count: u32) -> f64 {
        count as f64 / self.vertex_count as f64
    }

    pub fn k1_density(&self) -> f64 {
        self.density(self.k1)
    }
}

/// Decomposes the configuration into open clusters.
pub fn clusters(g: &FiniteGraph, config: &Config) -> ClusterReport {
    let n = g.vertex_count();
    let mut ds = DisjointSets::new(n);
    for (e, &(u, v)) in g.edge_list().iter().enumerate() {
        if config.open[e] {
            ds.union(u, v);
        }
    }
    let mut label = vec![u32::MAX; n as usize];
    let mut root_label = vec![u32::MAX; n as usize];
    let mut sizes = Vec::new();
    for v in 0..n {
        let r = ds.find(v);
        if root_label[r as usize] == u32::MAX {
            root_label[r as usize] = sizes.len() as u32;
            sizes.push(ds.root_size(r));
        }
        label[v as usize] = root_label[r as usize];
    }
    let (k1, k2) = top_two(&sizes);
    ClusterReport {
        label,
        sizes,
        k1,
        k2,
        vertex_count: n,
    }
}

/// Whether u and v lie in the same open cluster. Early-exit search from u.
pub fn connected(g: &FiniteGraph, config: &Config, u: VertexId, v: VertexId) -> bool {
    if u == v {
        return true;
    }
    let mut seen = vec![false; g.vertex_count() as usize];
    let mut queue = std::collections::VecDeque::new();
    seen[u as usize] = true;
    queue.push_back(u);
    while let Some(x) = queue.pop_front() {
        for &y in g.neighbors(x) {
            if seen[y as usize] {
                continue;
            }
            let e = g.edge_between(x, y).expect("adjacency implies an edge id");
            if !config.open[e as usize] {
                continue;
            }
            if y == v {
                return true;
            }
            seen[y as usize] = true;
            queue.push_back(y);
        }
    }
    false
}

/// Largest and second largest entries; the second is 0 when only one
/// cluster exists.
fn top_two(sizes: &[u32]) -> (u32, u32) {
    let mut k1 = 0;
    let mut k2 = 0;
    for &s in sizes {
        if s > k1 {
            k2 = k1;
            k1 = s;
        } else if s > k2 {
            k2 = s;
        }
    }
    (k1, k2)
}
