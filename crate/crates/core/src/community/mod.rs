//! Community structure and spatial sparsity measures.

mod louvain;
mod sparsity;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

pub use louvain::{louvain, louvain_with_trace, LouvainRun};
pub use sparsity::{grid_like_ratio, sparsity_index, weighted_edge_profile, WeightedEdgeProfile, WEIGHT_DECIMALS};

/// Node-to-community assignment over the alive nodes of a graph.
///
/// Community ids are dense, `0..count`, numbered in order of first
/// appearance by node id. Removed nodes carry no community.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<Option<usize>>,
    count: usize,
}

impl Partition {
    /// Relabels arbitrary labels densely. `labels[v]` must be `Some` exactly
    /// for the alive nodes of the graph the partition is used with.
    pub fn from_labels(labels: &[Option<usize>]) -> Self {
        let mut remap = std::collections::HashMap::new();
        let assignment = labels
            .iter()
            .map(|label| {
                label.map(|l| {
                    let next = remap.len();
                    *remap.entry(l).or_insert(next)
                })
            })
            .collect();
        Partition {
            assignment,
            count: remap.len(),
        }
    }

    /// Every alive node in one community.
    pub fn single(g: &Graph) -> Self {
        let labels: Vec<Option<usize>> = g.alive_mask().iter().map(|&a| a.then_some(0)).collect();
        Self::from_labels(&labels)
    }

    /// Every alive node in its own community.
    pub fn singletons(g: &Graph) -> Self {
        let labels: Vec<Option<usize>> = (0..g.node_count())
            .map(|v| g.is_alive(v).then_some(v))
            .collect();
        Self::from_labels(&labels)
    }

    pub fn community_of(&self, v: NodeId) -> Option<usize> {
        self.assignment[v]
    }

    pub fn community_count(&self) -> usize {
        self.count
    }

    pub fn assignment(&self) -> &[Option<usize>] {
        &self.assignment
    }

    /// Members of each community, ascending.
    pub fn communities(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.count];
        for (v, c) in self.assignment.iter().enumerate() {
            if let Some(c) = c {
                out[*c].push(v);
            }
        }
        out
    }
}

/// Newman-Girvan modularity of `partition` on the alive subgraph:
/// `Q = (1/2M) Σ_ij [A_ij - k_i k_j / 2M] δ(c_i, c_j)`.
pub fn modularity(g: &Graph, partition: &Partition) -> Result<f64> {
    if partition.assignment.len() != g.node_count() {
        return Err(Error::InvalidArgument(format!(
            "partition covers {} nodes, graph has {}",
            partition.assignment.len(),
            g.node_count()
        )));
    }
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::NoEdges("modularity"));
    }
    let mut internal = vec![0usize; partition.count];
    let mut degree_sum = vec![0usize; partition.count];
    for v in g.alive_nodes() {
        let c = partition.assignment[v].ok_or_else(|| {
            Error::InvalidArgument(format!("alive node {v} has no community"))
        })?;
        degree_sum[c] += g.degree(v);
    }
    for (u, v) in g.edges() {
        if partition.assignment[u] == partition.assignment[v] {
            internal[partition.assignment[u].unwrap()] += 1;
        }
    }
    let two_m = 2.0 * m as f64;
    Ok(internal
        .iter()
        .zip(&degree_sum)
        .map(|(&l, &d)| l as f64 / m as f64 - (d as f64 / two_m).powi(2))
        .sum())
}
