//! Undirected simple graphs with node coordinates and an alive mask.
//!
//! Removing a node only clears its alive flag; every analysis in the crate
//! (components, degrees, betweenness, modularity) looks at the subgraph
//! induced by the alive nodes. Attack simulations clone the graph once and
//! then flip flags, so no adjacency is ever rebuilt mid-run.

mod betweenness;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::spatial::Point;

pub use betweenness::{betweenness, betweenness_from_sources};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
    coords: Option<Vec<Point>>,
    alive: Vec<bool>,
    alive_count: usize,
}

impl Graph {
    /// Builds a graph on nodes `0..n` from an edge list. Rejects self-loops,
    /// out-of-range endpoints and repeated edges (in either orientation).
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
        coords: Option<Vec<Point>>,
    ) -> Result<Self> {
        if let Some(c) = &coords {
            if c.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "{} coordinates supplied for {n} nodes",
                    c.len()
                )));
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::NotSimple(format!(
                    "edge ({u}, {v}) references a node outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::NotSimple(format!("self-loop on node {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for (u, nbrs) in adjacency.iter_mut().enumerate() {
            nbrs.sort_unstable();
            if let Some(w) = nbrs.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::NotSimple(format!(
                    "duplicate edge ({}, {})",
                    u.min(w[0]),
                    u.max(w[0])
                )));
            }
        }
        Ok(Graph {
            adjacency,
            coords,
            alive: vec![true; n],
            alive_count: n,
        })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); n],
            coords: None,
            alive: vec![true; n],
            alive_count: n,
        }
    }

    /// Total number of node slots, alive or not.
    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn alive_count(&self) -> usize {
        self.alive_count
    }

    pub fn is_alive(&self, v: NodeId) -> bool {
        self.alive[v]
    }

    pub fn alive_mask(&self) -> &[bool] {
        &self.alive
    }

    pub fn alive_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.node_count()).filter(move |&v| self.alive[v])
    }

    /// Marks `v` removed. Returns false if it already was.
    pub fn remove_node(&mut self, v: NodeId) -> bool {
        if std::mem::replace(&mut self.alive[v], false) {
            self.alive_count -= 1;
            true
        } else {
            false
        }
    }

    pub fn restore_all(&mut self) {
        self.alive.iter_mut().for_each(|a| *a = true);
        self.alive_count = self.node_count();
    }

    /// Sorted neighbor list, including removed neighbors.
    pub fn raw_neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v]
    }

    /// Alive neighbors of `v`, ascending.
    pub fn neighbors(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.adjacency[v].iter().copied().filter(move |&w| self.alive[w])
    }

    /// Degree of `v` in the alive subgraph (0 for removed nodes).
    pub fn degree(&self, v: NodeId) -> usize {
        if !self.alive[v] {
            return 0;
        }
        self.neighbors(v).count()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Alive edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.alive_nodes()
            .flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn coords(&self) -> Option<&[Point]> {
        self.coords.as_deref()
    }

    pub fn with_coords(mut self, coords: Vec<Point>) -> Result<Self> {
        if coords.len() != self.node_count() {
            return Err(Error::InvalidArgument(format!(
                "{} coordinates supplied for {} nodes",
                coords.len(),
                self.node_count()
            )));
        }
        self.coords = Some(coords);
        Ok(self)
    }

    /// Degrees of all node slots (removed nodes report 0).
    pub fn degrees(&self) -> Vec<usize> {
        (0..self.node_count()).map(|v| self.degree(v)).collect()
    }
}

/// Maximal connected sets of alive nodes, largest first; equal sizes are
/// ordered by smallest member. Members within a set are ascending.
pub fn components(g: &Graph) -> Vec<Vec<NodeId>> {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for start in g.alive_nodes() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let mut comp = Vec::new();
        while let Some(u) = stack.pop() {
            comp.push(u);
            for w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    // discovery order is already by smallest member; stable sort keeps it
    out.sort_by(|a, b| b.len().cmp(&a.len()));
    out
}

/// Sizes of the largest and second-largest components (0 when absent).
pub fn two_largest_components(g: &Graph) -> (usize, usize) {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut stack = Vec::new();
    let (mut first, mut second) = (0, 0);
    for start in g.alive_nodes() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let mut size = 0;
        while let Some(u) = stack.pop() {
            size += 1;
            for w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if size > first {
            second = first;
            first = size;
        } else if size > second {
            second = size;
        }
    }
    (first, second)
}

/// Degree histogram over alive nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeDistribution {
    pub counts: BTreeMap<usize, usize>,
    pub n: usize,
}

impl DegreeDistribution {
    /// P(k) for every observed k.
    pub fn probabilities(&self) -> Vec<(usize, f64)> {
        self.counts
            .iter()
            .map(|(&k, &c)| (k, c as f64 / self.n as f64))
            .collect()
    }

    pub fn max_degree(&self) -> usize {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }
}

pub fn degree_distribution(g: &Graph) -> DegreeDistribution {
    let mut counts = BTreeMap::new();
    for v in g.alive_nodes() {
        *counts.entry(g.degree(v)).or_insert(0) += 1;
    }
    DegreeDistribution {
        counts,
        n: g.alive_count(),
    }
}

/// `2M / n` over the alive subgraph.
pub fn average_degree(g: &Graph) -> Result<f64> {
    if g.alive_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok(2.0 * g.edge_count() as f64 / g.alive_count() as f64)
}
