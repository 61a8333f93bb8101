//! Degree-preserving controls: randomized rewiring and relocation of the
//! degree sequence onto a square lattice.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::spatial::{exact_sqrt, Point};

pub const DEFAULT_SWAPS_PER_EDGE: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewireSpec {
    pub swaps_per_edge: usize,
    pub seed: u64,
}

impl RewireSpec {
    pub fn new(seed: u64) -> Self {
        RewireSpec {
            swaps_per_edge: DEFAULT_SWAPS_PER_EDGE,
            seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RewireReport {
    pub attempted: usize,
    pub accepted: usize,
    pub rejected: usize,
}

fn key(u: NodeId, v: NodeId) -> (NodeId, NodeId) {
    (u.min(v), u.max(v))
}

/// Randomizes the wiring of the alive subgraph by `swaps_per_edge * M`
/// attempted double-edge swaps: pick two edges `(a,b)`, `(c,d)` and rewire
/// them to `(a,d)`, `(c,b)` or `(a,c)`, `(b,d)`. Swaps that would create a
/// self-loop or a repeated edge are skipped. Every node keeps its degree and
/// coordinates.
pub fn rewire_degree_preserving(g: &Graph, spec: RewireSpec) -> Result<(Graph, RewireReport)> {
    if spec.swaps_per_edge == 0 {
        return Err(Error::InvalidArgument("swaps_per_edge must be at least 1".into()));
    }
    let mut edges: Vec<(NodeId, NodeId)> = g.edges().collect();
    let m = edges.len();
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "rewiring needs at least 2 edges, got {m}"
        )));
    }
    let mut present: HashSet<(NodeId, NodeId)> = edges.iter().copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let attempted = spec.swaps_per_edge * m;
    let mut accepted = 0;
    for _ in 0..attempted {
        let i = rng.gen_range(0..m);
        let mut j = rng.gen_range(0..m - 1);
        if j >= i {
            j += 1;
        }
        let ((a, b), (c, d)) = (edges[i], edges[j]);
        let (e1, e2) = if rng.gen::<bool>() {
            ((a, d), (c, b))
        } else {
            ((a, c), (b, d))
        };
        if e1.0 == e1.1 || e2.0 == e2.1 {
            continue;
        }
        let (k1, k2) = (key(e1.0, e1.1), key(e2.0, e2.1));
        if k1 == k2 || present.contains(&k1) || present.contains(&k2) {
            continue;
        }
        present.remove(&key(a, b));
        present.remove(&key(c, d));
        present.insert(k1);
        present.insert(k2);
        edges[i] = k1;
        edges[j] = k2;
        accepted += 1;
    }
    let mut out = Graph::from_edges(g.node_count(), edges, g.coords().map(|c| c.to_vec()))?;
    for v in 0..g.node_count() {
        if !g.is_alive(v) {
            out.remove_node(v);
        }
    }
    Ok((
        out,
        RewireReport {
            attempted,
            accepted,
            rejected: attempted - accepted,
        },
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelocationSpec {
    pub side: usize,
    /// Lattice spacing in meters.
    pub spacing: f64,
    pub seed: u64,
}

impl RelocationSpec {
    /// Lattice sized for `n` nodes; errors unless `n` is a perfect square.
    pub fn for_nodes(n: usize, spacing: f64, seed: u64) -> Result<Self> {
        let side = exact_sqrt(n).ok_or_else(|| {
            Error::InvalidArgument(format!("relocation needs a square node count, got {n}"))
        })?;
        Ok(RelocationSpec {
            side,
            spacing,
            seed,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RelocationReport {
    pub dropped_stubs: usize,
    /// Links made in the second pass, between sites that are not lattice
    /// neighbors.
    pub long_link_count: usize,
    /// Longest realized link, meters.
    pub max_link_length: f64,
}

/// Moves the degree sequence of `g` onto a `side x side` lattice.
///
/// 1. The alive degrees are shuffled onto the sites as free stub counts.
/// 2. A row-major sweep links each site to its East, then South neighbor
///    while both hold free stubs.
/// 3. Remaining free stubs are paired greedily, nearest non-adjacent pair of
///    sites first (ties by smallest site indices).
/// 4. Stubs that cannot be paired without a self-loop or repeated edge are
///    dropped and counted.
pub fn relocate_to_lattice(g: &Graph, spec: RelocationSpec) -> Result<(Graph, RelocationReport)> {
    let side = spec.side;
    let n = side * side;
    if g.alive_count() != n {
        return Err(Error::InvalidArgument(format!(
            "lattice side {side} holds {n} sites but the graph has {} nodes",
            g.alive_count()
        )));
    }
    if !(spec.spacing.is_finite() && spec.spacing > 0.0) {
        return Err(Error::InvalidArgument("lattice spacing must be positive".into()));
    }
    let mut stubs: Vec<usize> = g.alive_nodes().map(|v| g.degree(v)).collect();
    stubs.shuffle(&mut ChaCha8Rng::seed_from_u64(spec.seed));

    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    let mut connect = |a: NodeId, b: NodeId, stubs: &mut [usize]| {
        stubs[a] -= 1;
        stubs[b] -= 1;
        edges.push(key(a, b));
    };
    for site in 0..n {
        let (row, col) = (site / side, site % side);
        if col + 1 < side && stubs[site] > 0 && stubs[site + 1] > 0 {
            connect(site, site + 1, &mut stubs);
        }
        if row + 1 < side && stubs[site] > 0 && stubs[site + side] > 0 {
            connect(site, site + side, &mut stubs);
        }
    }
    let first_pass = edges.len();
    let linked: HashSet<(NodeId, NodeId)> = edges.iter().copied().collect();

    // Validity of a pair only ever goes from true to false (stubs run out,
    // or the pair itself gets linked), so one sweep over all pairs sorted by
    // distance is the same as repeatedly taking the nearest valid pair.
    let free: Vec<NodeId> = (0..n).filter(|&s| stubs[s] > 0).collect();
    let mut pairs: Vec<(usize, NodeId, NodeId)> = Vec::new();
    for (i, &a) in free.iter().enumerate() {
        for &b in &free[i + 1..] {
            let (dr, dc) = ((a / side).abs_diff(b / side), (a % side).abs_diff(b % side));
            pairs.push((dr * dr + dc * dc, a, b));
        }
    }
    pairs.sort_unstable();
    // each pair occurs once, so only first-pass links can repeat
    for (_, a, b) in pairs {
        if stubs[a] > 0 && stubs[b] > 0 && !linked.contains(&(a, b)) {
            stubs[a] -= 1;
            stubs[b] -= 1;
            edges.push((a, b));
        }
    }

    let coords: Vec<Point> = (0..n)
        .map(|s| Point::new((s % side) as f64 * spec.spacing, (s / side) as f64 * spec.spacing))
        .collect();
    let max_link_length = edges
        .iter()
        .map(|&(a, b)| coords[a].dist(coords[b]))
        .fold(0.0, f64::max);
    let report = RelocationReport {
        dropped_stubs: stubs.iter().sum(),
        long_link_count: edges.len() - first_pass,
        max_link_length,
    };
    Ok((Graph::from_edges(n, edges, Some(coords))?, report))
}
