use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Normalized link lengths are rounded to this many decimals before being
/// grouped into weight classes.
pub const WEIGHT_DECIMALS: i32 = 9;

/// Distinct link-weight classes, ascending, with their frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedEdgeProfile {
    pub weights: Vec<f64>,
    pub frequencies: Vec<usize>,
}

impl WeightedEdgeProfile {
    /// Total link weight `T_1 = Σ w_j f_j`.
    pub fn total_weight(&self) -> f64 {
        self.weights
            .iter()
            .zip(&self.frequencies)
            .map(|(&w, &f)| w * f as f64)
            .sum()
    }

    pub fn edge_count(&self) -> usize {
        self.frequencies.iter().sum()
    }
}

/// Groups alive edges by Euclidean length divided by the longest alive
/// edge, quantized to [`WEIGHT_DECIMALS`] places.
pub fn weighted_edge_profile(g: &Graph) -> Result<WeightedEdgeProfile> {
    let coords = g
        .coords()
        .ok_or_else(|| Error::InvalidArgument("sparsity index needs node coordinates".into()))?;
    let lengths: Vec<f64> = g.edges().map(|(u, v)| coords[u].dist(coords[v])).collect();
    if lengths.is_empty() {
        return Err(Error::NoEdges("sparsity index"));
    }
    let longest = lengths.iter().copied().fold(0.0, f64::max);
    let scale = 10f64.powi(WEIGHT_DECIMALS);
    let mut classes: BTreeMap<u64, usize> = BTreeMap::new();
    for len in lengths {
        let key = (len / longest * scale).round() as u64;
        *classes.entry(key).or_insert(0) += 1;
    }
    let (weights, frequencies) = classes
        .into_iter()
        .map(|(key, f)| (key as f64 / scale, f))
        .unzip();
    Ok(WeightedEdgeProfile {
        weights,
        frequencies,
    })
}

/// Weighted sparsity index over normalized link lengths,
/// `SI = 1 - (1 / (N² T_1)) Σ_j w_j f_j (f_j + 2 Σ_{l>j} f_l)` with the
/// weight classes in ascending order and `N` the alive node count.
pub fn sparsity_index(g: &Graph) -> Result<f64> {
    let profile = weighted_edge_profile(g)?;
    let n = g.alive_count() as f64;
    let total = profile.total_weight();
    let mut tail: usize = profile.frequencies.iter().sum();
    let mut acc = 0.0;
    for (&w, &f) in profile.weights.iter().zip(&profile.frequencies) {
        tail -= f;
        acc += w * f as f64 * (f as f64 + 2.0 * tail as f64);
    }
    Ok(1.0 - acc / (n * n * total))
}

/// Fraction of alive nodes with degree exactly 4 whose four neighbors all
/// have degree exactly 4. Zero for an empty graph.
pub fn grid_like_ratio(g: &Graph) -> f64 {
    if g.alive_count() == 0 {
        return 0.0;
    }
    let degree = g.degrees();
    let grid = g
        .alive_nodes()
        .filter(|&v| degree[v] == 4 && g.neighbors(v).all(|w| degree[w] == 4))
        .count();
    grid as f64 / g.alive_count() as f64
}
