//! Sequential node-removal attacks and the robustness measures derived from
//! them.
//!
//! A run removes nodes one at a time until none are left, recording the
//! relative sizes of the largest and second-largest connected components
//! after every removal. The robustness index `R` is the mean of the former;
//! the critical fraction `q_c` is where the latter peaks.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{betweenness, betweenness_from_sources, two_largest_components, Graph, NodeId};

/// Relative tolerance under which two betweenness scores count as tied.
/// Absorbs summation-order noise so that ties resolve to the smallest id.
pub const BETWEENNESS_TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttackKind {
    /// Highest betweenness first, recomputed after every removal.
    Rb,
    /// Highest initial degree first.
    Id,
    /// Uniformly random order.
    Rf,
}

impl AttackKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AttackKind::Rb => "rb",
            AttackKind::Id => "id",
            AttackKind::Rf => "rf",
        }
    }
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AttackKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rb" => Ok(AttackKind::Rb),
            "id" => Ok(AttackKind::Id),
            "rf" => Ok(AttackKind::Rf),
            other => Err(Error::InvalidArgument(format!("unknown attack {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackStrategy {
    pub kind: AttackKind,
    /// Only consulted by [`AttackKind::Rf`].
    pub seed: u64,
}

impl AttackStrategy {
    pub fn rb() -> Self {
        AttackStrategy {
            kind: AttackKind::Rb,
            seed: 0,
        }
    }

    pub fn id() -> Self {
        AttackStrategy {
            kind: AttackKind::Id,
            seed: 0,
        }
    }

    pub fn rf(seed: u64) -> Self {
        AttackStrategy {
            kind: AttackKind::Rf,
            seed,
        }
    }
}

/// How removal step `i` maps to a removed fraction `q`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QNormalization {
    /// `q_i = i / N`.
    #[default]
    ByN,
    /// `q_i = i / (N - 1)`.
    ByNMinusOne,
}

impl QNormalization {
    pub fn fraction(self, i: usize, n: usize) -> f64 {
        let denom = match self {
            QNormalization::ByN => n,
            QNormalization::ByNMinusOne => n.saturating_sub(1).max(1),
        };
        i as f64 / denom as f64
    }
}

/// Component sizes after each removal step.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackCurve {
    pub n: usize,
    /// `s1[i]`: largest component size over `n` after `i` removals, `i = 0..=n`.
    pub s1: Vec<f64>,
    /// `s2[i]`: second-largest component size over `n`.
    pub s2: Vec<f64>,
    /// Nodes in removal order.
    pub removal_order: Vec<NodeId>,
}

impl AttackCurve {
    /// Replays `order` on `g` and records the component sizes. Uses reverse
    /// union-find, adding nodes back from the last removed to the first.
    pub fn from_order(g: &Graph, order: &[NodeId]) -> Self {
        let n = g.alive_count();
        let mut removed = vec![false; g.node_count()];
        for &v in order {
            removed[v] = true;
        }
        let mut dsu = GrowingComponents::new(g.node_count());
        for v in g.alive_nodes().filter(|&v| !removed[v]) {
            dsu.add(g, v);
        }
        let steps = order.len();
        let norm = n.max(1) as f64;
        let mut s1 = vec![0.0; steps + 1];
        let mut s2 = vec![0.0; steps + 1];
        for i in (0..=steps).rev() {
            if i < steps {
                dsu.add(g, order[i]);
            }
            let (a, b) = dsu.top_two();
            s1[i] = a as f64 / norm;
            s2[i] = b as f64 / norm;
        }
        AttackCurve {
            n,
            s1,
            s2,
            removal_order: order.to_vec(),
        }
    }

    /// Fraction removed at every step, `i = 0..=len`.
    pub fn q_values(&self, norm: QNormalization) -> Vec<f64> {
        (0..self.s1.len()).map(|i| norm.fraction(i, self.n)).collect()
    }
}

/// Union-find over nodes added one at a time, with a multiset of component
/// sizes so the two largest are always at hand.
struct GrowingComponents {
    parent: Vec<usize>,
    size: Vec<usize>,
    present: Vec<bool>,
    sizes: BTreeMap<usize, usize>,
}

impl GrowingComponents {
    fn new(slots: usize) -> Self {
        GrowingComponents {
            parent: (0..slots).collect(),
            size: vec![1; slots],
            present: vec![false; slots],
            sizes: BTreeMap::new(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn forget(&mut self, s: usize) {
        let count = self.sizes.get_mut(&s).expect("size is tracked");
        *count -= 1;
        if *count == 0 {
            self.sizes.remove(&s);
        }
    }

    fn add(&mut self, g: &Graph, v: NodeId) {
        self.present[v] = true;
        *self.sizes.entry(1).or_insert(0) += 1;
        for &w in g.raw_neighbors(v) {
            if !self.present[w] {
                continue;
            }
            let (a, b) = (self.find(v), self.find(w));
            if a == b {
                continue;
            }
            let (big, small) = if self.size[a] >= self.size[b] { (a, b) } else { (b, a) };
            self.forget(self.size[a]);
            self.forget(self.size[b]);
            self.parent[small] = big;
            self.size[big] += self.size[small];
            *self.sizes.entry(self.size[big]).or_insert(0) += 1;
        }
    }

    fn top_two(&self) -> (usize, usize) {
        let mut it = self.sizes.iter().rev();
        match it.next() {
            None => (0, 0),
            Some((&s, &c)) if c >= 2 => (s, s),
            Some((&s, _)) => (s, it.next().map_or(0, |(&t, _)| t)),
        }
    }
}

/// Removes every alive node of `g` in the order dictated by `strategy`.
pub fn run_attack(g: &Graph, strategy: AttackStrategy) -> AttackCurve {
    let order = match strategy.kind {
        AttackKind::Id => initial_degree_order(g),
        AttackKind::Rf => random_order(g, strategy.seed),
        AttackKind::Rb => recalculated_betweenness_order(g),
    };
    AttackCurve::from_order(g, &order)
}

/// Descending degree, ties by ascending id.
pub fn initial_degree_order(g: &Graph) -> Vec<NodeId> {
    let mut order: Vec<NodeId> = g.alive_nodes().collect();
    let degree = g.degrees();
    order.sort_by(|&a, &b| degree[b].cmp(&degree[a]).then(a.cmp(&b)));
    order
}

pub fn random_order(g: &Graph, seed: u64) -> Vec<NodeId> {
    let mut order: Vec<NodeId> = g.alive_nodes().collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    order
}

/// Index of the highest score among `candidates`, treating scores within
/// [`BETWEENNESS_TIE_TOLERANCE`] of the maximum as tied and resolving ties to
/// the smallest id.
pub fn argmax_with_ties(scores: &[f64], candidates: impl Iterator<Item = NodeId> + Clone) -> Option<NodeId> {
    let max = candidates.clone().map(|v| scores[v]).fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return None;
    }
    let floor = max - BETWEENNESS_TIE_TOLERANCE * max.abs().max(1.0);
    candidates.filter(|&v| scores[v] >= floor).min()
}

/// Greedy removal of the current betweenness maximum.
///
/// After a removal only the component that held the removed node can
/// change, so only its fragments are rescored.
pub fn recalculated_betweenness_order(g: &Graph) -> Vec<NodeId> {
    let mut g = g.clone();
    let slots = g.node_count();
    let mut scores = betweenness(&g);
    // component label per node, and members per label
    let mut label = vec![usize::MAX; slots];
    let mut members: Vec<Vec<NodeId>> = Vec::new();
    for comp in crate::graph::components(&g) {
        for &v in &comp {
            label[v] = members.len();
        }
        members.push(comp);
    }
    let mut order = Vec::with_capacity(g.alive_count());
    let mut seen = vec![false; slots];
    let mut stack = Vec::new();
    while g.alive_count() > 0 {
        let v = argmax_with_ties(&scores, (0..slots).filter(|&u| g.is_alive(u)))
            .expect("alive nodes remain");
        order.push(v);
        g.remove_node(v);
        let old = std::mem::take(&mut members[label[v]]);
        for &u in &old {
            scores[u] = 0.0;
        }
        // split the old component into its new pieces
        for &start in &old {
            if start == v || seen[start] {
                continue;
            }
            seen[start] = true;
            stack.push(start);
            let mut piece = Vec::new();
            while let Some(u) = stack.pop() {
                piece.push(u);
                for w in g.neighbors(u) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            piece.sort_unstable();
            if piece.len() >= 3 {
                betweenness_from_sources(&g, &piece, &mut scores);
            }
            let id = members.len();
            for &u in &piece {
                label[u] = id;
            }
            members.push(piece);
        }
        for &u in &old {
            seen[u] = false;
        }
    }
    order
}

/// Area under the largest-component curve, `R = (1/N) Σ_{i=1..N} s1[i]`.
pub fn robustness_index(curve: &AttackCurve) -> f64 {
    if curve.n == 0 {
        return 0.0;
    }
    curve.s1.iter().skip(1).sum::<f64>() / curve.n as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalFraction {
    pub q_c: f64,
    /// Removal step where the second component peaks.
    pub step: usize,
    /// Set when the second component never appears; `q_c` is then 0.
    pub degenerate: bool,
}

/// Removed fraction at the first peak of the second-largest component.
pub fn critical_fraction(curve: &AttackCurve, norm: QNormalization) -> CriticalFraction {
    let peak = curve.s2.iter().copied().fold(0.0, f64::max);
    if peak == 0.0 {
        return CriticalFraction {
            q_c: 0.0,
            step: 0,
            degenerate: true,
        };
    }
    let step = curve.s2.iter().position(|&s| s == peak).unwrap();
    CriticalFraction {
        q_c: norm.fraction(step, curve.n),
        step,
        degenerate: false,
    }
}

/// Size-only replay check used by tests: recompute component sizes from
/// scratch at every step.
#[doc(hidden)]
pub fn curve_by_recount(g: &Graph, order: &[NodeId]) -> AttackCurve {
    let mut h = g.clone();
    let n = h.alive_count();
    let norm = n.max(1) as f64;
    let mut s1 = Vec::with_capacity(order.len() + 1);
    let mut s2 = Vec::with_capacity(order.len() + 1);
    let (a, b) = two_largest_components(&h);
    s1.push(a as f64 / norm);
    s2.push(b as f64 / norm);
    for &v in order {
        h.remove_node(v);
        let (a, b) = two_largest_components(&h);
        s1.push(a as f64 / norm);
        s2.push(b as f64 / norm);
    }
    AttackCurve {
        n,
        s1,
        s2,
        removal_order: order.to_vec(),
    }
}
