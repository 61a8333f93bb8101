use std::collections::VecDeque;

use rayon::prelude::*;

use super::{Graph, NodeId};

/// Sources per work unit. Chunk boundaries depend only on the source list,
/// so the floating-point reduction order is independent of the thread count.
const CHUNK: usize = 32;

/// Exact shortest-path betweenness of every node slot over unordered pairs
/// of alive nodes. Removed nodes score 0.
///
/// `b(v) = sum over {s, t}, s != v != t, of sigma_st(v) / sigma_st`, where
/// disconnected pairs contribute nothing. Runs one BFS plus dependency
/// accumulation per source, O(n * M) overall.
pub fn betweenness(g: &Graph) -> Vec<f64> {
    let sources: Vec<NodeId> = g.alive_nodes().collect();
    let mut scores = vec![0.0; g.node_count()];
    betweenness_from_sources(g, &sources, &mut scores);
    scores
}

/// Adds the dependency contributions of `sources` into `scores`, halved for
/// the unordered-pair convention.
///
/// Passing exactly the alive members of one connected component recomputes
/// that component's betweenness in isolation, since paths never leave it.
pub fn betweenness_from_sources(g: &Graph, sources: &[NodeId], scores: &mut [f64]) {
    let n = g.node_count();
    let partials: Vec<Vec<(NodeId, f64)>> = sources
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut scratch = Scratch::new(n);
            let mut acc = vec![0.0; n];
            let mut touched = Vec::new();
            for &s in chunk {
                scratch.accumulate(g, s, &mut acc, &mut touched);
            }
            touched.sort_unstable();
            touched.dedup();
            touched.into_iter().map(|v| (v, acc[v])).collect()
        })
        .collect();
    for partial in partials {
        for (v, value) in partial {
            scores[v] += value / 2.0;
        }
    }
}

struct Scratch {
    dist: Vec<i64>,
    sigma: Vec<f64>,
    delta: Vec<f64>,
    order: Vec<NodeId>,
    queue: VecDeque<NodeId>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch {
            dist: vec![-1; n],
            sigma: vec![0.0; n],
            delta: vec![0.0; n],
            order: Vec::with_capacity(n),
            queue: VecDeque::new(),
        }
    }

    /// Single-source Brandes pass from `s`.
    fn accumulate(&mut self, g: &Graph, s: NodeId, acc: &mut [f64], touched: &mut Vec<NodeId>) {
        self.order.clear();
        self.dist[s] = 0;
        self.sigma[s] = 1.0;
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            self.order.push(v);
            let next = self.dist[v] + 1;
            for w in g.neighbors(v) {
                if self.dist[w] < 0 {
                    self.dist[w] = next;
                    self.queue.push_back(w);
                }
                if self.dist[w] == next {
                    self.sigma[w] += self.sigma[v];
                }
            }
        }
        for &w in self.order.iter().rev() {
            let coeff = (1.0 + self.delta[w]) / self.sigma[w];
            let prev = self.dist[w] - 1;
            for v in g.neighbors(w) {
                if self.dist[v] == prev {
                    self.delta[v] += self.sigma[v] * coeff;
                }
            }
            if w != s {
                acc[w] += self.delta[w];
            }
        }
        touched.extend_from_slice(&self.order);
        for &v in &self.order {
            self.dist[v] = -1;
            self.sigma[v] = 0.0;
            self.delta[v] = 0.0;
        }
    }
}
