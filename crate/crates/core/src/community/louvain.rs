use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Partition;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Minimum modularity gain for a move to count as an improvement.
const GAIN_EPS: f64 = 1e-12;

/// Final partition plus the modularity reached after each aggregation level.
#[derive(Debug, Clone)]
pub struct LouvainRun {
    pub partition: Partition,
    /// Modularity of the flat partition after every level, starting with the
    /// singleton partition. Non-decreasing.
    pub trace: Vec<f64>,
}

/// Louvain community detection at resolution 1. Node visit order within
/// every local-move pass is shuffled by `seed`.
pub fn louvain(g: &Graph, seed: u64) -> Result<Partition> {
    louvain_with_trace(g, seed).map(|run| run.partition)
}

pub fn louvain_with_trace(g: &Graph, seed: u64) -> Result<LouvainRun> {
    if g.edge_count() == 0 {
        return Err(Error::NoEdges("louvain"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alive: Vec<usize> = g.alive_nodes().collect();
    let mut compact = vec![usize::MAX; g.node_count()];
    for (i, &v) in alive.iter().enumerate() {
        compact[v] = i;
    }
    let mut level = Weighted::from_graph(g, &alive, &compact);
    // membership of every alive node in the current level's super-nodes
    let mut membership: Vec<usize> = (0..alive.len()).collect();
    let mut trace = vec![level.modularity(&(0..level.len()).collect::<Vec<_>>())];
    loop {
        let (communities, moved) = level.local_moves(&mut rng);
        if !moved {
            break;
        }
        let (dense, count) = densify(&communities);
        for m in membership.iter_mut() {
            *m = dense[*m];
        }
        trace.push(level.modularity(&dense));
        level = level.aggregate(&dense, count);
        if count == 1 {
            break;
        }
    }
    let mut labels = vec![None; g.node_count()];
    for (i, &v) in alive.iter().enumerate() {
        labels[v] = Some(membership[i]);
    }
    Ok(LouvainRun {
        partition: Partition::from_labels(&labels),
        trace,
    })
}

fn densify(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut remap = vec![usize::MAX; labels.len()];
    let mut next = 0;
    let dense = labels
        .iter()
        .map(|&l| {
            if remap[l] == usize::MAX {
                remap[l] = next;
                next += 1;
            }
            remap[l]
        })
        .collect();
    (dense, next)
}

/// Weighted multigraph of one Louvain level. Self-loop weight counts each
/// collapsed internal edge once; `strength` includes it twice.
struct Weighted {
    adj: Vec<Vec<(usize, f64)>>,
    self_loop: Vec<f64>,
    strength: Vec<f64>,
    two_m: f64,
}

impl Weighted {
    fn from_graph(g: &Graph, alive: &[usize], compact: &[usize]) -> Self {
        let adj: Vec<Vec<(usize, f64)>> = alive
            .iter()
            .map(|&v| g.neighbors(v).map(|w| (compact[w], 1.0)).collect())
            .collect();
        let strength: Vec<f64> = adj.iter().map(|a| a.len() as f64).collect();
        let two_m = strength.iter().sum();
        Weighted {
            self_loop: vec![0.0; alive.len()],
            adj,
            strength,
            two_m,
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    fn modularity(&self, community: &[usize]) -> f64 {
        let k = community.iter().copied().max().map_or(0, |c| c + 1);
        let mut inside = vec![0.0; k];
        let mut total = vec![0.0; k];
        for i in 0..self.len() {
            let c = community[i];
            total[c] += self.strength[i];
            inside[c] += 2.0 * self.self_loop[i];
            for &(j, w) in &self.adj[i] {
                if community[j] == c {
                    inside[c] += w;
                }
            }
        }
        inside
            .iter()
            .zip(&total)
            .map(|(&a, &t)| a / self.two_m - (t / self.two_m).powi(2))
            .sum()
    }

    /// Repeated passes of greedy single-node moves from the singleton
    /// partition. Returns the community of each node and whether anything
    /// moved at all.
    fn local_moves(&self, rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
        let n = self.len();
        let mut community: Vec<usize> = (0..n).collect();
        let mut total: Vec<f64> = self.strength.clone();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut link = vec![0.0; n];
        let mut touched: Vec<usize> = Vec::new();
        let mut any_move = false;
        loop {
            let mut improved = false;
            for &i in &order {
                let own = community[i];
                let k_i = self.strength[i];
                for &(j, w) in &self.adj[i] {
                    let c = community[j];
                    if link[c] == 0.0 {
                        touched.push(c);
                    }
                    link[c] += w;
                }
                total[own] -= k_i;
                // gain of joining c, up to the common factor 1/M
                let gain = |c: usize, link_c: f64| link_c - total[c] * k_i / self.two_m;
                let mut best = own;
                let mut best_gain = gain(own, link[own]);
                for &c in &touched {
                    let g = gain(c, link[c]);
                    if g > best_gain + GAIN_EPS {
                        best = c;
                        best_gain = g;
                    }
                }
                total[best] += k_i;
                if best != own {
                    community[i] = best;
                    improved = true;
                    any_move = true;
                }
                for &c in &touched {
                    link[c] = 0.0;
                }
                touched.clear();
            }
            if !improved {
                break;
            }
        }
        (community, any_move)
    }

    fn aggregate(&self, community: &[usize], count: usize) -> Weighted {
        let mut self_loop = vec![0.0; count];
        let mut strength = vec![0.0; count];
        let mut maps: Vec<std::collections::BTreeMap<usize, f64>> = vec![Default::default(); count];
        for i in 0..self.len() {
            let c = community[i];
            strength[c] += self.strength[i];
            self_loop[c] += self.self_loop[i];
            for &(j, w) in &self.adj[i] {
                let d = community[j];
                if c == d {
                    // each internal edge is seen from both ends
                    self_loop[c] += w / 2.0;
                } else {
                    *maps[c].entry(d).or_insert(0.0) += w;
                }
            }
        }
        Weighted {
            adj: maps.into_iter().map(|m| m.into_iter().collect()).collect(),
            self_loop,
            strength,
            two_m: self.two_m,
        }
    }
}
