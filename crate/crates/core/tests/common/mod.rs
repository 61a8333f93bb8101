//! Reference implementations written straight from the definitions. Slow on
//! purpose; they share no code with the library beyond plain data types.
#![allow(dead_code)]

use proxnet::graph::Graph;
use proxnet::spatial::Point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_points(n: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Point::new(rng.gen_range(0.0..1000.0), rng.gen_range(0.0..1000.0)))
        .collect()
}

/// Erdős–Rényi graph on `n` nodes.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges, None).unwrap()
}

fn dot(a: Point, b: Point, w: Point) -> f64 {
    (a.x - w.x) * (b.x - w.x) + (a.y - w.y) * (b.y - w.y)
}

/// Gabriel graph: `uv` is an edge unless some `w` sees `uv` at an angle of
/// 90 degrees or more.
pub fn gabriel_oracle(pts: &[Point]) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for u in 0..pts.len() {
        for v in u + 1..pts.len() {
            let blocked = (0..pts.len()).any(|w| w != u && w != v && dot(pts[u], pts[v], pts[w]) <= 0.0);
            if !blocked {
                edges.push((u, v));
            }
        }
    }
    edges
}

/// Relative neighborhood graph: `uv` is an edge unless some `w` is strictly
/// closer to both endpoints than they are to each other.
pub fn rng_oracle(pts: &[Point]) -> Vec<(usize, usize)> {
    let d = |a: Point, b: Point| (a.x - b.x).hypot(a.y - b.y);
    let mut edges = Vec::new();
    for u in 0..pts.len() {
        for v in u + 1..pts.len() {
            let duv = d(pts[u], pts[v]);
            let blocked = (0..pts.len())
                .any(|w| w != u && w != v && d(pts[u], pts[w]) < duv && d(pts[v], pts[w]) < duv);
            if !blocked {
                edges.push((u, v));
            }
        }
    }
    edges
}

/// All-pairs hop distances by Floyd–Warshall over alive nodes.
fn hop_distances(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let inf = usize::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for u in g.alive_nodes() {
        d[u][u] = 0;
        for v in g.neighbors(u) {
            d[u][v] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Betweenness by listing every shortest path between every unordered pair
/// and counting, for each node, the share of paths passing through it.
pub fn betweenness_oracle(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let d = hop_distances(g);
    let inf = usize::MAX / 4;
    let mut score = vec![0.0; n];
    let alive: Vec<usize> = g.alive_nodes().collect();
    for (i, &s) in alive.iter().enumerate() {
        for &t in &alive[i + 1..] {
            if d[s][t] >= inf {
                continue;
            }
            let mut paths: Vec<Vec<usize>> = Vec::new();
            let mut path = vec![s];
            enumerate(g, &d, t, &mut path, &mut paths);
            let total = paths.len() as f64;
            let mut through = vec![0usize; n];
            for p in &paths {
                for &v in &p[1..p.len() - 1] {
                    through[v] += 1;
                }
            }
            for v in 0..n {
                score[v] += through[v] as f64 / total;
            }
        }
    }
    score
}

fn enumerate(g: &Graph, d: &[Vec<usize>], t: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let u = *path.last().unwrap();
    if u == t {
        out.push(path.clone());
        return;
    }
    for w in g.neighbors(u) {
        if d[w][t] + 1 == d[u][t] {
            path.push(w);
            enumerate(g, d, t, path, out);
            path.pop();
        }
    }
}

/// `Q = (1/2M) Σ_ij [A_ij - k_i k_j / 2M] δ(c_i, c_j)` over alive nodes.
pub fn modularity_oracle(g: &Graph, labels: &[usize]) -> f64 {
    let two_m = 2.0 * g.edge_count() as f64;
    let mut q = 0.0;
    for i in g.alive_nodes() {
        for j in g.alive_nodes() {
            if labels[i] != labels[j] {
                continue;
            }
            let a = if g.has_edge(i, j) { 1.0 } else { 0.0 };
            q += a - g.degree(i) as f64 * g.degree(j) as f64 / two_m;
        }
    }
    q / two_m
}

/// Best modularity over every set partition of the nodes (restricted
/// growth strings). Feasible up to about a dozen nodes.
pub fn best_modularity_oracle(g: &Graph) -> (f64, Vec<usize>) {
    let n = g.node_count();
    let mut labels = vec![0usize; n];
    let mut best = (f64::NEG_INFINITY, labels.clone());
    fn rec(g: &Graph, i: usize, max: usize, labels: &mut Vec<usize>, best: &mut (f64, Vec<usize>)) {
        if i == labels.len() {
            let q = modularity_oracle(g, labels);
            if q > best.0 + 1e-12 {
                *best = (q, labels.clone());
            }
            return;
        }
        for c in 0..=max + 1 {
            labels[i] = c;
            rec(g, i + 1, max.max(c), labels, best);
        }
    }
    if n > 0 {
        rec(g, 1, 0, &mut labels, &mut best);
    }
    best
}

/// Term-by-term sparsity index over the listed edge lengths.
pub fn sparsity_oracle(n: usize, lengths: &[f64]) -> f64 {
    let longest = lengths.iter().cloned().fold(0.0, f64::max);
    let mut classes: Vec<(f64, usize)> = Vec::new();
    for &l in lengths {
        let w = (l / longest * 1e9).round() / 1e9;
        match classes.iter_mut().find(|(c, _)| *c == w) {
            Some(entry) => entry.1 += 1,
            None => classes.push((w, 1)),
        }
    }
    classes.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let t1: f64 = classes.iter().map(|(w, f)| w * *f as f64).sum();
    let mut acc = 0.0;
    for j in 0..classes.len() {
        let (w, f) = classes[j];
        let later: usize = classes[j + 1..].iter().map(|c| c.1).sum();
        acc += w * f as f64 * (f as f64 + 2.0 * later as f64);
    }
    1.0 - acc / ((n * n) as f64 * t1)
}

/// Textbook Pearson r and its two-sided p from the Student t distribution.
pub fn pearson_oracle(x: &[f64], y: &[f64]) -> (f64, f64) {
    use statrs::distribution::{ContinuousCDF, StudentsT};
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let sxx: f64 = x.iter().map(|a| a * a).sum();
    let syy: f64 = y.iter().map(|b| b * b).sum();
    let r = (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt());
    let t = r * ((n - 2.0) / (1.0 - r * r)).sqrt();
    let dist = StudentsT::new(0.0, 1.0, n - 2.0).unwrap();
    (r, 2.0 * (1.0 - dist.cdf(t.abs())))
}

/// Textbook one-way ANOVA: returns `(F, p, eta²)`.
pub fn anova_oracle(groups: &[Vec<f64>]) -> (f64, f64, f64) {
    use statrs::distribution::{ContinuousCDF, FisherSnedecor};
    let all: Vec<f64> = groups.iter().flatten().copied().collect();
    let grand = all.iter().sum::<f64>() / all.len() as f64;
    let sst: f64 = all.iter().map(|v| (v - grand) * (v - grand)).sum();
    let mut ssb = 0.0;
    for g in groups {
        let m = g.iter().sum::<f64>() / g.len() as f64;
        ssb += g.len() as f64 * (m - grand) * (m - grand);
    }
    let ssw = sst - ssb;
    let (d1, d2) = ((groups.len() - 1) as f64, (all.len() - groups.len()) as f64);
    let f = (ssb / d1) / (ssw / d2);
    let p = 1.0 - FisherSnedecor::new(d1, d2).unwrap().cdf(f);
    (f, p, ssb / sst)
}
