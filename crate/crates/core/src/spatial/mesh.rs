use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default block-mesh edge length in meters.
pub const DEFAULT_CELL_SIZE: f64 = 500.0;

/// Default mesh frame: 480 x 480 blocks.
pub const DEFAULT_MESH_SIDE: usize = 480;

/// A regular grid of square cells, each holding a residential population count.
///
/// Cells are stored row-major. The center of cell `(row, col)` sits at
/// `((col + 0.5) * cell_size, (row + 0.5) * cell_size)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationMesh {
    rows: usize,
    cols: usize,
    cell_size: f64,
    pop: Vec<u64>,
}

impl PopulationMesh {
    pub fn new(rows: usize, cols: usize, cell_size: f64, pop: Vec<u64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(format!(
                "mesh dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if !(cell_size.is_finite() && cell_size > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "cell size must be positive and finite, got {cell_size}"
            )));
        }
        if pop.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "expected {} cell counts for a {rows}x{cols} mesh, got {}",
                rows * cols,
                pop.len()
            )));
        }
        Ok(PopulationMesh {
            rows,
            cols,
            cell_size,
            pop,
        })
    }

    pub fn zeros(rows: usize, cols: usize, cell_size: f64) -> Result<Self> {
        Self::new(rows, cols, cell_size, vec![0; rows * cols])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.pop[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: u64) {
        self.pop[row * self.cols + col] = value;
    }

    /// Row-major cell counts.
    pub fn counts(&self) -> &[u64] {
        &self.pop
    }

    pub fn cell_center(&self, row: usize, col: usize) -> (f64, f64) {
        (
            (col as f64 + 0.5) * self.cell_size,
            (row as f64 + 0.5) * self.cell_size,
        )
    }

    pub fn nonzero_cells(&self) -> usize {
        self.pop.iter().filter(|&&p| p > 0).count()
    }

    pub fn total_population(&self) -> u64 {
        self.pop.iter().sum()
    }

    /// Width and height of the mesh frame in meters.
    pub fn extent(&self) -> (f64, f64) {
        (
            self.cols as f64 * self.cell_size,
            self.rows as f64 * self.cell_size,
        )
    }
}

/// How the rank-ordered synthetic populations are laid out over the cells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum Scatter {
    /// Ranks assigned to a uniformly random permutation of cells. Produces no
    /// spatial correlation between neighbouring cells.
    Uniform,
    /// Ranks follow a random settlement field: a handful of Gaussian
    /// population centers, perturbed per cell by log-normal noise. Dense
    /// cells cluster into urban cores, sparse cells spread over the fringes.
    Clustered {
        centers: usize,
        /// Center radius as a fraction of the shorter mesh side.
        spread: f64,
        /// Standard deviation of the per-cell log-normal perturbation.
        roughness: f64,
    },
}

impl Default for Scatter {
    fn default() -> Self {
        Scatter::Clustered {
            centers: 6,
            spread: 0.08,
            roughness: 1.0,
        }
    }
}

/// Parameters of the synthetic census substitute.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticMesh {
    pub rows: usize,
    pub cols: usize,
    #[serde(default = "default_cell_size")]
    pub cell_size: f64,
    pub total_population: u64,
    pub decay_rate: f64,
    #[serde(default)]
    pub scatter: Scatter,
}

fn default_cell_size() -> f64 {
    DEFAULT_CELL_SIZE
}

impl Default for SyntheticMesh {
    fn default() -> Self {
        SyntheticMesh {
            rows: DEFAULT_MESH_SIDE,
            cols: DEFAULT_MESH_SIDE,
            cell_size: DEFAULT_CELL_SIZE,
            total_population: 10_000_000,
            decay_rate: 2.0e-3,
            scatter: Scatter::default(),
        }
    }
}

/// Rank-ordered populations: the cell of rank `r` (0-based) receives
/// `round(total * exp(-decay * r) / sum_k exp(-decay * k))`.
///
/// The sequence is non-increasing because rounding is monotone.
pub fn rank_populations(cells: usize, total_population: u64, decay_rate: f64) -> Vec<u64> {
    // Normalizer sum_{k<cells} q^k with q = exp(-decay), in closed form.
    let q = (-decay_rate).exp();
    let norm = if decay_rate * cells as f64 > 1e-12 && q < 1.0 {
        -(-decay_rate * cells as f64).exp_m1() / -(-decay_rate).exp_m1()
    } else {
        cells as f64
    };
    let total = total_population as f64;
    (0..cells)
        .map(|r| (total * (-decay_rate * r as f64).exp() / norm).round() as u64)
        .collect()
}

/// Builds a synthetic population mesh whose rank-ordered populations decay
/// exponentially, deterministic under `seed`.
pub fn synthesize_mesh(params: &SyntheticMesh, seed: u64) -> Result<PopulationMesh> {
    let SyntheticMesh {
        rows,
        cols,
        cell_size,
        total_population,
        decay_rate,
        scatter,
    } = *params;
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidArgument("mesh must have at least one cell".into()));
    }
    if !(decay_rate.is_finite() && decay_rate >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "decay rate must be non-negative, got {decay_rate}"
        )));
    }
    let cells = rows * cols;
    let ranked = rank_populations(cells, total_population, decay_rate);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = match scatter {
        Scatter::Uniform => {
            let mut order: Vec<usize> = (0..cells).collect();
            order.shuffle(&mut rng);
            order
        }
        Scatter::Clustered {
            centers,
            spread,
            roughness,
        } => clustered_order(rows, cols, centers.max(1), spread, roughness, &mut rng),
    };
    let mut pop = vec![0u64; cells];
    for (rank, &cell) in order.iter().enumerate() {
        pop[cell] = ranked[rank];
    }
    PopulationMesh::new(rows, cols, cell_size, pop)
}

/// Cells sorted by a random settlement field, densest first.
fn clustered_order(
    rows: usize,
    cols: usize,
    centers: usize,
    spread: f64,
    roughness: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    let short = rows.min(cols) as f64;
    let hubs: Vec<(f64, f64, f64, f64)> = (0..centers)
        .map(|_| {
            let r = rng.gen::<f64>() * rows as f64;
            let c = rng.gen::<f64>() * cols as f64;
            // radius varies by up to 2x between centers, weight up to 4x
            let sigma = spread * short * (0.5 + rng.gen::<f64>());
            let weight = 0.25 + 0.75 * rng.gen::<f64>();
            (r, c, sigma.max(0.5), weight)
        })
        .collect();
    let mut keyed: Vec<(f64, usize)> = (0..rows * cols)
        .map(|cell| {
            let (r, c) = ((cell / cols) as f64 + 0.5, (cell % cols) as f64 + 0.5);
            let density: f64 = hubs
                .iter()
                .map(|&(hr, hc, sigma, weight)| {
                    let d2 = (r - hr).powi(2) + (c - hc).powi(2);
                    weight * (-d2 / (2.0 * sigma * sigma)).exp()
                })
                .sum();
            let noise: f64 = rng.sample(StandardNormal);
            // log-density keeps the far tail ordered instead of underflowing to 0
            let log_density = density.max(f64::MIN_POSITIVE).ln() + roughness * noise;
            (log_density, cell)
        })
        .collect();
    keyed.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    keyed.into_iter().map(|(_, cell)| cell).collect()
}
