use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::mesh::PopulationMesh;
use super::points::{Placement, Point, PointSet};
use crate::error::{Error, Result};

/// Axis-aligned rectangle in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl BoundingBox {
    pub fn new(min_x: f64, min_y: f64, max_x: f64, max_y: f64) -> Result<Self> {
        let b = BoundingBox {
            min_x,
            min_y,
            max_x,
            max_y,
        };
        if !(b.width() > 0.0 && b.height() > 0.0 && b.width().is_finite() && b.height().is_finite())
        {
            return Err(Error::InvalidArgument(format!(
                "region must have positive finite area: {b:?}"
            )));
        }
        Ok(b)
    }

    pub fn of_mesh(mesh: &PopulationMesh) -> Self {
        let (w, h) = mesh.extent();
        BoundingBox {
            min_x: 0.0,
            min_y: 0.0,
            max_x: w,
            max_y: h,
        }
    }

    pub fn width(&self) -> f64 {
        self.max_x - self.min_x
    }

    pub fn height(&self) -> f64 {
        self.max_y - self.min_y
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.min_x && p.x <= self.max_x && p.y >= self.min_y && p.y <= self.max_y
    }
}

#[derive(Clone, Copy)]
enum Rank {
    Descending,
    Ascending,
}

/// Nonzero cells ordered by population. The descending ranking breaks ties
/// by ascending (row, col); the ascending ranking is its exact reverse, so
/// the top-k and bottom-k selections never overlap while 2k fits.
fn ranked_cells(mesh: &PopulationMesh, rank: Rank) -> Vec<usize> {
    let counts = mesh.counts();
    let mut cells: Vec<usize> = (0..counts.len()).filter(|&c| counts[c] > 0).collect();
    // row-major index order is exactly (row, col) order
    cells.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then(a.cmp(&b)));
    if let Rank::Ascending = rank {
        cells.reverse();
    }
    cells
}

fn place_ranked(mesh: &PopulationMesh, n: usize, rank: Rank, tag: Placement) -> Result<PointSet> {
    let cells = ranked_cells(mesh, rank);
    if cells.len() < n {
        return Err(Error::InsufficientCells {
            requested: n,
            available: cells.len(),
        });
    }
    let points = cells[..n]
        .iter()
        .map(|&c| {
            let (x, y) = mesh.cell_center(c / mesh.cols(), c % mesh.cols());
            Point::new(x, y)
        })
        .collect();
    PointSet::new(points, tag, None)
}

/// Centers of the `n` most-populated cells, densest first.
pub fn place_population(mesh: &PopulationMesh, n: usize) -> Result<PointSet> {
    place_ranked(mesh, n, Rank::Descending, Placement::Pop)
}

/// Centers of the `n` least-populated nonzero cells, sparsest first.
pub fn place_inverse(mesh: &PopulationMesh, n: usize) -> Result<PointSet> {
    place_ranked(mesh, n, Rank::Ascending, Placement::Inv)
}

/// `n` i.i.d. uniform points over `region`, continuous coordinates.
pub fn place_uniform(region: &BoundingBox, n: usize, seed: u64) -> Result<PointSet> {
    let region = BoundingBox::new(region.min_x, region.min_y, region.max_x, region.max_y)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(n);
    let mut seen = std::collections::HashSet::with_capacity(n);
    while points.len() < n {
        let p = Point::new(
            region.min_x + rng.gen::<f64>() * region.width(),
            region.min_y + rng.gen::<f64>() * region.height(),
        );
        // exact repeats are astronomically rare but must not reach the graph
        if seen.insert((p.x.to_bits(), p.y.to_bits())) {
            points.push(p);
        }
    }
    PointSet::new(points, Placement::Uni, Some(seed))
}

/// Uniform placement snapped to mesh centers: `n` distinct cells drawn
/// without replacement, regardless of population.
pub fn place_uniform_snapped(mesh: &PopulationMesh, n: usize, seed: u64) -> Result<PointSet> {
    let cells = mesh.rows() * mesh.cols();
    if n > cells {
        return Err(Error::InsufficientCells {
            requested: n,
            available: cells,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = index::sample(&mut rng, cells, n)
        .into_iter()
        .map(|c| {
            let (x, y) = mesh.cell_center(c / mesh.cols(), c % mesh.cols());
            Point::new(x, y)
        })
        .collect();
    PointSet::new(points, Placement::Uni, Some(seed))
}

/// `side * side` sites of a square lattice, row-major, the first at the origin.
pub fn lattice_points(side: usize, spacing: f64) -> Result<PointSet> {
    if side < 2 {
        return Err(Error::InvalidArgument(format!(
            "lattice side must be at least 2, got {side}"
        )));
    }
    if !(spacing.is_finite() && spacing > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "lattice spacing must be positive, got {spacing}"
        )));
    }
    let points = (0..side * side)
        .map(|i| Point::new((i % side) as f64 * spacing, (i / side) as f64 * spacing))
        .collect();
    PointSet::new(points, Placement::Lattice, None)
}

/// Integer square root when `n` is a perfect square.
pub fn exact_sqrt(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r * r == n).then_some(r)
}
