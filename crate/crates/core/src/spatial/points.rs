use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist2(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn dist(self, other: Point) -> f64 {
        self.dist2(other).sqrt()
    }
}

/// Where a point set came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Placement {
    /// Most-populated mesh cells first.
    Pop,
    /// Least-populated nonzero cells first.
    Inv,
    /// Uniform random positions.
    Uni,
    /// Square lattice sites.
    Lattice,
    /// Read from a file.
    External,
}

impl Placement {
    pub fn as_str(self) -> &'static str {
        match self {
            Placement::Pop => "pop",
            Placement::Inv => "inv",
            Placement::Uni => "uni",
            Placement::Lattice => "lattice",
            Placement::External => "external",
        }
    }
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Placement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pop" => Ok(Placement::Pop),
            "inv" => Ok(Placement::Inv),
            "uni" => Ok(Placement::Uni),
            "lattice" | "2dl" => Ok(Placement::Lattice),
            "external" => Ok(Placement::External),
            other => Err(Error::InvalidArgument(format!("unknown placement {other:?}"))),
        }
    }
}

/// An ordered set of pairwise-distinct, finite node coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Point>,
    provenance: Placement,
    seed: Option<u64>,
}

impl PointSet {
    pub fn new(points: Vec<Point>, provenance: Placement, seed: Option<u64>) -> Result<Self> {
        if let Some(i) = points.iter().position(|p| !(p.x.is_finite() && p.y.is_finite())) {
            return Err(Error::InvalidArgument(format!(
                "point {i} has non-finite coordinates"
            )));
        }
        check_distinct(&points)?;
        Ok(PointSet {
            points,
            provenance,
            seed,
        })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn provenance(&self) -> Placement {
        self.provenance
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }
}

/// Errors on the first pair of exactly coincident points.
pub(crate) fn check_distinct(points: &[Point]) -> Result<()> {
    let mut seen: HashMap<(u64, u64), usize> = HashMap::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        // +0.0 and -0.0 compare equal, so normalize before hashing bits
        let key = ((p.x + 0.0).to_bits(), (p.y + 0.0).to_bits());
        if let Some(&first) = seen.get(&key) {
            return Err(Error::DuplicatePoint {
                first,
                second: i,
                x: p.x,
                y: p.y,
            });
        }
        seen.insert(key, i);
    }
    Ok(())
}
