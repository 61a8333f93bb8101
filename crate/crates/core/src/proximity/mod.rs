//! Relative neighborhood graphs and Gabriel graphs.
//!
//! Both rules compare squared distances only. Tie conventions:
//!
//! * GG: a third point `w` blocks `uv` when `d²(u,w) + d²(v,w) <= d²(u,v)`,
//!   i.e. when it lies in the *closed* disk with diameter `uv`.
//! * RNG: `w` blocks `uv` only when `max(d²(u,w), d²(v,w)) < d²(u,v)`,
//!   i.e. when it lies strictly inside the lune.
//!
//! With these conventions every RNG edge is a GG edge even on degenerate
//! inputs, and the GG of a square lattice is its 4-neighbor grid.

mod index;
mod planar;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use spade::{DelaunayTriangulation, HasPosition, Point2, Triangulation};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::spatial::{check_distinct, Point, PointSet};

pub use planar::{check_planar_embedding, segments_intersect, Planarity};

use index::PointIndex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProximityRule {
    Rng,
    Gg,
}

impl ProximityRule {
    pub fn as_str(self) -> &'static str {
        match self {
            ProximityRule::Rng => "rng",
            ProximityRule::Gg => "gg",
        }
    }

    /// Whether `w` keeps `u` and `v` from being linked.
    #[inline]
    pub fn blocks(self, u: Point, v: Point, w: Point) -> bool {
        let duv = u.dist2(v);
        let duw = u.dist2(w);
        let dvw = v.dist2(w);
        match self {
            ProximityRule::Gg => duw + dvw <= duv,
            ProximityRule::Rng => duw.max(dvw) < duv,
        }
    }
}

impl fmt::Display for ProximityRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProximityRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rng" => Ok(ProximityRule::Rng),
            "gg" => Ok(ProximityRule::Gg),
            other => Err(Error::InvalidArgument(format!("unknown graph kind {other:?}"))),
        }
    }
}

/// Construction algorithm. Both produce the same edge set.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    /// Every pair tested against every third point, O(N³).
    #[default]
    Literal,
    /// Candidate pairs restricted to Delaunay edges, blockers looked up in a
    /// bucket grid.
    Delaunay,
}

pub fn build_gg(points: &PointSet) -> Graph {
    build_graph(points, ProximityRule::Gg, Construction::Literal)
}

pub fn build_rng(points: &PointSet) -> Graph {
    build_graph(points, ProximityRule::Rng, Construction::Literal)
}

pub fn build_graph(points: &PointSet, rule: ProximityRule, construction: Construction) -> Graph {
    let pts = points.points();
    let edges = match construction {
        Construction::Literal => literal_edges(pts, rule),
        Construction::Delaunay => delaunay_edges(pts, rule),
    };
    Graph::from_edges(pts.len(), edges, Some(pts.to_vec()))
        .expect("proximity edges are simple by construction")
}

/// Like [`build_graph`] for raw coordinates, rejecting coincident points.
pub fn build_from_points(
    points: &[Point],
    rule: ProximityRule,
    construction: Construction,
) -> Result<Graph> {
    check_distinct(points)?;
    let set = PointSet::new(points.to_vec(), crate::spatial::Placement::External, None)?;
    Ok(build_graph(&set, rule, construction))
}

fn literal_edges(pts: &[Point], rule: ProximityRule) -> Vec<(NodeId, NodeId)> {
    let n = pts.len();
    (0..n)
        .into_par_iter()
        .flat_map_iter(|u| {
            (u + 1..n)
                .filter(move |&v| {
                    !(0..n).any(|w| w != u && w != v && rule.blocks(pts[u], pts[v], pts[w]))
                })
                .map(move |v| (u, v))
        })
        .collect()
}

struct Site {
    pos: Point2<f64>,
    id: NodeId,
}

impl HasPosition for Site {
    type Scalar = f64;

    fn position(&self) -> Point2<f64> {
        self.pos
    }
}

/// Every GG edge has an empty closed diametral disk, so it is a Delaunay
/// edge of every Delaunay triangulation (no cocircular ambiguity), and RNG is
/// a subgraph of GG. Filtering Delaunay edges with the literal blocking test
/// therefore loses nothing.
fn delaunay_edges(pts: &[Point], rule: ProximityRule) -> Vec<(NodeId, NodeId)> {
    if pts.len() < 2 {
        return Vec::new();
    }
    let sites = pts
        .iter()
        .enumerate()
        .map(|(id, p)| Site {
            pos: Point2::new(p.x, p.y),
            id,
        })
        .collect();
    let tri = DelaunayTriangulation::<Site>::bulk_load(sites)
        .expect("finite distinct points triangulate");
    let mut candidates: Vec<(NodeId, NodeId)> = tri
        .undirected_edges()
        .map(|e| {
            let [a, b] = e.vertices();
            let (a, b) = (a.data().id, b.data().id);
            (a.min(b), a.max(b))
        })
        .collect();
    candidates.sort_unstable();
    let index = PointIndex::new(pts);
    let mut edges: Vec<(NodeId, NodeId)> = candidates
        .into_par_iter()
        .filter(|&(u, v)| {
            let (pu, pv) = (pts[u], pts[v]);
            // both the closed disk and the lune lie within distance |uv| of
            // the midpoint
            let mid = Point::new((pu.x + pv.x) / 2.0, (pu.y + pv.y) / 2.0);
            let reach = match rule {
                ProximityRule::Gg => pu.dist(pv) / 2.0,
                ProximityRule::Rng => pu.dist(pv),
            };
            !index.any_in_box(mid, reach, |w| w != u && w != v && rule.blocks(pu, pv, pts[w]))
        })
        .collect();
    edges.sort_unstable();
    edges
}
