use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::spatial::Point;

/// Outcome of a straight-line embedding check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Planarity {
    pub planar: bool,
    /// First offending pair of edges, in lexicographic edge order.
    pub crossing: Option<[(NodeId, NodeId); 2]>,
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed-segment intersection test: crossings, touching endpoints and
/// collinear overlaps all count.
pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0))
        && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0))
    {
        return true;
    }
    (o1 == 0.0 && on_segment(a, b, c))
        || (o2 == 0.0 && on_segment(a, b, d))
        || (o3 == 0.0 && on_segment(c, d, a))
        || (o4 == 0.0 && on_segment(c, d, b))
}

/// Checks that no two edges without a shared endpoint meet anywhere, using
/// the graph's own coordinates. A vertex lying on the interior of a foreign
/// edge also counts as a violation. O(M²) with a bounding-box prefilter.
pub fn check_planar_embedding(g: &Graph) -> Result<Planarity> {
    let coords = g
        .coords()
        .ok_or_else(|| Error::InvalidArgument("planarity check needs node coordinates".into()))?;
    let edges: Vec<(NodeId, NodeId)> = g.edges().collect();
    let boxes: Vec<[f64; 4]> = edges
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (coords[u], coords[v]);
            [a.x.min(b.x), a.y.min(b.y), a.x.max(b.x), a.y.max(b.y)]
        })
        .collect();
    for i in 0..edges.len() {
        let (a, b) = edges[i];
        for j in i + 1..edges.len() {
            let (c, d) = edges[j];
            if a == c || a == d || b == c || b == d {
                continue;
            }
            let (p, q) = (boxes[i], boxes[j]);
            if p[2] < q[0] || q[2] < p[0] || p[3] < q[1] || q[3] < p[1] {
                continue;
            }
            if segments_intersect(coords[a], coords[b], coords[c], coords[d]) {
                return Ok(Planarity {
                    planar: false,
                    crossing: Some([edges[i], edges[j]]),
                });
            }
        }
    }
    Ok(Planarity {
        planar: true,
        crossing: None,
    })
}
