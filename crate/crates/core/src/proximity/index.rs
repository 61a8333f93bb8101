use crate::graph::NodeId;
use crate::spatial::Point;

/// Uniform bucket grid over a point set, roughly one point per bucket.
pub(super) struct PointIndex {
    min_x: f64,
    min_y: f64,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<NodeId>>,
}

impl PointIndex {
    pub(super) fn new(pts: &[Point]) -> Self {
        let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
        let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in pts {
            min_x = min_x.min(p.x);
            min_y = min_y.min(p.y);
            max_x = max_x.max(p.x);
            max_y = max_y.max(p.y);
        }
        let (w, h) = ((max_x - min_x).max(0.0), (max_y - min_y).max(0.0));
        let span = w.max(h).max(f64::MIN_POSITIVE);
        let side = (pts.len() as f64).sqrt().ceil().max(1.0);
        let cell = span / side;
        let nx = ((w / cell).floor() as usize + 1).min(4096);
        let ny = ((h / cell).floor() as usize + 1).min(4096);
        let mut index = PointIndex {
            min_x,
            min_y,
            cell,
            nx,
            ny,
            buckets: vec![Vec::new(); nx * ny],
        };
        for (i, p) in pts.iter().enumerate() {
            let (bx, by) = index.bucket(p.x, p.y);
            index.buckets[by * nx + bx].push(i);
        }
        index
    }

    fn bucket(&self, x: f64, y: f64) -> (usize, usize) {
        let bx = ((x - self.min_x) / self.cell).floor().max(0.0) as usize;
        let by = ((y - self.min_y) / self.cell).floor().max(0.0) as usize;
        (bx.min(self.nx - 1), by.min(self.ny - 1))
    }

    /// True if any point in the square `center ± reach` (grown by one bucket
    /// on each side, so boundary points are never missed) satisfies `pred`.
    pub(super) fn any_in_box(
        &self,
        center: Point,
        reach: f64,
        mut pred: impl FnMut(NodeId) -> bool,
    ) -> bool {
        let (x0, y0) = self.bucket(center.x - reach, center.y - reach);
        let (x1, y1) = self.bucket(center.x + reach, center.y + reach);
        let (x0, y0) = (x0.saturating_sub(1), y0.saturating_sub(1));
        let (x1, y1) = ((x1 + 1).min(self.nx - 1), (y1 + 1).min(self.ny - 1));
        for by in y0..=y1 {
            for bx in x0..=x1 {
                if self.buckets[by * self.nx + bx].iter().any(|&w| pred(w)) {
                    return true;
                }
            }
        }
        false
    }
}
