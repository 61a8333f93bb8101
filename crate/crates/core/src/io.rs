//! Plain-text file formats.
//!
//! All files are UTF-8 CSV with LF line endings and no quoting. Reals are
//! written in their shortest round-trip decimal form, so a value read back
//! is bit-identical to the one written.
//!
//! | file      | header                        | rows                               |
//! |-----------|-------------------------------|------------------------------------|
//! | mesh      | `rows,cols,cell_size` values  | `row,col,population`, nonzero only |
//! | points    | `id,x,y`                      | ids `0..N` in order                |
//! | edges     | `u,v`                         | `u < v`, lexicographic             |
//! | curve     | `i,q,s1,s2,removed_node`      | one per step, `i = 0..=N`          |
//! | partition | `node,community`              | alive nodes                        |

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::attack::{AttackCurve, QNormalization};
use crate::community::Partition;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::spatial::{Placement, Point, PointSet, PopulationMesh};

pub const MESH_HEADER: &str = "rows,cols,cell_size";
pub const POINTS_HEADER: &str = "id,x,y";
pub const EDGES_HEADER: &str = "u,v";
pub const CURVE_HEADER: &str = "i,q,s1,s2,removed_node";
pub const PARTITION_HEADER: &str = "node,community";

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Writes `contents`, creating parent directories as needed.
pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

/// Non-blank lines with 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn fields<'a, const K: usize>(path: &Path, line: usize, text: &'a str) -> Result<[&'a str; K]> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    parts
        .try_into()
        .map_err(|p: Vec<&str>| Error::parse(path, line, format!("expected {K} fields, found {}", p.len())))
}

fn num<T: FromStr>(path: &Path, line: usize, what: &str, s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::parse(path, line, format!("invalid {what} {s:?}")))
}

fn expect_header<'a>(
    path: &Path,
    it: &mut impl Iterator<Item = (usize, &'a str)>,
    header: &str,
) -> Result<()> {
    match it.next() {
        Some((_, h)) if h == header => Ok(()),
        Some((line, h)) => Err(Error::parse(path, line, format!("expected header {header:?}, found {h:?}"))),
        None => Err(Error::parse(path, 1, format!("empty file, expected header {header:?}"))),
    }
}

/// Parses a mesh file. The first line holds the dimensions as values
/// (`2,2,500`); a literal `rows,cols,cell_size` line may precede it. Cells
/// not listed are zero, explicit zero rows are accepted.
pub fn parse_mesh(text: &str, path: &Path) -> Result<PopulationMesh> {
    let mut it = lines(text).peekable();
    if matches!(it.peek(), Some((_, h)) if *h == MESH_HEADER) {
        it.next();
    }
    let (line, dims) = it
        .next()
        .ok_or_else(|| Error::parse(path, 1, "missing mesh dimensions"))?;
    let [r, c, s] = fields::<3>(path, line, dims)?;
    let rows: usize = num(path, line, "row count", r)?;
    let cols: usize = num(path, line, "column count", c)?;
    let cell_size: f64 = num(path, line, "cell size", s)?;
    let mut mesh =
        PopulationMesh::zeros(rows, cols, cell_size).map_err(|e| Error::parse(path, line, e.to_string()))?;
    let mut seen = vec![false; rows * cols];
    for (line, text) in it {
        let [r, c, p] = fields::<3>(path, line, text)?;
        let row: usize = num(path, line, "row", r)?;
        let col: usize = num(path, line, "column", c)?;
        let pop: u64 = num(path, line, "population", p)?;
        if row >= rows || col >= cols {
            return Err(Error::parse(
                path,
                line,
                format!("cell ({row}, {col}) outside a {rows}x{cols} mesh"),
            ));
        }
        if std::mem::replace(&mut seen[row * cols + col], true) {
            return Err(Error::parse(path, line, format!("cell ({row}, {col}) listed twice")));
        }
        mesh.set(row, col, pop);
    }
    Ok(mesh)
}

/// Canonical mesh text: dimensions, then nonzero cells in row-major order.
pub fn format_mesh(mesh: &PopulationMesh) -> String {
    let mut out = format!("{},{},{}\n", mesh.rows(), mesh.cols(), mesh.cell_size());
    for row in 0..mesh.rows() {
        for col in 0..mesh.cols() {
            let p = mesh.get(row, col);
            if p > 0 {
                let _ = writeln!(out, "{row},{col},{p}");
            }
        }
    }
    out
}

pub fn load_mesh(path: &Path) -> Result<PopulationMesh> {
    parse_mesh(&read_text(path)?, path)
}

pub fn save_mesh(path: &Path, mesh: &PopulationMesh) -> Result<()> {
    write_text(path, &format_mesh(mesh))
}

/// Parses a point file; provenance becomes [`Placement::External`].
pub fn parse_points(text: &str, path: &Path) -> Result<PointSet> {
    let mut it = lines(text);
    expect_header(path, &mut it, POINTS_HEADER)?;
    let mut points = Vec::new();
    for (line, text) in it {
        let [i, x, y] = fields::<3>(path, line, text)?;
        let id: usize = num(path, line, "id", i)?;
        if id != points.len() {
            return Err(Error::parse(path, line, format!("expected id {}, found {id}", points.len())));
        }
        points.push(Point::new(num(path, line, "x", x)?, num(path, line, "y", y)?));
    }
    PointSet::new(points, Placement::External, None).map_err(|e| Error::parse(path, 0, e.to_string()))
}

pub fn format_points(points: &[Point]) -> String {
    let mut out = format!("{POINTS_HEADER}\n");
    for (i, p) in points.iter().enumerate() {
        let _ = writeln!(out, "{i},{},{}", p.x, p.y);
    }
    out
}

pub fn load_points(path: &Path) -> Result<PointSet> {
    parse_points(&read_text(path)?, path)
}

pub fn save_points(path: &Path, points: &[Point]) -> Result<()> {
    write_text(path, &format_points(points))
}

/// Parses an edge list. Every row must have `u < v` and rows must be
/// strictly increasing, which rules out reversed and repeated edges.
pub fn parse_edges(text: &str, path: &Path) -> Result<Vec<(NodeId, NodeId)>> {
    let mut it = lines(text);
    expect_header(path, &mut it, EDGES_HEADER)?;
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    for (line, text) in it {
        let [a, b] = fields::<2>(path, line, text)?;
        let e: (NodeId, NodeId) = (num(path, line, "node", a)?, num(path, line, "node", b)?);
        if e.0 >= e.1 {
            return Err(Error::parse(path, line, format!("edge ({}, {}) must have u < v", e.0, e.1)));
        }
        if let Some(&last) = edges.last() {
            if e <= last {
                let what = if e == last { "repeated" } else { "out of order" };
                return Err(Error::parse(path, line, format!("edge ({}, {}) is {what}", e.0, e.1)));
            }
        }
        edges.push(e);
    }
    Ok(edges)
}

/// Alive edges of `g` in canonical order.
pub fn format_edges(g: &Graph) -> String {
    let mut out = format!("{EDGES_HEADER}\n");
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u},{v}");
    }
    out
}

pub fn load_edges(path: &Path) -> Result<Vec<(NodeId, NodeId)>> {
    parse_edges(&read_text(path)?, path)
}

pub fn save_edges(path: &Path, g: &Graph) -> Result<()> {
    write_text(path, &format_edges(g))
}

/// Loads a graph from an edge list plus an optional coordinate sidecar.
///
/// The node count comes from `nodes` if given, else from the sidecar, else
/// from the largest id in the edge list.
pub fn load_graph(edges: &Path, coords: Option<&Path>, nodes: Option<usize>) -> Result<Graph> {
    let list = load_edges(edges)?;
    let points = coords.map(load_points).transpose()?.map(PointSet::into_points);
    let n = nodes
        .or(points.as_ref().map(Vec::len))
        .unwrap_or_else(|| list.iter().map(|&(_, v)| v + 1).max().unwrap_or(0));
    Graph::from_edges(n, list, points)
}

/// One row per step. Row 0 is the intact graph and has no removed node.
pub fn format_curve(curve: &AttackCurve, norm: QNormalization) -> String {
    let mut out = format!("{CURVE_HEADER}\n");
    let q = curve.q_values(norm);
    for i in 0..curve.s1.len() {
        let removed = i
            .checked_sub(1)
            .map(|k| curve.removal_order[k].to_string())
            .unwrap_or_default();
        let _ = writeln!(out, "{i},{},{},{},{removed}", q[i], curve.s1[i], curve.s2[i]);
    }
    out
}

pub fn save_curve(path: &Path, curve: &AttackCurve, norm: QNormalization) -> Result<()> {
    write_text(path, &format_curve(curve, norm))
}

pub fn format_partition(partition: &Partition) -> String {
    let mut out = format!("{PARTITION_HEADER}\n");
    for (v, c) in partition.assignment().iter().enumerate() {
        if let Some(c) = c {
            let _ = writeln!(out, "{v},{c}");
        }
    }
    out
}

pub fn save_partition(path: &Path, partition: &Partition) -> Result<()> {
    write_text(path, &format_partition(partition))
}
