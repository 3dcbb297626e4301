//! Plain-text mesh format.
//!
//! ```text
//! # comment lines start with '#'
//! NV NE
//! x y            (NV vertex lines)
//! m i_1 ... i_m  (NE element lines, 0-based CCW vertex indices)
//! ```
//!
//! Coordinates are written with 17 significant digits so a write/read round
//! trip reproduces every vertex bit-exactly.

use super::PolyMesh;
use crate::geom::Vec2;
use crate::{Error, Result};
use std::path::Path;

pub fn write_mesh_string(mesh: &PolyMesh) -> String {
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", mesh.n_vertices(), mesh.n_elements()));
    for v in &mesh.vertices {
        out.push_str(&format!("{:.16e} {:.16e}\n", v.x, v.y));
    }
    for cycle in &mesh.elements {
        out.push_str(&cycle.len().to_string());
        for v in cycle {
            out.push(' ');
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    out
}

pub fn write_mesh(mesh: &PolyMesh, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, write_mesh_string(mesh))?;
    Ok(())
}

/// Parse a mesh from text. With `fix_orientation`, clockwise element cycles
/// are silently reversed; otherwise they are rejected.
pub fn read_mesh_str(text: &str, fix_orientation: bool) -> Result<PolyMesh> {
    // (1-based line number, content) with comments and blanks skipped
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (head_no, head) = lines
        .next()
        .ok_or_else(|| Error::Parse { line: 0, msg: "empty mesh file".into() })?;
    let mut it = head.split_whitespace();
    let nv: usize = parse_field(it.next(), head_no, "vertex count")?;
    let ne: usize = parse_field(it.next(), head_no, "element count")?;

    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (no, line) = lines.next().ok_or_else(|| Error::Parse {
            line: head_no,
            msg: format!("expected {nv} vertex lines"),
        })?;
        let mut it = line.split_whitespace();
        let x: f64 = parse_field(it.next(), no, "x coordinate")?;
        let y: f64 = parse_field(it.next(), no, "y coordinate")?;
        if it.next().is_some() {
            return Err(Error::Parse { line: no, msg: "trailing tokens on vertex line".into() });
        }
        vertices.push(Vec2::new(x, y));
    }

    let mut elements = Vec::with_capacity(ne);
    for _ in 0..ne {
        let (no, line) = lines.next().ok_or_else(|| Error::Parse {
            line: head_no,
            msg: format!("expected {ne} element lines"),
        })?;
        let mut it = line.split_whitespace();
        let m: usize = parse_field(it.next(), no, "vertex count")?;
        if m < 3 {
            return Err(Error::Parse { line: no, msg: format!("element has {m} < 3 vertices") });
        }
        let mut cycle = Vec::with_capacity(m);
        for _ in 0..m {
            let v: usize = parse_field(it.next(), no, "vertex index")?;
            if v >= nv {
                return Err(Error::Parse {
                    line: no,
                    msg: format!("vertex index {v} out of range (mesh has {nv} vertices)"),
                });
            }
            cycle.push(v);
        }
        if it.next().is_some() {
            return Err(Error::Parse { line: no, msg: "trailing tokens on element line".into() });
        }
        if fix_orientation {
            let poly: Vec<Vec2> = cycle.iter().map(|&v| vertices[v]).collect();
            if crate::geom::signed_area(&poly) < 0.0 {
                cycle.reverse();
            }
        }
        elements.push(cycle);
    }
    if let Some((no, _)) = lines.next() {
        return Err(Error::Parse { line: no, msg: "unexpected extra line".into() });
    }

    PolyMesh::from_cells(vertices, elements)
}

pub fn read_mesh(path: impl AsRef<Path>, fix_orientation: bool) -> Result<PolyMesh> {
    let text = std::fs::read_to_string(path)?;
    read_mesh_str(&text, fix_orientation)
}

fn parse_field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::Parse { line, msg: format!("missing {what}") })?;
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("cannot parse {what} from {tok:?}"),
    })
}
