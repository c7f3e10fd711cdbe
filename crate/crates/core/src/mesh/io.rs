//! Line-oriented `POLYMESH 1` text format.
//!
//! ```text
//! POLYMESH 1
//! VERTICES k
//! x y            (k lines)
//! ELEMENTS m
//! v0 v1 v2 ...   (m lines, counterclockwise, 0-based)
//! LAYERS l0 l1 ... l{m-1}   (optional)
//! ```
//! Edges are derived on import. Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::path::Path;

use super::{DomainTag, Mesh};
use crate::error::{Error, Result};
use crate::geometry::Point2;

pub fn write_mesh(mesh: &Mesh) -> String {
    let mut out = String::new();
    out.push_str("POLYMESH 1\n");
    let _ = writeln!(out, "VERTICES {}", mesh.n_vertices());
    for v in &mesh.vertices {
        let _ = writeln!(out, "{} {}", v.position.x, v.position.y);
    }
    let _ = writeln!(out, "ELEMENTS {}", mesh.n_elements());
    for el in &mesh.elements {
        let line: Vec<String> = el.vertex_loop.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    if let Some(labels) = mesh.layers() {
        let line: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
        let _ = writeln!(out, "LAYERS {}", line.join(" "));
    }
    out
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses and validates a mesh. The domain tag is inferred from the boundary when it matches
/// the unit square or the L-shape.
pub fn read_mesh(text: &str) -> Result<Mesh> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| parse_err(0, format!("unexpected end of file, expected {what}")))
    };

    let (ln, header) = next("header")?;
    if header.split_whitespace().collect::<Vec<_>>() != ["POLYMESH", "1"] {
        return Err(parse_err(
            ln,
            format!("expected 'POLYMESH 1', found '{header}'"),
        ));
    }

    let count = |ln: usize, line: &str, key: &str| -> Result<usize> {
        let mut it = line.split_whitespace();
        if it.next() != Some(key) {
            return Err(parse_err(ln, format!("expected '{key} <count>'")));
        }
        let n = it
            .next()
            .ok_or_else(|| parse_err(ln, format!("missing {key} count")))?
            .parse::<usize>()
            .map_err(|e| parse_err(ln, format!("bad {key} count: {e}")))?;
        if it.next().is_some() {
            return Err(parse_err(ln, "trailing tokens"));
        }
        Ok(n)
    };

    let (ln, line) = next("VERTICES")?;
    let nv = count(ln, line, "VERTICES")?;
    let mut positions = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (ln, line) = next("vertex coordinates")?;
        let xs: Vec<&str> = line.split_whitespace().collect();
        if xs.len() != 2 {
            return Err(parse_err(ln, format!("expected 'x y', found '{line}'")));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| parse_err(ln, format!("bad coordinate '{s}': {e}")))
        };
        positions.push(Point2::new(parse(xs[0])?, parse(xs[1])?));
    }

    let (ln, line) = next("ELEMENTS")?;
    let ne = count(ln, line, "ELEMENTS")?;
    let mut loops = Vec::with_capacity(ne);
    for _ in 0..ne {
        let (ln, line) = next("element vertex list")?;
        let ids = line
            .split_whitespace()
            .map(|s| {
                let v = s
                    .parse::<usize>()
                    .map_err(|e| parse_err(ln, format!("bad vertex index '{s}': {e}")))?;
                if v >= nv {
                    return Err(parse_err(ln, format!("vertex index {v} out of range")));
                }
                Ok(v)
            })
            .collect::<Result<Vec<usize>>>()?;
        if ids.len() < 3 {
            return Err(parse_err(ln, "element needs at least 3 vertices"));
        }
        loops.push(ids);
    }

    let mut labels = None;
    if let Some((ln, line)) = lines.next() {
        let mut it = line.split_whitespace();
        if it.next() != Some("LAYERS") {
            return Err(parse_err(
                ln,
                format!("expected 'LAYERS' or end of file, found '{line}'"),
            ));
        }
        let l = it
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|e| parse_err(ln, format!("bad layer '{s}': {e}")))
            })
            .collect::<Result<Vec<usize>>>()?;
        if l.len() != ne {
            return Err(parse_err(
                ln,
                format!("{} layer labels for {ne} elements", l.len()),
            ));
        }
        labels = Some(l);
        if let Some((ln, _)) = lines.next() {
            return Err(parse_err(ln, "unexpected content after LAYERS"));
        }
    }

    let domain = infer_domain(&positions, &loops);
    let mesh = Mesh::from_loops(positions, loops, domain)?;
    match labels {
        Some(l) => mesh.with_layer_labels(&l),
        None => Ok(mesh),
    }
}

fn infer_domain(positions: &[Point2], loops: &[Vec<usize>]) -> DomainTag {
    let area: f64 = loops
        .iter()
        .map(|l| crate::geometry::signed_area(&l.iter().map(|&v| positions[v]).collect::<Vec<_>>()))
        .sum();
    let (mut lo, mut hi) = (positions[0], positions[0]);
    for p in positions {
        lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let near = |a: Point2, b: Point2| a.dist(b) < 1e-12;
    if near(lo, Point2::new(0.0, 0.0))
        && near(hi, Point2::new(1.0, 1.0))
        && (area - 1.0).abs() < 1e-10
    {
        DomainTag::UnitSquare
    } else if near(lo, Point2::new(-1.0, -1.0))
        && near(hi, Point2::new(1.0, 1.0))
        && (area - 3.0).abs() < 1e-10
    {
        // the removed quadrant must hold no vertex strictly inside it
        if positions.iter().all(|p| !(p.x < -1e-12 && p.y < -1e-12)) {
            DomainTag::LShape
        } else {
            DomainTag::Custom
        }
    } else {
        DomainTag::Custom
    }
}

pub fn import_mesh(path: impl AsRef<Path>) -> Result<Mesh> {
    read_mesh(&std::fs::read_to_string(path)?)
}

pub fn export_mesh(mesh: &Mesh, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, write_mesh(mesh))?;
    Ok(())
}
