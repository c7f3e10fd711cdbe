//! Quasi-uniform meshes of the unit square and geometrically graded meshes of the L-shape.

use std::str::FromStr;

use super::{DomainTag, Mesh, MeshBuilder};
use crate::error::{Error, Result};
use crate::geometry::{clip_left, Point2};

/// `n x n` congruent squares tiling `(0, 1)^2`.
pub fn generate_square_mesh(n: usize) -> Result<Mesh> {
    if n == 0 {
        return Err(Error::InvalidArgument("square mesh needs n >= 1".into()));
    }
    let h = 1.0 / n as f64;
    let mut b = MeshBuilder::new(DomainTag::UnitSquare, 2f64.sqrt());
    for j in 0..n {
        for i in 0..n {
            let (x0, y0) = (i as f64 * h, j as f64 * h);
            let (x1, y1) = (
                if i + 1 == n { 1.0 } else { x0 + h },
                if j + 1 == n { 1.0 } else { y0 + h },
            );
            b.polygon(&rect(x0, x1, y0, y1), None);
        }
    }
    b.build()
}

/// Hexagon-dominant tiling of `(0, 1)^2` with `n + 1` columns of flat-topped hexagons
/// (affinely scaled to column spacing and row height `1/n`), clipped to the square.
///
/// Cells cut by the boundary become convex quadrilaterals or pentagons.
pub fn generate_hexagonal_mesh(n: usize) -> Result<Mesh> {
    if n == 0 {
        return Err(Error::InvalidArgument("hexagonal mesh needs n >= 1".into()));
    }
    let h = 1.0 / n as f64;
    let square = rect(0.0, 1.0, 0.0, 1.0);
    let mut b = MeshBuilder::new(DomainTag::UnitSquare, 2f64.sqrt());
    for i in 0..=n {
        let xc = i as f64 * h;
        let (offset, count) = if i % 2 == 0 { (0.0, n + 1) } else { (0.5, n) };
        for j in 0..count {
            let yc = (j as f64 + offset) * h;
            let hex = [
                Point2::new(xc - 2.0 * h / 3.0, yc),
                Point2::new(xc - h / 3.0, yc - 0.5 * h),
                Point2::new(xc + h / 3.0, yc - 0.5 * h),
                Point2::new(xc + 2.0 * h / 3.0, yc),
                Point2::new(xc + h / 3.0, yc + 0.5 * h),
                Point2::new(xc - h / 3.0, yc + 0.5 * h),
            ];
            let mut cell = hex.to_vec();
            for k in 0..4 {
                cell = clip_left(&cell, square[k], square[(k + 1) % 4]);
                if cell.len() < 3 {
                    break;
                }
            }
            // snap clipped coordinates onto the boundary lines
            for p in &mut cell {
                for c in [&mut p.x, &mut p.y] {
                    if c.abs() < 1e-14 {
                        *c = 0.0;
                    } else if (*c - 1.0).abs() < 1e-14 {
                        *c = 1.0;
                    }
                }
            }
            if cell.len() >= 3 {
                b.polygon(&cell, None);
            }
        }
    }
    b.build()
}

/// Element shapes of the geometrically graded L-shape meshes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GradedFamily {
    /// Rectangles; coarse edges split where finer layers abut (hanging nodes).
    A,
    /// Each layer split along the diagonal into two nonconvex hexagons, two quadrilaterals
    /// in the innermost layer.
    B,
    /// Each layer is a single non-star-shaped decagon, an L-shaped hexagon innermost.
    C,
}

impl FromStr for GradedFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(Self::A),
            "b" => Ok(Self::B),
            "c" => Ok(Self::C),
            _ => Err(Error::InvalidArgument(format!(
                "unknown graded mesh family '{s}'"
            ))),
        }
    }
}

/// Mesh of `(-1,1)^2 \ (-1,0]^2` with `n + 1` layers graded toward the reentrant corner at 0.
///
/// Layer `j >= 1` fills the region between the L-shapes of half-width `sigma^(n-j+1)`
/// and `sigma^(n-j)`; layer 0 fills the innermost L-shape of half-width `sigma^n`.
pub fn generate_graded_mesh(family: GradedFamily, sigma: f64, n: usize) -> Result<Mesh> {
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "grading parameter {sigma} outside (0,1)"
        )));
    }
    let mut b = MeshBuilder::new(DomainTag::LShape, 8f64.sqrt()).grading(sigma);
    let radius = |k: usize| if k == 0 { 1.0 } else { sigma.powi(k as i32) };
    let pt = Point2::new;

    let r = radius(n);
    match family {
        GradedFamily::A => {
            b.polygon(&rect(0.0, r, -r, 0.0), Some(0))
                .polygon(&rect(0.0, r, 0.0, r), Some(0))
                .polygon(&rect(-r, 0.0, 0.0, r), Some(0));
        }
        GradedFamily::B => {
            b.polygon(&[pt(0.0, 0.0), pt(0.0, -r), pt(r, -r), pt(r, r)], Some(0))
                .polygon(&[pt(0.0, 0.0), pt(r, r), pt(-r, r), pt(-r, 0.0)], Some(0));
        }
        GradedFamily::C => {
            b.polygon(
                &[
                    pt(0.0, 0.0),
                    pt(0.0, -r),
                    pt(r, -r),
                    pt(r, r),
                    pt(-r, r),
                    pt(-r, 0.0),
                ],
                Some(0),
            );
        }
    }

    for j in 1..=n {
        let (s, o) = (radius(n - j + 1), radius(n - j));
        let layer = Some(j);
        match family {
            GradedFamily::A => {
                for cell in [
                    rect(0.0, s, -o, -s),
                    rect(s, o, -o, -s),
                    rect(s, o, -s, 0.0),
                    rect(s, o, 0.0, s),
                    rect(s, o, s, o),
                    rect(0.0, s, s, o),
                    rect(-s, 0.0, s, o),
                    rect(-o, -s, s, o),
                    rect(-o, -s, 0.0, s),
                ] {
                    b.polygon(&cell, layer);
                }
            }
            GradedFamily::B => {
                b.polygon(
                    &[
                        pt(0.0, -o),
                        pt(o, -o),
                        pt(o, o),
                        pt(s, s),
                        pt(s, -s),
                        pt(0.0, -s),
                    ],
                    layer,
                )
                .polygon(
                    &[
                        pt(o, o),
                        pt(-o, o),
                        pt(-o, 0.0),
                        pt(-s, 0.0),
                        pt(-s, s),
                        pt(s, s),
                    ],
                    layer,
                );
            }
            GradedFamily::C => {
                b.polygon(
                    &[
                        pt(0.0, -o),
                        pt(o, -o),
                        pt(o, o),
                        pt(-o, o),
                        pt(-o, 0.0),
                        pt(-s, 0.0),
                        pt(-s, s),
                        pt(s, s),
                        pt(s, -s),
                        pt(0.0, -s),
                    ],
                    layer,
                );
            }
        }
    }
    b.build()
}

fn rect(x0: f64, x1: f64, y0: f64, y1: f64) -> Vec<Point2> {
    vec![
        Point2::new(x0, y0),
        Point2::new(x1, y0),
        Point2::new(x1, y1),
        Point2::new(x0, y1),
    ]
}
