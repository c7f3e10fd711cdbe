//! Shape-regularity diagnostics: star-shapedness (D1), edge-length ratios (D2) and
//! layer-wise grading statistics (D3).

use super::Mesh;
use crate::error::{Error, Result};
use crate::geometry::{self, Point2};

/// Bound on the spread `max/min` of `h_E / sigma^(n-j)` accepted as geometric grading.
pub const D3_SPREAD_LIMIT: f64 = 10.0;

#[derive(Clone, Debug, PartialEq)]
pub struct ElementGeometry {
    /// Radius of the largest disc inside the polygon kernel divided by `h_E`; 0 when the
    /// polygon is not star-shaped.
    pub rho: f64,
    pub min_edge_ratio: f64,
    pub edge_count: usize,
    pub min_interior_angle: f64,
    pub max_interior_angle: f64,
    pub convex: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct D3Stats {
    pub sigma: f64,
    /// `(min, max)` of `h_E / sigma^(n-j)` over each layer `j`.
    pub size_ratio_by_layer: Vec<(f64, f64)>,
    /// `(min, max)` of `h_E / dist(E, 0)` over layers `j >= 1`.
    pub distance_ratio: (f64, f64),
    pub spread: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeometryReport {
    pub rho0: f64,
    pub elements: Vec<ElementGeometry>,
    pub layer_counts: Vec<usize>,
    pub d1_pass: bool,
    pub d2_pass: bool,
    /// `None` when the mesh carries no grading parameter or no layers.
    pub d3: Option<D3Stats>,
    pub d3_pass: Option<bool>,
}

impl GeometryReport {
    pub fn min_rho(&self) -> f64 {
        self.elements
            .iter()
            .map(|e| e.rho)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn min_edge_ratio(&self) -> f64 {
        self.elements
            .iter()
            .map(|e| e.min_edge_ratio)
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn element_geometry(poly: &[Point2]) -> ElementGeometry {
    let h = geometry::diameter(poly);
    let k = geometry::kernel(poly);
    let rho = if k.is_empty() {
        0.0
    } else {
        geometry::largest_inscribed_disc(&k).0 / h
    };
    let n = poly.len();
    let min_edge = (0..n)
        .map(|i| poly[i].dist(poly[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min);
    let (lo, hi) = geometry::interior_angle_extremes(poly);
    ElementGeometry {
        rho,
        min_edge_ratio: min_edge / h,
        edge_count: n,
        min_interior_angle: lo,
        max_interior_angle: hi,
        convex: hi <= std::f64::consts::PI + 1e-12,
    }
}

fn distance_to_polygon(p: Point2, poly: &[Point2]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| geometry::segment_distance(p, poly[i], poly[(i + 1) % n]).0)
        .fold(f64::INFINITY, f64::min)
}

/// Reports shape-regularity of every element against `rho0`; never modifies the mesh.
pub fn validate_geometry(mesh: &Mesh, rho0: f64) -> Result<GeometryReport> {
    if !(rho0 > 0.0 && rho0 < 0.5) {
        return Err(Error::InvalidArgument(format!(
            "rho0 = {rho0} outside (0, 1/2)"
        )));
    }
    let elements: Vec<ElementGeometry> = (0..mesh.n_elements())
        .map(|e| element_geometry(&mesh.element_polygon(e)))
        .collect();
    let d1_pass = elements.iter().all(|g| g.rho >= rho0);
    let d2_pass = elements.iter().all(|g| g.min_edge_ratio >= rho0);

    let mut layer_counts = vec![0; mesh.n_layers];
    for el in &mesh.elements {
        if let Some(l) = el.layer {
            layer_counts[l] += 1;
        }
    }

    let d3 = match (mesh.grading_sigma, mesh.layers()) {
        (Some(sigma), Some(labels)) if mesh.n_layers > 0 => {
            let n = mesh.n_layers - 1;
            let mut by_layer = vec![(f64::INFINITY, 0.0_f64); mesh.n_layers];
            let mut dist_ratio = (f64::INFINITY, 0.0_f64);
            for (el, &j) in mesh.elements.iter().zip(&labels) {
                let r = el.diameter / sigma.powi((n - j) as i32);
                by_layer[j] = (by_layer[j].0.min(r), by_layer[j].1.max(r));
                if j >= 1 {
                    let d = distance_to_polygon(Point2::default(), &mesh.element_polygon(el.id));
                    let q = el.diameter / d;
                    dist_ratio = (dist_ratio.0.min(q), dist_ratio.1.max(q));
                }
            }
            let lo = by_layer.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
            let hi = by_layer.iter().map(|r| r.1).fold(0.0, f64::max);
            Some(D3Stats {
                sigma,
                size_ratio_by_layer: by_layer,
                distance_ratio: dist_ratio,
                spread: hi / lo,
            })
        }
        _ => None,
    };
    let d3_pass = d3.as_ref().map(|s| s.spread <= D3_SPREAD_LIMIT);
    Ok(GeometryReport {
        rho0,
        elements,
        layer_counts,
        d1_pass,
        d2_pass,
        d3,
        d3_pass,
    })
}
