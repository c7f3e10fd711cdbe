use std::collections::HashMap;

use super::{DomainTag, Mesh, VERTEX_TOL};
use crate::error::{Error, Result};
use crate::geometry::{self, Point2};

/// Assembles a mesh from element polygons given by coordinates.
///
/// Coincident vertices are merged, and every vertex found in the interior of another
/// polygon's edge is inserted into that polygon's loop, so coarse edges abutting finer
/// elements become chains of collinear edges.
pub struct MeshBuilder {
    domain: DomainTag,
    tol: f64,
    positions: Vec<Point2>,
    buckets: HashMap<(i64, i64), Vec<usize>>,
    cell: f64,
    loops: Vec<Vec<usize>>,
    layers: Vec<Option<usize>>,
    sigma: Option<f64>,
}

impl MeshBuilder {
    /// `diameter` is the domain diameter setting the vertex-coincidence tolerance.
    pub fn new(domain: DomainTag, diameter: f64) -> Self {
        let tol = VERTEX_TOL * diameter;
        Self {
            domain,
            tol,
            positions: Vec::new(),
            buckets: HashMap::new(),
            cell: tol * 1e3,
            loops: Vec::new(),
            layers: Vec::new(),
            sigma: None,
        }
    }

    pub fn grading(mut self, sigma: f64) -> Self {
        self.sigma = Some(sigma);
        self
    }

    fn key(&self, p: Point2) -> (i64, i64) {
        (
            (p.x / self.cell).floor() as i64,
            (p.y / self.cell).floor() as i64,
        )
    }

    fn vertex(&mut self, p: Point2) -> usize {
        let (kx, ky) = self.key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.buckets.get(&(kx + dx, ky + dy)) {
                    if let Some(&id) = ids
                        .iter()
                        .find(|&&id| self.positions[id].dist(p) <= self.tol)
                    {
                        return id;
                    }
                }
            }
        }
        let id = self.positions.len();
        self.positions.push(p);
        self.buckets.entry((kx, ky)).or_default().push(id);
        id
    }

    /// Adds a polygon; clockwise input is reversed. Zero-area polygons are skipped.
    pub fn polygon(&mut self, pts: &[Point2], layer: Option<usize>) -> &mut Self {
        let mut pts = pts.to_vec();
        let scale = geometry::diameter(&pts);
        if geometry::signed_area(&pts).abs() <= 1e-14 * scale * scale {
            return self;
        }
        if geometry::signed_area(&pts) < 0.0 {
            pts.reverse();
        }
        let mut ids: Vec<usize> = pts.iter().map(|&p| self.vertex(p)).collect();
        ids.dedup();
        while ids.len() > 1 && ids.first() == ids.last() {
            ids.pop();
        }
        self.loops.push(ids);
        self.layers.push(layer);
        self
    }

    fn insert_hanging_nodes(&mut self) {
        let positions = &self.positions;
        let tol = self.tol;
        for vloop in &mut self.loops {
            let n = vloop.len();
            let mut out = Vec::with_capacity(n);
            for i in 0..n {
                let (ia, ib) = (vloop[i], vloop[(i + 1) % n]);
                let (a, b) = (positions[ia], positions[ib]);
                let lo = Point2::new(a.x.min(b.x) - tol, a.y.min(b.y) - tol);
                let hi = Point2::new(a.x.max(b.x) + tol, a.y.max(b.y) + tol);
                let mut inside: Vec<(f64, usize)> = positions
                    .iter()
                    .enumerate()
                    .filter(|&(v, p)| {
                        v != ia
                            && v != ib
                            && p.x >= lo.x
                            && p.x <= hi.x
                            && p.y >= lo.y
                            && p.y <= hi.y
                    })
                    .filter_map(|(v, &p)| {
                        let (d, s) = geometry::segment_distance(p, a, b);
                        (d <= tol && s > 0.0 && s < 1.0).then_some((s, v))
                    })
                    .collect();
                inside.sort_by(|x, y| x.0.total_cmp(&y.0));
                out.push(ia);
                out.extend(inside.into_iter().map(|(_, v)| v));
            }
            *vloop = out;
        }
    }

    pub fn build(mut self) -> Result<Mesh> {
        self.insert_hanging_nodes();
        let layers = self.layers.clone();
        let mut mesh = Mesh::from_loops(self.positions, self.loops, self.domain)?;
        if layers.iter().all(Option::is_some) {
            let labels: Vec<usize> = layers.into_iter().map(|l| l.unwrap_or_default()).collect();
            mesh = mesh.with_layer_labels(&labels)?;
        } else if layers.iter().any(Option::is_some) {
            return Err(Error::InvalidArgument(
                "layer labels given for only some polygons".into(),
            ));
        }
        mesh.grading_sigma = self.sigma;
        Ok(mesh)
    }
}
