//! Conforming polygonal meshes: construction, validation, layers and generators.

mod builder;
mod generate;
mod io;
mod layers;
mod report;

pub use builder::MeshBuilder;
pub use generate::{
    generate_graded_mesh, generate_hexagonal_mesh, generate_square_mesh, GradedFamily,
};
pub use io::{export_mesh, import_mesh, read_mesh, write_mesh};
pub use layers::{assign_layers, compute_layers};
pub use report::{validate_geometry, D3Stats, ElementGeometry, GeometryReport};

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::{self, Point2};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vertex {
    pub id: usize,
    pub position: Point2,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub id: usize,
    /// Global orientation of the edge; vertex ids with `endpoints[0] < endpoints[1]`.
    pub endpoints: [usize; 2],
    /// One adjacent element for boundary edges, two for internal edges.
    pub elements: Vec<usize>,
    pub is_boundary: bool,
    pub length: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Element {
    pub id: usize,
    /// Counterclockwise vertex loop.
    pub vertex_loop: Vec<usize>,
    /// `edge_loop[i]` joins `vertex_loop[i]` and `vertex_loop[i + 1]`.
    pub edge_loop: Vec<usize>,
    pub diameter: f64,
    pub centroid: Point2,
    pub layer: Option<usize>,
    pub area: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainTag {
    /// `(0, 1)^2`
    UnitSquare,
    /// `(-1, 1)^2 \ (-1, 0]^2`
    LShape,
    Custom,
}

impl DomainTag {
    pub fn area(self) -> Option<f64> {
        match self {
            DomainTag::UnitSquare => Some(1.0),
            DomainTag::LShape => Some(3.0),
            DomainTag::Custom => None,
        }
    }

    /// Counterclockwise boundary polygon of the named domains.
    pub fn boundary(self) -> Option<Vec<Point2>> {
        match self {
            DomainTag::UnitSquare => Some(vec![
                Point2::new(0.0, 0.0),
                Point2::new(1.0, 0.0),
                Point2::new(1.0, 1.0),
                Point2::new(0.0, 1.0),
            ]),
            DomainTag::LShape => Some(vec![
                Point2::new(0.0, 0.0),
                Point2::new(0.0, -1.0),
                Point2::new(1.0, -1.0),
                Point2::new(1.0, 1.0),
                Point2::new(-1.0, 1.0),
                Point2::new(-1.0, 0.0),
            ]),
            DomainTag::Custom => None,
        }
    }
}

/// Immutable conforming polygonal mesh.
#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub elements: Vec<Element>,
    pub n_layers: usize,
    pub grading_sigma: Option<f64>,
    pub domain: DomainTag,
}

/// Relative vertex-coincidence tolerance (times the domain diameter).
pub const VERTEX_TOL: f64 = 1e-12;

impl Mesh {
    /// Builds and validates a mesh from vertex positions and counterclockwise element loops.
    ///
    /// Rejects clockwise or self-intersecting loops, edges shared by more than two elements,
    /// overlapping elements, and unmaterialized hanging nodes.
    pub fn from_loops(
        positions: Vec<Point2>,
        loops: Vec<Vec<usize>>,
        domain: DomainTag,
    ) -> Result<Self> {
        if positions.is_empty() || loops.is_empty() {
            return Err(Error::InvalidMesh(
                "mesh needs vertices and elements".into(),
            ));
        }
        if let Some(p) = positions.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidMesh(format!("non-finite vertex {p:?}")));
        }
        let vertices: Vec<Vertex> = positions
            .iter()
            .enumerate()
            .map(|(id, &position)| Vertex { id, position })
            .collect();
        let diam = bounding_diameter(&positions);
        let tol = VERTEX_TOL * diam;

        let mut edge_index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edges: Vec<Edge> = Vec::new();
        // element and traversal direction per edge
        let mut uses: Vec<Vec<(usize, bool)>> = Vec::new();
        let mut elements = Vec::with_capacity(loops.len());
        for (id, vloop) in loops.into_iter().enumerate() {
            if vloop.len() < 3 {
                return Err(Error::InvalidMesh(format!(
                    "element {id} has fewer than 3 vertices"
                )));
            }
            if let Some(&v) = vloop.iter().find(|&&v| v >= positions.len()) {
                return Err(Error::InvalidMesh(format!(
                    "element {id} references missing vertex {v}"
                )));
            }
            let poly: Vec<Point2> = vloop.iter().map(|&v| positions[v]).collect();
            let area = geometry::signed_area(&poly);
            if area <= 0.0 {
                return Err(Error::InvalidMesh(format!(
                    "element {id} is clockwise or degenerate (signed area {area:e})"
                )));
            }
            if !geometry::is_simple(&poly) {
                return Err(Error::InvalidMesh(format!(
                    "element {id} is not a simple polygon"
                )));
            }
            let n = vloop.len();
            let mut edge_loop = Vec::with_capacity(n);
            for i in 0..n {
                let (a, b) = (vloop[i], vloop[(i + 1) % n]);
                if a == b {
                    return Err(Error::InvalidMesh(format!(
                        "element {id} repeats vertex {a}"
                    )));
                }
                let key = (a.min(b), a.max(b));
                let eid = *edge_index.entry(key).or_insert_with(|| {
                    edges.push(Edge {
                        id: edges.len(),
                        endpoints: [key.0, key.1],
                        elements: Vec::new(),
                        is_boundary: false,
                        length: positions[a].dist(positions[b]),
                    });
                    uses.push(Vec::new());
                    edges.len() - 1
                });
                edges[eid].elements.push(id);
                uses[eid].push((id, a < b));
                edge_loop.push(eid);
            }
            elements.push(Element {
                id,
                vertex_loop: vloop,
                edge_loop,
                diameter: geometry::diameter(&poly),
                centroid: geometry::centroid(&poly),
                layer: None,
                area,
            });
        }

        let over: Vec<(usize, usize)> = edges
            .iter()
            .filter(|e| e.elements.len() > 2)
            .map(|e| (e.endpoints[0], e.endpoints[1]))
            .collect();
        if !over.is_empty() {
            return Err(Error::Nonconforming {
                reason: "edges bordering more than two elements".into(),
                edges: over,
            });
        }
        let same_side: Vec<(usize, usize)> = edges
            .iter()
            .zip(&uses)
            .filter(|(_, u)| u.len() == 2 && u[0].1 == u[1].1)
            .map(|(e, _)| (e.endpoints[0], e.endpoints[1]))
            .collect();
        if !same_side.is_empty() {
            return Err(Error::Nonconforming {
                reason: "overlapping elements on the same side of an edge".into(),
                edges: same_side,
            });
        }
        for e in &mut edges {
            e.is_boundary = e.elements.len() == 1;
        }

        // unmaterialized hanging nodes: a vertex inside an edge
        let hanging: Vec<(usize, usize)> = edges
            .iter()
            .filter(|e| {
                let (a, b) = (positions[e.endpoints[0]], positions[e.endpoints[1]]);
                let lo = Point2::new(a.x.min(b.x) - tol, a.y.min(b.y) - tol);
                let hi = Point2::new(a.x.max(b.x) + tol, a.y.max(b.y) + tol);
                positions.iter().enumerate().any(|(v, &p)| {
                    v != e.endpoints[0]
                        && v != e.endpoints[1]
                        && p.x >= lo.x
                        && p.x <= hi.x
                        && p.y >= lo.y
                        && p.y <= hi.y
                        && geometry::segment_distance(p, a, b).0 <= tol
                })
            })
            .map(|e| (e.endpoints[0], e.endpoints[1]))
            .collect();
        if !hanging.is_empty() {
            return Err(Error::Nonconforming {
                reason: "vertices lying inside edges (hanging nodes must be mesh vertices of both sides)".into(),
                edges: hanging,
            });
        }

        // covering: the boundary loops enclose exactly the element area
        let total: f64 = elements.iter().map(|e| e.area).sum();
        let enclosed: f64 = edges
            .iter()
            .zip(&uses)
            .filter(|(e, _)| e.is_boundary)
            .map(|(e, u)| {
                let (a, b) = (positions[e.endpoints[0]], positions[e.endpoints[1]]);
                let c = 0.5 * a.cross(b);
                if u[0].1 {
                    c
                } else {
                    -c
                }
            })
            .sum();
        if (enclosed - total).abs() > 1e-10 * total {
            return Err(Error::InvalidMesh(format!(
                "elements overlap or leave holes: element area {total}, boundary encloses {enclosed}"
            )));
        }
        if let Some(expected) = domain.area() {
            if (total - expected).abs() > 1e-10 * expected {
                return Err(Error::InvalidMesh(format!(
                    "mesh area {total} does not match the domain area {expected}"
                )));
            }
        }

        Ok(Self {
            vertices,
            edges,
            elements,
            n_layers: 0,
            grading_sigma: None,
            domain,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn position(&self, v: usize) -> Point2 {
        self.vertices[v].position
    }

    pub fn element_polygon(&self, e: usize) -> Vec<Point2> {
        self.elements[e]
            .vertex_loop
            .iter()
            .map(|&v| self.position(v))
            .collect()
    }

    pub fn total_area(&self) -> f64 {
        self.elements.iter().map(|e| e.area).sum()
    }

    /// Maximum element diameter.
    pub fn max_diameter(&self) -> f64 {
        self.elements.iter().map(|e| e.diameter).fold(0.0, f64::max)
    }

    /// Diameter of the vertex bounding box.
    pub fn domain_diameter(&self) -> f64 {
        bounding_diameter(&self.vertices.iter().map(|v| v.position).collect::<Vec<_>>())
    }

    pub fn boundary_vertices(&self) -> Vec<bool> {
        let mut on = vec![false; self.n_vertices()];
        for e in self.edges.iter().filter(|e| e.is_boundary) {
            on[e.endpoints[0]] = true;
            on[e.endpoints[1]] = true;
        }
        on
    }

    /// Layer labels per element, when assigned.
    pub fn layers(&self) -> Option<Vec<usize>> {
        self.elements.iter().map(|e| e.layer).collect()
    }

    /// Copy of the mesh carrying the given layer labels.
    pub fn with_layer_labels(mut self, labels: &[usize]) -> Result<Self> {
        if labels.len() != self.n_elements() {
            return Err(Error::InvalidArgument(format!(
                "{} layer labels for {} elements",
                labels.len(),
                self.n_elements()
            )));
        }
        for (e, &l) in self.elements.iter_mut().zip(labels) {
            e.layer = Some(l);
        }
        self.n_layers = labels.iter().max().map_or(0, |m| m + 1);
        Ok(self)
    }

    /// Number of vertices of each degree (count of incident edges), for interior vertices only.
    pub fn interior_vertex_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n_vertices()];
        for e in &self.edges {
            deg[e.endpoints[0]] += 1;
            deg[e.endpoints[1]] += 1;
        }
        let on = self.boundary_vertices();
        deg.into_iter()
            .zip(on)
            .filter(|(_, b)| !b)
            .map(|(d, _)| d)
            .collect()
    }
}

fn bounding_diameter(pts: &[Point2]) -> f64 {
    let (mut lo, mut hi) = (pts[0], pts[0]);
    for p in pts {
        lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    lo.dist(hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square_loops() -> (Vec<Point2>, Vec<Vec<usize>>) {
        (
            vec![
                Point2::new(0.0, 0.0),
                Point2::new(1.0, 0.0),
                Point2::new(1.0, 1.0),
                Point2::new(0.0, 1.0),
            ],
            vec![vec![0, 1, 2, 3]],
        )
    }

    #[test]
    fn single_square() {
        let (p, l) = unit_square_loops();
        let m = Mesh::from_loops(p, l, DomainTag::UnitSquare).unwrap();
        assert_eq!(m.n_edges(), 4);
        assert!(m.edges.iter().all(|e| e.is_boundary && e.length == 1.0));
        assert_eq!(m.elements[0].edge_loop.len(), 4);
    }

    #[test]
    fn clockwise_rejected() {
        let (p, _) = unit_square_loops();
        let err = Mesh::from_loops(p, vec![vec![0, 3, 2, 1]], DomainTag::Custom).unwrap_err();
        assert!(matches!(err, Error::InvalidMesh(_)));
    }

    #[test]
    fn edge_with_three_elements_rejected() {
        // three triangles hinged on the edge (0,1)
        let p = vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.5, 1.0),
            Point2::new(0.5, -1.0),
            Point2::new(0.5, 2.0),
        ];
        let l = vec![vec![0, 1, 2], vec![1, 0, 3], vec![0, 1, 4]];
        match Mesh::from_loops(p, l, DomainTag::Custom).unwrap_err() {
            Error::Nonconforming { edges, .. } => assert_eq!(edges, vec![(0, 1)]),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn unmaterialized_hanging_node_rejected() {
        // left square split in two, right square keeps a single long edge
        let p = vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(2.0, 1.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
            Point2::new(0.0, 0.5),
            Point2::new(1.0, 0.5),
        ];
        let l = vec![vec![0, 1, 7, 6], vec![6, 7, 4, 5], vec![1, 2, 3, 4]];
        let err = Mesh::from_loops(p, l, DomainTag::Custom).unwrap_err();
        assert!(matches!(err, Error::Nonconforming { .. }), "{err}");
    }
}
