//! Local operators on one polygon: boundary DoF layout, energy projector onto the harmonic
//! polynomials, stabilizations and the local stiffness matrix.

mod lagrange;
mod stabilization;

use std::collections::HashMap;
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use nalgebra::DMatrix;

pub use lagrange::EdgeLagrange;
pub use stabilization::{stab_h_half, stab_l2_exact, stab_l2_lumped, MASS_LUMP_LOWER_BOUND};

use crate::basis::{outward_normal, HarmonicBasis};
use crate::error::{Error, Result};
use crate::geometry::{self, Point2};
use crate::mesh::Mesh;
use crate::quadrature::{gauss_legendre, QuadratureRule1D};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StabChoice {
    /// `p_E / h_E` times the exact `L²(∂E)` product.
    L2Exact,
    /// `p_E / h_E` times the Gauss–Lobatto lumped `L²(∂E)` product.
    L2Lumped,
    /// Slobodeckij double integral over `∂E x ∂E`, optionally plus the `L²(∂E)` product.
    HHalf { l2_term: bool },
}

impl StabChoice {
    pub const H_HALF: StabChoice = StabChoice::HHalf { l2_term: false };
}

impl FromStr for StabChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l2-exact" => Ok(Self::L2Exact),
            "l2-lumped" => Ok(Self::L2Lumped),
            "h-half" => Ok(Self::H_HALF),
            "h-half-l2" => Ok(Self::HHalf { l2_term: true }),
            _ => Err(Error::InvalidArgument(format!(
                "unknown stabilization '{s}' (expected l2-exact, l2-lumped, h-half, h-half-l2)"
            ))),
        }
    }
}

impl fmt::Display for StabChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::L2Exact => "l2-exact",
            Self::L2Lumped => "l2-lumped",
            Self::HHalf { l2_term: false } => "h-half",
            Self::HHalf { l2_term: true } => "h-half-l2",
        })
    }
}

/// A polygon with its polynomial degrees, detached from any mesh.
///
/// Edge `i` runs from `vertices[i]` to `vertices[i + 1]` (cyclically); the loop must be
/// counterclockwise.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalElement {
    pub id: usize,
    pub vertices: Vec<Point2>,
    pub edge_degrees: Vec<usize>,
    /// Degree `p_E` of the harmonic polynomial space.
    pub degree: usize,
}

impl LocalElement {
    pub fn new(vertices: Vec<Point2>, edge_degrees: Vec<usize>, degree: usize) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidArgument(format!("polygon with {n} vertices")));
        }
        if edge_degrees.len() != n {
            return Err(Error::InvalidArgument(format!(
                "{} edge degrees for {n} edges",
                edge_degrees.len()
            )));
        }
        if degree == 0 || edge_degrees.contains(&0) {
            return Err(Error::InvalidArgument(
                "polynomial degrees must be >= 1".into(),
            ));
        }
        if geometry::signed_area(&vertices) <= 0.0 {
            return Err(Error::InvalidArgument(
                "vertex loop is not counterclockwise".into(),
            ));
        }
        for i in 0..n {
            if vertices[i].dist(vertices[(i + 1) % n]) == 0.0 {
                return Err(Error::InvalidArgument(format!("edge {i} has zero length")));
            }
        }
        Ok(Self {
            id: 0,
            vertices,
            edge_degrees,
            degree,
        })
    }

    /// Same degree on the element and on every edge.
    pub fn uniform(vertices: Vec<Point2>, p: usize) -> Result<Self> {
        let n = vertices.len();
        Self::new(vertices, vec![p; n], p)
    }

    /// Element `e` of `mesh`, with edge degrees looked up by global edge id.
    pub fn from_mesh(mesh: &Mesh, e: usize, degree: usize, edge_degrees: &[usize]) -> Result<Self> {
        let el = &mesh.elements[e];
        let degs = el.edge_loop.iter().map(|&g| edge_degrees[g]).collect();
        let mut local = Self::new(mesh.element_polygon(e), degs, degree)?;
        local.id = e;
        Ok(local)
    }

    pub fn n_edges(&self) -> usize {
        self.vertices.len()
    }

    pub fn diameter(&self) -> f64 {
        geometry::diameter(&self.vertices)
    }

    pub fn edge(&self, i: usize) -> (Point2, Point2) {
        (self.vertices[i], self.vertices[(i + 1) % self.n_edges()])
    }

    /// Number of local DoFs `sum_e p_e`.
    pub fn n_dofs(&self) -> usize {
        self.edge_degrees.iter().sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalDof {
    /// Local edge starting at this node (vertex DoFs report the edge leaving the vertex).
    pub edge: usize,
    /// Gauss–Lobatto node index on that edge, 0 for vertices.
    pub node: usize,
    /// Arc length from vertex 0 along the counterclockwise boundary.
    pub arc_length: f64,
    /// Reference parameter in [-1, 1] on the edge.
    pub t: f64,
    pub position: Point2,
}

/// Local DoFs ordered as vertices in loop order, then internal edge nodes edge by edge.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalDofLayout {
    pub dofs: Vec<LocalDof>,
    /// For each edge, the DoF indices of its `p_e + 1` nodes in counterclockwise order.
    pub edge_dofs: Vec<Vec<usize>>,
}

impl LocalDofLayout {
    pub fn len(&self) -> usize {
        self.dofs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dofs.is_empty()
    }
}

/// Per-edge data shared by the projector and the stabilizations.
pub(crate) struct EdgeData {
    pub a: Point2,
    pub b: Point2,
    pub length: f64,
    pub normal: Point2,
    pub basis: EdgeLagrange,
}

impl EdgeData {
    pub fn point(&self, t: f64) -> Point2 {
        self.a.lerp(self.b, 0.5 * (t + 1.0))
    }
}

pub(crate) fn edge_data(el: &LocalElement) -> Result<Vec<EdgeData>> {
    let mut cache: HashMap<usize, EdgeLagrange> = HashMap::new();
    (0..el.n_edges())
        .map(|i| {
            let (a, b) = el.edge(i);
            let p = el.edge_degrees[i];
            let basis = match cache.get(&p) {
                Some(l) => l.clone(),
                None => {
                    let l = EdgeLagrange::new(p)?;
                    cache.insert(p, l.clone());
                    l
                }
            };
            Ok(EdgeData {
                a,
                b,
                length: a.dist(b),
                normal: outward_normal(a, b)?,
                basis,
            })
        })
        .collect()
}

pub fn build_dof_layout(el: &LocalElement) -> Result<LocalDofLayout> {
    let edges = edge_data(el)?;
    Ok(layout_from_edges(&edges))
}

fn layout_from_edges(edges: &[EdgeData]) -> LocalDofLayout {
    let n = edges.len();
    let mut dofs = Vec::new();
    let mut arc = Vec::with_capacity(n);
    let mut s = 0.0;
    for (i, e) in edges.iter().enumerate() {
        arc.push(s);
        dofs.push(LocalDof {
            edge: i,
            node: 0,
            arc_length: s,
            t: -1.0,
            position: e.a,
        });
        s += e.length;
    }
    let mut edge_dofs = Vec::with_capacity(n);
    for (i, e) in edges.iter().enumerate() {
        let mut ids = vec![i];
        let nodes = e.basis.nodes();
        for (k, &t) in nodes.iter().enumerate().take(nodes.len() - 1).skip(1) {
            ids.push(dofs.len());
            dofs.push(LocalDof {
                edge: i,
                node: k,
                arc_length: arc[i] + 0.5 * (t + 1.0) * e.length,
                t,
                position: e.point(t),
            });
        }
        ids.push((i + 1) % n);
        edge_dofs.push(ids);
    }
    LocalDofLayout { dofs, edge_dofs }
}

#[derive(Clone, Debug)]
pub struct Projector {
    pub basis: HarmonicBasis,
    /// Values of the basis at the DoF nodes, `N_E x (2p+1)`.
    pub d: DMatrix<f64>,
    /// Projector system with the boundary-mean row in place of the constant's row.
    pub g: DMatrix<f64>,
    pub b: DMatrix<f64>,
    /// Coefficients of the projection of each local basis function, `(2p+1) x N_E`.
    pub pi_poly: DMatrix<f64>,
    /// Projection in DoF coordinates, `N_E x N_E`.
    pub pi_dof: DMatrix<f64>,
}

/// Gauss–Legendre points per edge integrating `∂_n q * v` and `∂_n q * q'` exactly.
fn projector_points(p_el: usize, p_edge: usize) -> usize {
    (p_el + p_el.max(p_edge)).div_ceil(2).max(1)
}

pub fn compute_projector(el: &LocalElement, layout: &LocalDofLayout) -> Result<Projector> {
    let edges = edge_data(el)?;
    projector_from_edges(el, layout, &edges)
}

fn projector_from_edges(
    el: &LocalElement,
    layout: &LocalDofLayout,
    edges: &[EdgeData],
) -> Result<Projector> {
    let p = el.degree;
    let basis = HarmonicBasis::new(p, geometry::centroid(&el.vertices), el.diameter());
    let dim = basis.dim();
    let n = layout.len();
    let perimeter: f64 = edges.iter().map(|e| e.length).sum();

    let mut g = DMatrix::zeros(dim, dim);
    let mut b = DMatrix::zeros(dim, n);
    let mut vals = vec![0.0; dim];
    let mut grads = vec![Point2::default(); dim];
    let mut rules: HashMap<usize, QuadratureRule1D> = HashMap::new();
    for (i, e) in edges.iter().enumerate() {
        let m = projector_points(p, e.basis.degree());
        if let std::collections::hash_map::Entry::Vacant(e) = rules.entry(m) {
            e.insert(gauss_legendre(m)?);
        }
        let rule = &rules[&m];
        let ids = &layout.edge_dofs[i];
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            let x = e.point(t);
            let jw = 0.5 * e.length * w;
            basis.eval_into(x, &mut vals);
            basis.eval_gradient_into(x, &mut grads);
            let phi = e.basis.eval(t);
            for l in 0..dim {
                g[(0, l)] += jw * vals[l] / perimeter;
            }
            for (&id, &ph) in ids.iter().zip(&phi) {
                b[(0, id)] += jw * ph / perimeter;
            }
            for k in 1..dim {
                let dn = jw * grads[k].dot(e.normal);
                for l in 0..dim {
                    g[(k, l)] += dn * vals[l];
                }
                for (&id, &ph) in ids.iter().zip(&phi) {
                    b[(k, id)] += dn * ph;
                }
            }
        }
    }

    let mut d = DMatrix::zeros(n, dim);
    for (i, dof) in layout.dofs.iter().enumerate() {
        basis.eval_into(dof.position, &mut vals);
        for k in 0..dim {
            d[(i, k)] = vals[k];
        }
    }

    let pi_poly: DMatrix<f64> = g
        .clone()
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::SingularElement {
            element: el.id,
            message: "projector matrix G is singular".into(),
        })?;
    if pi_poly.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularElement {
            element: el.id,
            message: "projector has non-finite entries".into(),
        });
    }
    let pi_dof = &d * &pi_poly;
    Ok(Projector {
        basis,
        d,
        g,
        b,
        pi_poly,
        pi_dof,
    })
}

#[derive(Clone, Debug)]
pub struct LocalOperators {
    pub stab: StabChoice,
    pub layout: LocalDofLayout,
    pub projector: Projector,
    pub s: DMatrix<f64>,
    pub k: DMatrix<f64>,
}

impl LocalOperators {
    /// Consistency part `Pi_poly^T G_0 Pi_poly` of the stiffness.
    pub fn consistency(&self) -> DMatrix<f64> {
        let pi = &self.projector.pi_poly;
        pi.transpose() * g0(&self.projector.g) * pi
    }
}

/// `G` with the constraint row replaced by the (zero) energy row of the constant, symmetrized.
fn g0(g: &DMatrix<f64>) -> DMatrix<f64> {
    let mut g0 = g.clone();
    g0.row_mut(0).fill(0.0);
    (&g0 + g0.transpose()) * 0.5
}

pub fn local_operators(el: &LocalElement, stab: StabChoice) -> Result<LocalOperators> {
    let edges = edge_data(el)?;
    let layout = layout_from_edges(&edges);
    let projector = projector_from_edges(el, &layout, &edges)?;
    let s = match stab {
        StabChoice::L2Lumped => stabilization::lumped(el, &layout, &edges),
        StabChoice::L2Exact => stabilization::exact(el, &layout, &edges)?,
        StabChoice::HHalf { l2_term } => stabilization::h_half(&layout, &edges, l2_term)?,
    };
    let pi = &projector.pi_poly;
    let mut k = pi.transpose() * g0(&projector.g) * pi;
    let n = layout.len();
    let r = DMatrix::identity(n, n) - &projector.pi_dof;
    k += r.transpose() * &s * &r;
    let k = (&k + k.transpose()) * 0.5;
    Ok(LocalOperators {
        stab,
        layout,
        projector,
        s,
        k,
    })
}

pub fn local_stiffness(el: &LocalElement, stab: StabChoice) -> Result<DMatrix<f64>> {
    Ok(local_operators(el, stab)?.k)
}

/// All local matrices as CSV rows `element,matrix,row,col,value`.
pub fn operators_csv(ops: &LocalOperators, element: usize, header: bool) -> String {
    let mut out = String::new();
    if header {
        out.push_str("element,matrix,row,col,value\n");
    }
    let p = &ops.projector;
    for (name, m) in [
        ("D", &p.d),
        ("G", &p.g),
        ("B", &p.b),
        ("Pi_poly", &p.pi_poly),
        ("Pi_dof", &p.pi_dof),
        ("S", &ops.s),
        ("K", &ops.k),
    ] {
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let _ = writeln!(out, "{element},{name},{i},{j},{:e}", m[(i, j)]);
            }
        }
    }
    out
}

#[cfg(test)]
fn stabilization_mass(el: &LocalElement, layout: &LocalDofLayout) -> DMatrix<f64> {
    stabilization::mass(layout, &edge_data(el).unwrap()).unwrap()
}

#[cfg(test)]
mod tests;
