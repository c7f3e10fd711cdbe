//! Polynomial degree distributions, global DoF numbering, assembly of the global stiffness
//! with Dirichlet elimination, and the linear solve.

mod sparse;

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::CsrMatrix;
use rayon::prelude::*;

pub use sparse::{
    conjugate_gradient, csr_from_triplets, matvec, reverse_cuthill_mckee, solve_spd, to_dense,
    Method, Ordering, SolveReport, SolverOptions,
};

use crate::basis::HarmonicBasis;
use crate::element::{local_operators, LocalElement, StabChoice};
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::mesh::Mesh;
use crate::quadrature::gauss_lobatto;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeMode {
    Uniform(usize),
    /// `p_E = j + 1` on layer `j`.
    LayerGraded,
}

impl FromStr for DegreeMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase();
        if s == "graded" || s == "layer-graded" {
            return Ok(Self::LayerGraded);
        }
        if let Some(p) = s.strip_prefix("uniform:") {
            let p: usize = p
                .parse()
                .map_err(|e| Error::InvalidArgument(format!("bad degree '{p}': {e}")))?;
            return Ok(Self::Uniform(p));
        }
        Err(Error::InvalidArgument(format!(
            "unknown degree mode '{s}' (expected uniform:<p> or graded)"
        )))
    }
}

impl fmt::Display for DegreeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Uniform(p) => write!(f, "uniform:{p}"),
            Self::LayerGraded => f.write_str("graded"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeDistribution {
    pub mode: DegreeMode,
    /// `p_E` per element.
    pub element: Vec<usize>,
    /// `p_e` per edge, the maximum over the adjacent elements.
    pub edge: Vec<usize>,
}

impl DegreeDistribution {
    pub fn max_degree(&self) -> usize {
        self.element.iter().copied().max().unwrap_or(0)
    }
}

pub fn assign_degrees(mesh: &Mesh, mode: DegreeMode) -> Result<DegreeDistribution> {
    let element = match mode {
        DegreeMode::Uniform(0) => {
            return Err(Error::InvalidArgument("uniform degree must be >= 1".into()))
        }
        DegreeMode::Uniform(p) => vec![p; mesh.n_elements()],
        DegreeMode::LayerGraded => mesh
            .elements
            .iter()
            .map(|e| {
                e.layer.map(|j| j + 1).ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "element {} has no layer label for graded degrees",
                        e.id
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?,
    };
    let edge = mesh
        .edges
        .iter()
        .map(|e| e.elements.iter().map(|&el| element[el]).max().unwrap_or(1))
        .collect();
    Ok(DegreeDistribution {
        mode,
        element,
        edge,
    })
}

/// Global DoF numbering: vertices by id, then the internal Gauss–Lobatto nodes of each edge
/// by edge id, ordered from `endpoints[0]` to `endpoints[1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GlobalDofLayout {
    pub n_vertices: usize,
    /// `edge_offset[g]..edge_offset[g + 1]` indexes the internal nodes of edge `g`, shifted by `n_vertices`.
    pub edge_offset: Vec<usize>,
    pub positions: Vec<Point2>,
    pub is_dirichlet: Vec<bool>,
    /// Position of each DoF among the free DoFs.
    pub free_index: Vec<Option<usize>>,
    pub n_free: usize,
}

impl GlobalDofLayout {
    pub fn n_dofs(&self) -> usize {
        self.positions.len()
    }

    pub fn n_dirichlet(&self) -> usize {
        self.n_dofs() - self.n_free
    }

    /// Global index of internal node `a` (1-based, in the global orientation) of edge `g`.
    pub fn edge_node(&self, g: usize, a: usize) -> usize {
        self.n_vertices + self.edge_offset[g] + a - 1
    }

    /// DoFs of edge `g` from `endpoints[0]` to `endpoints[1]`, endpoints included.
    pub fn edge_dofs(&self, mesh: &Mesh, g: usize) -> Vec<usize> {
        let e = &mesh.edges[g];
        let mut out = vec![e.endpoints[0]];
        out.extend(
            self.n_vertices + self.edge_offset[g]..self.n_vertices + self.edge_offset[g + 1],
        );
        out.push(e.endpoints[1]);
        out
    }

    /// Global indices of the local DoFs of element `e`, in local layout order.
    pub fn element_dofs(&self, mesh: &Mesh, e: usize) -> Vec<usize> {
        let el = &mesh.elements[e];
        let mut out = el.vertex_loop.clone();
        for (i, &g) in el.edge_loop.iter().enumerate() {
            let internal = self.edge_offset[g + 1] - self.edge_offset[g];
            let forward = el.vertex_loop[i] == mesh.edges[g].endpoints[0];
            for k in 1..=internal {
                let a = if forward { k } else { internal + 1 - k };
                out.push(self.edge_node(g, a));
            }
        }
        out
    }
}

pub fn build_global_layout(mesh: &Mesh, degrees: &DegreeDistribution) -> Result<GlobalDofLayout> {
    if degrees.edge.len() != mesh.n_edges() || degrees.element.len() != mesh.n_elements() {
        return Err(Error::InvalidArgument(
            "degree distribution does not match the mesh".into(),
        ));
    }
    let nv = mesh.n_vertices();
    let mut positions: Vec<Point2> = mesh.vertices.iter().map(|v| v.position).collect();
    let mut is_dirichlet = mesh.boundary_vertices();
    let mut edge_offset = Vec::with_capacity(mesh.n_edges() + 1);
    edge_offset.push(0);
    for (e, &p) in mesh.edges.iter().zip(&degrees.edge) {
        if p == 0 {
            return Err(Error::InvalidArgument(format!(
                "edge {} has degree 0",
                e.id
            )));
        }
        let nodes = gauss_lobatto(p)?.nodes;
        let (a, b) = (mesh.position(e.endpoints[0]), mesh.position(e.endpoints[1]));
        for &t in &nodes[1..p] {
            positions.push(a.lerp(b, 0.5 * (t + 1.0)));
            is_dirichlet.push(e.is_boundary);
        }
        edge_offset.push(edge_offset.last().unwrap() + p - 1);
    }
    let mut n_free = 0;
    let free_index = is_dirichlet
        .iter()
        .map(|&d| {
            if d {
                None
            } else {
                n_free += 1;
                Some(n_free - 1)
            }
        })
        .collect();
    Ok(GlobalDofLayout {
        n_vertices: nv,
        edge_offset,
        positions,
        is_dirichlet,
        free_index,
        n_free,
    })
}

/// Values of `g` at the Dirichlet DoF nodes (its Gauss–Lobatto interpolant); free entries are 0.
pub fn interpolate_dirichlet(g: impl Fn(Point2) -> f64, layout: &GlobalDofLayout) -> DVector<f64> {
    DVector::from_iterator(
        layout.n_dofs(),
        layout
            .positions
            .iter()
            .zip(&layout.is_dirichlet)
            .map(|(&x, &d)| if d { g(x) } else { 0.0 }),
    )
}

/// Local data kept from assembly for post-processing.
#[derive(Clone, Debug)]
pub struct ElementSystem {
    pub dofs: Vec<usize>,
    pub basis: HarmonicBasis,
    pub pi_poly: DMatrix<f64>,
    pub stiffness: DMatrix<f64>,
}

#[derive(Clone, Debug)]
pub struct LinearSystem {
    /// Free-free block of the global stiffness.
    pub matrix: CsrMatrix<f64>,
    /// `-K_fd g`.
    pub rhs: DVector<f64>,
    /// Full DoF vector holding the Dirichlet values.
    pub dirichlet_values: DVector<f64>,
    pub layout: GlobalDofLayout,
    pub degrees: DegreeDistribution,
    pub stab: StabChoice,
    pub elements: Vec<ElementSystem>,
}

/// Local operators of every element, computed in parallel and returned in element order.
pub fn element_systems(
    mesh: &Mesh,
    degrees: &DegreeDistribution,
    layout: &GlobalDofLayout,
    stab: StabChoice,
) -> Result<Vec<ElementSystem>> {
    (0..mesh.n_elements())
        .into_par_iter()
        .map(|e| {
            let local = LocalElement::from_mesh(mesh, e, degrees.element[e], &degrees.edge)?;
            let ops = local_operators(&local, stab).map_err(|err| match err {
                Error::SingularElement { message, .. } => Error::SingularElement {
                    element: e,
                    message,
                },
                other => other,
            })?;
            let dofs = layout.element_dofs(mesh, e);
            debug_assert_eq!(dofs.len(), ops.layout.len());
            Ok(ElementSystem {
                dofs,
                basis: ops.projector.basis,
                pi_poly: ops.projector.pi_poly,
                stiffness: ops.k,
            })
        })
        .collect()
}

/// Scatter of local stiffness matrices into the free-free block, with the Dirichlet columns
/// moved to the right-hand side.
pub fn assemble(
    mesh: &Mesh,
    degrees: &DegreeDistribution,
    layout: GlobalDofLayout,
    stab: StabChoice,
    dirichlet_values: DVector<f64>,
) -> Result<LinearSystem> {
    if dirichlet_values.len() != layout.n_dofs() {
        return Err(Error::InvalidArgument(
            "Dirichlet vector does not match the layout".into(),
        ));
    }
    let elements = element_systems(mesh, degrees, &layout, stab)?;
    let mut triplets = Vec::new();
    let mut rhs = DVector::zeros(layout.n_free);
    for sys in &elements {
        for (a, &ga) in sys.dofs.iter().enumerate() {
            let Some(fa) = layout.free_index[ga] else {
                continue;
            };
            for (b, &gb) in sys.dofs.iter().enumerate() {
                let k = sys.stiffness[(a, b)];
                match layout.free_index[gb] {
                    Some(fb) => triplets.push((fa, fb, k)),
                    None => rhs[fa] -= k * dirichlet_values[gb],
                }
            }
        }
    }
    let matrix = csr_from_triplets(layout.n_free, &triplets);
    Ok(LinearSystem {
        matrix,
        rhs,
        dirichlet_values,
        layout,
        degrees: degrees.clone(),
        stab,
        elements,
    })
}

#[derive(Clone, Debug)]
pub struct DiscreteSolution {
    /// Value at every global DoF.
    pub values: DVector<f64>,
    pub layout: GlobalDofLayout,
    pub degrees: DegreeDistribution,
    pub stab: StabChoice,
    pub elements: Vec<ElementSystem>,
    pub report: SolveReport,
}

impl DiscreteSolution {
    pub fn n_dofs(&self) -> usize {
        self.layout.n_dofs()
    }

    /// Harmonic polynomial coefficients of the projection on element `e`.
    pub fn projection(&self, e: usize) -> DVector<f64> {
        let sys = &self.elements[e];
        let local =
            DVector::from_iterator(sys.dofs.len(), sys.dofs.iter().map(|&g| self.values[g]));
        &sys.pi_poly * local
    }

    /// Discrete energy `sum_E u_E^T K_E u_E`.
    pub fn energy(&self) -> f64 {
        self.elements
            .iter()
            .map(|sys| {
                let u = DVector::from_iterator(
                    sys.dofs.len(),
                    sys.dofs.iter().map(|&g| self.values[g]),
                );
                u.dot(&(&sys.stiffness * &u))
            })
            .sum()
    }

    /// CSV rows `index,x,y,value`, one per global DoF.
    pub fn to_csv(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::from("index,x,y,value\n");
        for (i, (x, v)) in self
            .layout
            .positions
            .iter()
            .zip(self.values.iter())
            .enumerate()
        {
            let _ = writeln!(out, "{i},{:e},{:e},{:e}", x.x, x.y, v);
        }
        out
    }
}

pub fn solve(system: LinearSystem) -> Result<DiscreteSolution> {
    solve_with(system, &SolverOptions::default())
}

pub fn solve_with(system: LinearSystem, opts: &SolverOptions) -> Result<DiscreteSolution> {
    let (x, report) = solve_spd(&system.matrix, &system.rhs, opts)?;
    let mut values = system.dirichlet_values;
    for (g, fi) in system.layout.free_index.iter().enumerate() {
        if let Some(f) = fi {
            values[g] = x[*f];
        }
    }
    Ok(DiscreteSolution {
        values,
        layout: system.layout,
        degrees: system.degrees,
        stab: system.stab,
        elements: system.elements,
        report,
    })
}

/// Layout, Dirichlet interpolation, assembly and solve in one call.
pub fn solve_dirichlet(
    mesh: &Mesh,
    degrees: &DegreeDistribution,
    stab: StabChoice,
    g: impl Fn(Point2) -> f64,
) -> Result<DiscreteSolution> {
    let layout = build_global_layout(mesh, degrees)?;
    let values = interpolate_dirichlet(g, &layout);
    solve(assemble(mesh, degrees, layout, stab, values)?)
}
