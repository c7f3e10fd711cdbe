//! Normalized broken energy error between the exact solution and the element projections.

use rayon::prelude::*;

use super::problems::TestProblem;
use crate::basis::outward_normal;
use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::quadrature::{gauss_legendre, Accumulation, CompositeRule};
use crate::solver::DiscreteSolution;

/// Gauss–Legendre points per edge beyond the polynomial degree.
pub const ERROR_EXTRA_POINTS: usize = 20;

/// `|u - Pi u_n|^2_{1,E}` for every element, as the boundary integral of `∂_n(u - q)(u - q)`.
///
/// Edges ending at the problem's singular corner are integrated with the graded composite rule
/// parametrized from the corner.
pub fn element_errors(
    mesh: &Mesh,
    solution: &DiscreteSolution,
    problem: &TestProblem,
) -> Result<Vec<f64>> {
    if solution.elements.len() != mesh.n_elements() {
        return Err(Error::InvalidArgument(format!(
            "solution has {} elements, mesh has {}",
            solution.elements.len(),
            mesh.n_elements()
        )));
    }
    let tol = 1e-12 * mesh.domain_diameter().max(1.0);
    (0..mesh.n_elements())
        .into_par_iter()
        .map(|e| {
            let sys = &solution.elements[e];
            let coeffs = solution.projection(e);
            let basis = &sys.basis;
            let m = basis.degree + ERROR_EXTRA_POINTS;
            let rule = gauss_legendre(m)?;
            let poly = mesh.element_polygon(e);
            let n = poly.len();
            let mut sum = 0.0;
            for i in 0..n {
                let (a, b) = (poly[i], poly[(i + 1) % n]);
                let normal = outward_normal(a, b)?;
                let integrand = |x: crate::Point2| {
                    let diff = problem.u(x) - basis.eval_poly(coeffs.as_slice(), x);
                    let dn = (problem.gradient(x) - basis.eval_poly_gradient(coeffs.as_slice(), x))
                        .dot(normal);
                    dn * diff
                };
                let len = a.dist(b);
                let at_corner = problem.singular_corner.and_then(|c| {
                    if a.dist(c) <= tol {
                        Some((a, b))
                    } else if b.dist(c) <= tol {
                        Some((b, a))
                    } else {
                        None
                    }
                });
                sum += match at_corner {
                    Some((from, to)) => {
                        let graded = CompositeRule::graded(m, Accumulation::Left)?;
                        len * graded.integrate(|s| integrand(from.lerp(to, s)))
                    }
                    None => 0.5 * len * rule.integrate(|t| integrand(a.lerp(b, 0.5 * (t + 1.0)))),
                };
            }
            Ok(sum)
        })
        .collect()
}

/// `|u - Pi u_n|_{1,n,Ω} / |u|_{1,Ω}`.
pub fn computable_error(
    mesh: &Mesh,
    solution: &DiscreteSolution,
    problem: &TestProblem,
) -> Result<f64> {
    let total: f64 = element_errors(mesh, solution, problem)?.iter().sum();
    Ok(total.max(0.0).sqrt() / problem.energy_norm())
}
