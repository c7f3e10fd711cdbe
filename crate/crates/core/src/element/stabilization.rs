//! Stabilization matrices in local DoF coordinates.

use nalgebra::DMatrix;

use super::{edge_data, EdgeData, LocalDofLayout, LocalElement};
use crate::error::{Error, Result};
use crate::geometry;
use crate::quadrature::{duffy_points, duffy_points_unit_square, gauss_legendre, CommonVertexPair};

/// Lower bound `c` in `c * lumped(v, v) <= |v|^2_{L2(∂E)} <= lumped(v, v)` for Gauss–Lobatto
/// lumping, attained by a linear trace with opposite endpoint values and observed for all
/// degrees up to 8.
pub const MASS_LUMP_LOWER_BOUND: f64 = 1.0 / 3.0;

/// Diagonal `p_E / h_E * sum_e |e|/2 * eta_j` on the Gauss–Lobatto nodes.
pub fn stab_l2_lumped(el: &LocalElement, layout: &LocalDofLayout) -> Result<DMatrix<f64>> {
    Ok(lumped(el, layout, &edge_data(el)?))
}

/// `p_E / h_E` times the exact boundary mass matrix.
pub fn stab_l2_exact(el: &LocalElement, layout: &LocalDofLayout) -> Result<DMatrix<f64>> {
    exact(el, layout, &edge_data(el)?)
}

/// Slobodeckij double integral over all ordered edge pairs, plus the boundary mass matrix
/// when `l2_term` is set.
pub fn stab_h_half(
    el: &LocalElement,
    layout: &LocalDofLayout,
    l2_term: bool,
) -> Result<DMatrix<f64>> {
    h_half(layout, &edge_data(el)?, l2_term)
}

fn l2_scale(el: &LocalElement) -> f64 {
    el.degree as f64 / el.diameter()
}

pub(super) fn lumped(
    el: &LocalElement,
    layout: &LocalDofLayout,
    edges: &[EdgeData],
) -> DMatrix<f64> {
    let mut s = DMatrix::zeros(layout.len(), layout.len());
    for (e, ids) in edges.iter().zip(&layout.edge_dofs) {
        for (&id, &w) in ids.iter().zip(&e.basis.rule.weights) {
            s[(id, id)] += 0.5 * e.length * w;
        }
    }
    s * l2_scale(el)
}

pub(super) fn mass(layout: &LocalDofLayout, edges: &[EdgeData]) -> Result<DMatrix<f64>> {
    let mut s = DMatrix::zeros(layout.len(), layout.len());
    for (e, ids) in edges.iter().zip(&layout.edge_dofs) {
        let rule = gauss_legendre(e.basis.degree() + 1)?;
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            let phi = e.basis.eval(t);
            let jw = 0.5 * e.length * w;
            for (a, &ia) in ids.iter().enumerate() {
                for (b, &ib) in ids.iter().enumerate() {
                    s[(ia, ib)] += jw * phi[a] * phi[b];
                }
            }
        }
    }
    Ok(s)
}

pub(super) fn exact(
    el: &LocalElement,
    layout: &LocalDofLayout,
    edges: &[EdgeData],
) -> Result<DMatrix<f64>> {
    Ok(mass(layout, edges)? * l2_scale(el))
}

/// Adds `w * d d^T` where `d` is given as `(dof, value)` pairs that may repeat a DoF.
fn add_outer(s: &mut DMatrix<f64>, d: &[(usize, f64)], w: f64) {
    for &(i, di) in d {
        for &(j, dj) in d {
            s[(i, j)] += w * di * dj;
        }
    }
}

pub(super) fn h_half(
    layout: &LocalDofLayout,
    edges: &[EdgeData],
    l2_term: bool,
) -> Result<DMatrix<f64>> {
    let n = layout.len();
    let ne = edges.len();
    let mut s = DMatrix::zeros(n, n);
    let mut d: Vec<(usize, f64)> = Vec::new();

    for (i, e) in edges.iter().enumerate() {
        // identical edges: |x(s) - x(t)| = |e| |s - t| / 2 cancels the Jacobian, leaving
        // squared divided differences, polynomials of degree p_e - 1 per variable
        let ids = &layout.edge_dofs[i];
        let rule = gauss_legendre(e.basis.degree())?;
        for (&x, &wx) in rule.nodes.iter().zip(&rule.weights) {
            for (&y, &wy) in rule.nodes.iter().zip(&rule.weights) {
                let dd = e.basis.divided_difference(x, y);
                d.clear();
                d.extend(ids.iter().copied().zip(dd));
                add_outer(&mut s, &d, wx * wy);
            }
        }
    }

    for i in 0..ne {
        for j in i + 1..ne {
            let (ei, ej) = (&edges[i], &edges[j]);
            let (ids_i, ids_j) = (&layout.edge_dofs[i], &layout.edge_dofs[j]);
            let m = duffy_points(ei.basis.degree().max(ej.basis.degree()));
            if j == i + 1 || (i == 0 && j == ne - 1) {
                // common vertex v; map s, t in (0,1) to reference parameters measured from v
                let (v_at_end_of_i, pair) = if j == i + 1 {
                    (true, CommonVertexPair::new(ei.a - ei.b, ej.b - ej.a)?)
                } else {
                    (false, CommonVertexPair::new(ei.b - ei.a, ej.a - ej.b)?)
                };
                let ti = |s: f64| {
                    if v_at_end_of_i {
                        1.0 - 2.0 * s
                    } else {
                        -1.0 + 2.0 * s
                    }
                };
                let tj = |t: f64| {
                    if v_at_end_of_i {
                        -1.0 + 2.0 * t
                    } else {
                        1.0 - 2.0 * t
                    }
                };
                let scale = pair.a.norm() * pair.b.norm();
                for (s_, t_, w) in duffy_points_unit_square(m)? {
                    let r = pair.a * s_ - pair.b * t_;
                    let wk = 2.0 * scale * w / r.dot(r);
                    d.clear();
                    d.extend(ids_i.iter().copied().zip(ei.basis.eval(ti(s_))));
                    d.extend(
                        ids_j
                            .iter()
                            .copied()
                            .zip(ej.basis.eval(tj(t_)).into_iter().map(|v| -v)),
                    );
                    add_outer(&mut s, &d, wk);
                }
            } else {
                let gap = [
                    geometry::segment_distance(ei.a, ej.a, ej.b).0,
                    geometry::segment_distance(ei.b, ej.a, ej.b).0,
                    geometry::segment_distance(ej.a, ei.a, ei.b).0,
                    geometry::segment_distance(ej.b, ei.a, ei.b).0,
                ]
                .into_iter()
                .fold(f64::INFINITY, f64::min);
                if gap <= 1e-14 * (ei.length + ej.length) {
                    return Err(Error::InvalidConfiguration(format!(
                        "non-adjacent edges {i} and {j} touch or overlap"
                    )));
                }
                let rule = gauss_legendre(m)?;
                let jac = 0.25 * ei.length * ej.length;
                for (&x, &wx) in rule.nodes.iter().zip(&rule.weights) {
                    let (xi, phi_i) = (ei.point(x), ei.basis.eval(x));
                    for (&y, &wy) in rule.nodes.iter().zip(&rule.weights) {
                        let r = xi - ej.point(y);
                        let wk = 2.0 * jac * wx * wy / r.dot(r);
                        d.clear();
                        d.extend(ids_i.iter().copied().zip(phi_i.iter().copied()));
                        d.extend(
                            ids_j
                                .iter()
                                .copied()
                                .zip(ej.basis.eval(y).into_iter().map(|v| -v)),
                        );
                        add_outer(&mut s, &d, wk);
                    }
                }
            }
        }
    }

    if l2_term {
        s += mass(layout, edges)?;
    }
    Ok((&s + s.transpose()) * 0.5)
}
