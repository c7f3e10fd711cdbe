//! Symmetric positive definite sparse solves: reverse Cuthill–McKee ordering with a sparse
//! Cholesky factorization, and Jacobi-preconditioned conjugate gradients as a fallback.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::factorization::CscCholesky;
use nalgebra_sparse::{CooMatrix, CscMatrix, CsrMatrix};

use crate::error::{Error, Result};

/// Symmetric fill-reducing permutation applied before factorization.
#[derive(Clone, Debug, Default, PartialEq)]
pub enum Ordering {
    Natural,
    #[default]
    ReverseCuthillMcKee,
    /// `perm[new] = old`.
    Custom(Vec<usize>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    /// Cholesky, falling back to conjugate gradients if the factorization breaks down.
    #[default]
    Cholesky,
    ConjugateGradient,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    pub ordering: Ordering,
    pub method: Method,
    /// Relative residual target of the iterative solver.
    pub cg_tolerance: f64,
    pub cg_max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            ordering: Ordering::default(),
            method: Method::default(),
            cg_tolerance: 1e-12,
            cg_max_iterations: 100_000,
        }
    }
}

/// How a system was actually solved.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveReport {
    pub method: Method,
    pub iterations: usize,
    pub relative_residual: f64,
}

pub fn csr_from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> CsrMatrix<f64> {
    let mut coo = CooMatrix::new(n, n);
    for &(i, j, v) in triplets {
        coo.push(i, j, v);
    }
    CsrMatrix::from(&coo)
}

pub fn matvec(a: &CsrMatrix<f64>, x: &DVector<f64>) -> DVector<f64> {
    let mut y = DVector::zeros(a.nrows());
    for (i, row) in a.row_iter().enumerate() {
        y[i] = row
            .col_indices()
            .iter()
            .zip(row.values())
            .map(|(&j, &v)| v * x[j])
            .sum();
    }
    y
}

pub fn to_dense(a: &CsrMatrix<f64>) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(a.nrows(), a.ncols());
    for (i, row) in a.row_iter().enumerate() {
        for (&j, &v) in row.col_indices().iter().zip(row.values()) {
            d[(i, j)] += v;
        }
    }
    d
}

/// Reverse Cuthill–McKee ordering of the matrix graph, `perm[new] = old`.
pub fn reverse_cuthill_mckee(a: &CsrMatrix<f64>) -> Vec<usize> {
    let n = a.nrows();
    let offsets = a.row_offsets();
    let cols = a.col_indices();
    let adj: Vec<&[usize]> = (0..n).map(|i| &cols[offsets[i]..offsets[i + 1]]).collect();
    let degree: Vec<usize> = adj.iter().map(|r| r.len()).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&i| (degree[i], i));
    for &seed in &by_degree {
        if visited[seed] {
            continue;
        }
        let start = pseudo_peripheral(seed, &adj, &degree);
        let mut queue = VecDeque::from([start]);
        visited[start] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = adj[v].iter().copied().filter(|&w| !visited[w]).collect();
            next.sort_by_key(|&w| (degree[w], w));
            for w in next {
                if !visited[w] {
                    visited[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order.reverse();
    order
}

/// Last vertex of the deepest breadth-first level structure reachable by repeated sweeps.
fn pseudo_peripheral(seed: usize, adj: &[&[usize]], degree: &[usize]) -> usize {
    let levels = |s: usize| -> (usize, Vec<usize>) {
        let mut dist = vec![usize::MAX; adj.len()];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        let mut last = vec![s];
        let mut depth = 0;
        while let Some(v) = queue.pop_front() {
            for &w in adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    if dist[w] > depth {
                        depth = dist[w];
                        last.clear();
                    }
                    if dist[w] == depth {
                        last.push(w);
                    }
                    queue.push_back(w);
                }
            }
        }
        (depth, last)
    };
    let mut current = seed;
    let (mut depth, mut last) = levels(current);
    loop {
        let candidate = *last
            .iter()
            .min_by_key(|&&w| (degree[w], w))
            .unwrap_or(&current);
        let (d, l) = levels(candidate);
        if d <= depth {
            return current;
        }
        current = candidate;
        depth = d;
        last = l;
    }
}

fn permuted(a: &CsrMatrix<f64>, perm: &[usize]) -> CscMatrix<f64> {
    let n = a.nrows();
    let mut inv = vec![0; n];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    let mut coo = CooMatrix::new(n, n);
    for (i, row) in a.row_iter().enumerate() {
        for (&j, &v) in row.col_indices().iter().zip(row.values()) {
            coo.push(inv[i], inv[j], v);
        }
    }
    CscMatrix::from(&coo)
}

fn relative_residual(a: &CsrMatrix<f64>, x: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let r = b - matvec(a, x);
    let nb = b.norm();
    if nb == 0.0 {
        r.norm()
    } else {
        r.norm() / nb
    }
}

fn validate_ordering(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::InvalidArgument(format!(
            "ordering of length {} for {n} unknowns",
            perm.len()
        )));
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidArgument(
                "ordering is not a permutation".into(),
            ));
        }
        seen[p] = true;
    }
    Ok(())
}

fn cholesky(
    a: &CsrMatrix<f64>,
    b: &DVector<f64>,
    ordering: &Ordering,
) -> Result<(DVector<f64>, f64)> {
    let n = a.nrows();
    let perm = match ordering {
        Ordering::Natural => (0..n).collect(),
        Ordering::ReverseCuthillMcKee => reverse_cuthill_mckee(a),
        Ordering::Custom(p) => {
            validate_ordering(p, n)?;
            p.clone()
        }
    };
    let factor =
        CscCholesky::factor(&permuted(a, &perm)).map_err(|e| Error::Solve(format!("{e:?}")))?;
    let solve = |rhs: &DVector<f64>| -> DVector<f64> {
        let pb = DMatrix::from_fn(n, 1, |i, _| rhs[perm[i]]);
        let px = factor.solve(&pb);
        let mut x = DVector::zeros(n);
        for (new, &old) in perm.iter().enumerate() {
            x[old] = px[(new, 0)];
        }
        x
    };
    let mut x = solve(b);
    let mut res = relative_residual(a, &x, b);
    // a couple of refinement steps absorb the rounding of the triangular solves
    for _ in 0..3 {
        if res <= 1e-14 {
            break;
        }
        let r = b - matvec(a, &x);
        let candidate = &x + solve(&r);
        let cres = relative_residual(a, &candidate, b);
        if cres >= res {
            break;
        }
        x = candidate;
        res = cres;
    }
    Ok((x, res))
}

/// Jacobi-preconditioned conjugate gradients from a zero initial guess.
pub fn conjugate_gradient(
    a: &CsrMatrix<f64>,
    b: &DVector<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<(DVector<f64>, usize)> {
    let n = a.nrows();
    let mut diag = DVector::from_element(n, 1.0);
    for (i, row) in a.row_iter().enumerate() {
        if let Some(k) = row.col_indices().iter().position(|&j| j == i) {
            let d = row.values()[k];
            if d <= 0.0 {
                return Err(Error::Solve(format!(
                    "nonpositive diagonal entry {d} at row {i}"
                )));
            }
            diag[i] = 1.0 / d;
        }
    }
    let nb = b.norm();
    let mut x = DVector::zeros(n);
    if nb == 0.0 {
        return Ok((x, 0));
    }
    let mut r = b.clone();
    let mut z = r.component_mul(&diag);
    let mut p = z.clone();
    let mut rz = r.dot(&z);
    for it in 1..=max_iter {
        let ap = matvec(a, &p);
        let pap = p.dot(&ap);
        if pap <= 0.0 {
            return Err(Error::Solve(format!(
                "matrix not positive definite (p^T A p = {pap:e})"
            )));
        }
        let alpha = rz / pap;
        x.axpy(alpha, &p, 1.0);
        r.axpy(-alpha, &ap, 1.0);
        if r.norm() <= tol * nb {
            return Ok((x, it));
        }
        z = r.component_mul(&diag);
        let rz_new = r.dot(&z);
        p = &z + &p * (rz_new / rz);
        rz = rz_new;
    }
    Err(Error::Solve(format!(
        "conjugate gradients did not reach {tol:e} in {max_iter} iterations"
    )))
}

/// Solves `a x = b` for symmetric positive definite `a`.
pub fn solve_spd(
    a: &CsrMatrix<f64>,
    b: &DVector<f64>,
    opts: &SolverOptions,
) -> Result<(DVector<f64>, SolveReport)> {
    if a.nrows() != a.ncols() || a.nrows() != b.len() {
        return Err(Error::InvalidArgument(
            "dimension mismatch in linear system".into(),
        ));
    }
    if a.nrows() == 0 {
        return Ok((
            DVector::zeros(0),
            SolveReport {
                method: opts.method,
                iterations: 0,
                relative_residual: 0.0,
            },
        ));
    }
    let cg = || -> Result<(DVector<f64>, SolveReport)> {
        let (x, iterations) = conjugate_gradient(a, b, opts.cg_tolerance, opts.cg_max_iterations)?;
        let relative_residual = relative_residual(a, &x, b);
        Ok((
            x,
            SolveReport {
                method: Method::ConjugateGradient,
                iterations,
                relative_residual,
            },
        ))
    };
    match opts.method {
        Method::ConjugateGradient => cg(),
        Method::Cholesky => match cholesky(a, b, &opts.ordering) {
            Ok((x, relative_residual)) => Ok((
                x,
                SolveReport {
                    method: Method::Cholesky,
                    iterations: 0,
                    relative_residual,
                },
            )),
            Err(Error::Solve(msg)) => {
                cg().map_err(|e| Error::Solve(format!("Cholesky failed ({msg}); {e}")))
            }
            Err(e) => Err(e),
        },
    }
}
