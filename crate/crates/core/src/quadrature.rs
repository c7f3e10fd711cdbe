//! One-dimensional Gauss rules, geometrically graded composite rules, and the
//! Duffy-regularized rule for double integrals over edge pairs sharing a vertex.

use crate::error::{Error, Result};
use crate::geometry::Point2;

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

/// Quadrature rule on the reference interval [-1, 1].
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule1D {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Highest polynomial degree integrated exactly.
    pub exactness_degree: usize,
}

impl QuadratureRule1D {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Nodes and weights mapped affinely onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate_on(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }

    /// Rule on `[0, 1]` as `(node, weight)` pairs.
    pub fn unit_interval(&self) -> Vec<(f64, f64)> {
        self.mapped(0.0, 1.0).collect()
    }

    /// Symmetrizes nodes and weights about the origin.
    fn symmetrize(&mut self) {
        let n = self.nodes.len();
        for i in 0..n / 2 {
            let j = n - 1 - i;
            let x = 0.5 * (self.nodes[j] - self.nodes[i]);
            let w = 0.5 * (self.weights[i] + self.weights[j]);
            self.nodes[i] = -x;
            self.nodes[j] = x;
            self.weights[i] = w;
            self.weights[j] = w;
        }
        if n % 2 == 1 {
            self.nodes[n / 2] = 0.0;
        }
    }
}

/// Legendre polynomial `P_n(x)` together with `P_{n-1}(x)` via the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let (mut p_prev, mut p) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

/// Gauss–Lobatto rule with `p + 1` points (both endpoints included), exact to degree `2p - 1`.
pub fn gauss_lobatto(p: usize) -> Result<QuadratureRule1D> {
    if p == 0 {
        return Err(Error::InvalidArgument(
            "Gauss-Lobatto rule needs p >= 1".into(),
        ));
    }
    let n = p;
    let nf = n as f64;
    let mut nodes = Vec::with_capacity(n + 1);
    let mut weights = Vec::with_capacity(n + 1);
    for j in 0..=n {
        // Chebyshev–Gauss–Lobatto initial guess, descending
        let mut x = (std::f64::consts::PI * j as f64 / nf).cos();
        if j != 0 && j != n {
            for _ in 0..NEWTON_MAX_ITER {
                let (pn, pn1) = legendre_pair(n, x);
                // (1 - x^2) P_n'(x) = n (P_{n-1} - x P_n); Newton on P_n' via the Lobatto identity
                let dp = nf * (pn1 - x * pn) / (1.0 - x * x);
                let d2p = (2.0 * x * dp - nf * (nf + 1.0) * pn) / (1.0 - x * x);
                let dx = dp / d2p;
                x -= dx;
                if dx.abs() <= NEWTON_TOL {
                    break;
                }
            }
        }
        let (pn, _) = legendre_pair(n, x);
        nodes.push(x);
        weights.push(2.0 / (nf * (nf + 1.0) * pn * pn));
    }
    nodes.reverse();
    weights.reverse();
    let mut rule = QuadratureRule1D {
        nodes,
        weights,
        exactness_degree: 2 * p - 1,
    };
    rule.symmetrize();
    rule.nodes[0] = -1.0;
    rule.nodes[n] = 1.0;
    Ok(rule)
}

/// Gauss–Legendre rule with `m` points, exact to degree `2m - 1`.
pub fn gauss_legendre(m: usize) -> Result<QuadratureRule1D> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "Gauss-Legendre rule needs m >= 1".into(),
        ));
    }
    let mf = m as f64;
    let mut nodes = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for i in 1..=m {
        let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (mf + 0.5)).cos();
        for _ in 0..NEWTON_MAX_ITER {
            let (pm, pm1) = legendre_pair(m, x);
            let dp = mf * (x * pm - pm1) / (x * x - 1.0);
            let dx = pm / dp;
            x -= dx;
            if dx.abs() <= NEWTON_TOL {
                break;
            }
        }
        let (pm, pm1) = legendre_pair(m, x);
        let dp = mf * (x * pm - pm1) / (x * x - 1.0);
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    nodes.reverse();
    weights.reverse();
    let mut rule = QuadratureRule1D {
        nodes,
        weights,
        exactness_degree: 2 * m - 1,
    };
    rule.symmetrize();
    Ok(rule)
}

/// Endpoint of `[0, 1]` toward which a composite rule accumulates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Accumulation {
    Left,
    Right,
}

/// Composite rule on `[0, 1]` over geometrically shrinking subintervals.
#[derive(Clone, Debug)]
pub struct CompositeRule {
    pub base: QuadratureRule1D,
    pub depth: usize,
    pub ratio: f64,
    pub endpoint: Accumulation,
    points: Vec<(f64, f64)>,
}

/// Default depth and ratio of the graded rule used near singular corners.
pub const GRADED_DEPTH: usize = 30;
pub const GRADED_RATIO: f64 = 0.3;

impl CompositeRule {
    /// `depth` geometric pieces `[q^{k+1}, q^k]` plus the terminal piece `[0, q^depth]`,
    /// mirrored when accumulating at the right endpoint.
    ///
    /// Mirrored nodes lose the distance to the endpoint below machine epsilon, so integrands
    /// that blow up at the endpoint should be parametrized to accumulate on the left.
    pub fn new(
        base: QuadratureRule1D,
        depth: usize,
        ratio: f64,
        endpoint: Accumulation,
    ) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidArgument(
                "composite rule depth must be >= 1".into(),
            ));
        }
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "grading ratio {ratio} outside (0,1)"
            )));
        }
        let mut breaks = Vec::with_capacity(depth + 2);
        breaks.push(0.0);
        for k in (0..=depth).rev() {
            breaks.push(ratio.powi(k as i32));
        }
        let mut points = Vec::with_capacity((depth + 1) * base.len());
        for w in breaks.windows(2) {
            points.extend(base.mapped(w[0], w[1]));
        }
        if endpoint == Accumulation::Right {
            for pt in &mut points {
                pt.0 = 1.0 - pt.0;
            }
            points.reverse();
        }
        Ok(Self {
            base,
            depth,
            ratio,
            endpoint,
            points,
        })
    }

    /// Default graded rule with `m` points per piece.
    pub fn graded(m: usize, endpoint: Accumulation) -> Result<Self> {
        Self::new(gauss_legendre(m)?, GRADED_DEPTH, GRADED_RATIO, endpoint)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.points.iter().map(|&(x, w)| w * f(x)).sum()
    }
}

/// Default points per direction for Duffy-regularized common-vertex integrals.
pub fn duffy_points(p: usize) -> usize {
    (2 * p + 2).max(16)
}

/// Quadrature points `(s, t, weight)` on `(0,1)^2` for integrands that are bounded but
/// nonsmooth at the origin.
///
/// The square is split along its diagonal and each triangle is mapped back onto the square by
/// `s = t z` (respectively `t = s z`), whose Jacobian removes the corner singularity.
pub fn duffy_points_unit_square(m: usize) -> Result<Vec<(f64, f64, f64)>> {
    duffy_points_graded(m, [None, None])
}

/// Breakpoints of `[0, 1]` graded geometrically toward a near-pole of the integrand at
/// `c + i h`: pieces next to `c` have length comparable to their distance from the pole.
fn graded_breakpoints(near_pole: Option<(f64, f64)>) -> Vec<f64> {
    let mut cuts = vec![0.0, 1.0];
    if let Some((c, h)) = near_pole {
        if h > 0.0 && c > -h && c < 1.0 + h {
            let mut d = h;
            while d < 1.0 {
                cuts.extend([c - d, c + d].into_iter().filter(|&x| x > 0.0 && x < 1.0));
                d *= 2.0;
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts
}

/// As [`duffy_points_unit_square`], with the `z` rule of each triangle graded toward a near-pole
/// `(c, h)` (first entry: the `s = t z` triangle, second: `t = s z`).
fn duffy_points_graded(m: usize, poles: [Option<(f64, f64)>; 2]) -> Result<Vec<(f64, f64, f64)>> {
    let rule = gauss_legendre(m)?.unit_interval();
    let z_rule = |pole: Option<(f64, f64)>| -> Vec<(f64, f64)> {
        graded_breakpoints(pole)
            .windows(2)
            .flat_map(|w| {
                rule.iter()
                    .map(move |&(z, wz)| (w[0] + (w[1] - w[0]) * z, (w[1] - w[0]) * wz))
            })
            .collect()
    };
    let (z_lower, z_upper) = (z_rule(poles[0]), z_rule(poles[1]));
    let mut pts = Vec::with_capacity(m * (z_lower.len() + z_upper.len()));
    for &(t, wt) in &rule {
        for &(z, wz) in &z_lower {
            pts.push((t * z, t, wt * wz * t));
        }
        for &(z, wz) in &z_upper {
            pts.push((t, t * z, wt * wz * t));
        }
    }
    Ok(pts)
}

/// Integral of `f` over `(0,1)^2` through the Duffy split, for integrands with a corner
/// singularity at the origin.
pub fn duffy_pair_integral(f: impl Fn(f64, f64) -> f64, m: usize) -> Result<f64> {
    Ok(duffy_points_unit_square(m)?
        .into_iter()
        .map(|(s, t, w)| w * f(s, t))
        .sum())
}

/// Two edges leaving a shared vertex `v` along `v + a s` and `v + b t`, `s, t` in `(0, 1)`.
#[derive(Clone, Copy, Debug)]
pub struct CommonVertexPair {
    pub a: Point2,
    pub b: Point2,
}

impl CommonVertexPair {
    /// Rejects the degenerate configuration where both edges leave the vertex in the same direction.
    pub fn new(a: Point2, b: Point2) -> Result<Self> {
        let (la, lb) = (a.norm(), b.norm());
        if la == 0.0 || lb == 0.0 {
            return Err(Error::InvalidConfiguration(
                "zero-length edge in common-vertex pair".into(),
            ));
        }
        let sin = a.cross(b) / (la * lb);
        let cos = a.dot(b) / (la * lb);
        if sin.abs() <= 1e-12 && cos > 0.0 {
            return Err(Error::InvalidConfiguration(
                "edges sharing a vertex overlap (interior angle 0 or 2*pi)".into(),
            ));
        }
        Ok(Self { a, b })
    }

    /// `|a| |b| \int\int num(s,t) / |a s - b t|^2 ds dt` for a numerator vanishing to second
    /// order at `s = t = 0`.
    pub fn integrate(&self, numerator: impl Fn(f64, f64) -> f64, m: usize) -> Result<f64> {
        let scale = self.a.norm() * self.b.norm();
        let kernel = |s: f64, t: f64| {
            let d = self.a * s - self.b * t;
            numerator(s, t) / d.dot(d)
        };
        // After the Duffy map |a s - b t|^2 = t^2 |a z - b|^2 on the `s = t z` triangle, whose
        // roots z = (a.b +- i |a x b|) / |a|^2 approach the real axis for narrow angles; the
        // other triangle is the same with a and b swapped.
        let (ab, cross) = (self.a.dot(self.b), self.a.cross(self.b).abs());
        let pole = |len2: f64| Some((ab / len2, cross / len2));
        let sum: f64 =
            duffy_points_graded(m, [pole(self.a.dot(self.a)), pole(self.b.dot(self.b))])?
                .into_iter()
                .map(|(s, t, w)| w * kernel(s, t))
                .sum();
        Ok(scale * sum)
    }
}
