//! Scaled harmonic polynomial basis on a polygon.
//!
//! With `ζ = ((x, y) - center) / scale` read as a complex number, the basis of the
//! harmonic polynomials of degree at most `p` is ordered as
//! `{1, Re ζ, Im ζ, Re ζ², Im ζ², ..., Re ζᵖ, Im ζᵖ}` (dimension `2p + 1`).

use crate::error::{Error, Result};
use crate::geometry::Point2;

#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicBasis {
    pub degree: usize,
    pub center: Point2,
    pub scale: f64,
}

/// Coefficients of a harmonic polynomial against a [`HarmonicBasis`].
#[derive(Clone, Debug, PartialEq)]
pub struct PolyCoeffs(pub Vec<f64>);

impl HarmonicBasis {
    pub fn new(degree: usize, center: Point2, scale: f64) -> Self {
        Self {
            degree,
            center,
            scale,
        }
    }

    pub fn dim(&self) -> usize {
        2 * self.degree + 1
    }

    fn zeta(&self, pt: Point2) -> (f64, f64) {
        (
            (pt.x - self.center.x) / self.scale,
            (pt.y - self.center.y) / self.scale,
        )
    }

    pub fn eval(&self, pt: Point2) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.eval_into(pt, &mut out);
        out
    }

    pub fn eval_into(&self, pt: Point2, out: &mut [f64]) {
        let (zr, zi) = self.zeta(pt);
        out[0] = 1.0;
        let (mut re, mut im) = (1.0, 0.0);
        for k in 1..=self.degree {
            (re, im) = (re * zr - im * zi, re * zi + im * zr);
            out[2 * k - 1] = re;
            out[2 * k] = im;
        }
    }

    /// Gradients of all basis functions, as `(d/dx, d/dy)` pairs.
    pub fn eval_gradient(&self, pt: Point2) -> Vec<Point2> {
        let mut out = vec![Point2::default(); self.dim()];
        self.eval_gradient_into(pt, &mut out);
        out
    }

    pub fn eval_gradient_into(&self, pt: Point2, out: &mut [Point2]) {
        let (zr, zi) = self.zeta(pt);
        out[0] = Point2::default();
        // (re, im) holds ζ^{k-1}
        let (mut re, mut im) = (1.0, 0.0);
        for k in 1..=self.degree {
            let c = k as f64 / self.scale;
            out[2 * k - 1] = Point2::new(c * re, -c * im);
            out[2 * k] = Point2::new(c * im, c * re);
            (re, im) = (re * zr - im * zi, re * zi + im * zr);
        }
    }

    /// Value of the polynomial with the given coefficients.
    pub fn eval_poly(&self, coeffs: &[f64], pt: Point2) -> f64 {
        self.eval(pt).iter().zip(coeffs).map(|(b, c)| b * c).sum()
    }

    pub fn eval_poly_gradient(&self, coeffs: &[f64], pt: Point2) -> Point2 {
        self.eval_gradient(pt)
            .iter()
            .zip(coeffs)
            .fold(Point2::default(), |acc, (g, &c)| acc + *g * c)
    }

    /// Normal derivatives of all basis functions at `x(t) = (a + b)/2 + t (b - a)/2`
    /// on the edge `a -> b`, using the outward normal of a counterclockwise element.
    pub fn normal_derivative_trace(&self, a: Point2, b: Point2, t: f64) -> Result<Vec<f64>> {
        let n = outward_normal(a, b)?;
        let pt = a.lerp(b, 0.5 * (t + 1.0));
        Ok(self.eval_gradient(pt).iter().map(|g| g.dot(n)).collect())
    }
}

/// Unit outward normal of the edge `a -> b` of a counterclockwise polygon.
pub fn outward_normal(a: Point2, b: Point2) -> Result<Point2> {
    let d = b - a;
    let len = d.norm();
    if len == 0.0 || !len.is_finite() {
        return Err(Error::InvalidArgument(
            "degenerate edge of zero length".into(),
        ));
    }
    Ok(Point2::new(d.y / len, -d.x / len))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_legendre;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn values_at_simple_points() {
        let b = HarmonicBasis::new(3, Point2::new(0.5, -0.25), 2.0);
        let v = b.eval(b.center);
        assert_eq!(v, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let b1 = HarmonicBasis::new(1, b.center, 2.0);
        assert_eq!(
            b1.eval(b.center + Point2::new(2.0, 0.0)),
            vec![1.0, 1.0, 0.0]
        );
        let b2 = HarmonicBasis::new(2, b.center, 2.0);
        let v = b2.eval(b.center + Point2::new(0.0, 2.0));
        for (x, y) in v.iter().zip([1.0, 0.0, 1.0, -1.0, 0.0]) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-15);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in 1..=10 {
            let scale = 0.3;
            let b = HarmonicBasis::new(p, Point2::new(0.1, 0.2), scale);
            for _ in 0..10 {
                let pt = Point2::new(
                    0.1 + scale * rng.random_range(-0.7..0.7),
                    0.2 + scale * rng.random_range(-0.7..0.7),
                );
                let g = b.eval_gradient(pt);
                let step = 1e-6 * scale;
                let fx = |dx: f64, dy: f64| b.eval(pt + Point2::new(dx, dy));
                let (xp, xm, yp, ym) =
                    (fx(step, 0.0), fx(-step, 0.0), fx(0.0, step), fx(0.0, -step));
                for k in 0..b.dim() {
                    let gx = (xp[k] - xm[k]) / (2.0 * step);
                    let gy = (yp[k] - ym[k]) / (2.0 * step);
                    let mag = g[k].norm().max(1.0 / scale);
                    assert!((gx - g[k].x).abs() <= 1e-7 * mag, "p={p} k={k}");
                    assert!((gy - g[k].y).abs() <= 1e-7 * mag, "p={p} k={k}");
                }
            }
        }
    }

    #[test]
    fn basis_is_harmonic() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let scale = 1.7;
        let b = HarmonicBasis::new(8, Point2::new(-1.0, 0.5), scale);
        let h = 1e-3 * scale;
        for _ in 0..100 {
            let pt = Point2::new(
                -1.0 + rng.random_range(-1.0..1.0) * scale,
                0.5 + rng.random_range(-1.0..1.0) * scale,
            );
            let c = b.eval(pt);
            let e = b.eval(pt + Point2::new(h, 0.0));
            let w = b.eval(pt - Point2::new(h, 0.0));
            let n = b.eval(pt + Point2::new(0.0, h));
            let s = b.eval(pt - Point2::new(0.0, h));
            let r = (pt - b.center).norm() / scale + h / scale;
            for k in 0..b.dim() {
                let lap = (e[k] + w[k] + n[k] + s[k] - 4.0 * c[k]) / (h * h);
                // truncation h^2/12 (u_xxxx + u_yyyy) plus roundoff of the stencil
                let deg = k.div_ceil(2) as i32;
                let falling = (0..4).map(|i| (deg - i).max(0) as f64).product::<f64>();
                let m4 = falling * r.powi((deg - 4).max(0)) / scale.powi(4);
                let bound = h * h / 6.0 * m4 * 1.5 + 1e-14 * (1.0 + r.powi(deg)) / (h * h) * 8.0;
                assert!(lap.abs() <= bound, "k={k} lap={lap} bound={bound}");
            }
        }
    }

    #[test]
    fn normal_derivative_on_square() {
        // unit square centered at the origin, scale = diagonal
        let diag = 2f64.sqrt();
        let b = HarmonicBasis::new(3, Point2::default(), diag);
        let (a, c) = (Point2::new(0.5, -0.5), Point2::new(0.5, 0.5));
        for t in [-1.0, -0.3, 0.0, 0.8] {
            let dn = b.normal_derivative_trace(a, c, t).unwrap();
            assert_eq!(dn[0], 0.0);
            assert_abs_diff_eq!(dn[1], 1.0 / diag, epsilon = 1e-15);
        }
        assert!(b.normal_derivative_trace(a, a, 0.0).is_err());
    }

    #[test]
    fn zero_flux_over_polygon() {
        let poly = [
            Point2::new(0.0, 0.0),
            Point2::new(1.0, -0.2),
            Point2::new(1.4, 0.7),
            Point2::new(0.5, 1.3),
            Point2::new(-0.3, 0.6),
        ];
        let p = 7;
        let b = HarmonicBasis::new(
            p,
            crate::geometry::centroid(&poly),
            crate::geometry::diameter(&poly),
        );
        let rule = gauss_legendre(p).unwrap();
        let mut flux = vec![0.0; b.dim()];
        for i in 0..poly.len() {
            let (a, c) = (poly[i], poly[(i + 1) % poly.len()]);
            let half = 0.5 * a.dist(c);
            for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
                let dn = b.normal_derivative_trace(a, c, t).unwrap();
                for k in 0..b.dim() {
                    flux[k] += w * half * dn[k];
                }
            }
        }
        for f in flux {
            assert!(f.abs() < 1e-12, "flux {f}");
        }
    }
}
