//! Harmonic model problems with known solutions.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::mesh::DomainTag;
use crate::quadrature::gauss_legendre;

/// `|u|_{1,Ω}` of the L-shape corner solution `r^{2/3} sin(2/3 (θ + π/2))`.
///
/// Obtained as the boundary integral of `u ∂_n u` over the four outer sides of the L-shape
/// (the solution vanishes on the two sides meeting at the corner), evaluated with 30-digit
/// adaptive quadrature; `|u|²_1 = 1.836226661875162634...`. The crate's tests reproduce it
/// independently with a graded two-dimensional quadrature over the domain.
pub const LSHAPE_ENERGY_NORM: f64 = 1.355_074_411_932_851_2;

const ALPHA: f64 = 2.0 / 3.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProblemKind {
    /// `exp(x) sin(y)` on the unit square.
    ExpSin,
    /// `r^{2/3} sin(2/3 (θ + π/2))` on the L-shape, singular at the reentrant corner.
    LShapeSingular,
    /// `Re (z - c)^k + Im (z - c)^k / 2` with `z = x + i y`.
    HarmonicPolynomial { degree: usize, center: Point2 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TestProblem {
    pub kind: ProblemKind,
    pub domain: DomainTag,
    /// Point where the solution is singular; edges ending there get graded quadrature.
    pub singular_corner: Option<Point2>,
    energy_norm: f64,
}

impl TestProblem {
    pub fn exp_sin() -> Self {
        Self {
            kind: ProblemKind::ExpSin,
            domain: DomainTag::UnitSquare,
            singular_corner: None,
            energy_norm: ((1f64.exp().powi(2) - 1.0) / 2.0).sqrt(),
        }
    }

    pub fn lshape_singular() -> Self {
        Self {
            kind: ProblemKind::LShapeSingular,
            domain: DomainTag::LShape,
            singular_corner: Some(Point2::default()),
            energy_norm: LSHAPE_ENERGY_NORM,
        }
    }

    /// Harmonic polynomial of exact degree `degree >= 1` on the unit square or the L-shape.
    pub fn harmonic_polynomial(degree: usize, domain: DomainTag) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidArgument(
                "harmonic polynomial problem needs degree >= 1".into(),
            ));
        }
        let boundary = domain.boundary().ok_or_else(|| {
            Error::InvalidArgument("polynomial problems need a named domain".into())
        })?;
        let mut p = Self {
            kind: ProblemKind::HarmonicPolynomial {
                degree,
                center: Point2::new(0.1, 0.2),
            },
            domain,
            singular_corner: None,
            energy_norm: 0.0,
        };
        // exact: ∂_n u * u has degree 2k - 1 along each side
        let rule = gauss_legendre(degree + 1)?;
        let mut sq = 0.0;
        for i in 0..boundary.len() {
            let (a, b) = (boundary[i], boundary[(i + 1) % boundary.len()]);
            let n = crate::basis::outward_normal(a, b)?;
            sq += 0.5
                * a.dist(b)
                * rule.integrate(|t| {
                    let x = a.lerp(b, 0.5 * (t + 1.0));
                    p.gradient(x).dot(n) * p.u(x)
                });
        }
        p.energy_norm = sq.sqrt();
        Ok(p)
    }

    pub fn name(&self) -> String {
        match self.kind {
            ProblemKind::ExpSin => "exp-sin".into(),
            ProblemKind::LShapeSingular => "lshape-singular".into(),
            ProblemKind::HarmonicPolynomial { degree, .. } => format!("harmonic:{degree}"),
        }
    }

    /// `|u|_{1,Ω}`, the normalizer of the computable error.
    pub fn energy_norm(&self) -> f64 {
        self.energy_norm
    }

    pub fn u(&self, x: Point2) -> f64 {
        match self.kind {
            ProblemKind::ExpSin => x.x.exp() * x.y.sin(),
            ProblemKind::LShapeSingular => {
                let r = x.norm();
                if r == 0.0 {
                    return 0.0;
                }
                r.powf(ALPHA) * (ALPHA * (lshape_angle(x) + 0.5 * PI)).sin()
            }
            ProblemKind::HarmonicPolynomial { degree, center } => {
                let (re, im) = complex_power(x - center, degree);
                re + 0.5 * im
            }
        }
    }

    pub fn gradient(&self, x: Point2) -> Point2 {
        match self.kind {
            ProblemKind::ExpSin => {
                let e = x.x.exp();
                Point2::new(e * x.y.sin(), e * x.y.cos())
            }
            ProblemKind::LShapeSingular => {
                let r = x.norm();
                let theta = lshape_angle(x);
                let phi = theta + 0.5 * PI;
                let c = ALPHA * r.powf(ALPHA - 1.0);
                Point2::new(
                    c * (ALPHA * phi - theta).sin(),
                    c * (ALPHA * phi - theta).cos(),
                )
            }
            ProblemKind::HarmonicPolynomial { degree, center } => {
                // d/dz z^k = k z^{k-1}; grad Re f = (Re f', -Im f'), grad Im f = (Im f', Re f')
                let (re, im) = complex_power(x - center, degree - 1);
                let k = degree as f64;
                Point2::new(k * (re + 0.5 * im), k * (-im + 0.5 * re))
            }
        }
    }
}

/// Polar angle in `[-π/2, 3π/2)`, with the branch cut inside the removed quadrant.
fn lshape_angle(x: Point2) -> f64 {
    let t = x.y.atan2(x.x);
    if t < -0.5 * PI {
        t + 2.0 * PI
    } else {
        t
    }
}

fn complex_power(z: Point2, k: usize) -> (f64, f64) {
    let (mut re, mut im) = (1.0, 0.0);
    for _ in 0..k {
        (re, im) = (re * z.x - im * z.y, re * z.y + im * z.x);
    }
    (re, im)
}

impl FromStr for TestProblem {
    type Err = Error;
    /// `exp-sin`, `lshape-singular`, or `harmonic:<k>` (on the unit square).
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exp-sin" => Ok(Self::exp_sin()),
            "lshape-singular" => Ok(Self::lshape_singular()),
            other => match other.strip_prefix("harmonic:") {
                Some(k) => Self::harmonic_polynomial(
                    k.parse()
                        .map_err(|e| Error::InvalidArgument(format!("bad degree '{k}': {e}")))?,
                    DomainTag::UnitSquare,
                ),
                None => Err(Error::InvalidArgument(format!(
                    "unknown problem '{s}' (expected exp-sin, lshape-singular, harmonic:<k>)"
                ))),
            },
        }
    }
}

impl fmt::Display for TestProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}
