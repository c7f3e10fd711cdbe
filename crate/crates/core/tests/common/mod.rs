//! Independent reference computations for the integration tests. Nothing here calls the
//! library's quadrature, basis or error routines.
#![allow(dead_code)]

use hvem::mesh::Mesh;
use hvem::solver::DiscreteSolution;
use hvem::Point2;
use rand::Rng;

// 7-point Gauss / 15-point Kronrod pair on [-1, 1].
const XK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Kronrod value, error estimate and Kronrod integral of `|f|` on `[a, b]`.
fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64, f64) {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let fc = f(c);
    let (mut k, mut g, mut abs) = (WK[7] * fc, WG[3] * fc, WK[7] * fc.abs());
    for j in 0..7 {
        let (fl, fr) = (f(c - h * XK[j]), f(c + h * XK[j]));
        k += WK[j] * (fl + fr);
        abs += WK[j] * (fl.abs() + fr.abs());
        if j % 2 == 1 {
            g += WG[j / 2] * (fl + fr);
        }
    }
    (k * h, ((k - g) * h).abs(), abs * h.abs())
}

/// 15-point Kronrod rule on `[a, b]`, exact for polynomials up to degree 23.
pub fn kronrod(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    gk15(&f, a, b).0
}

/// Globally adaptive Gauss–Kronrod integral of `f` over `[a, b]`: the panel with the largest
/// error estimate is bisected until the summed estimate drops below `tol` (or below
/// `1e-13 * int |f|`, the evaluation noise level), with at most 4000 panels.
pub fn adaptive(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    struct Panel {
        a: f64,
        b: f64,
        value: f64,
        err: f64,
    }
    impl PartialEq for Panel {
        fn eq(&self, other: &Self) -> bool {
            self.err == other.err
        }
    }
    impl Eq for Panel {}
    impl PartialOrd for Panel {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Panel {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            self.err.total_cmp(&other.err)
        }
    }

    let panel = |a: f64, b: f64| {
        let (value, err, abs) = gk15(&f, a, b);
        (Panel { a, b, value, err }, abs)
    };
    let (first, abs) = panel(a, b);
    let target = tol.max(1e-13 * abs);
    let mut err = first.err;
    let mut heap = std::collections::BinaryHeap::from([first]);
    while err > target && heap.len() < 4000 {
        let worst = heap.pop().unwrap();
        let m = 0.5 * (worst.a + worst.b);
        let ((left, _), (right, _)) = (panel(worst.a, m), panel(m, worst.b));
        err += left.err + right.err - worst.err;
        if !err.is_finite() {
            break;
        }
        heap.push(left);
        heap.push(right);
    }
    heap.iter().map(|p| p.value).sum()
}

/// Iterated adaptive integral over the rectangle `[ax, bx] x [ay, by]`.
pub fn adaptive_2d(
    f: impl Fn(f64, f64) -> f64,
    (ax, bx): (f64, f64),
    (ay, by): (f64, f64),
    tol: f64,
) -> f64 {
    let inner_tol = tol / (bx - ax).abs().max(1e-300);
    adaptive(|x| adaptive(|y| f(x, y), ay, by, inner_tol), ax, bx, tol)
}

/// Integral over the triangle `(apex, b, c)` in collapsed coordinates radial from `apex`, so
/// integrable point singularities at the apex are resolved by the adaptive bisection.
pub fn triangle_integral(
    f: impl Fn(Point2) -> f64,
    apex: Point2,
    b: Point2,
    c: Point2,
    tol: f64,
) -> f64 {
    let twice_area = ((b - apex).cross(c - apex)).abs();
    if twice_area < 1e-300 {
        return 0.0;
    }
    adaptive_2d(
        |s, t| {
            let x = apex + ((b - apex) + (c - b) * t) * s;
            f(x) * s * twice_area
        },
        (0.0, 1.0),
        (0.0, 1.0),
        tol / twice_area,
    )
}

/// `Re ζ^k`, `Im ζ^k` in polar form.
fn zeta_pow(z: (f64, f64), k: usize) -> (f64, f64) {
    if k == 0 {
        return (1.0, 0.0);
    }
    let r = z.0.hypot(z.1);
    let th = z.1.atan2(z.0);
    let rk = r.powi(k as i32);
    (rk * (k as f64 * th).cos(), rk * (k as f64 * th).sin())
}

/// Value of `c_0 + sum_k c_{2k-1} Re ζ^k + c_{2k} Im ζ^k` with `ζ = (x - center) / scale`.
pub fn harmonic_value(coeffs: &[f64], center: Point2, scale: f64, x: Point2) -> f64 {
    let z = ((x.x - center.x) / scale, (x.y - center.y) / scale);
    let p = (coeffs.len() - 1) / 2;
    let mut v = coeffs[0];
    for k in 1..=p {
        let (re, im) = zeta_pow(z, k);
        v += coeffs[2 * k - 1] * re + coeffs[2 * k] * im;
    }
    v
}

/// Gradient of [`harmonic_value`] from the Cauchy–Riemann relations `d/dx ζ^k = k ζ^{k-1} / s`.
pub fn harmonic_gradient(coeffs: &[f64], center: Point2, scale: f64, x: Point2) -> Point2 {
    let z = ((x.x - center.x) / scale, (x.y - center.y) / scale);
    let p = (coeffs.len() - 1) / 2;
    let mut g = Point2::default();
    for k in 1..=p {
        let (re, im) = zeta_pow(z, k - 1);
        let c = k as f64 / scale;
        g = g
            + Point2::new(c * re, -c * im) * coeffs[2 * k - 1]
            + Point2::new(c * im, c * re) * coeffs[2 * k];
    }
    g
}

/// Gradient of `r^{2/3} sin(2/3 (θ + π/2))` from its polar derivatives.
pub fn lshape_gradient(x: Point2) -> Point2 {
    let alpha = 2.0 / 3.0;
    let r = x.norm();
    let mut th = x.y.atan2(x.x);
    if th < -std::f64::consts::FRAC_PI_2 {
        th += 2.0 * std::f64::consts::PI;
    }
    let phi = alpha * (th + std::f64::consts::FRAC_PI_2);
    let dr = alpha * r.powf(alpha - 1.0) * phi.sin();
    let dth = alpha * r.powf(alpha - 1.0) * phi.cos();
    Point2::new(
        dr * th.cos() - dth * th.sin(),
        dr * th.sin() + dth * th.cos(),
    )
}

pub fn exp_sin_gradient(x: Point2) -> Point2 {
    Point2::new(x.x.exp() * x.y.sin(), x.x.exp() * x.y.cos())
}

/// `|u - q|^2_{1,E}` by two-dimensional quadrature over a fan triangulation of element `e`.
///
/// The fan is centered at a vertex located at `singular` when the element has one, otherwise
/// at the vertex centroid (elements must be star-shaped with respect to it).
pub fn fan_error(
    mesh: &Mesh,
    solution: &DiscreteSolution,
    e: usize,
    grad_u: impl Fn(Point2) -> Point2,
    singular: Option<Point2>,
    tol: f64,
) -> f64 {
    let poly = mesh.element_polygon(e);
    let n = poly.len();
    let coeffs = solution.projection(e);
    let basis = &solution.elements[e].basis;
    let integrand = |x: Point2| {
        let d = grad_u(x) - harmonic_gradient(coeffs.as_slice(), basis.center, basis.scale, x);
        d.dot(d)
    };
    let apex_vertex = singular.and_then(|s| poly.iter().position(|p| p.dist(s) < 1e-13));
    match apex_vertex {
        Some(k) => (1..n - 1)
            .map(|j| {
                triangle_integral(
                    integrand,
                    poly[k],
                    poly[(k + j) % n],
                    poly[(k + j + 1) % n],
                    tol,
                )
            })
            .sum(),
        None => {
            let c = poly.iter().fold(Point2::default(), |acc, &p| acc + p) * (1.0 / n as f64);
            (0..n)
                .map(|j| triangle_integral(integrand, c, poly[j], poly[(j + 1) % n], tol))
                .sum()
        }
    }
}

/// Value at `t` of the polynomial interpolating `(nodes[j], values[j])`, by the Lagrange
/// product formula.
pub fn lagrange_interpolate(nodes: &[f64], values: &[f64], t: f64) -> f64 {
    let mut sum = 0.0;
    for (j, (&xj, &vj)) in nodes.iter().zip(values).enumerate() {
        let mut l = 1.0;
        for (k, &xk) in nodes.iter().enumerate() {
            if k != j {
                l *= (t - xk) / (xj - xk);
            }
        }
        sum += vj * l;
    }
    sum
}

/// Star-shaped polygon with `n` vertices at sorted random angles and radii in `[0.4, 1]`,
/// stretched by `aspect` along a random direction, then scaled and shifted.
pub fn random_polygon(rng: &mut impl Rng, n: usize, aspect: f64) -> Vec<Point2> {
    let mut angles: Vec<f64> = loop {
        let mut a: Vec<f64> = (0..n)
            .map(|_| rng.random::<f64>() * std::f64::consts::TAU)
            .collect();
        a.sort_by(f64::total_cmp);
        let gaps_ok = (0..n).all(|i| {
            let next = if i + 1 < n {
                a[i + 1]
            } else {
                a[0] + std::f64::consts::TAU
            };
            next - a[i] > 0.15 && next - a[i] < std::f64::consts::PI * 0.9
        });
        if gaps_ok {
            break a;
        }
    };
    angles.dedup();
    let rot: f64 = rng.random::<f64>() * std::f64::consts::PI;
    let scale: f64 = 10f64.powf(rng.random_range(-2.0..1.0));
    let shift = Point2::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
    angles
        .iter()
        .map(|&a| {
            let r: f64 = rng.random_range(0.4..1.0);
            let (x, y) = (r * a.cos() * aspect, r * a.sin());
            let (c, s) = (rot.cos(), rot.sin());
            shift + Point2::new(c * x - s * y, s * x + c * y) * scale
        })
        .collect()
}
