//! Planar points and the polygon utilities used by meshes and elements.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// A point (or displacement) in the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Self) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Self) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, other: Self, s: f64) -> Self {
        self + (other - self) * s
    }
}

impl Add for Point2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Point2 {
    fn add_assign(&mut self, rhs: Self) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Point2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Point2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self::new(self.x * rhs, self.y * rhs)
    }
}

/// Signed area of a closed polygon (positive for counterclockwise loops).
pub fn signed_area(poly: &[Point2]) -> f64 {
    let n = poly.len();
    let mut twice = 0.0;
    for i in 0..n {
        twice += poly[i].cross(poly[(i + 1) % n]);
    }
    0.5 * twice
}

/// Area centroid of a polygon with nonzero area.
pub fn centroid(poly: &[Point2]) -> Point2 {
    let n = poly.len();
    let a = signed_area(poly);
    let (mut cx, mut cy) = (0.0, 0.0);
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        let w = p.cross(q);
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    Point2::new(cx / (6.0 * a), cy / (6.0 * a))
}

/// Maximum pairwise vertex distance.
pub fn diameter(poly: &[Point2]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, p) in poly.iter().enumerate() {
        for q in &poly[i + 1..] {
            d = d.max(p.dist(*q));
        }
    }
    d
}

pub fn perimeter(poly: &[Point2]) -> f64 {
    let n = poly.len();
    (0..n).map(|i| poly[i].dist(poly[(i + 1) % n])).sum()
}

/// Distance from `p` to the closed segment `[a, b]` and the segment parameter of the foot point.
pub fn segment_distance(p: Point2, a: Point2, b: Point2) -> (f64, f64) {
    let d = b - a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return (p.dist(a), 0.0);
    }
    let s = ((p - a).dot(d) / len2).clamp(0.0, 1.0);
    (p.dist(a + d * s), s)
}

fn segments_cross(a: Point2, b: Point2, c: Point2, d: Point2, tol: f64, len_tol: f64) -> bool {
    let orient = |p: Point2, q: Point2, r: Point2| (q - p).cross(r - p);
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > tol && d2 < -tol) || (d1 < -tol && d2 > tol))
        && ((d3 > tol && d4 < -tol) || (d3 < -tol && d4 > tol))
    {
        return true;
    }
    // touching configurations count as intersections for nonadjacent edges
    let on = |p: Point2, q: Point2, r: Point2| segment_distance(r, p, q).0 <= len_tol;
    on(c, d, a) || on(c, d, b) || on(a, b, c) || on(a, b, d)
}

/// True when no two nonadjacent edges of the loop intersect and no two adjacent edges fold back.
pub fn is_simple(poly: &[Point2]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    let scale = diameter(poly);
    let tol = 1e-14 * scale * scale;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        // adjacent edge folding back onto this one
        let c = poly[(i + 2) % n];
        if (b - a).cross(c - b).abs() <= tol && (b - a).dot(c - b) < 0.0 {
            return false;
        }
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_cross(a, b, poly[j], poly[(j + 1) % n], tol, 1e-12 * scale) {
                return false;
            }
        }
    }
    true
}

/// Clips a convex polygon against the half-plane to the left of the directed line `a -> b`.
pub(crate) fn clip_left(poly: &[Point2], a: Point2, b: Point2) -> Vec<Point2> {
    let dir = b - a;
    let side = |p: Point2| dir.cross(p - a);
    let mut out = Vec::with_capacity(poly.len() + 1);
    let n = poly.len();
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        let (sp, sq) = (side(p), side(q));
        if sp >= 0.0 {
            out.push(p);
        }
        if (sp >= 0.0) != (sq >= 0.0) {
            let s = sp / (sp - sq);
            out.push(p.lerp(q, s));
        }
    }
    out
}

/// Kernel of a counterclockwise polygon: the set of points from which the whole polygon is visible.
///
/// Computed as the intersection of the inner half-planes of all edges. Returns an empty
/// vector when the kernel is empty or degenerate.
pub fn kernel(poly: &[Point2]) -> Vec<Point2> {
    let (mut lo, mut hi) = (poly[0], poly[0]);
    for p in poly {
        lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let mut k = vec![lo, Point2::new(hi.x, lo.y), hi, Point2::new(lo.x, hi.y)];
    let n = poly.len();
    for i in 0..n {
        k = clip_left(&k, poly[i], poly[(i + 1) % n]);
        if k.len() < 3 {
            return Vec::new();
        }
    }
    let scale = diameter(poly);
    if signed_area(&k) <= 1e-14 * scale * scale {
        return Vec::new();
    }
    k
}

/// Radius and center of the largest disc contained in a convex counterclockwise polygon.
pub fn largest_inscribed_disc(convex: &[Point2]) -> (f64, Point2) {
    let n = convex.len();
    if n < 3 {
        return (0.0, convex.first().copied().unwrap_or_default());
    }
    // half-plane constraints nrm·c + r <= off with outward unit normals
    let mut planes = Vec::with_capacity(n);
    for i in 0..n {
        let (a, b) = (convex[i], convex[(i + 1) % n]);
        let t = b - a;
        let len = t.norm();
        if len <= 0.0 {
            continue;
        }
        let nrm = Point2::new(t.y / len, -t.x / len);
        planes.push((nrm, nrm.dot(a)));
    }
    let scale = diameter(convex);
    let feasible = |c: Point2, r: f64| {
        planes
            .iter()
            .all(|(m, off)| m.dot(c) + r <= off + 1e-12 * scale)
    };
    let mut best = (0.0, centroid(convex));
    let m = planes.len();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let rows = [planes[i], planes[j], planes[k]];
                let mat = nalgebra::Matrix3::new(
                    rows[0].0.x,
                    rows[0].0.y,
                    1.0,
                    rows[1].0.x,
                    rows[1].0.y,
                    1.0,
                    rows[2].0.x,
                    rows[2].0.y,
                    1.0,
                );
                let rhs = nalgebra::Vector3::new(rows[0].1, rows[1].1, rows[2].1);
                if let Some(sol) = mat.lu().solve(&rhs) {
                    let (c, r) = (Point2::new(sol[0], sol[1]), sol[2]);
                    if r.is_finite() && r > best.0 && feasible(c, r) {
                        best = (r, c);
                    }
                }
            }
        }
    }
    best
}

/// Smallest interior angle at a convex vertex and largest interior angle over all vertices.
pub fn interior_angle_extremes(poly: &[Point2]) -> (f64, f64) {
    let n = poly.len();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0_f64);
    for i in 0..n {
        let prev = poly[(i + n - 1) % n];
        let cur = poly[i];
        let next = poly[(i + 1) % n];
        let u = prev - cur;
        let v = next - cur;
        // counterclockwise loop: interior angle measured from v to u
        let mut ang = v.cross(u).atan2(v.dot(u));
        if ang < 0.0 {
            ang += 2.0 * std::f64::consts::PI;
        }
        lo = lo.min(ang);
        hi = hi.max(ang);
    }
    (lo, hi)
}
