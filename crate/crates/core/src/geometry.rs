//! Plane geometry shared by the analysis modules: points, 2×2 matrices,
//! convex hulls, Hausdorff distances and segment intersection.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A point or displacement in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_int(v: IVec2) -> Self {
        Self::new(v[0] as f64, v[1] as f64)
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3d cross product.
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn dist(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn scale(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }

    pub fn normalized(self) -> Vec2 {
        let n = self.norm();
        Vec2::new(self.x / n, self.y / n)
    }

    pub fn lerp(self, o: Vec2, t: f64) -> Vec2 {
        self + (o - self).scale(t)
    }

    /// Counterclockwise perpendicular.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    /// Representative in the fundamental domain `[0,1)²`.
    pub fn torus_reduce(self) -> Vec2 {
        Vec2::new(self.x.rem_euclid(1.0), self.y.rem_euclid(1.0))
    }

    /// Distance between the torus projections of two points.
    pub fn torus_dist(self, o: Vec2) -> f64 {
        let wrap = |d: f64| {
            let r = d.rem_euclid(1.0);
            r.min(1.0 - r)
        };
        wrap(self.x - o.x).hypot(wrap(self.y - o.y))
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        self.scale(s)
    }
}

/// Integer vector (deck translations, rotation numerators).
pub type IVec2 = [i64; 2];

/// Real 2×2 matrix stored row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2 {
    pub m: [[f64; 2]; 2],
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        m: [[1.0, 0.0], [0.0, 1.0]],
    };

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { m: [[a, b], [c, d]] }
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn apply(&self, v: Vec2) -> Vec2 {
        Vec2::new(
            self.m[0][0] * v.x + self.m[0][1] * v.y,
            self.m[1][0] * v.x + self.m[1][1] * v.y,
        )
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let a = &self.m;
        let b = &o.m;
        Mat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }

    pub fn sub(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            self.m[0][0] - o.m[0][0],
            self.m[0][1] - o.m[0][1],
            self.m[1][0] - o.m[1][0],
            self.m[1][1] - o.m[1][1],
        )
    }

    /// Inverse, or `None` when `|det| <= tiny`.
    pub fn inverse(&self, tiny: f64) -> Option<Mat2> {
        let d = self.det();
        if d.abs() <= tiny || !d.is_finite() {
            return None;
        }
        Some(Mat2::new(
            self.m[1][1] / d,
            -self.m[0][1] / d,
            -self.m[1][0] / d,
            self.m[0][0] / d,
        ))
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }
}

/// Axis-aligned box `[x_min, x_max] × [y_min, y_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rect {
    pub const fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        Self {
            x_min,
            x_max,
            y_min,
            y_max,
        }
    }

    pub fn square(half: f64) -> Self {
        Self::new(-half, half, -half, half)
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    /// Same center, sides scaled by `s`.
    pub fn scaled(&self, s: f64) -> Rect {
        let cx = 0.5 * (self.x_min + self.x_max);
        let cy = 0.5 * (self.y_min + self.y_max);
        let hw = 0.5 * self.width() * s;
        let hh = 0.5 * self.height() * s;
        Rect::new(cx - hw, cx + hw, cy - hh, cy + hh)
    }

    pub fn bounding(points: &[Vec2]) -> Option<Rect> {
        let first = points.first()?;
        let mut r = Rect::new(first.x, first.x, first.y, first.y);
        for p in points {
            r.x_min = r.x_min.min(p.x);
            r.x_max = r.x_max.max(p.x);
            r.y_min = r.y_min.min(p.y);
            r.y_max = r.y_max.max(p.y);
        }
        Some(r)
    }
}

fn lex_cmp(a: &Vec2, b: &Vec2) -> std::cmp::Ordering {
    a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y))
}

/// Convex hull by Andrew's monotone chain.
///
/// Output is counterclockwise starting at the lexicographically smallest
/// point. Collinear and duplicate points are dropped, so degenerate inputs
/// give a single point or a two-point segment.
pub fn convex_hull(points: &[Vec2]) -> Vec<Vec2> {
    let mut pts: Vec<Vec2> = points.to_vec();
    pts.sort_by(lex_cmp);
    pts.dedup_by(|a, b| a.x == b.x && a.y == b.y);
    if pts.len() <= 2 {
        return pts;
    }
    let turn = |o: Vec2, a: Vec2, b: Vec2| (a - o).cross(b - o);
    let mut hull: Vec<Vec2> = Vec::with_capacity(pts.len() + 1);
    for &p in &pts {
        while hull.len() >= 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len
            && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    if hull.len() == 2 && hull[0] == hull[1] {
        hull.truncate(1);
    }
    hull
}

/// Distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_dist(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sq();
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

/// Whether `p` lies in the closed convex polygon `hull` (CCW, as produced by
/// [`convex_hull`]). Degenerate hulls are handled with tolerance `tol`.
pub fn hull_contains(hull: &[Vec2], p: Vec2, tol: f64) -> bool {
    match hull.len() {
        0 => false,
        1 => p.dist(hull[0]) <= tol,
        2 => point_segment_dist(p, hull[0], hull[1]) <= tol,
        n => (0..n).all(|i| {
            let a = hull[i];
            let b = hull[(i + 1) % n];
            let e = b - a;
            e.cross(p - a) >= -tol * e.norm()
        }),
    }
}

/// Distance from `p` to the boundary of the polygon.
pub fn dist_to_boundary(hull: &[Vec2], p: Vec2) -> f64 {
    match hull.len() {
        0 => f64::INFINITY,
        1 => p.dist(hull[0]),
        n => (0..n)
            .map(|i| point_segment_dist(p, hull[i], hull[(i + 1) % n]))
            .fold(f64::INFINITY, f64::min),
    }
}

/// Distance from `p` to the filled convex polygon (zero inside).
pub fn dist_to_hull(hull: &[Vec2], p: Vec2) -> f64 {
    if hull.len() >= 3 && hull_contains(hull, p, 0.0) {
        0.0
    } else {
        dist_to_boundary(hull, p)
    }
}

/// Signed distance to the hull boundary: positive strictly inside a
/// two-dimensional hull, negative outside. Degenerate hulls have empty
/// interior, so the margin is never positive for them.
pub fn interior_margin(hull: &[Vec2], p: Vec2) -> f64 {
    let d = dist_to_boundary(hull, p);
    if hull.len() >= 3 && hull_contains(hull, p, 0.0) {
        d
    } else {
        -d
    }
}

/// Hausdorff distance between two filled convex polygons.
///
/// The distance to a convex set is a convex function, so its maximum over
/// the other polygon is attained at a vertex.
pub fn hausdorff_convex(a: &[Vec2], b: &[Vec2]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return if a.is_empty() && b.is_empty() {
            0.0
        } else {
            f64::INFINITY
        };
    }
    let one_sided = |from: &[Vec2], to: &[Vec2]| {
        from.iter()
            .map(|&v| dist_to_hull(to, v))
            .fold(0.0_f64, f64::max)
    };
    one_sided(a, b).max(one_sided(b, a))
}

/// Sign of the orientation of the triple, exact zero when collinear.
fn orient(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    (b - a).cross(c - a)
}

/// Intersection of closed segments `[p0,p1]` and `[q0,q1]`.
///
/// Returns the parameters `(s, t)` along each segment of one common point.
/// Collinear overlaps report the overlap point closest to `q0`.
pub fn segment_intersection(p0: Vec2, p1: Vec2, q0: Vec2, q1: Vec2) -> Option<(f64, f64)> {
    let d1 = orient(q0, q1, p0);
    let d2 = orient(q0, q1, p1);
    let d3 = orient(p0, p1, q0);
    let d4 = orient(p0, p1, q1);
    if (d1 > 0.0 && d2 > 0.0) || (d1 < 0.0 && d2 < 0.0) {
        return None;
    }
    if (d3 > 0.0 && d4 > 0.0) || (d3 < 0.0 && d4 < 0.0) {
        return None;
    }
    let r = p1 - p0;
    let s = q1 - q0;
    let denom = r.cross(s);
    if denom != 0.0 {
        let qp = q0 - p0;
        let sp = (qp.cross(s) / denom).clamp(0.0, 1.0);
        let tq = (qp.cross(r) / denom).clamp(0.0, 1.0);
        return Some((sp, tq));
    }
    // Parallel: only collinear overlaps remain.
    if d1 != 0.0 || d3 != 0.0 {
        return None;
    }
    let proj = |v: Vec2, o: Vec2, dir: Vec2| {
        let l2 = dir.norm_sq();
        if l2 == 0.0 {
            0.0
        } else {
            (v - o).dot(dir) / l2
        }
    };
    if r.norm_sq() == 0.0 && s.norm_sq() == 0.0 {
        return (p0 == q0).then_some((0.0, 0.0));
    }
    // Walk q from q0 and take the first parameter inside p's span.
    let candidates = [0.0, 1.0, proj(p0, q0, s), proj(p1, q0, s)];
    let mut best: Option<(f64, f64)> = None;
    for t in candidates {
        if !(0.0..=1.0).contains(&t) {
            continue;
        }
        let pt = q0 + s * t;
        let sp = if r.norm_sq() == 0.0 { 0.0 } else { proj(pt, p0, r) };
        if (-1e-12..=1.0 + 1e-12).contains(&sp) && best.is_none_or(|(_, bt)| t < bt) {
            best = Some((sp.clamp(0.0, 1.0), t));
        }
    }
    best
}
