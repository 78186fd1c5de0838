//! Planar primitives and construction of disk-polygons and Reuleaux polygons.
//!
//! A disk-polygon is the intersection of finitely many unit disks; its
//! boundary is a cyclic sequence of unit-circle arcs meeting at vertices in
//! counter-clockwise order. A Reuleaux polygon is a disk-polygon of constant
//! unit width: the vertex count n = 2k+1 is odd, every vertex sits at
//! distance one from both endpoints of its opposite arc, all pairwise vertex
//! distances are at most one, and the arc lengths θ_i sum to π with each
//! θ_i in [0, π/3].

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Unit circles whose centers are closer than this, or within this of
/// separation 2, are treated as tangent/degenerate.
pub const SEPARATION_EPS: f64 = 1e-9;

/// A point (or vector) in the Euclidean plane. Coordinates are always finite;
/// constructors reject NaN and infinities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point2 {
    x: f64,
    y: f64,
}

impl Point2 {
    pub const ZERO: Point2 = Point2 { x: 0.0, y: 0.0 };

    /// Panics on non-finite input.
    pub fn new(x: f64, y: f64) -> Self {
        assert!(
            x.is_finite() && y.is_finite(),
            "non-finite coordinates ({x}, {y})"
        );
        Point2 { x, y }
    }

    pub fn try_new(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() {
            Ok(Point2 { x, y })
        } else {
            Err(Error::NonFinite)
        }
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.y
    }

    #[inline]
    pub fn dot(&self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product; positive when `other` is
    /// counter-clockwise from `self`.
    #[inline]
    pub fn cross(&self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm_sq(&self) -> f64 {
        self.dot(*self)
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    #[inline]
    pub fn dist(&self, other: Point2) -> f64 {
        (*self - other).norm()
    }

    /// Rotation by +90 degrees.
    #[inline]
    pub fn perp(&self) -> Point2 {
        Point2 { x: -self.y, y: self.x }
    }

    /// `self / |self|`. Panics on (near-)zero vectors.
    pub fn unit(&self) -> Point2 {
        let n = self.norm();
        assert!(n > 1e-300, "cannot normalize zero vector");
        *self / n
    }

    pub fn rotate(&self, angle: f64) -> Point2 {
        let (s, c) = angle.sin_cos();
        Point2 {
            x: c * self.x - s * self.y,
            y: s * self.x + c * self.y,
        }
    }

    pub fn midpoint(a: Point2, b: Point2) -> Point2 {
        Point2 {
            x: 0.5 * (a.x + b.x),
            y: 0.5 * (a.y + b.y),
        }
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2 { x: self.x + rhs.x, y: self.y + rhs.y }
    }
}

impl AddAssign for Point2 {
    fn add_assign(&mut self, rhs: Point2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2 { x: self.x - rhs.x, y: self.y - rhs.y }
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2 { x: -self.x, y: -self.y }
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Point2 {
        Point2 { x: self.x * rhs, y: self.y * rhs }
    }
}

impl Div<f64> for Point2 {
    type Output = Point2;
    fn div(self, rhs: f64) -> Point2 {
        Point2 { x: self.x / rhs, y: self.y / rhs }
    }
}

/// One velocity vector per vertex (or per disk center).
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationField {
    velocities: Vec<Point2>,
}

impl PerturbationField {
    pub fn new(velocities: Vec<Point2>) -> Self {
        PerturbationField { velocities }
    }

    pub fn zeros(n: usize) -> Self {
        PerturbationField { velocities: vec![Point2::ZERO; n] }
    }

    pub fn len(&self) -> usize {
        self.velocities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.velocities.is_empty()
    }

    pub fn get(&self, i: usize) -> Point2 {
        self.velocities[i]
    }

    pub fn set(&mut self, i: usize, v: Point2) {
        self.velocities[i] = v;
    }

    pub fn as_slice(&self) -> &[Point2] {
        &self.velocities
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point2> {
        self.velocities.iter()
    }

    /// Flat `[x0, y0, x1, y1, ...]` layout, the ordering used by Hessians.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(2 * self.velocities.len());
        for v in &self.velocities {
            out.push(v.x());
            out.push(v.y());
        }
        out
    }
}

impl From<Vec<Point2>> for PerturbationField {
    fn from(velocities: Vec<Point2>) -> Self {
        PerturbationField { velocities }
    }
}

/// Construction and validation tolerances. `geom` bounds construction
/// residuals (radii, arc-length sums), `cw` bounds constant-width residuals,
/// `merge` is the vertex separation below which points are collapsed.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    pub geom: f64,
    pub cw: f64,
    pub merge: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { geom: 1e-9, cw: 1e-8, merge: 1e-7 }
    }
}

/// Which intersection point of two unit circles to take, relative to the
/// directed segment from the first center to the second.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Both intersection points of the unit circles centered at `c1` and `c2`,
/// returned as (left, right) of the directed segment c1 -> c2.
pub fn circle_circle_intersection_pair(c1: Point2, c2: Point2) -> Result<(Point2, Point2)> {
    let d = c1.dist(c2);
    if !(d > SEPARATION_EPS && d < 2.0 - SEPARATION_EPS) {
        return Err(Error::DegenerateCircles { separation: d });
    }
    let mid = Point2::midpoint(c1, c2);
    let u = (c2 - c1) / d;
    let h = (1.0 - 0.25 * d * d).sqrt();
    let offset = u.perp() * h;
    Ok((mid + offset, mid - offset))
}

/// Intersection point of the unit circles centered at `c1` and `c2` on the
/// requested side of the directed segment c1 -> c2.
pub fn circle_circle_intersection(c1: Point2, c2: Point2, pick: Side) -> Result<Point2> {
    let (left, right) = circle_circle_intersection_pair(c1, c2)?;
    Ok(match pick {
        Side::Left => left,
        Side::Right => right,
    })
}

/// Intersection root closest to `previous`, together with the jump distance.
/// Used for continuity tracking: the caller treats a large jump as a branch
/// flip.
pub fn circle_circle_intersection_nearest(
    c1: Point2,
    c2: Point2,
    previous: Point2,
) -> Result<(Point2, f64)> {
    let (a, b) = circle_circle_intersection_pair(c1, c2)?;
    let da = a.dist(previous);
    let db = b.dist(previous);
    if da <= db {
        Ok((a, da))
    } else {
        Ok((b, db))
    }
}

/// Indices of the endpoints of the arc opposite vertex `i` in an n-gon,
/// n = 2k+1: returns (i+k, i+k+1) modulo n.
pub fn opposite_indices(i: usize, n: usize) -> (usize, usize) {
    debug_assert!(n >= 3 && n % 2 == 1, "n must be odd >= 3");
    debug_assert!(i < n);
    let k = (n - 1) / 2;
    ((i + k) % n, (i + k + 1) % n)
}

/// Twice the signed area of the polygon with the given vertices; positive
/// for counter-clockwise order.
pub fn signed_polygon_area(vertices: &[Point2]) -> f64 {
    let n = vertices.len();
    let mut s = 0.0;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        s += a.cross(b);
    }
    0.5 * s
}

/// A single violated constant-width condition.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    /// n is even.
    EvenVertexCount { n: usize },
    /// n < 3.
    TooFewVertices { n: usize },
    /// | |x_i - x_{i+k}| - 1 | exceeds the tolerance.
    DiameterEquality { i: usize, residual: f64 },
    /// |x_i - x_j| > 1 for a non-diameter pair.
    PairwiseBound { i: usize, j: usize, residual: f64 },
    /// Sum of arc lengths deviates from pi.
    ThetaSum { residual: f64 },
    /// theta_i outside [0, pi/3].
    ThetaRange { i: usize, theta: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EvenVertexCount { n } => write!(f, "even vertex count n = {n}"),
            Violation::TooFewVertices { n } => write!(f, "too few vertices n = {n}"),
            Violation::DiameterEquality { i, residual } => {
                write!(f, "diameter equality {i}: residual {residual:.3e}")
            }
            Violation::PairwiseBound { i, j, residual } => {
                write!(f, "pairwise bound ({i},{j}): excess {residual:.3e}")
            }
            Violation::ThetaSum { residual } => {
                write!(f, "arc lengths sum: residual {residual:.3e}")
            }
            Violation::ThetaRange { i, theta } => {
                write!(f, "arc length {i} = {theta:.6} outside [0, pi/3]")
            }
        }
    }
}

/// Result of checking a vertex set against the constant-width constraint
/// set. Violations are data, not errors.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub n: usize,
    pub pass: bool,
    pub max_abs_residual: f64,
    pub violations: Vec<Violation>,
    /// Arc lengths theta_i (opposite-vertex labelling); empty when the
    /// parity check fails.
    pub thetas: Vec<f64>,
    /// Vertices dropped by the near-duplicate merge pass, and the separation
    /// below which points were collapsed. The merge quantum is a choice of
    /// this implementation, hence surfaced in every report.
    pub merged_vertices: usize,
    pub merge_tolerance: f64,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "constant-width validation: n = {}, {} (max residual {:.3e}, merged {} vertices at separation < {:.1e})",
            self.n,
            if self.pass { "PASS" } else { "FAIL" },
            self.max_abs_residual,
            self.merged_vertices,
            self.merge_tolerance,
        )?;
        for v in &self.violations {
            writeln!(f, "  - {v}")?;
        }
        Ok(())
    }
}

/// Arc length opposite vertex `i`: the angle at x_i between the rays to its
/// two diameter partners x_{i+k} and x_{i+k+1}.
fn theta_at(vertices: &[Point2], i: usize) -> f64 {
    let n = vertices.len();
    let (a, b) = opposite_indices(i, n);
    let wa = vertices[a] - vertices[i];
    let wb = vertices[b] - vertices[i];
    wa.cross(wb).atan2(wa.dot(wb))
}

/// Check a vertex sequence (assumed counter-clockwise) against the
/// constant-width constraint set.
pub fn validate_vertex_set(vertices: &[Point2], tol: &Tolerances) -> ValidationReport {
    let n = vertices.len();
    let mut violations = Vec::new();
    let mut max_res: f64 = 0.0;

    if n < 3 {
        violations.push(Violation::TooFewVertices { n });
    }
    if n % 2 == 0 {
        violations.push(Violation::EvenVertexCount { n });
    }

    let mut thetas = Vec::new();
    if n >= 3 && n % 2 == 1 {
        let k = (n - 1) / 2;
        for i in 0..n {
            let res = vertices[i].dist(vertices[(i + k) % n]) - 1.0;
            max_res = max_res.max(res.abs());
            if res.abs() > tol.cw {
                violations.push(Violation::DiameterEquality { i, residual: res });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                // diameter pairs are covered by the equality checks
                if (j + n - i) % n == k || (i + n - j) % n == k {
                    continue;
                }
                let excess = vertices[i].dist(vertices[j]) - 1.0;
                if excess > tol.cw {
                    max_res = max_res.max(excess);
                    violations.push(Violation::PairwiseBound { i, j, residual: excess });
                }
            }
        }
        thetas = (0..n).map(|i| theta_at(vertices, i)).collect();
        let sum: f64 = thetas.iter().sum();
        let sum_res = sum - std::f64::consts::PI;
        max_res = max_res.max(sum_res.abs());
        if sum_res.abs() > tol.geom {
            violations.push(Violation::ThetaSum { residual: sum_res });
        }
        for (i, &t) in thetas.iter().enumerate() {
            if !(t > 0.0 && t <= std::f64::consts::FRAC_PI_3 + tol.geom) {
                violations.push(Violation::ThetaRange { i, theta: t });
            }
        }
    }

    ValidationReport {
        n,
        pass: violations.is_empty(),
        max_abs_residual: max_res,
        violations,
        thetas,
        merged_vertices: 0,
        merge_tolerance: tol.merge,
    }
}

/// Intersection of unit disks, stored as counter-clockwise vertices plus the
/// center and angular length of each boundary arc. `arc_centers[i]` is the
/// unit-circle center of the arc from `vertices[i]` to `vertices[i+1]`.
#[derive(Clone, Debug)]
pub struct DiskPolygon {
    vertices: Vec<Point2>,
    arc_centers: Vec<Point2>,
    arc_lengths: Vec<f64>,
}

impl DiskPolygon {
    /// Build from vertices alone. Clockwise input is reversed, arc centers
    /// are recovered as the interior-side intersection of consecutive vertex
    /// circles.
    pub fn from_vertices(vertices: &[Point2]) -> Result<Self> {
        Self::from_vertices_with(vertices, &Tolerances::default())
    }

    pub fn from_vertices_with(vertices: &[Point2], tol: &Tolerances) -> Result<Self> {
        let v = canonicalize_ccw(vertices)?;
        let n = v.len();
        let mut centers = Vec::with_capacity(n);
        for i in 0..n {
            // interior lies to the left of each directed edge
            centers.push(circle_circle_intersection(v[i], v[(i + 1) % n], Side::Left)?);
        }
        Self::from_parts(v, centers, tol)
    }

    /// Build from vertices plus arc centers, validating that every vertex is
    /// at unit distance from its two adjacent centers and that every arc is
    /// strictly shorter than a half circle.
    pub fn from_parts(
        vertices: Vec<Point2>,
        arc_centers: Vec<Point2>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidN { n, reason: "a disk-polygon needs at least 3 vertices" });
        }
        if arc_centers.len() != n {
            return Err(Error::InvalidPolygon {
                reason: format!("{} arc centers for {} vertices", arc_centers.len(), n),
            });
        }
        let mut arc_lengths = Vec::with_capacity(n);
        for i in 0..n {
            let c = arc_centers[i];
            let wa = vertices[i] - c;
            let wb = vertices[(i + 1) % n] - c;
            let ra = wa.norm() - 1.0;
            let rb = wb.norm() - 1.0;
            if ra.abs() > tol.geom || rb.abs() > tol.geom {
                return Err(Error::InvalidPolygon {
                    reason: format!(
                        "vertex not at unit distance from arc center {i} (residuals {ra:.2e}, {rb:.2e})"
                    ),
                });
            }
            let theta = wa.cross(wb).atan2(wa.dot(wb));
            if !(theta > 0.0 && theta < std::f64::consts::PI) {
                return Err(Error::InvalidPolygon {
                    reason: format!("arc {i} has length {theta:.6}, not in (0, pi)"),
                });
            }
            arc_lengths.push(theta);
        }
        Ok(DiskPolygon { vertices, arc_centers, arc_lengths })
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Point2 {
        self.vertices[i]
    }

    pub fn arc_centers(&self) -> &[Point2] {
        &self.arc_centers
    }

    pub fn arc_center(&self, i: usize) -> Point2 {
        self.arc_centers[i]
    }

    pub fn arc_lengths(&self) -> &[f64] {
        &self.arc_lengths
    }

    pub fn arc_length(&self, i: usize) -> f64 {
        self.arc_lengths[i]
    }
}

/// A disk-polygon satisfying the constant-width constraint set. Vertices are
/// counter-clockwise and double as the disk centers; `theta[i]` is the length
/// of the arc opposite vertex `i`.
#[derive(Clone, Debug)]
pub struct ReuleauxPolygon {
    vertices: Vec<Point2>,
    theta: Vec<f64>,
    k: usize,
}

impl ReuleauxPolygon {
    pub fn from_vertices(vertices: &[Point2]) -> Result<Self> {
        Self::from_vertices_with(vertices, &Tolerances::default())
    }

    /// Canonicalizes orientation, collapses vertices closer than
    /// `tol.merge`, then validates the constant-width constraints.
    pub fn from_vertices_with(vertices: &[Point2], tol: &Tolerances) -> Result<Self> {
        let v = canonicalize_ccw(vertices)?;
        let (v, merged) = merge_close_vertices(v, tol.merge);
        let n = v.len();
        if n < 3 {
            return Err(Error::InvalidN { n, reason: "fewer than 3 distinct vertices" });
        }
        if n % 2 == 0 {
            return Err(Error::InvalidN { n, reason: "a Reuleaux polygon has an odd vertex count" });
        }
        let mut report = validate_vertex_set(&v, tol);
        report.merged_vertices = merged;
        if !report.pass {
            return Err(Error::NotConstantWidth(Box::new(report)));
        }
        let theta = report.thetas;
        Ok(ReuleauxPolygon { vertices: v, k: (n - 1) / 2, theta })
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Point2 {
        self.vertices[i]
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn theta_at(&self, i: usize) -> f64 {
        self.theta[i]
    }

    pub fn theta_min(&self) -> f64 {
        self.theta.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn theta_max(&self) -> f64 {
        self.theta.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Endpoint indices (i+k, i+k+1) of the arc opposite vertex `i`.
    pub fn opposite(&self, i: usize) -> (usize, usize) {
        opposite_indices(i, self.n())
    }

    /// Re-run the constant-width checks on the stored vertices.
    pub fn validate(&self, tol: &Tolerances) -> ValidationReport {
        validate_vertex_set(&self.vertices, tol)
    }

    /// View as a plain disk-polygon. The arc from vertex i to i+1 is centered
    /// at the opposite vertex x_{i+k+1} and has length theta_{i+k+1}.
    pub fn as_disk_polygon(&self) -> DiskPolygon {
        let n = self.n();
        let centers: Vec<Point2> =
            (0..n).map(|i| self.vertices[(i + self.k + 1) % n]).collect();
        let arc_lengths: Vec<f64> = (0..n).map(|i| self.theta[(i + self.k + 1) % n]).collect();
        DiskPolygon { vertices: self.vertices.clone(), arc_centers: centers, arc_lengths }
    }
}

/// The regular Reuleaux n-gon: vertices of a regular n-gon sized so that the
/// k-step diagonals have length exactly one, giving all theta_i = pi/n.
pub fn build_regular_reuleaux(n: usize) -> Result<ReuleauxPolygon> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidN { n, reason: "regular Reuleaux polygons need odd n >= 3" });
    }
    let circumradius = 0.5 / (std::f64::consts::PI / (2.0 * n as f64)).cos();
    let vertices: Vec<Point2> = (0..n)
        .map(|i| {
            let angle = 2.0 * std::f64::consts::PI * i as f64 / n as f64 + std::f64::consts::FRAC_PI_2;
            Point2::new(circumradius * angle.cos(), circumradius * angle.sin())
        })
        .collect();
    ReuleauxPolygon::from_vertices(&vertices)
}

/// Report on the constant-width constraints of a disk-polygon's vertex set.
pub fn validate_constant_width(p: &DiskPolygon) -> ValidationReport {
    validate_vertex_set(p.vertices(), &Tolerances::default())
}

fn canonicalize_ccw(vertices: &[Point2]) -> Result<Vec<Point2>> {
    let n = vertices.len();
    if n < 3 {
        return Err(Error::InvalidN { n, reason: "need at least 3 vertices" });
    }
    let area = signed_polygon_area(vertices);
    if area.abs() < 1e-14 {
        return Err(Error::InvalidPolygon { reason: "vertices are (near-)collinear".into() });
    }
    let mut v = vertices.to_vec();
    if area < 0.0 {
        v.reverse();
    }
    Ok(v)
}

fn merge_close_vertices(vertices: Vec<Point2>, delta: f64) -> (Vec<Point2>, usize) {
    let n = vertices.len();
    let mut kept: Vec<Point2> = Vec::with_capacity(n);
    for p in vertices {
        if kept.last().is_some_and(|q| q.dist(p) < delta) {
            continue;
        }
        kept.push(p);
    }
    while kept.len() > 1 && kept[0].dist(*kept.last().unwrap()) < delta {
        kept.pop();
    }
    let merged = n - kept.len();
    (kept, merged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_3, PI};

    #[test]
    fn intersection_symmetric_case() {
        let c1 = Point2::new(0.0, 0.0);
        let c2 = Point2::new(1.0, 0.0);
        let left = circle_circle_intersection(c1, c2, Side::Left).unwrap();
        assert_abs_diff_eq!(left.x(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(left.y(), 3f64.sqrt() / 2.0, epsilon = 1e-15);
        let right = circle_circle_intersection(c1, c2, Side::Right).unwrap();
        assert_abs_diff_eq!(right.x(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(right.y(), -(3f64.sqrt()) / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn intersection_generic_residuals() {
        let c1 = Point2::new(0.0, 0.0);
        let c2 = Point2::new(0.3, 0.4);
        let p = circle_circle_intersection(c1, c2, Side::Left).unwrap();
        assert!((p.dist(c1) - 1.0).abs() < 1e-12);
        assert!((p.dist(c2) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn intersection_degenerate_cases() {
        let c = Point2::new(0.0, 0.0);
        assert!(matches!(
            circle_circle_intersection(c, Point2::new(2.0, 0.0), Side::Left),
            Err(Error::DegenerateCircles { .. })
        ));
        assert!(matches!(
            circle_circle_intersection(c, c, Side::Left),
            Err(Error::DegenerateCircles { .. })
        ));
    }

    #[test]
    fn regular_triangle() {
        let r = build_regular_reuleaux(3).unwrap();
        assert_eq!(r.n(), 3);
        for i in 0..3 {
            assert_abs_diff_eq!(r.theta_at(i), FRAC_PI_3, epsilon = 1e-12);
            assert_abs_diff_eq!(r.vertex(i).dist(r.vertex((i + 1) % 3)), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn regular_pentagon_constraints() {
        let r = build_regular_reuleaux(5).unwrap();
        for i in 0..5 {
            assert_abs_diff_eq!(r.theta_at(i), PI / 5.0, epsilon = 1e-12);
            assert_abs_diff_eq!(r.vertex(i).dist(r.vertex((i + 2) % 5)), 1.0, epsilon = 1e-12);
        }
        let sum: f64 = r.theta().iter().sum();
        assert_abs_diff_eq!(sum, PI, epsilon = 1e-12);
    }

    #[test]
    fn even_n_rejected() {
        assert!(matches!(build_regular_reuleaux(4), Err(Error::InvalidN { .. })));
        assert!(matches!(build_regular_reuleaux(1), Err(Error::InvalidN { .. })));
    }

    #[test]
    fn opposite_index_examples() {
        assert_eq!(opposite_indices(0, 7), (3, 4));
        assert_eq!(opposite_indices(6, 7), (2, 3));
        assert_eq!(opposite_indices(0, 3), (1, 2));
    }

    #[test]
    fn validation_passes_regular() {
        let r = build_regular_reuleaux(7).unwrap();
        let report = validate_constant_width(&r.as_disk_polygon());
        assert!(report.pass, "{report}");
        assert!(report.max_abs_residual < 1e-12);
    }

    #[test]
    fn validation_flags_displaced_vertex() {
        let r = build_regular_reuleaux(7).unwrap();
        let mut v = r.vertices().to_vec();
        v[2] = v[2] + Point2::new(0.01, 0.0);
        let report = validate_vertex_set(&v, &Tolerances::default());
        assert!(!report.pass);
        let diam: Vec<_> = report
            .violations
            .iter()
            .filter_map(|viol| match viol {
                Violation::DiameterEquality { i, .. } => Some(*i),
                _ => None,
            })
            .collect();
        // exactly the two equalities touching vertex 2: i = 2 and i = 2 - k mod 7 = 6
        assert_eq!(diam.len(), 2);
        assert!(diam.contains(&2) && diam.contains(&6));
        assert_eq!(report.violations.len(), 2, "{report}");
    }

    #[test]
    fn validation_flags_even_polygon() {
        let square = [
            Point2::new(0.0, 0.0),
            Point2::new(0.9, 0.0),
            Point2::new(0.9, 0.9),
            Point2::new(0.0, 0.9),
        ];
        let report = validate_vertex_set(&square, &Tolerances::default());
        assert!(!report.pass);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::EvenVertexCount { n: 4 })));
    }

    #[test]
    fn clockwise_input_is_reversed() {
        let r = build_regular_reuleaux(5).unwrap();
        let mut v = r.vertices().to_vec();
        v.reverse();
        let r2 = ReuleauxPolygon::from_vertices(&v).unwrap();
        assert!(signed_polygon_area(r2.vertices()) > 0.0);
    }

    #[test]
    fn lens_rejected() {
        let v = [Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)];
        assert!(DiskPolygon::from_vertices(&v).is_err());
    }

    #[test]
    fn duplicate_vertices_are_merged() {
        let r = build_regular_reuleaux(5).unwrap();
        let mut v = r.vertices().to_vec();
        let dup = v[1] + Point2::new(1e-9, 0.0);
        v.insert(2, dup);
        v.insert(2, dup);
        let r2 = ReuleauxPolygon::from_vertices(&v).unwrap();
        assert_eq!(r2.n(), 5);
    }

    #[test]
    fn disk_polygon_structure_matches_reuleaux_view() {
        let r = build_regular_reuleaux(9).unwrap();
        let dp = r.as_disk_polygon();
        let check = DiskPolygon::from_vertices(r.vertices()).unwrap();
        for i in 0..9 {
            assert!(dp.arc_center(i).dist(check.arc_center(i)) < 1e-10);
            assert_abs_diff_eq!(dp.arc_length(i), check.arc_length(i), epsilon = 1e-10);
        }
    }

    #[test]
    fn regular_is_rotation_invariant() {
        // index rotation i -> i+1 is a rigid motion of the same polygon
        let r = build_regular_reuleaux(7).unwrap();
        let rot = 2.0 * PI / 7.0;
        for i in 0..7 {
            let expect = r.vertex(i).rotate(rot);
            assert!(expect.dist(r.vertex((i + 1) % 7)) < 1e-12);
        }
    }
}
