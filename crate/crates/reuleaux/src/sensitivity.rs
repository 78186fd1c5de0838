//! First- and second-order sensitivity of the area under vertex
//! perturbations.
//!
//! For a disk-polygon, perturbing the vertices x_i by velocities v_i moves
//! each boundary arc like its circle center, whose velocity follows from
//! differentiating the two unit-radius constraints. The area derivative is
//! assembled arc by arc.
//!
//! For a Reuleaux polygon the constant-width constraints couple each vertex
//! to the endpoints of its opposite arc: moving x_i forces x_{i+k} and
//! x_{i+k+1} to slide along circles around the untouched neighbors. The
//! directional derivative along that constrained motion has a closed form in
//! the three arc lengths theta_i, theta_{i+k}, theta_{i+k+1}, and vanishing
//! of the induced gradient at every vertex forces all arcs equal, i.e. the
//! regular polygon.

use std::f64::consts::{FRAC_PI_3, PI};

use crate::error::{Error, Result};
use crate::geom::{
    circle_circle_intersection_nearest, DiskPolygon, PerturbationField, Point2, ReuleauxPolygon,
    Tolerances,
};

/// Arc lengths below this raise `SingularArc` rather than silently returning
/// zero contributions; a vanishing arc means vertices have merged.
pub const MIN_ARC: f64 = 1e-9;

/// A jump of the circle-intersection root beyond this distance is treated as
/// a branch flip during constrained propagation.
pub const BRANCH_FLIP_DIST: f64 = 0.5;

/// Local frame of one boundary arc: its unit-circle center, the unit radial
/// vectors to the two endpoints, the unit bisector of the sector, and the
/// arc length.
#[derive(Clone, Copy, Debug)]
pub struct ArcFrame {
    center: Point2,
    w_a: Point2,
    w_b: Point2,
    bisector: Point2,
    theta: f64,
}

impl ArcFrame {
    /// Frame for the arc from `x_a` to `x_b` (counter-clockwise) around
    /// `center`. Both endpoints must be at unit distance from the center.
    pub fn new(center: Point2, x_a: Point2, x_b: Point2) -> Result<Self> {
        let w_a = x_a - center;
        let w_b = x_b - center;
        if (w_a.norm() - 1.0).abs() > 1e-6 || (w_b.norm() - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidPolygon {
                reason: "arc endpoints not at unit distance from center".into(),
            });
        }
        let theta = w_a.cross(w_b).atan2(w_a.dot(w_b));
        if !(theta > MIN_ARC && theta < PI - MIN_ARC) {
            return Err(Error::SingularArc { theta });
        }
        // w_a + w_b bisects the sector; its norm 2cos(theta/2) never vanishes
        // for theta < pi
        let bisector = (w_a + w_b).unit();
        Ok(ArcFrame { center, w_a, w_b, bisector, theta })
    }

    pub fn from_disk_polygon(p: &DiskPolygon, i: usize) -> Result<Self> {
        let n = p.n();
        ArcFrame::new(p.arc_center(i), p.vertex(i), p.vertex((i + 1) % n))
    }

    pub fn center(&self) -> Point2 {
        self.center
    }

    /// Unit radial vector to the arc's first endpoint.
    pub fn w_a(&self) -> Point2 {
        self.w_a
    }

    /// Unit radial vector to the arc's second endpoint.
    pub fn w_b(&self) -> Point2 {
        self.w_b
    }

    pub fn bisector(&self) -> Point2 {
        self.bisector
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Integral of v . n over a unit-circle arc of length `theta` with unit
/// sector bisector `bisector`: equals 2 sin(theta/2) (v . b).
pub fn avg_normal_on_arc(theta: f64, v: Point2, bisector: Point2) -> Result<f64> {
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::OutOfRange { name: "theta", value: theta });
    }
    Ok(2.0 * (0.5 * theta).sin() * v.dot(bisector))
}

/// Velocity of the arc's circle center induced by endpoint velocities
/// (v_a, v_b): solves the 2x2 Gram system in the radial basis (w_a, w_b).
pub fn center_velocity(frame: &ArcFrame, v_a: Point2, v_b: Point2) -> Result<Point2> {
    let cos_t = frame.theta.cos();
    let det = 1.0 - cos_t * cos_t; // sin^2 theta
    if frame.theta.sin().abs() < 1e-12 {
        return Err(Error::SingularArc { theta: frame.theta });
    }
    let ra = v_a.dot(frame.w_a);
    let rb = v_b.dot(frame.w_b);
    let alpha_a = (ra - cos_t * rb) / det;
    let alpha_b = (rb - cos_t * ra) / det;
    Ok(frame.w_a * alpha_a + frame.w_b * alpha_b)
}

/// Contribution of one arc to the area derivative when its endpoints move
/// with velocities (v_a, v_b): tan(theta/2) [w_a . v_a + w_b . v_b].
pub fn arc_area_contribution(frame: &ArcFrame, v_a: Point2, v_b: Point2) -> Result<f64> {
    if frame.theta < MIN_ARC || frame.theta.sin().abs() < 1e-12 {
        return Err(Error::SingularArc { theta: frame.theta });
    }
    Ok((0.5 * frame.theta).tan() * (frame.w_a.dot(v_a) + frame.w_b.dot(v_b)))
}

/// Gradient of the total area of a disk-polygon with respect to each vertex:
/// the sum of the two adjacent-arc contributions,
/// grad_j = tan(theta_{j-1,j}/2) (x_j - c_{j-1,j}) + tan(theta_{j,j+1}/2) (x_j - c_{j,j+1}).
pub fn area_gradient_disk_polygon(p: &DiskPolygon) -> Result<PerturbationField> {
    let n = p.n();
    let mut grad = Vec::with_capacity(n);
    for j in 0..n {
        let prev = (j + n - 1) % n;
        for arc in [prev, j] {
            if p.arc_length(arc) < MIN_ARC {
                return Err(Error::SingularArc { theta: p.arc_length(arc) });
            }
        }
        let g = (p.vertex(j) - p.arc_center(prev)) * (0.5 * p.arc_length(prev)).tan()
            + (p.vertex(j) - p.arc_center(j)) * (0.5 * p.arc_length(j)).tan();
        grad.push(g);
    }
    Ok(PerturbationField::new(grad))
}

/// Unit bisector of the angle at vertex `i` between its two diameters,
/// pointing into the body: b = (x_{i+k} - x_i + x_{i+k+1} - x_i) / (2 cos(theta_i/2)).
pub fn vertex_bisector(r: &ReuleauxPolygon, i: usize) -> Point2 {
    let (a, b) = r.opposite(i);
    let sum = (r.vertex(a) - r.vertex(i)) + (r.vertex(b) - r.vertex(i));
    sum / (2.0 * (0.5 * r.theta_at(i)).cos())
}

/// Move vertex `i` to x_i + t v and recompute the two opposite vertices as
/// intersections of the shifted circle with the untouched neighbor circles,
/// keeping the intersection branch by continuity. All diameter equalities
/// hold exactly after the move; the inequality constraints and the arc
/// bounds theta in (0, pi/3) are checked a posteriori.
pub fn propagate_vertex_perturbation(
    r: &ReuleauxPolygon,
    i: usize,
    v: Point2,
    t: f64,
) -> Result<ReuleauxPolygon> {
    let n = r.n();
    if n == 3 {
        return Err(Error::TriangleImmovable);
    }
    if t == 0.0 {
        return Ok(r.clone());
    }
    let (a, b) = r.opposite(i);
    let prev = (i + n - 1) % n;
    let next = (i + 1) % n;

    let mut xs = r.vertices().to_vec();
    let xi_new = xs[i] + v * t;

    let (xa_new, jump_a) = circle_circle_intersection_nearest(xi_new, xs[prev], xs[a])
        .map_err(|_| Error::StepTooLarge)?;
    let (xb_new, jump_b) = circle_circle_intersection_nearest(xi_new, xs[next], xs[b])
        .map_err(|_| Error::StepTooLarge)?;
    if jump_a > BRANCH_FLIP_DIST || jump_b > BRANCH_FLIP_DIST {
        return Err(Error::StepTooLarge);
    }
    xs[i] = xi_new;
    xs[a] = xa_new;
    xs[b] = xb_new;

    let perturbed =
        ReuleauxPolygon::from_vertices_with(&xs, &Tolerances::default()).map_err(|e| match e {
            Error::NotConstantWidth(_) | Error::InvalidPolygon { .. } | Error::InvalidN { .. } => {
                Error::StepTooLarge
            }
            other => other,
        })?;
    if perturbed.n() != n {
        return Err(Error::StepTooLarge);
    }
    if perturbed.theta().iter().any(|&t| !(t > 0.0 && t < FRAC_PI_3)) {
        return Err(Error::StepTooLarge);
    }
    Ok(perturbed)
}

/// Directional derivative of the area along the constrained motion of
/// vertex `i` in direction `v`:
/// 2 sin(theta_i/2)(v . b) + tan(theta_{i+k}/2) v.(x_i - x_{i+k})
///                        + tan(theta_{i+k+1}/2) v.(x_i - x_{i+k+1}).
pub fn directional_derivative_reuleaux(r: &ReuleauxPolygon, i: usize, v: Point2) -> Result<f64> {
    if r.n() == 3 {
        return Err(Error::TriangleImmovable);
    }
    let (a, b) = r.opposite(i);
    let bis = vertex_bisector(r, i);
    let xi = r.vertex(i);
    Ok(2.0 * (0.5 * r.theta_at(i)).sin() * v.dot(bis)
        + (0.5 * r.theta_at(a)).tan() * v.dot(xi - r.vertex(a))
        + (0.5 * r.theta_at(b)).tan() * v.dot(xi - r.vertex(b)))
}

/// Gradient of the area with respect to the constrained motion of vertex `i`:
/// (tan(theta_{i+k}/2) - tan(theta_i/2)) (x_i - x_{i+k})
/// + (tan(theta_{i+k+1}/2) - tan(theta_i/2)) (x_i - x_{i+k+1}).
pub fn gradient_reuleaux(r: &ReuleauxPolygon, i: usize) -> Result<Point2> {
    if r.n() == 3 {
        return Err(Error::TriangleImmovable);
    }
    let (a, b) = r.opposite(i);
    let ti = (0.5 * r.theta_at(i)).tan();
    let xi = r.vertex(i);
    Ok((xi - r.vertex(a)) * ((0.5 * r.theta_at(a)).tan() - ti)
        + (xi - r.vertex(b)) * ((0.5 * r.theta_at(b)).tan() - ti))
}

/// Unit tangent at vertex `i` along the arc from x_{i-1} to x_i (centered at
/// x_{i+k}), oriented so that moving along it lengthens that arc.
pub fn blaschke_direction(r: &ReuleauxPolygon, i: usize) -> Point2 {
    let (a, _) = r.opposite(i);
    (r.vertex(i) - r.vertex(a)).perp()
}

/// Area derivative for the Blaschke perturbation that slides vertex `i`
/// along the arc x_{i-1} x_i, lengthening it:
/// sin(theta_i) (tan(theta_{i+k+1}/2) - tan(theta_i/2)).
pub fn blaschke_derivative(r: &ReuleauxPolygon, i: usize) -> Result<f64> {
    if r.n() == 3 {
        return Err(Error::TriangleImmovable);
    }
    let (_, b) = r.opposite(i);
    let ti = r.theta_at(i);
    Ok(ti.sin() * ((0.5 * r.theta_at(b)).tan() - (0.5 * ti).tan()))
}

/// Second derivative of the area along the bisector perturbation at a
/// critical vertex with common arc length `theta`:
/// 2 (sin(theta/2) sin(theta) - cos(3 theta/2)) / (cos(theta/2) sin(theta)).
/// Negative on (0, pi/5], positive at pi/3; the sign flips where
/// tan(theta/2) tan(theta) crosses 1/2.
pub fn bisector_second_derivative(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta <= FRAC_PI_3 + 1e-12) {
        return Err(Error::OutOfRange { name: "theta", value: theta });
    }
    let num = (0.5 * theta).sin() * theta.sin() - (1.5 * theta).cos();
    Ok(2.0 * num / ((0.5 * theta).cos() * theta.sin()))
}

/// Chord length |x_1 x_{n-1}| at a critical configuration with common arc
/// length `theta`: -8 sin^3(theta/2) + 4 sin(theta/2). The diameter bound
/// (value <= 1) holds exactly on [0, pi/5] and at pi/3.
pub fn critical_angle_bound_check(theta: f64) -> f64 {
    let s = (0.5 * theta).sin();
    4.0 * s - 8.0 * s * s * s
}

/// Exact rates of change of the five arc lengths affected when vertex `i`
/// moves with unit velocity `w` (the opposite vertices following their
/// constrained circles). Indices are arc labels: `opposite` is theta_i,
/// `adjacent_prev/next` are theta_{i+k}, theta_{i+k+1}, `outer_prev/next`
/// are theta_{i-1}, theta_{i+1}. The five rates sum to zero.
#[derive(Clone, Copy, Debug)]
pub struct ThetaRates {
    pub opposite: f64,
    pub adjacent_prev: f64,
    pub adjacent_next: f64,
    pub outer_prev: f64,
    pub outer_next: f64,
}

/// Velocities of the two opposite vertices x_{i+k}, x_{i+k+1} induced by a
/// unit-speed motion of vertex `i` in direction `w`, from differentiating
/// the two circle-intersection definitions.
pub fn opposite_vertex_velocities(
    r: &ReuleauxPolygon,
    i: usize,
    w: Point2,
) -> Result<(Point2, Point2)> {
    if r.n() == 3 {
        return Err(Error::TriangleImmovable);
    }
    let n = r.n();
    let (a, b) = r.opposite(i);
    let prev = (i + n - 1) % n;
    let next = (i + 1) % n;
    // x_a stays on the circle around x_prev while tracking the moving circle
    // around x_i: p . x_a' = p . w with p = x_a - x_i, and q . x_a' = 0 with
    // q = x_a - x_prev, so x_a' is along q-perp.
    let rate = |vertex: Point2, moving: Point2, fixed: Point2| -> Result<Point2> {
        let p = vertex - moving;
        let q = vertex - fixed;
        let denom = q.cross(p);
        if denom.abs() < 1e-12 {
            return Err(Error::SingularArc { theta: denom });
        }
        Ok(q.perp() * (p.dot(w) / denom))
    };
    let va = rate(r.vertex(a), r.vertex(i), r.vertex(prev))?;
    let vb = rate(r.vertex(b), r.vertex(i), r.vertex(next))?;
    Ok((va, vb))
}

/// Arc-length rates along the constrained motion of vertex `i` with unit
/// velocity `w`, via exact linearization of the chord lengths.
pub fn theta_rates(r: &ReuleauxPolygon, i: usize, w: Point2) -> Result<ThetaRates> {
    let n = r.n();
    let (a, b) = r.opposite(i);
    let prev = (i + n - 1) % n;
    let next = (i + 1) % n;
    let (va, vb) = opposite_vertex_velocities(r, i, w)?;

    // d theta / dt = (d chord / dt) / cos(theta/2), from theta = 2 asin(chord/2)
    let chord_rate = |pj: Point2, pk: Point2, vj: Point2, vk: Point2| -> f64 {
        let d = pj - pk;
        d.dot(vj - vk) / d.norm()
    };
    let x = r.vertices();
    let adjacent_next =
        chord_rate(x[i], x[next], w, Point2::ZERO) / (0.5 * r.theta_at(b)).cos();
    let adjacent_prev =
        chord_rate(x[i], x[prev], w, Point2::ZERO) / (0.5 * r.theta_at(a)).cos();
    let opposite = chord_rate(x[a], x[b], va, vb) / (0.5 * r.theta_at(i)).cos();
    let am1 = (a + n - 1) % n;
    let bp1 = (b + 1) % n;
    let outer_prev =
        chord_rate(x[a], x[am1], va, Point2::ZERO) / (0.5 * r.theta_at(prev)).cos();
    let outer_next =
        chord_rate(x[b], x[bp1], vb, Point2::ZERO) / (0.5 * r.theta_at(next)).cos();

    Ok(ThetaRates { opposite, adjacent_prev, adjacent_next, outer_prev, outer_next })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::area::{area_disk_polygon, area_reuleaux};
    use crate::geom::{build_regular_reuleaux, DiskPolygon};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    fn regular(n: usize) -> ReuleauxPolygon {
        build_regular_reuleaux(n).unwrap()
    }

    #[test]
    fn avg_normal_examples() {
        let b = Point2::new(1.0, 0.0);
        // v orthogonal to the bisector integrates to zero
        assert_eq!(avg_normal_on_arc(FRAC_PI_3, b.perp(), b).unwrap(), 0.0);
        assert_abs_diff_eq!(avg_normal_on_arc(FRAC_PI_3, b, b).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            avg_normal_on_arc(PI / 5.0, b * 2.0, b).unwrap(),
            4.0 * (PI / 10.0).sin(),
            epsilon = 1e-15
        );
        assert!(avg_normal_on_arc(0.0, b, b).is_err());
        assert!(avg_normal_on_arc(PI, b, b).is_err());
    }

    #[test]
    fn center_velocity_cases() {
        let c = Point2::ZERO;
        let frame = ArcFrame::new(
            c,
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0), // quarter arc
        )
        .unwrap();
        assert_abs_diff_eq!(frame.theta(), FRAC_PI_2, epsilon = 1e-15);

        // rigid translation of both endpoints translates the center
        let t = Point2::new(0.3, -0.2);
        let cv = center_velocity(&frame, t, t).unwrap();
        assert!(cv.dist(t) < 1e-12);

        // radial motion of one endpoint at a right angle: Gram matrix is I
        let cv2 = center_velocity(&frame, frame.w_a(), Point2::ZERO).unwrap();
        assert!(cv2.dist(frame.w_a()) < 1e-12);

        assert_eq!(center_velocity(&frame, Point2::ZERO, Point2::ZERO).unwrap(), Point2::ZERO);

        // the differentiated constraints hold
        let v_a = Point2::new(0.4, 0.7);
        let v_b = Point2::new(-0.1, 0.2);
        let cv3 = center_velocity(&frame, v_a, v_b).unwrap();
        assert!((frame.w_a().dot(cv3) - frame.w_a().dot(v_a)).abs() < 1e-12);
        assert!((frame.w_b().dot(cv3) - frame.w_b().dot(v_b)).abs() < 1e-12);
    }

    #[test]
    fn arc_contribution_matches_center_velocity_route() {
        let r = regular(7);
        let dp = r.as_disk_polygon();
        let frame = ArcFrame::from_disk_polygon(&dp, 2).unwrap();
        let v_a = Point2::new(0.13, -0.27);
        let v_b = Point2::new(-0.31, 0.08);
        let closed = arc_area_contribution(&frame, v_a, v_b).unwrap();
        let cv = center_velocity(&frame, v_a, v_b).unwrap();
        let via_normal = avg_normal_on_arc(frame.theta(), cv, frame.bisector()).unwrap();
        assert_abs_diff_eq!(closed, via_normal, epsilon = 1e-12);

        // tangential endpoint velocities contribute nothing
        let zero = arc_area_contribution(&frame, frame.w_a().perp(), frame.w_b().perp()).unwrap();
        assert!(zero.abs() < 1e-15);
        assert_eq!(arc_area_contribution(&frame, Point2::ZERO, Point2::ZERO).unwrap(), 0.0);
    }

    #[test]
    fn arc_contribution_matches_area_fd() {
        let r = regular(5);
        let dp = r.as_disk_polygon();
        let i = 1;
        let frame = ArcFrame::from_disk_polygon(&dp, i).unwrap();
        let v_a = Point2::new(0.21, 0.43);
        let v_b = Point2::new(-0.17, 0.05);
        let closed = arc_area_contribution(&frame, v_a, v_b).unwrap();

        // move only x_i, x_{i+1}; every arc keeps its own circle except the
        // two arcs adjacent to each moved vertex, handled by rebuilding
        let h = 1e-6;
        let perturbed_total = |s: f64| {
            let mut vs = dp.vertices().to_vec();
            vs[i] = vs[i] + v_a * s;
            vs[(i + 1) % 5] = vs[(i + 1) % 5] + v_b * s;
            // rebuild arc centers from vertex circles; this reproduces the
            // perturbed disk-polygon of the construction
            area_disk_polygon(&DiskPolygon::from_vertices(&vs).unwrap()).total
        };
        let fd = (perturbed_total(h) - perturbed_total(-h)) / (2.0 * h);
        // fd includes all four affected arcs; compare against the sum of the
        // analytic contributions of those arcs
        let prev_a = (i + 5 - 1) % 5;
        let next_b = (i + 1) % 5;
        let f_prev = ArcFrame::from_disk_polygon(&dp, prev_a).unwrap();
        let f_next = ArcFrame::from_disk_polygon(&dp, next_b).unwrap();
        let total_analytic = closed
            + arc_area_contribution(&f_prev, Point2::ZERO, v_a).unwrap()
            + arc_area_contribution(&f_next, v_b, Point2::ZERO).unwrap();
        let rel = (fd - total_analytic).abs() / total_analytic.abs().max(1e-12);
        assert!(rel < 1e-6, "rel err {rel}");
    }

    #[test]
    fn disk_gradient_symmetry_and_translation() {
        let r = regular(7);
        let dp = r.as_disk_polygon();
        let g = area_gradient_disk_polygon(&dp).unwrap();
        let norms: Vec<f64> = g.iter().map(|v| v.norm()).collect();
        for w in norms.windows(2) {
            assert_abs_diff_eq!(w[0], w[1], epsilon = 1e-12);
        }
        // translation invariance: gradients sum to zero
        let sum = g.iter().fold(Point2::ZERO, |acc, &v| acc + v);
        assert!(sum.norm() < 1e-10);
    }

    #[test]
    fn disk_gradient_matches_fd() {
        // a non-constant-width disk-polygon: slightly scaled regular 5-gon
        let r = regular(5);
        let vs: Vec<Point2> = r.vertices().iter().map(|p| *p * 0.97).collect();
        let dp = DiskPolygon::from_vertices(&vs).unwrap();
        let g = area_gradient_disk_polygon(&dp).unwrap();
        let h = 1e-6;
        for j in 0..5 {
            for (dx, dy, comp) in [(h, 0.0, 0), (0.0, h, 1)] {
                let mut plus = vs.clone();
                plus[j] = plus[j] + Point2::new(dx, dy);
                let mut minus = vs.clone();
                minus[j] = minus[j] - Point2::new(dx, dy);
                let fd = (area_disk_polygon(&DiskPolygon::from_vertices(&plus).unwrap()).total
                    - area_disk_polygon(&DiskPolygon::from_vertices(&minus).unwrap()).total)
                    / (2.0 * h);
                let analytic = if comp == 0 { g.get(j).x() } else { g.get(j).y() };
                let rel = (fd - analytic).abs() / analytic.abs().max(1e-9);
                assert!(rel < 1e-6, "vertex {j} comp {comp}: rel err {rel}");
            }
        }
    }

    #[test]
    fn propagate_identity_and_validity() {
        let r = regular(7);
        let same = propagate_vertex_perturbation(&r, 0, Point2::new(1.0, 0.0), 0.0).unwrap();
        assert_eq!(same.vertices(), r.vertices());

        let b = vertex_bisector(&r, 2);
        let moved = propagate_vertex_perturbation(&r, 2, b, 0.01).unwrap();
        let report = moved.validate(&Tolerances::default());
        assert!(report.pass, "{report}");
        let sum: f64 = moved.theta().iter().sum();
        assert_abs_diff_eq!(sum, PI, epsilon = 1e-9);
    }

    #[test]
    fn triangle_cannot_move() {
        let r = regular(3);
        assert!(matches!(
            propagate_vertex_perturbation(&r, 0, Point2::new(1.0, 0.0), 0.01),
            Err(Error::TriangleImmovable)
        ));
        assert!(matches!(gradient_reuleaux(&r, 0), Err(Error::TriangleImmovable)));
    }

    #[test]
    fn oversized_step_rejected() {
        let r = regular(5);
        let v = Point2::new(1.0, 0.0);
        assert!(matches!(
            propagate_vertex_perturbation(&r, 0, v, 0.9),
            Err(Error::StepTooLarge)
        ));
    }

    #[test]
    fn regular_polygons_are_critical() {
        for n in [5, 7, 9, 11] {
            let r = regular(n);
            for i in 0..n {
                let g = gradient_reuleaux(&r, i).unwrap();
                assert!(g.norm() < 1e-12, "n={n} i={i}: |g| = {}", g.norm());
                let d = directional_derivative_reuleaux(&r, i, Point2::new(0.6, 0.8)).unwrap();
                assert!(d.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gradient_consistent_with_directional_derivative() {
        let r = perturbed(9, 40);
        for i in 0..9 {
            let g = gradient_reuleaux(&r, i).unwrap();
            for j in 0..32 {
                let ang = 2.0 * PI * j as f64 / 32.0;
                let v = Point2::new(ang.cos(), ang.sin());
                let d = directional_derivative_reuleaux(&r, i, v).unwrap();
                assert_abs_diff_eq!(d, v.dot(g), epsilon = 1e-12);
            }
        }
    }

    fn perturbed(n: usize, steps: usize) -> ReuleauxPolygon {
        // deterministic wandering away from the regular polygon
        let mut r = regular(n);
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..steps {
            let i = (next() * n as f64) as usize % n;
            let ang = 2.0 * PI * next();
            let v = Point2::new(ang.cos(), ang.sin());
            let mut t = 0.008;
            for _ in 0..8 {
                match propagate_vertex_perturbation(&r, i, v, t) {
                    Ok(r2) => {
                        r = r2;
                        break;
                    }
                    Err(_) => t *= 0.5,
                }
            }
        }
        r
    }

    #[test]
    fn directional_derivative_matches_constrained_fd() {
        let r = perturbed(7, 30);
        let h = 1e-6;
        for i in 0..7 {
            let ang = 0.41 + i as f64;
            let v = Point2::new(ang.cos(), ang.sin());
            let plus = propagate_vertex_perturbation(&r, i, v, h).unwrap();
            let minus = propagate_vertex_perturbation(&r, i, v, -h).unwrap();
            let fd = (area_reuleaux(&plus) - area_reuleaux(&minus)) / (2.0 * h);
            let analytic = directional_derivative_reuleaux(&r, i, v).unwrap();
            let rel = (fd - analytic).abs() / analytic.abs().max(1e-8);
            assert!(rel < 1e-5, "i={i}: fd {fd} vs {analytic}");
        }
    }

    #[test]
    fn blaschke_matches_tangential_direction() {
        let r = perturbed(7, 25);
        for i in 0..7 {
            let v = blaschke_direction(&r, i);
            assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-9);
            let via_formula = blaschke_derivative(&r, i).unwrap();
            let via_directional = directional_derivative_reuleaux(&r, i, v).unwrap();
            assert_abs_diff_eq!(via_formula, via_directional, epsilon = 1e-12);
        }
    }

    #[test]
    fn blaschke_sign_cases() {
        // theta_i = theta_{i+k+1} gives zero; theta_i > theta_{i+k+1} negative
        let r = regular(7);
        for i in 0..7 {
            assert!(blaschke_derivative(&r, i).unwrap().abs() < 1e-14);
        }
        let r2 = perturbed(7, 25);
        for i in 0..7 {
            let (_, b) = r2.opposite(i);
            let expect = r2.theta_at(i).sin()
                * ((0.5 * r2.theta_at(b)).tan() - (0.5 * r2.theta_at(i)).tan());
            let d = blaschke_derivative(&r2, i).unwrap();
            assert_abs_diff_eq!(d, expect, epsilon = 1e-14);
            if r2.theta_at(i) > r2.theta_at(b) {
                assert!(d < 0.0);
            }
        }
    }

    #[test]
    fn bisector_second_derivative_signs() {
        assert!(bisector_second_derivative(PI / 5.0).unwrap() < 0.0);
        assert!(bisector_second_derivative(FRAC_PI_3).unwrap() > 0.0);
        for n in (5..=101).step_by(2) {
            assert!(bisector_second_derivative(PI / n as f64).unwrap() < 0.0, "n = {n}");
        }
        // sign flip matches tan(theta/2) tan(theta) = 1/2
        for i in 1..200 {
            let theta = FRAC_PI_3 * i as f64 / 200.0;
            let r2 = bisector_second_derivative(theta).unwrap();
            let indicator = (0.5 * theta).tan() * theta.tan() - 0.5;
            assert_eq!(r2 > 0.0, indicator > 0.0, "theta = {theta}");
        }
        assert!(bisector_second_derivative(0.0).is_err());
        assert!(bisector_second_derivative(1.2).is_err());
    }

    #[test]
    fn bisector_second_derivative_matches_fd() {
        for n in [5usize, 7, 9] {
            let r = regular(n);
            let b = vertex_bisector(&r, 0);
            let h = 1e-4;
            let a0 = area_reuleaux(&r);
            let ap = area_reuleaux(&propagate_vertex_perturbation(&r, 0, b, h).unwrap());
            let am = area_reuleaux(&propagate_vertex_perturbation(&r, 0, b, -h).unwrap());
            let fd = (ap - 2.0 * a0 + am) / (h * h);
            let closed = bisector_second_derivative(PI / n as f64).unwrap();
            assert!((fd - closed).abs() < 1e-4, "n={n}: fd {fd} vs {closed}");
        }
    }

    #[test]
    fn critical_angle_chord_values() {
        assert_abs_diff_eq!(critical_angle_bound_check(FRAC_PI_3), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(critical_angle_bound_check(PI / 5.0), 1.0, epsilon = 1e-12);
        assert!(critical_angle_bound_check(PI / 4.0) > 1.0);
        assert_eq!(critical_angle_bound_check(0.0), 0.0);
    }

    #[test]
    fn theta_rates_match_fd_and_sum_to_zero() {
        let r = perturbed(7, 30);
        let n = r.n();
        let h = 1e-6;
        for i in [0usize, 3] {
            let ang = 1.3 + i as f64;
            let w = Point2::new(ang.cos(), ang.sin());
            let rates = theta_rates(&r, i, w).unwrap();
            let plus = propagate_vertex_perturbation(&r, i, w, h).unwrap();
            let minus = propagate_vertex_perturbation(&r, i, w, -h).unwrap();
            let fd =
                |j: usize| (plus.theta_at(j) - minus.theta_at(j)) / (2.0 * h);
            let (a, b) = r.opposite(i);
            let cases = [
                (rates.opposite, fd(i)),
                (rates.adjacent_prev, fd(a)),
                (rates.adjacent_next, fd(b)),
                (rates.outer_prev, fd((i + n - 1) % n)),
                (rates.outer_next, fd((i + 1) % n)),
            ];
            for (analytic, numeric) in cases {
                let rel = (analytic - numeric).abs() / numeric.abs().max(1e-8);
                assert!(rel < 1e-5, "{analytic} vs {numeric}");
            }
            let total = rates.opposite
                + rates.adjacent_prev
                + rates.adjacent_next
                + rates.outer_prev
                + rates.outer_next;
            assert!(total.abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_is_rotation_equivariant() {
        let r = perturbed(7, 15);
        let angle = 0.83;
        let rotated: Vec<Point2> = r.vertices().iter().map(|p| p.rotate(angle)).collect();
        let r2 = ReuleauxPolygon::from_vertices(&rotated).unwrap();
        for i in 0..7 {
            let g = gradient_reuleaux(&r, i).unwrap().rotate(angle);
            let g2 = gradient_reuleaux(&r2, i).unwrap();
            assert!(g.dist(g2) < 1e-12);
        }
    }

    #[test]
    fn rigid_translation_has_zero_total_contribution() {
        let r = perturbed(9, 20);
        let dp = r.as_disk_polygon();
        let t = Point2::new(0.37, -0.58);
        let mut total = 0.0;
        for i in 0..dp.n() {
            let frame = ArcFrame::from_disk_polygon(&dp, i).unwrap();
            total += arc_area_contribution(&frame, t, t).unwrap();
        }
        assert!(total.abs() < 1e-10);
    }
}
