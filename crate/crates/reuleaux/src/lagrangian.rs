//! Constrained formulations of the area problem: vertices as variables with
//! the diameter equalities |x_i - x_{i+k}| = 1, and disk centers as
//! variables with |c_i - c_{i+k}| = 1. Provides multiplier recovery by
//! least squares, assembly of the block Hessians, the critical cone and its
//! q-parameterization, and the Blaschke quadratic forms in both
//! formulations.

use std::f64::consts::PI;

use crate::area::{area_disk_polygon, segment_area_d1, segment_area_d2};
use crate::error::{Error, Result};
use crate::geom::{
    circle_circle_intersection, DiskPolygon, PerturbationField, Point2, ReuleauxPolygon, Side,
    Tolerances,
};
use crate::linalg::{matrix_rank, solve_dense, Mat2};
use crate::sensitivity::area_gradient_disk_polygon;

/// Lagrange multipliers, one per diameter constraint.
#[derive(Clone, Debug)]
pub struct Multipliers {
    pub lambda: Vec<f64>,
}

/// n x n grid of 2x2 blocks, i.e. a symmetric 2n x 2n matrix indexed by
/// planar vertex coordinates in `[x0, y0, x1, y1, ...]` order.
#[derive(Clone, Debug)]
pub struct BlockMatrix {
    n: usize,
    data: Vec<f64>, // dense row-major, dimension 2n
}

impl BlockMatrix {
    pub fn zeros(n: usize) -> Self {
        BlockMatrix { n, data: vec![0.0; 4 * n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn entry(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.dim() + c]
    }

    pub fn set_entry(&mut self, r: usize, c: usize, v: f64) {
        let d = self.dim();
        self.data[r * d + c] = v;
    }

    pub fn block(&self, i: usize, j: usize) -> Mat2 {
        let d = self.dim();
        Mat2::new(
            self.data[(2 * i) * d + 2 * j],
            self.data[(2 * i) * d + 2 * j + 1],
            self.data[(2 * i + 1) * d + 2 * j],
            self.data[(2 * i + 1) * d + 2 * j + 1],
        )
    }

    pub fn add_block(&mut self, i: usize, j: usize, m: Mat2) {
        let d = self.dim();
        self.data[(2 * i) * d + 2 * j] += m.m[0][0];
        self.data[(2 * i) * d + 2 * j + 1] += m.m[0][1];
        self.data[(2 * i + 1) * d + 2 * j] += m.m[1][0];
        self.data[(2 * i + 1) * d + 2 * j + 1] += m.m[1][1];
    }

    /// Largest |H - H^T| entry.
    pub fn asymmetry(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..d {
            for c in 0..r {
                worst = worst.max((self.entry(r, c) - self.entry(c, r)).abs());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &BlockMatrix) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()))
    }

    /// w^T H w over a per-vertex field.
    pub fn quad_form(&self, w: &PerturbationField) -> f64 {
        let flat = w.to_flat();
        let d = self.dim();
        assert_eq!(flat.len(), d);
        let mut total = 0.0;
        for r in 0..d {
            let mut row = 0.0;
            for c in 0..d {
                row += self.entry(r, c) * flat[c];
            }
            total += flat[r] * row;
        }
        total
    }

    /// Dense CSV dump (2n x 2n).
    pub fn to_csv(&self) -> String {
        let d = self.dim();
        let mut out = String::new();
        for r in 0..d {
            let row: Vec<String> = (0..d).map(|c| format!("{:.17e}", self.entry(r, c))).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// A perturbation in the critical cone of a regular Reuleaux polygon,
/// together with the q-coefficients of its diameter differences
/// w_{i+k} - w_i = q_i D_i-perp.
#[derive(Clone, Debug)]
pub struct CriticalConeVector {
    w: PerturbationField,
    q: Vec<f64>,
}

impl CriticalConeVector {
    pub fn w(&self) -> &PerturbationField {
        &self.w
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }
}

/// Constraint values C_i = |x_i - x_{i+k}| - 1.
pub fn constraint_values(x: &[Point2]) -> Result<Vec<f64>> {
    let n = x.len();
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidN { n, reason: "constraints need odd n >= 3" });
    }
    let k = (n - 1) / 2;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let j = (i + k) % n;
        let d = x[i].dist(x[j]);
        if d < 1e-9 {
            return Err(Error::CoincidentPoints { i, j });
        }
        out.push(d - 1.0);
    }
    Ok(out)
}

/// Sparse gradient of one diameter constraint: nonzero only at x_i (value
/// `unit`) and x_{i+k} (value `-unit`).
#[derive(Clone, Copy, Debug)]
pub struct ConstraintGradient {
    pub i: usize,
    pub partner: usize,
    pub unit: Point2,
}

pub fn constraint_gradients(x: &[Point2]) -> Result<Vec<ConstraintGradient>> {
    let n = x.len();
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidN { n, reason: "constraints need odd n >= 3" });
    }
    let k = (n - 1) / 2;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let j = (i + k) % n;
        let diff = x[i] - x[j];
        let d = diff.norm();
        if d < 1e-9 {
            return Err(Error::CoincidentPoints { i, j });
        }
        out.push(ConstraintGradient { i, partner: j, unit: diff / d });
    }
    Ok(out)
}

/// Rank of the stacked constraint-gradient rows (n x 2n matrix).
pub fn constraint_gradient_rank(grads: &[ConstraintGradient], n: usize) -> usize {
    let rows: Vec<Vec<f64>> = grads
        .iter()
        .map(|g| {
            let mut row = vec![0.0; 2 * n];
            row[2 * g.i] = g.unit.x();
            row[2 * g.i + 1] = g.unit.y();
            row[2 * g.partner] = -g.unit.x();
            row[2 * g.partner + 1] = -g.unit.y();
            row
        })
        .collect();
    matrix_rank(&rows, 1e-10)
}

/// Stationarity system for a gradient field: find lambda minimizing
/// | g + sum_i lambda_i grad C_i |^2 by normal equations, returning the
/// multipliers and the residual norm (the projected gradient).
fn least_squares_multipliers(
    x: &[Point2],
    gradient: &PerturbationField,
) -> Result<(Multipliers, f64)> {
    let n = x.len();
    let grads = constraint_gradients(x)?;
    // normal matrix (G G^T)_{ij} = <grad C_i, grad C_j>
    let mut normal = vec![vec![0.0; n]; n];
    let dot_rows = |a: &ConstraintGradient, b: &ConstraintGradient| -> f64 {
        let mut s = 0.0;
        for (ia, va) in [(a.i, a.unit), (a.partner, -a.unit)] {
            for (ib, vb) in [(b.i, b.unit), (b.partner, -b.unit)] {
                if ia == ib {
                    s += va.dot(vb);
                }
            }
        }
        s
    };
    for i in 0..n {
        for j in 0..n {
            normal[i][j] = dot_rows(&grads[i], &grads[j]);
        }
    }
    let mut rhs = vec![0.0; n];
    for (i, g) in grads.iter().enumerate() {
        rhs[i] = -(g.unit.dot(gradient.get(g.i)) - g.unit.dot(gradient.get(g.partner)));
    }
    let lambda = solve_dense(&normal, &rhs)?;

    // residual of the full 2n-dimensional stationarity system
    let mut res = vec![Point2::ZERO; n];
    for j in 0..n {
        res[j] = gradient.get(j);
    }
    for (i, g) in grads.iter().enumerate() {
        res[g.i] += g.unit * lambda[i];
        res[g.partner] += -g.unit * lambda[i];
    }
    let residual = res.iter().map(|p| p.norm_sq()).sum::<f64>().sqrt();
    Ok((Multipliers { lambda }, residual))
}

/// Multipliers of the vertex formulation, recovered by least squares from
/// the stationarity of area + sum lambda_i C_i. At a regular n-gon all
/// multipliers equal -tan(pi/(2n)) and the residual vanishes.
pub fn solve_multipliers_vertices(r: &ReuleauxPolygon) -> Result<(Multipliers, f64)> {
    let gradient = area_gradient_disk_polygon(&r.as_disk_polygon())?;
    least_squares_multipliers(r.vertices(), &gradient)
}

/// Hessian of the polygon (shoelace) area term: constant skew 2x2 blocks on
/// the cyclic off-diagonals.
fn polygon_area_hessian(n: usize) -> BlockMatrix {
    let mut h = BlockMatrix::zeros(n);
    let b = Mat2::new(0.0, 0.5, -0.5, 0.0);
    for i in 0..n {
        h.add_block(i, (i + 1) % n, b);
        h.add_block((i + 1) % n, i, b.transpose());
    }
    h
}

/// Hessian of a function f(|a-b|) of the distance of two points, as the
/// block for (a,a); the (a,b) block is its negative.
fn distance_function_hessian(diff: Point2, d1: f64, d2: f64) -> Mat2 {
    let d = diff.norm();
    let u = diff / d;
    let uu = Mat2::outer(u, u);
    uu * d2 + (Mat2::identity() - uu) * (d1 / d)
}

/// Hessian of sum_i f(|x_i - x_{i+1}|) over the boundary chords.
fn segment_hessian(x: &[Point2]) -> Result<BlockMatrix> {
    let n = x.len();
    let mut h = BlockMatrix::zeros(n);
    for i in 0..n {
        let j = (i + 1) % n;
        let diff = x[i] - x[j];
        let d = diff.norm();
        let m = distance_function_hessian(diff, segment_area_d1(d)?, segment_area_d2(d)?);
        h.add_block(i, i, m);
        h.add_block(j, j, m);
        h.add_block(i, j, m * -1.0);
        h.add_block(j, i, m * -1.0);
    }
    Ok(h)
}

/// Hessian of sum_i lambda_i |x_i - x_{i+k}|.
fn constraint_hessian(x: &[Point2], lambda: &[f64]) -> Result<BlockMatrix> {
    let n = x.len();
    let k = (n - 1) / 2;
    let mut h = BlockMatrix::zeros(n);
    for i in 0..n {
        let j = (i + k) % n;
        let diff = x[i] - x[j];
        if diff.norm() < 1e-9 {
            return Err(Error::CoincidentPoints { i, j });
        }
        let m = distance_function_hessian(diff, 1.0, 0.0) * lambda[i];
        h.add_block(i, i, m);
        h.add_block(j, j, m);
        h.add_block(i, j, m * -1.0);
        h.add_block(j, i, m * -1.0);
    }
    Ok(h)
}

/// Hessian of the vertex Lagrangian
/// L(x, lambda) = Area(polygon) + sum f(|x_i - x_{i+1}|) + sum lambda_i |x_i - x_{i+k}|,
/// assembled with general per-edge chord lengths (the regular-point closed
/// forms are special cases exercised in tests).
pub fn hessian_lagrangian_vertices(
    r: &ReuleauxPolygon,
    multipliers: &Multipliers,
) -> Result<BlockMatrix> {
    let x = r.vertices();
    let n = x.len();
    assert_eq!(multipliers.lambda.len(), n);
    let mut h = polygon_area_hessian(n);
    let seg = segment_hessian(x)?;
    let con = constraint_hessian(x, &multipliers.lambda)?;
    for r_ in 0..2 * n {
        for c in 0..2 * n {
            let v = h.entry(r_, c) + seg.entry(r_, c) + con.entry(r_, c);
            h.set_entry(r_, c, v);
        }
    }
    Ok(h)
}

/// Scalar value of the vertex Lagrangian at arbitrary coordinates; the
/// finite-difference oracle for `hessian_lagrangian_vertices` differentiates
/// this.
pub fn lagrangian_vertices_value(x: &[Point2], lambda: &[f64]) -> Result<f64> {
    let n = x.len();
    let k = (n - 1) / 2;
    let mut val = crate::geom::signed_polygon_area(x);
    for i in 0..n {
        let chord = x[i].dist(x[(i + 1) % n]);
        val += crate::area::segment_area(chord)?;
    }
    for i in 0..n {
        val += lambda[i] * x[i].dist(x[(i + k) % n]);
    }
    Ok(val)
}

/// Reconstruct the cone vector with diameter differences W_i = q_i D_i-perp
/// by chaining w_{i+k} = w_i + q_i D_i-perp around the k-step cycle, with the
/// translation gauge w_0 = 0. Fails if the cycle does not close.
pub fn critical_cone_from_q(r: &ReuleauxPolygon, q: &[f64]) -> Result<CriticalConeVector> {
    let n = r.n();
    let k = r.k();
    if q.len() != n {
        return Err(Error::InvalidN { n: q.len(), reason: "q length must match vertex count" });
    }
    let d_perp: Vec<Point2> =
        (0..n).map(|i| (r.vertex((i + k) % n) - r.vertex(i)).perp()).collect();
    let mut w = vec![Point2::ZERO; n];
    let mut idx = 0usize;
    for _ in 0..n - 1 {
        let next = (idx + k) % n;
        w[next] = w[idx] + d_perp[idx] * q[idx];
        idx = next;
    }
    let closure = w[idx] + d_perp[idx] * q[idx] - w[0];
    let scale = 1.0 + q.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    if closure.norm() > 1e-8 * scale {
        return Err(Error::InconsistentQ { residual: closure.norm() });
    }
    Ok(CriticalConeVector { w: PerturbationField::new(w), q: q.to_vec() })
}

/// The skew polygon-area term sum_i w_i [[0,1],[-1,0]] w_{i+1} of the
/// quadratic form; vanishes for fields supported on non-adjacent vertices.
pub fn skew_polygon_term(w: &PerturbationField) -> f64 {
    let n = w.len();
    let mut s = 0.0;
    for i in 0..n {
        let a = w.get(i);
        let b = w.get((i + 1) % n);
        s += a.x() * b.y() - a.y() * b.x();
    }
    s
}

/// q-space reduction of the Lagrangian quadratic form at the regular n-gon,
/// excluding the skew term:
/// (1/2) tan(pi/2n) (2 sum q_i^2 - 2 (cos(pi/n) + 1) sum q_i q_{i+k}).
pub fn quadratic_form_q_reduced(n: usize, q: &[f64]) -> f64 {
    let k = (n - 1) / 2;
    let sum_sq: f64 = q.iter().map(|v| v * v).sum();
    let sum_cross: f64 = (0..n).map(|i| q[i] * q[(i + k) % n]).sum();
    let t = (PI / (2.0 * n as f64)).tan();
    0.5 * t * (2.0 * sum_sq - 2.0 * ((PI / n as f64).cos() + 1.0) * sum_cross)
}

/// Full quadratic form w^T Hess L w of the vertex Lagrangian at `r` (solved
/// multipliers), contracted against a cone vector.
pub fn quadratic_form_vertices(r: &ReuleauxPolygon, v: &CriticalConeVector) -> Result<f64> {
    let (m, _residual) = solve_multipliers_vertices(r)?;
    let h = hessian_lagrangian_vertices(r, &m)?;
    Ok(h.quad_form(v.w()))
}

/// q-coefficients of the Blaschke perturbation moving vertices x_0 and
/// x_{-k} only: q_0 = q_1 = 1, q_{-k} = 2 cos(pi/n).
pub fn blaschke_q(n: usize) -> Result<Vec<f64>> {
    if n < 5 || n % 2 == 0 {
        return Err(Error::InvalidN { n, reason: "Blaschke cone vectors need odd n >= 5" });
    }
    let k = (n - 1) / 2;
    let mut q = vec![0.0; n];
    q[0] = 1.0;
    q[1] = 1.0;
    q[n - k] = 2.0 * (PI / n as f64).cos();
    Ok(q)
}

// ---------------------------------------------------------------------------
// Centers as variables
// ---------------------------------------------------------------------------

/// Disk-polygon determined by unit disks centered at `c` (in boundary-arc
/// counter-clockwise order, Reuleaux adjacency: consecutive circles
/// intersect and their far-side intersection is a boundary vertex).
pub fn disk_polygon_from_centers(c: &[Point2]) -> Result<DiskPolygon> {
    let n = c.len();
    if n < 3 {
        return Err(Error::InvalidN { n, reason: "need at least 3 centers" });
    }
    let mut vertices = Vec::with_capacity(n);
    for j in 0..n {
        let v = circle_circle_intersection(c[j], c[(j + 1) % n], Side::Left)
            .map_err(|_| Error::RedundantCenter { index: j })?;
        vertices.push(v);
    }
    // vertex v_j lies between the arcs of circles j and j+1, so the arc from
    // v_j to v_{j+1} is centered at c_{j+1}
    let arc_centers: Vec<Point2> = (0..n).map(|j| c[(j + 1) % n]).collect();
    DiskPolygon::from_parts(vertices, arc_centers, &Tolerances::default()).map_err(|e| match e {
        Error::InvalidPolygon { .. } => Error::RedundantCenter { index: 0 },
        other => other,
    })
}

/// Area of the disk-polygon as a function of its centers.
pub fn area_from_centers(c: &[Point2]) -> Result<f64> {
    Ok(area_disk_polygon(&disk_polygon_from_centers(c)?).total)
}

/// Gradient of the area with respect to each center: the integral of the
/// outward normal over that disk's boundary arc, which equals the chord of
/// the arc rotated by -90 degrees.
pub fn gradient_centers(c: &[Point2]) -> Result<PerturbationField> {
    let n = c.len();
    let dp = disk_polygon_from_centers(c)?;
    // arc of circle i runs from vertex v_{i-1} to v_i
    let mut grad = Vec::with_capacity(n);
    for i in 0..n {
        let v_prev = dp.vertex((i + n - 1) % n);
        let v_cur = dp.vertex(i);
        let chord = v_cur - v_prev;
        grad.push(Point2::new(chord.y(), -chord.x()));
    }
    Ok(PerturbationField::new(grad))
}

/// Multipliers of the center formulation. At a regular n-gon all equal
/// tan(pi/(2n)) and are positive: the diameter constraints push centers
/// apart when the area is minimized.
pub fn solve_multipliers_centers(r: &ReuleauxPolygon) -> Result<(Multipliers, f64)> {
    let gradient = gradient_centers(r.vertices())?;
    least_squares_multipliers(r.vertices(), &gradient)
}

/// Hessian of the area with respect to the centers. Each boundary vertex
/// v_j = dB(c_j) n dB(c_{j+1}) contributes a rank-one coupling of the two
/// adjacent centers through the Jacobian of the circle intersection; blocks
/// beyond the cyclic neighbors are zero.
pub fn hessian_area_centers(r: &ReuleauxPolygon) -> Result<BlockMatrix> {
    hessian_area_centers_at(r.vertices())
}

/// Same as [`hessian_area_centers`] but for arbitrary non-degenerate center
/// configurations (used by the finite-difference cross-checks).
pub fn hessian_area_centers_at(c: &[Point2]) -> Result<BlockMatrix> {
    let n = c.len();
    let dp = disk_polygon_from_centers(c)?;
    let mut h = BlockMatrix::zeros(n);
    for j in 0..n {
        let jp = (j + 1) % n;
        let v = dp.vertex(j);
        let p = v - c[j];
        let q = v - c[jp];
        let s = p.cross(q); // sin of the vertex angle, positive by ordering
        if s.abs() < 1e-12 {
            return Err(Error::RedundantCenter { index: j });
        }
        let qp = Mat2::outer(q, p) * (1.0 / s);
        let pq = Mat2::outer(p, q) * (1.0 / s);
        h.add_block(j, j, qp * -1.0);
        h.add_block(j, jp, pq);
        h.add_block(jp, j, qp);
        h.add_block(jp, jp, pq * -1.0);
    }
    Ok(h)
}

/// Hessian of the center Lagrangian A(c) + sum lambda_i |c_i - c_{i+k}|.
pub fn hessian_lagrangian_centers(
    r: &ReuleauxPolygon,
    multipliers: &Multipliers,
) -> Result<BlockMatrix> {
    let mut h = hessian_area_centers(r)?;
    let con = constraint_hessian(r.vertices(), &multipliers.lambda)?;
    let d = h.dim();
    for r_ in 0..d {
        for c in 0..d {
            let v = h.entry(r_, c) + con.entry(r_, c);
            h.set_entry(r_, c, v);
        }
    }
    Ok(h)
}

/// The Blaschke center perturbation at `r`: w_0 perpendicular to
/// (c_0 - c_k), w_{-k} perpendicular to (c_1 - c_{-k}), every other center
/// fixed, signs chosen so the active cone constraint
/// (w_0 - w_{-k}) . (c_0 - c_{-k}) = 0 holds.
pub fn blaschke_center_field(r: &ReuleauxPolygon) -> Result<PerturbationField> {
    let n = r.n();
    if n < 5 {
        return Err(Error::InvalidN { n, reason: "Blaschke center perturbations need n >= 5" });
    }
    let k = r.k();
    let mk = n - k; // index -k mod n
    let c = r.vertices();
    let w0 = (c[0] - c[k]).perp().unit();
    let mut wmk = (c[1] - c[mk]).perp().unit();
    let d = c[0] - c[mk];
    if ((w0 - wmk).dot(d)).abs() > ((w0 + wmk).dot(d)).abs() {
        wmk = -wmk;
    }
    let mut w = PerturbationField::zeros(n);
    w.set(0, w0);
    w.set(mk, wmk);
    Ok(w)
}

/// Value of the center-formulation Lagrangian quadratic form along the
/// Blaschke perturbation at the regular n-gon. Negative for every odd
/// n >= 5, which rules out local minimality of the regular polygon.
pub fn quadratic_form_blaschke_centers(n: usize) -> Result<f64> {
    if n < 5 || n % 2 == 0 {
        return Err(Error::InvalidN { n, reason: "Blaschke center form needs odd n >= 5" });
    }
    let r = crate::geom::build_regular_reuleaux(n)?;
    let (m, _res) = solve_multipliers_centers(&r)?;
    let h = hessian_lagrangian_centers(&r, &m)?;
    let w = blaschke_center_field(&r)?;
    Ok(h.quad_form(&w))
}

/// Multiplier report for both formulations, serialized by the CLI.
#[derive(Clone, Debug, serde::Serialize)]
pub struct MultiplierReport {
    pub n: usize,
    pub vertex_lambda: Vec<f64>,
    pub vertex_residual: f64,
    pub center_lambda: Vec<f64>,
    pub center_residual: f64,
}

pub fn multiplier_report(r: &ReuleauxPolygon) -> Result<MultiplierReport> {
    let (mv, rv) = solve_multipliers_vertices(r)?;
    let (mc, rc) = solve_multipliers_centers(r)?;
    Ok(MultiplierReport {
        n: r.n(),
        vertex_lambda: mv.lambda,
        vertex_residual: rv,
        center_lambda: mc.lambda,
        center_residual: rc,
    })
}
