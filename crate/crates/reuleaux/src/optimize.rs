//! Constrained area optimization over Reuleaux polygons: cyclic
//! single-vertex moves through the exact constrained propagation, with
//! backtracking acceptance on strict improvement.
//!
//! Ascent converges to the regular n-gon (the unique critical point).
//! Descent drives some arc length to zero; the vanishing arc is merged away
//! (n drops by 2, staying odd) and the run terminates at the Reuleaux
//! triangle.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::area::area_reuleaux;
use crate::error::{Error, Result};
use crate::geom::{Point2, ReuleauxPolygon, Tolerances};
use crate::lagrangian::{constraint_gradients, constraint_values};
use crate::linalg::solve_dense;
use crate::sensitivity::{gradient_reuleaux, propagate_vertex_perturbation, vertex_bisector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Maximize,
    Minimize,
}

#[derive(Clone, Copy, Debug)]
pub struct OptimizeConfig {
    pub mode: Mode,
    /// Initial trial step for each vertex move.
    pub step0: f64,
    /// Backtracking factor in (0, 1).
    pub shrink: f64,
    /// Bound on accepted vertex moves.
    pub max_iters: usize,
    /// Convergence threshold on the largest per-vertex gradient norm.
    pub grad_tol: f64,
    /// Arc length below which the two degenerate vertices are merged away.
    pub merge_tol: f64,
}

impl OptimizeConfig {
    pub fn maximize() -> Self {
        OptimizeConfig {
            mode: Mode::Maximize,
            step0: 0.1,
            shrink: 0.5,
            max_iters: 200_000,
            grad_tol: 1e-7,
            merge_tol: 1e-5,
        }
    }

    pub fn minimize() -> Self {
        OptimizeConfig { mode: Mode::Minimize, ..Self::maximize() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.step0 > 0.0) {
            return Err(Error::OutOfRange { name: "step0", value: self.step0 });
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return Err(Error::OutOfRange { name: "shrink", value: self.shrink });
        }
        if !(self.grad_tol > 0.0) {
            return Err(Error::OutOfRange { name: "grad_tol", value: self.grad_tol });
        }
        if self.merge_tol < Tolerances::default().merge {
            return Err(Error::OutOfRange { name: "merge_tol", value: self.merge_tol });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TraceRow {
    pub iter: usize,
    pub n: usize,
    pub area: f64,
    pub grad_norm: f64,
    pub theta_min: f64,
    pub theta_max: f64,
}

/// Per-accepted-step record of an optimization run.
#[derive(Clone, Debug, Default)]
pub struct Trace {
    pub rows: Vec<TraceRow>,
}

impl Trace {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iter,n,area,grad_norm,theta_min,theta_max\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{:.15},{:.6e},{:.12},{:.12}\n",
                r.iter, r.n, r.area, r.grad_norm, r.theta_min, r.theta_max
            ));
        }
        out
    }
}

/// Largest per-vertex gradient norm (zero for the immovable triangle).
pub fn max_gradient_norm(r: &ReuleauxPolygon) -> f64 {
    if r.n() == 3 {
        return 0.0;
    }
    (0..r.n())
        .map(|i| gradient_reuleaux(r, i).map(|g| g.norm()).unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Criticality {
    RegularMaxCandidate,
    Triangle,
    NonCritical,
}

pub fn classify_critical(r: &ReuleauxPolygon, tol: f64) -> Criticality {
    if r.n() == 3 {
        return Criticality::Triangle;
    }
    if max_gradient_norm(r) < tol {
        Criticality::RegularMaxCandidate
    } else {
        Criticality::NonCritical
    }
}

/// One constrained move of vertex `i` along `direction`, backtracking from
/// `step` until the propagation stays feasible.
pub fn step_vertex(
    r: &ReuleauxPolygon,
    i: usize,
    step: f64,
    direction: Point2,
) -> Result<ReuleauxPolygon> {
    // directions at the float-noise level mean "critical here": no move
    if step == 0.0 || direction.norm() < 1e-13 {
        return Ok(r.clone());
    }
    let dir = direction.unit();
    let mut t = step;
    while t >= 1e-14 {
        match propagate_vertex_perturbation(r, i, dir, t) {
            Ok(r2) => return Ok(r2),
            Err(Error::TriangleImmovable) => return Err(Error::TriangleImmovable),
            Err(_) => t *= 0.5,
        }
    }
    Err(Error::Stall)
}

/// Minimal-norm Gauss-Newton correction restoring the diameter equalities
/// after a merge: delta = -G^T (G G^T)^{-1} C.
fn project_to_constraints(vertices: &mut [Point2]) -> Result<()> {
    for _ in 0..6 {
        let c = constraint_values(vertices)?;
        let worst = c.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        if worst < 1e-13 {
            return Ok(());
        }
        let grads = constraint_gradients(vertices)?;
        let n = vertices.len();
        let mut normal = vec![vec![0.0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let mut s = 0.0;
                for (ia, va) in [(grads[a].i, grads[a].unit), (grads[a].partner, -grads[a].unit)] {
                    for (ib, vb) in
                        [(grads[b].i, grads[b].unit), (grads[b].partner, -grads[b].unit)]
                    {
                        if ia == ib {
                            s += va.dot(vb);
                        }
                    }
                }
                normal[a][b] = s;
            }
        }
        let y = solve_dense(&normal, &c)?;
        for (a, g) in grads.iter().enumerate() {
            vertices[g.i] += -g.unit * y[a];
            vertices[g.partner] += g.unit * y[a];
        }
    }
    Ok(())
}

/// Merge away the vanishing arc opposite vertex `i`: its endpoints
/// x_{i+k}, x_{i+k+1} have collapsed to one point and the turning angle at
/// x_i has vanished, so x_i and one endpoint are dropped, the other endpoint
/// is replaced by the collapse point, and the diameter equalities of the
/// reduced (n-2)-gon are restored by projection.
fn merge_vanishing_arc(r: &ReuleauxPolygon, i: usize) -> Result<ReuleauxPolygon> {
    let n = r.n();
    let (a, b) = r.opposite(i);
    let merged_point = Point2::midpoint(r.vertex(a), r.vertex(b));
    let mut vertices = Vec::with_capacity(n - 2);
    for j in 0..n {
        if j == i || j == a {
            continue;
        }
        vertices.push(if j == b { merged_point } else { r.vertex(j) });
    }
    if vertices.len() % 2 == 0 {
        return Err(Error::NonOddReduction { n: vertices.len() });
    }
    project_to_constraints(&mut vertices)?;
    ReuleauxPolygon::from_vertices(&vertices)
}

/// Run the optimization. Returns the final polygon and the per-step trace.
pub fn run(r0: &ReuleauxPolygon, cfg: &OptimizeConfig) -> Result<(ReuleauxPolygon, Trace)> {
    cfg.validate()?;
    let mut r = r0.clone();
    let mut trace = Trace::default();
    let mut iter = 0usize;
    let push = |trace: &mut Trace, iter: usize, r: &ReuleauxPolygon| {
        trace.rows.push(TraceRow {
            iter,
            n: r.n(),
            area: area_reuleaux(r),
            grad_norm: max_gradient_norm(r),
            theta_min: r.theta_min(),
            theta_max: r.theta_max(),
        });
    };
    push(&mut trace, iter, &r);

    if r.n() == 3 {
        return Ok((r, trace));
    }

    let mut step_hint = vec![cfg.step0; r.n()];
    loop {
        let mut improved_any = false;
        let n = r.n();
        for i in 0..n {
            if iter >= cfg.max_iters {
                return Err(Error::Stall);
            }
            if r.n() != n {
                break; // a merge reshaped the polygon; restart the sweep
            }
            let area_before = area_reuleaux(&r);
            let g = gradient_reuleaux(&r, i)?;
            let gn = g.norm();
            let direction = if gn >= cfg.grad_tol {
                match cfg.mode {
                    Mode::Maximize => g / gn,
                    Mode::Minimize => -g / gn,
                }
            } else if cfg.mode == Mode::Minimize {
                // near-critical: the area is strictly concave along the
                // bisector, so the bisector direction still descends
                vertex_bisector(&r, i)
            } else {
                continue;
            };

            let mut t = step_hint[i];
            let mut accepted = false;
            while t >= 1e-14 {
                match propagate_vertex_perturbation(&r, i, direction, t) {
                    Ok(r2) => {
                        let a2 = area_reuleaux(&r2);
                        let better = match cfg.mode {
                            Mode::Maximize => a2 > area_before,
                            Mode::Minimize => a2 < area_before,
                        };
                        if better {
                            r = r2;
                            accepted = true;
                            break;
                        }
                    }
                    Err(Error::TriangleImmovable) => return Err(Error::TriangleImmovable),
                    Err(_) => {}
                }
                t *= cfg.shrink;
            }
            if accepted {
                improved_any = true;
                iter += 1;
                step_hint[i] = (t * 2.0).min(cfg.step0);
                push(&mut trace, iter, &r);
            } else {
                step_hint[i] = cfg.step0;
            }

            if cfg.mode == Mode::Minimize && r.theta_min() < cfg.merge_tol {
                let (arg, _) = r
                    .theta()
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.total_cmp(b.1))
                    .unwrap();
                r = merge_vanishing_arc(&r, arg)?;
                iter += 1;
                push(&mut trace, iter, &r);
                step_hint = vec![cfg.step0; r.n()];
                break;
            }
        }

        match cfg.mode {
            Mode::Maximize => {
                if max_gradient_norm(&r) < cfg.grad_tol {
                    return Ok((r, trace));
                }
                if !improved_any {
                    return Err(Error::Stall);
                }
            }
            Mode::Minimize => {
                if r.n() == 3 {
                    return Ok((r, trace));
                }
                if !improved_any {
                    return Err(Error::Stall);
                }
            }
        }
    }
}

/// Random valid Reuleaux n-gon: the regular polygon walked through a
/// sequence of feasible single-vertex steps. Validity is guaranteed by
/// construction; identical seeds give identical polygons.
pub fn random_reuleaux(n: usize, seed: u64) -> Result<ReuleauxPolygon> {
    random_reuleaux_with(n, seed, 3 * n, 0.02)
}

pub fn random_reuleaux_with(
    n: usize,
    seed: u64,
    steps: usize,
    magnitude: f64,
) -> Result<ReuleauxPolygon> {
    let mut r = crate::geom::build_regular_reuleaux(n)?;
    if n == 3 {
        return Ok(r);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let angle = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
        let v = Point2::new(angle.cos(), angle.sin());
        let mut t = magnitude * rng.gen_range(0.5..1.0);
        for _ in 0..10 {
            match propagate_vertex_perturbation(&r, i, v, t) {
                Ok(r2) => {
                    r = r2;
                    break;
                }
                Err(_) => t *= 0.5,
            }
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::area::{area_regular_reuleaux, area_reuleaux};
    use crate::geom::build_regular_reuleaux;
    use std::f64::consts::PI;

    #[test]
    fn classify_cases() {
        assert_eq!(
            classify_critical(&build_regular_reuleaux(3).unwrap(), 1e-8),
            Criticality::Triangle
        );
        assert_eq!(
            classify_critical(&build_regular_reuleaux(11).unwrap(), 1e-8),
            Criticality::RegularMaxCandidate
        );
        let r = random_reuleaux(11, 42).unwrap();
        assert_eq!(classify_critical(&r, 1e-8), Criticality::NonCritical);
    }

    #[test]
    fn step_vertex_identity_cases() {
        let r = build_regular_reuleaux(7).unwrap();
        let same = step_vertex(&r, 0, 0.0, Point2::new(1.0, 0.0)).unwrap();
        assert_eq!(same.vertices(), r.vertices());
        // zero direction at a critical point: nothing to do
        let g = gradient_reuleaux(&r, 0).unwrap();
        assert!(g.norm() < 1e-12);
        let same2 = step_vertex(&r, 0, 0.1, g).unwrap();
        assert_eq!(same2.vertices(), r.vertices());
    }

    #[test]
    fn descent_step_decreases_area() {
        let r = random_reuleaux(7, 7).unwrap();
        let a0 = area_reuleaux(&r);
        let g = gradient_reuleaux(&r, 0).unwrap();
        let r2 = step_vertex(&r, 0, 1e-3, -g).unwrap();
        assert!(area_reuleaux(&r2) < a0);
    }

    #[test]
    fn regular_first_descent_step_along_bisector() {
        let r = build_regular_reuleaux(9).unwrap();
        let a0 = area_reuleaux(&r);
        let b = vertex_bisector(&r, 0);
        let r2 = step_vertex(&r, 0, 1e-2, b).unwrap();
        assert!(area_reuleaux(&r2) < a0, "bisector step must strictly decrease");
    }

    #[test]
    fn maximize_reaches_regular_area() {
        let target = area_regular_reuleaux(7).unwrap();
        let r0 = random_reuleaux(7, 1).unwrap();
        let (r, trace) = run(&r0, &OptimizeConfig::maximize()).unwrap();
        assert!((area_reuleaux(&r) - target).abs() < 1e-8);
        let spread = r.theta_max() - r.theta_min();
        assert!(spread < 1e-6, "theta spread {spread}");
        // monotone areas over accepted steps
        for w in trace.rows.windows(2) {
            assert!(w[1].area >= w[0].area);
        }
    }

    #[test]
    fn minimize_collapses_to_triangle() {
        let r0 = random_reuleaux(7, 2).unwrap();
        let (r, trace) = run(&r0, &OptimizeConfig::minimize()).unwrap();
        assert_eq!(r.n(), 3);
        let triangle = (PI - 3f64.sqrt()) / 2.0;
        assert!((area_reuleaux(&r) - triangle).abs() < 1e-6);
        // non-increasing within each n; merges may perturb by O(merge_tol^2)
        for w in trace.rows.windows(2) {
            if w[0].n == w[1].n {
                assert!(w[1].area < w[0].area + 1e-15);
            } else {
                assert!(w[1].area < w[0].area + 1e-9);
                assert_eq!(w[1].n % 2, 1);
            }
        }
    }

    #[test]
    fn deterministic_traces() {
        let r0 = random_reuleaux(7, 3).unwrap();
        let cfg = OptimizeConfig::maximize();
        let (ra, ta) = run(&r0, &cfg).unwrap();
        let (rb, tb) = run(&r0, &cfg).unwrap();
        assert_eq!(ra.vertices(), rb.vertices());
        assert_eq!(ta.to_csv(), tb.to_csv());
    }

    #[test]
    fn random_generator_is_seeded_and_valid() {
        let a = random_reuleaux(9, 123).unwrap();
        let b = random_reuleaux(9, 123).unwrap();
        assert_eq!(a.vertices(), b.vertices());
        let c = random_reuleaux(9, 124).unwrap();
        assert_ne!(a.vertices(), c.vertices());
        assert!(a.validate(&Tolerances::default()).pass);
    }

    #[test]
    fn ascent_keeps_constraints_tight() {
        let r0 = random_reuleaux(7, 4).unwrap();
        let (r, _) = run(&r0, &OptimizeConfig::maximize()).unwrap();
        let report = r.validate(&Tolerances::default());
        assert!(report.pass);
        assert!(report.max_abs_residual < Tolerances::default().cw);
    }

    #[test]
    fn invalid_config_rejected() {
        let r0 = build_regular_reuleaux(5).unwrap();
        let mut cfg = OptimizeConfig::maximize();
        cfg.step0 = 0.0;
        assert!(run(&r0, &cfg).is_err());
        let mut cfg2 = OptimizeConfig::minimize();
        cfg2.merge_tol = 1e-9;
        assert!(run(&r0, &cfg2).is_err());
    }
}
