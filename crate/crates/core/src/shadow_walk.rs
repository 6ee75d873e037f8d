//! The shadow-vertex simplex method.
//!
//! The walk keeps a vertex basis (d tight constraints) and sweeps a parametric
//! objective `cos(phi) e1 + sin(phi) e2` around the shadow plane. The vertex
//! optimal for the sweep angle traces the boundary of the shadow polygon; each
//! pivot exchanges exactly one tight constraint. The sweep stops when the
//! target objective enters the current vertex's normal cone (optimum), when an
//! improving edge has no blocking constraint (unbounded), or when the step
//! budget runs out (fail).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{axpy, dot, norm, normalize, project, scale, solve_square, sub, Plane2};
use crate::polytope::{ArtificialSetup, LinearSystem, PerturbedPolytope};
use crate::tol;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("start vertex does not project onto the shadow boundary")]
    StartNotOnShadow,
    #[error("degenerate pivot: ties could not be resolved")]
    DegeneratePivot,
    #[error("objective does not lie in the shadow plane")]
    ObjectiveOutsidePlane,
    #[error("start is not a valid vertex basis for this system")]
    InvalidStart,
    #[error("recomputed artificial vertex violates an original constraint")]
    NotAVertex,
    #[error("shadow is unbounded; full sweep is undefined")]
    UnboundedShadow,
}

/// Walk state: d tight constraint indices (sorted) and the vertex they cut.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexBasis {
    pub tight: Vec<usize>,
    pub point: Vec<f64>,
}

impl VertexBasis {
    pub fn new(mut tight: Vec<usize>, point: Vec<f64>) -> Self {
        tight.sort_unstable();
        VertexBasis { tight, point }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepOrientation {
    Clockwise,
    CounterClockwise,
}

#[derive(Debug, Clone, Copy)]
pub struct WalkOptions {
    pub max_steps: usize,
    pub orientation: SweepOrientation,
}

impl Default for WalkOptions {
    fn default() -> Self {
        WalkOptions {
            max_steps: 100_000,
            orientation: SweepOrientation::Clockwise,
        }
    }
}

#[derive(Debug, Clone)]
pub enum WalkOutcome {
    Optimum {
        vertex: VertexBasis,
        steps_taken: usize,
        shadow_path: Vec<[f64; 2]>,
    },
    Unbounded {
        ray: Vec<f64>,
        steps_taken: usize,
        shadow_path: Vec<[f64; 2]>,
    },
    Fail {
        vertex: VertexBasis,
        steps_taken: usize,
        shadow_path: Vec<[f64; 2]>,
    },
}

impl WalkOutcome {
    pub fn steps_taken(&self) -> usize {
        match self {
            WalkOutcome::Optimum { steps_taken, .. }
            | WalkOutcome::Unbounded { steps_taken, .. }
            | WalkOutcome::Fail { steps_taken, .. } => *steps_taken,
        }
    }

    pub fn shadow_path(&self) -> &[[f64; 2]] {
        match self {
            WalkOutcome::Optimum { shadow_path, .. }
            | WalkOutcome::Unbounded { shadow_path, .. }
            | WalkOutcome::Fail { shadow_path, .. } => shadow_path,
        }
    }

    pub fn optimum(&self) -> Option<&VertexBasis> {
        match self {
            WalkOutcome::Optimum { vertex, .. } => Some(vertex),
            _ => None,
        }
    }
}

fn mod_2pi(x: f64) -> f64 {
    x.rem_euclid(2.0 * PI)
}

/// Internal per-vertex data: the representation of the two plane directions in
/// the basis of tight constraint normals.
struct VertexFrame {
    basis_rows: Vec<Vec<f64>>,
    alpha_p: Vec<f64>,
    alpha_q: Vec<f64>,
}

fn vertex_frame<S: LinearSystem>(
    sys: &S,
    tight: &[usize],
    f1: &[f64],
    f2: &[f64],
) -> Result<VertexFrame, WalkError> {
    let basis_rows: Vec<Vec<f64>> = tight.iter().map(|&i| sys.row(i).to_vec()).collect();
    let d = sys.dim();
    let transpose: Vec<Vec<f64>> = (0..d)
        .map(|c| basis_rows.iter().map(|r| r[c]).collect())
        .collect();
    let alpha_p = solve_square(&transpose, f1).map_err(|_| WalkError::DegeneratePivot)?;
    let alpha_q = solve_square(&transpose, f2).map_err(|_| WalkError::DegeneratePivot)?;
    Ok(VertexFrame {
        basis_rows,
        alpha_p,
        alpha_q,
    })
}

/// Representation of `c` in the tight normals; the vertex is optimal for `c`
/// iff every coefficient is nonnegative.
fn objective_coefficients<S: LinearSystem>(
    sys: &S,
    tight: &[usize],
    c: &[f64],
) -> Result<Vec<f64>, WalkError> {
    let d = sys.dim();
    let transpose: Vec<Vec<f64>> = (0..d)
        .map(|col| tight.iter().map(|&i| sys.row(i)[col]).collect())
        .collect();
    solve_square(&transpose, c).map_err(|_| WalkError::DegeneratePivot)
}

fn is_optimal_for<S: LinearSystem>(sys: &S, tight: &[usize], c: &[f64]) -> Result<bool, WalkError> {
    Ok(objective_coefficients(sys, tight, c)?
        .iter()
        .all(|&a| a >= -1e-9))
}

/// Feasible sweep angles at a vertex form an arc: the intersection of the
/// half-turn arcs `|phi - psi_j| <= pi/2` over the restricting rows. Returns
/// a feasible interior angle, or `None` when the arcs are disjoint (the vertex
/// does not project onto the shadow boundary).
fn feasible_angle(frame: &VertexFrame) -> Option<f64> {
    let mut centers: Vec<f64> = frame
        .alpha_p
        .iter()
        .zip(&frame.alpha_q)
        .filter(|(p, q)| p.hypot(**q) > 1e-12)
        .map(|(p, q)| mod_2pi(q.atan2(*p)))
        .collect();
    if centers.is_empty() {
        return None;
    }
    centers.sort_by(|a, b| a.total_cmp(b));
    let m = centers.len();
    let (mut gap_at, mut gap) = (m - 1, centers[0] + 2.0 * PI - centers[m - 1]);
    for i in 0..m - 1 {
        let g = centers[i + 1] - centers[i];
        if g > gap {
            gap = g;
            gap_at = i;
        }
    }
    if gap < PI - tol::ANGLE {
        return None;
    }
    // centers span the arc [first, last] going ccw across the wrap
    let first = centers[(gap_at + 1) % m];
    let last = centers[gap_at] + if gap_at + 1 == m { 0.0 } else { 2.0 * PI };
    let lo = last - PI / 2.0;
    let hi = first + PI / 2.0 + if gap_at + 1 == m { 0.0 } else { 2.0 * PI };
    Some(mod_2pi((lo + hi) / 2.0))
}

struct Pivot {
    leaving_local: usize,
    exit_rel: f64,
    exit_angle: f64,
}

/// Smallest ccw rotation from `phi` at which some coefficient
/// `cos(phi) alpha_p[j] + sin(phi) alpha_q[j]` crosses zero downward.
fn next_exit(frame: &VertexFrame, phi: f64) -> Option<Pivot> {
    let mut best: Option<Pivot> = None;
    for (j, (p, q)) in frame.alpha_p.iter().zip(&frame.alpha_q).enumerate() {
        if p.hypot(*q) <= 1e-12 {
            continue;
        }
        let exit = mod_2pi(q.atan2(*p) + PI / 2.0);
        let mut rel = mod_2pi(exit - phi);
        if rel > 2.0 * PI - tol::ANGLE {
            rel = 0.0;
        }
        let better = match &best {
            None => true,
            Some(b) => rel < b.exit_rel - tol::ANGLE,
        };
        if better {
            best = Some(Pivot {
                leaving_local: j,
                exit_rel: rel,
                exit_angle: exit,
            });
        }
    }
    best
}

fn resolve_point<S: LinearSystem>(sys: &S, tight: &[usize]) -> Result<Vec<f64>, WalkError> {
    let rows: Vec<Vec<f64>> = tight.iter().map(|&i| sys.row(i).to_vec()).collect();
    let rhs: Vec<f64> = tight.iter().map(|&i| sys.rhs(i)).collect();
    solve_square(&rows, &rhs).map_err(|_| WalkError::DegeneratePivot)
}

enum StepResult {
    Moved { tight: Vec<usize>, point: Vec<f64>, exit_angle: f64 },
    Ray { direction: Vec<f64> },
}

/// One pivot: drop the leaving constraint, move along the freed edge until a
/// blocking constraint enters. Lexicographically smallest entering index wins
/// near-ties.
fn pivot_step<S: LinearSystem>(
    sys: &S,
    tight: &[usize],
    point: &[f64],
    frame: &VertexFrame,
    pivot: &Pivot,
) -> Result<StepResult, WalkError> {
    let d = sys.dim();
    let mut unit = vec![0.0; d];
    unit[pivot.leaving_local] = -1.0;
    let dir = solve_square(&frame.basis_rows, &unit).map_err(|_| WalkError::DegeneratePivot)?;

    let mut best_t = f64::INFINITY;
    let mut entering: Option<usize> = None;
    for i in 0..sys.len() {
        if tight.contains(&i) {
            continue;
        }
        let denom = dot(sys.row(i), &dir);
        if denom <= 1e-11 * norm(sys.row(i)).max(1.0) {
            continue;
        }
        let slack = (sys.rhs(i) - dot(sys.row(i), point)).max(0.0);
        let t = slack / denom;
        if t < best_t - 1e-9 * (1.0 + best_t.min(1e300)) {
            best_t = t;
            entering = Some(i);
        } else if (t - best_t).abs() <= 1e-9 * (1.0 + best_t) {
            // tolerance tie: keep the lexicographically smallest index
            if let Some(e) = entering {
                if i < e {
                    entering = Some(i);
                }
            }
        }
    }

    match entering {
        None => Ok(StepResult::Ray {
            direction: normalize(&dir).ok_or(WalkError::DegeneratePivot)?,
        }),
        Some(enter) => {
            let mut new_tight: Vec<usize> = tight
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != pivot.leaving_local)
                .map(|(_, &i)| i)
                .collect();
            new_tight.push(enter);
            new_tight.sort_unstable();
            let new_point = resolve_point(sys, &new_tight)?;
            Ok(StepResult::Moved {
                tight: new_tight,
                point: new_point,
                exit_angle: pivot.exit_angle,
            })
        }
    }
}

fn validate_start<S: LinearSystem>(sys: &S, start: &VertexBasis) -> Result<Vec<f64>, WalkError> {
    if start.tight.len() != sys.dim() {
        return Err(WalkError::InvalidStart);
    }
    if start.tight.iter().any(|&i| i >= sys.len()) {
        return Err(WalkError::InvalidStart);
    }
    let point = resolve_point(sys, &start.tight).map_err(|_| WalkError::InvalidStart)?;
    if norm(&sub(&point, &start.point)) > 1e-6 * (1.0 + norm(&start.point)) {
        return Err(WalkError::InvalidStart);
    }
    if sys.max_violation(&point) > tol::FEASIBILITY {
        return Err(WalkError::InvalidStart);
    }
    Ok(point)
}

/// Shadow-vertex walk: maximize `objective` (which must lie in the span of
/// `plane`) starting from `start`, tracing the shadow boundary in the
/// configured orientation.
pub fn walk<S: LinearSystem>(
    sys: &S,
    plane: &Plane2,
    start: &VertexBasis,
    objective: &[f64],
    opts: &WalkOptions,
) -> Result<WalkOutcome, WalkError> {
    match sweep(sys, plane, start, objective, opts, opts.orientation) {
        Ok(o) => Ok(o),
        Err(SweepAbort::WrongSignRay) => {
            // the ray found first certifies the polytope unbounded but not the
            // objective; the opposite orientation reaches the complementary
            // boundary arc
            let flipped = match opts.orientation {
                SweepOrientation::Clockwise => SweepOrientation::CounterClockwise,
                SweepOrientation::CounterClockwise => SweepOrientation::Clockwise,
            };
            match sweep(sys, plane, start, objective, opts, flipped) {
                Ok(o) => Ok(o),
                Err(SweepAbort::WrongSignRay) => Err(WalkError::DegeneratePivot),
                Err(SweepAbort::Error(e)) => Err(e),
            }
        }
        Err(SweepAbort::Error(e)) => Err(e),
    }
}

enum SweepAbort {
    Error(WalkError),
    WrongSignRay,
}

impl From<WalkError> for SweepAbort {
    fn from(e: WalkError) -> Self {
        SweepAbort::Error(e)
    }
}

fn sweep<S: LinearSystem>(
    sys: &S,
    plane: &Plane2,
    start: &VertexBasis,
    objective: &[f64],
    opts: &WalkOptions,
    orientation: SweepOrientation,
) -> Result<WalkOutcome, SweepAbort> {
    let point = validate_start(sys, start)?;

    // objective must lie in the plane
    let c1 = dot(objective, &plane.e1);
    let c2 = dot(objective, &plane.e2);
    let residual = sub(
        objective,
        &axpy(&scale(&plane.e1, c1), c2, &plane.e2),
    );
    if norm(&residual) > 1e-9 * (1.0 + norm(objective)) {
        return Err(WalkError::ObjectiveOutsidePlane.into());
    }

    // clockwise sweeps run counterclockwise in the mirrored frame (e1, -e2)
    let flip = match orientation {
        SweepOrientation::Clockwise => -1.0,
        SweepOrientation::CounterClockwise => 1.0,
    };
    let f1 = plane.e1.clone();
    let f2 = scale(&plane.e2, flip);

    let mut tight = start.tight.clone();
    let mut point = point;
    let mut shadow_path = vec![project(&point, plane)];

    let frame = vertex_frame(sys, &tight, &f1, &f2)?;
    let Some(mut phi) = feasible_angle(&frame) else {
        return Err(WalkError::StartNotOnShadow.into());
    };

    let mut steps = 0usize;
    let mut stalled = 0usize;
    loop {
        if is_optimal_for(sys, &tight, objective)? {
            return Ok(WalkOutcome::Optimum {
                vertex: VertexBasis::new(tight, point),
                steps_taken: steps,
                shadow_path,
            });
        }
        if steps >= opts.max_steps {
            return Ok(WalkOutcome::Fail {
                vertex: VertexBasis::new(tight, point),
                steps_taken: steps,
                shadow_path,
            });
        }
        let frame = vertex_frame(sys, &tight, &f1, &f2)?;
        let pivot = next_exit(&frame, phi).ok_or(WalkError::DegeneratePivot)?;
        if pivot.exit_rel <= tol::ANGLE {
            stalled += 1;
            if stalled > 4 * sys.len() {
                return Err(WalkError::DegeneratePivot.into());
            }
        } else {
            stalled = 0;
        }
        match pivot_step(sys, &tight, &point, &frame, &pivot)? {
            StepResult::Ray { direction } => {
                return if dot(objective, &direction) > 1e-9 {
                    Ok(WalkOutcome::Unbounded {
                        ray: direction,
                        steps_taken: steps,
                        shadow_path,
                    })
                } else {
                    Err(SweepAbort::WrongSignRay)
                };
            }
            StepResult::Moved {
                tight: t,
                point: p,
                exit_angle,
            } => {
                tight = t;
                point = p;
                phi = exit_angle;
                shadow_path.push(project(&point, plane));
                steps += 1;
            }
        }
    }
}

/// A full 2*pi sweep around the shadow boundary, collecting every vertex
/// visited. Only defined for bounded shadows.
#[derive(Debug, Clone)]
pub struct SweepTrace {
    pub vertices: Vec<VertexBasis>,
    pub projections: Vec<[f64; 2]>,
    pub steps: usize,
    pub closed: bool,
}

pub fn full_sweep<S: LinearSystem>(
    sys: &S,
    plane: &Plane2,
    start: &VertexBasis,
    opts: &WalkOptions,
) -> Result<SweepTrace, WalkError> {
    let point = validate_start(sys, start)?;
    let flip = match opts.orientation {
        SweepOrientation::Clockwise => -1.0,
        SweepOrientation::CounterClockwise => 1.0,
    };
    let f1 = plane.e1.clone();
    let f2 = scale(&plane.e2, flip);

    let mut tight = start.tight.clone();
    let mut point = point;
    let frame = vertex_frame(sys, &tight, &f1, &f2)?;
    let Some(mut phi) = feasible_angle(&frame) else {
        return Err(WalkError::StartNotOnShadow);
    };

    let start_tight = tight.clone();
    let mut trace = SweepTrace {
        vertices: vec![VertexBasis::new(tight.clone(), point.clone())],
        projections: vec![project(&point, plane)],
        steps: 0,
        closed: false,
    };
    let mut swept = 0.0;

    while trace.steps < opts.max_steps {
        let frame = vertex_frame(sys, &tight, &f1, &f2)?;
        let pivot = next_exit(&frame, phi).ok_or(WalkError::DegeneratePivot)?;
        match pivot_step(sys, &tight, &point, &frame, &pivot)? {
            StepResult::Ray { .. } => return Err(WalkError::UnboundedShadow),
            StepResult::Moved {
                tight: t,
                point: p,
                exit_angle,
            } => {
                swept += pivot.exit_rel;
                tight = t;
                point = p;
                phi = exit_angle;
                trace.steps += 1;
                if tight == start_tight && swept >= 2.0 * PI - 1e-6 {
                    trace.closed = true;
                    return Ok(trace);
                }
                if tight == start_tight {
                    // degenerate short cycle; keep sweeping
                    continue;
                }
                trace.vertices.push(VertexBasis::new(tight.clone(), point.clone()));
                trace.projections.push(project(&point, plane));
            }
        }
        if swept >= 2.0 * PI + tol::ANGLE {
            // numeric slip: we passed the full turn without matching the
            // starting basis exactly
            trace.closed = true;
            return Ok(trace);
        }
    }
    Ok(trace)
}

/// Re-solve the artificial vertex under the perturbed right-hand sides and
/// validate it against every constraint (the basis, not the point, is the
/// durable identity of the start vertex).
pub fn find_start_vertex(
    setup: &ArtificialSetup,
    qp: &PerturbedPolytope,
) -> Result<VertexBasis, WalkError> {
    let tight: Vec<usize> = setup.artificial_rows.clone().collect();
    let rows: Vec<Vec<f64>> = tight.iter().map(|&i| qp.row(i).to_vec()).collect();
    let rhs: Vec<f64> = tight.iter().map(|&i| qp.rhs(i)).collect();
    let point = solve_square(&rows, &rhs).map_err(|_| WalkError::NotAVertex)?;
    if qp.max_violation(&point) > tol::FEASIBILITY {
        return Err(WalkError::NotAVertex);
    }
    Ok(VertexBasis::new(tight, point))
}

/// Walk toward `c`; on success, walk from the optimum toward `-c` on the same
/// plane. The second outcome is unset unless the first reached an optimum.
pub fn optimize_pair<S: LinearSystem>(
    sys: &S,
    plane: &Plane2,
    start: &VertexBasis,
    c: &[f64],
    opts: &WalkOptions,
) -> Result<(WalkOutcome, Option<WalkOutcome>), WalkError> {
    let first = walk(sys, plane, start, c, opts)?;
    let second = match &first {
        WalkOutcome::Optimum { vertex, .. } => {
            let minus_c = scale(c, -1.0);
            Some(walk(sys, plane, vertex, &minus_c, opts)?)
        }
        _ => None,
    };
    Ok((first, second))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::orthonormalize;
    use crate::instances;
    use crate::oracle;
    use crate::polytope::{add_artificial_constraints, perturb, Polytope};
    use crate::sampling::{sample_unit_vector, RngStream};

    fn axis_plane_2d() -> Plane2 {
        orthonormalize(&[1.0, 0.0], &[0.0, 1.0]).unwrap()
    }

    #[test]
    fn square_walk_reaches_right_edge() {
        let p = instances::cube(2); // rows: +x, -x, +y, -y
        let plane = axis_plane_2d();
        // vertex (-1, 1): tight rows -x <= 1 (index 1) and +y <= 1 (index 2)
        let start = VertexBasis::new(vec![1, 2], vec![-1.0, 1.0]);
        for orientation in [SweepOrientation::Clockwise, SweepOrientation::CounterClockwise] {
            let opts = WalkOptions {
                max_steps: 10,
                orientation,
            };
            let out = walk(&p, &plane, &start, &[1.0, 0.0], &opts).unwrap();
            match &out {
                WalkOutcome::Optimum { vertex, steps_taken, .. } => {
                    assert!((vertex.point[0] - 1.0).abs() < 1e-9);
                    assert!(*steps_taken <= 2);
                }
                other => panic!("expected optimum, got {other:?}"),
            }
        }
    }

    #[test]
    fn halfplane_walk_detects_unbounded() {
        // {x1 <= 1} padded with non-binding rows to reach n >= d
        let p = Polytope::new(
            vec![vec![1.0, 0.0], vec![1.0, -0.001], vec![1.0, 0.001]],
            vec![1.0, 1.0, 1.0],
        )
        .unwrap();
        let plane = axis_plane_2d();
        // vertex basis: rows 1 and 2 meet at (1, 0)
        let start = VertexBasis::new(vec![1, 2], vec![1.0, 0.0]);
        let out = walk(&p, &plane, &start, &[0.0, 1.0], &WalkOptions::default()).unwrap();
        match out {
            WalkOutcome::Unbounded { ray, .. } => {
                assert!(ray[1] > 0.9, "ray should point along +y, got {ray:?}");
                for i in 0..p.n() {
                    assert!(dot(p.row(i), &ray) <= 1e-9);
                }
            }
            other => panic!("expected unbounded, got {other:?}"),
        }
    }

    #[test]
    fn start_interior_projection_is_rejected() {
        // cube corner whose projection lands strictly inside the shadow of a
        // plane orthogonal-ish to the corner direction: use the plane spanned
        // by (1,1,0)/(0,0,1) and the (1,1,1) corner; its projection lies
        // between the (1,1,-1)/(1,1,1) images but walk on objective in plane.
        let p = instances::cube(3);
        let plane = orthonormalize(&[1.0, 1.0, 0.0], &[0.0, 0.0, 1.0]).unwrap();
        // corner (-1, 1, 1): projects to ((−1+1)/√2, 1) = (0, 1) — interior of
        // the shadow [-√2, √2] x [-1, 1]? No: y = 1 is on the top edge. Use
        // (-1, 1, 0)? not a vertex. Instead corner (-1,1,1) projects to (0,1):
        // lies on the open top edge of the square shadow, hence NOT a hull
        // vertex.
        let start = VertexBasis::new(vec![1, 2, 4], vec![-1.0, 1.0, 1.0]);
        let err = walk(&p, &plane, &start, &[1.0, 1.0, 0.0], &WalkOptions::default()).unwrap_err();
        assert_eq!(err, WalkError::StartNotOnShadow);
    }

    #[test]
    fn objective_must_lie_in_plane() {
        let p = instances::cube(3);
        let plane = orthonormalize(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap();
        let start = VertexBasis::new(vec![0, 2, 4], vec![1.0, 1.0, 1.0]);
        let err = walk(&p, &plane, &start, &[0.0, 0.0, 1.0], &WalkOptions::default()).unwrap_err();
        assert_eq!(err, WalkError::ObjectiveOutsidePlane);
    }

    #[test]
    fn walk_path_matches_oracle_on_perturbed_cube() {
        let p = instances::cube(3);
        let mut rng = RngStream::new(40, 0);
        for trial in 0..30u64 {
            let mut stream = RngStream::new(40, trial + 1);
            let q = perturb(&p, 0.7, &mut stream);
            let v = sample_unit_vector(&mut stream, 3);
            let w = sample_unit_vector(&mut stream, 3);
            let Ok(plane) = orthonormalize(&v, &w) else { continue };
            let (hull, _, e) = oracle::shadow_stats(&q, &plane).unwrap();
            if hull.edge_count < 3 {
                continue;
            }
            // start from a known shadow vertex
            let start_idx = e
                .vertices
                .iter()
                .position(|vx| hull.vertex_index(crate::geometry::project(&vx.point, &plane)).is_some())
                .unwrap();
            let start = VertexBasis::new(
                e.vertices[start_idx].bases[0].clone(),
                e.vertices[start_idx].point.clone(),
            );
            // random in-plane objective
            let t = rng.next_f64() * 2.0 * PI;
            let c = plane.lift([t.cos(), t.sin()]);
            let out = walk(&q, &plane, &start, &c, &WalkOptions::default()).unwrap();
            let vertex = out.optimum().expect("bounded instance must optimize");
            // oracle argmax
            let best = e
                .vertices
                .iter()
                .map(|vx| dot(&c, &vx.point))
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(dot(&c, &vertex.point) >= best - 1e-7);
            // pivot soundness: consecutive path points lie on the hull boundary
            assert!(out.steps_taken() <= hull.edge_count);
        }
    }

    #[test]
    fn full_sweep_visits_exactly_the_shadow_hull() {
        let p = instances::cube(3);
        for trial in 0..25u64 {
            let mut stream = RngStream::new(41, trial);
            let q = perturb(&p, 1.0, &mut stream);
            let v = sample_unit_vector(&mut stream, 3);
            let w = sample_unit_vector(&mut stream, 3);
            let Ok(plane) = orthonormalize(&v, &w) else { continue };
            let (hull, _, e) = oracle::shadow_stats(&q, &plane).unwrap();
            let start_idx = e
                .vertices
                .iter()
                .position(|vx| hull.vertex_index(crate::geometry::project(&vx.point, &plane)).is_some())
                .unwrap();
            let start = VertexBasis::new(
                e.vertices[start_idx].bases[0].clone(),
                e.vertices[start_idx].point.clone(),
            );
            let trace = full_sweep(&q, &plane, &start, &WalkOptions::default()).unwrap();
            assert!(trace.closed);
            assert_eq!(trace.vertices.len(), hull.ordered_vertices.len());
            for pr in &trace.projections {
                assert!(hull.vertex_index(*pr).is_some());
            }
        }
    }

    #[test]
    fn sweep_orientations_agree_on_counts() {
        let p = instances::cube(3);
        let mut stream = RngStream::new(55, 7);
        let q = perturb(&p, 1.0, &mut stream);
        let v = sample_unit_vector(&mut stream, 3);
        let w = sample_unit_vector(&mut stream, 3);
        let plane = orthonormalize(&v, &w).unwrap();
        let (hull, _, e) = oracle::shadow_stats(&q, &plane).unwrap();
        let start_idx = e
            .vertices
            .iter()
            .position(|vx| hull.vertex_index(crate::geometry::project(&vx.point, &plane)).is_some())
            .unwrap();
        let start = VertexBasis::new(
            e.vertices[start_idx].bases[0].clone(),
            e.vertices[start_idx].point.clone(),
        );
        let cw = full_sweep(&q, &plane, &start, &WalkOptions { max_steps: 1000, orientation: SweepOrientation::Clockwise }).unwrap();
        let ccw = full_sweep(&q, &plane, &start, &WalkOptions { max_steps: 1000, orientation: SweepOrientation::CounterClockwise }).unwrap();
        assert_eq!(cw.vertices.len(), ccw.vertices.len());
    }

    #[test]
    fn find_start_vertex_zero_perturbation() {
        let p = instances::cube(3);
        let mut rng = RngStream::new(8, 0);
        let setup = add_artificial_constraints(&p, 3.0, 0.05, &mut rng).unwrap();
        // zero perturbation = lambda -> 0 limit; emulate with explicit zeros
        let qp = crate::polytope::PerturbedPolytope::with_perturbations(
            setup.augmented.clone(),
            vec![0.0; setup.augmented.n()],
            1.0,
        )
        .unwrap();
        let start = find_start_vertex(&setup, &qp).unwrap();
        assert!(norm(&sub(&start.point, &setup.x0)) <= 1e-9);
    }

    #[test]
    fn find_start_vertex_rejects_cutoff() {
        // a constraint passing through x0's location invalidates the vertex
        let p = instances::cube(3);
        let mut rng = RngStream::new(8, 1);
        let setup = add_artificial_constraints(&p, 3.0, 0.05, &mut rng).unwrap();
        let cut = normalize(&scale(&setup.x0, -1.0)).unwrap();
        let mut rows = p.rows().to_vec();
        let mut rhs = p.rhs_vec().to_vec();
        rows.push(cut.clone());
        rhs.push(0.5 * dot(&cut, &scale(&setup.x0, -1.0)).abs()); // cuts x0 off
        let blocked = Polytope::new(rows, rhs).unwrap();
        let setup2 = crate::polytope::with_objective(
            &blocked,
            setup.logk,
            setup.rho,
            setup.objective.clone(),
        )
        .unwrap();
        let qp = crate::polytope::PerturbedPolytope::with_perturbations(
            setup2.augmented.clone(),
            vec![0.0; setup2.augmented.n()],
            1.0,
        )
        .unwrap();
        assert_eq!(find_start_vertex(&setup2, &qp).unwrap_err(), WalkError::NotAVertex);
    }

    #[test]
    fn optimize_pair_on_cube_symmetric() {
        let p = instances::cube(3);
        let mut stream = RngStream::new(60, 0);
        let q = perturb(&p, 0.5, &mut stream);
        let u = sample_unit_vector(&mut stream, 3);
        let c = normalize(&[1.0, 0.3, -0.2]).unwrap();
        let plane = orthonormalize(&c, &u).unwrap();
        let (hull, _, e) = oracle::shadow_stats(&q, &plane).unwrap();
        let start_idx = e
            .vertices
            .iter()
            .position(|vx| hull.vertex_index(crate::geometry::project(&vx.point, &plane)).is_some())
            .unwrap();
        let start = VertexBasis::new(
            e.vertices[start_idx].bases[0].clone(),
            e.vertices[start_idx].point.clone(),
        );
        let (first, second) = optimize_pair(&q, &plane, &start, &c, &WalkOptions::default()).unwrap();
        let x_plus = first.optimum().expect("bounded").clone();
        let x_minus = second.unwrap().optimum().expect("bounded").clone();
        // c . (x+ - x-) >= 0
        assert!(dot(&c, &x_plus.point) - dot(&c, &x_minus.point) >= 0.0);
        // against the oracle
        let best = e.vertices.iter().map(|v| dot(&c, &v.point)).fold(f64::NEG_INFINITY, f64::max);
        let worst = e.vertices.iter().map(|v| dot(&c, &v.point)).fold(f64::INFINITY, f64::min);
        assert!((dot(&c, &x_plus.point) - best).abs() <= 1e-7);
        assert!((dot(&c, &x_minus.point) - worst).abs() <= 1e-7);
    }

    #[test]
    fn fail_returns_budget_steps() {
        let p = instances::cube(3);
        let mut stream = RngStream::new(61, 0);
        let q = perturb(&p, 0.5, &mut stream);
        let v = sample_unit_vector(&mut stream, 3);
        let w = sample_unit_vector(&mut stream, 3);
        let plane = orthonormalize(&v, &w).unwrap();
        let (hull, _, e) = oracle::shadow_stats(&q, &plane).unwrap();
        let start_idx = e
            .vertices
            .iter()
            .position(|vx| {
                hull.vertex_index(crate::geometry::project(&vx.point, &plane)).is_some()
            })
            .unwrap();
        let start = VertexBasis::new(
            e.vertices[start_idx].bases[0].clone(),
            e.vertices[start_idx].point.clone(),
        );
        // pick an objective whose optimum is far from the start in sweep order
        let far = e
            .vertices
            .iter()
            .map(|vx| sub(&vx.point, &start.point))
            .max_by(|a, b| norm(a).total_cmp(&norm(b)))
            .unwrap();
        let c2 = crate::geometry::project(&far, &plane);
        if c2[0].hypot(c2[1]) < 1e-6 {
            return;
        }
        let c = normalize(&plane.lift(c2)).unwrap();
        let opts = WalkOptions { max_steps: 1, ..Default::default() };
        if let WalkOutcome::Fail { steps_taken, .. } = walk(&q, &plane, &start, &c, &opts).unwrap() {
            assert_eq!(steps_taken, 1);
        }
    }

    #[test]
    fn consecutive_bases_differ_in_one_index() {
        let p = instances::cube(3);
        let mut stream = RngStream::new(62, 0);
        let q = perturb(&p, 1.0, &mut stream);
        let v = sample_unit_vector(&mut stream, 3);
        let w = sample_unit_vector(&mut stream, 3);
        let plane = orthonormalize(&v, &w).unwrap();
        let (hull, _, e) = oracle::shadow_stats(&q, &plane).unwrap();
        let start_idx = e
            .vertices
            .iter()
            .position(|vx| hull.vertex_index(crate::geometry::project(&vx.point, &plane)).is_some())
            .unwrap();
        let start = VertexBasis::new(
            e.vertices[start_idx].bases[0].clone(),
            e.vertices[start_idx].point.clone(),
        );
        let trace = full_sweep(&q, &plane, &start, &WalkOptions::default()).unwrap();
        for pair in trace.vertices.windows(2) {
            let shared = pair[0]
                .tight
                .iter()
                .filter(|i| pair[1].tight.contains(i))
                .count();
            assert_eq!(shared, 2, "pivot must exchange exactly one constraint");
        }
        // projected midpoints of consecutive path points lie on the hull boundary
        let m = hull.ordered_vertices.len();
        for pair in trace.projections.windows(2) {
            let mid = [(pair[0][0] + pair[1][0]) / 2.0, (pair[0][1] + pair[1][1]) / 2.0];
            let mut dist = f64::INFINITY;
            for i in 0..m {
                let a = hull.ordered_vertices[i];
                let b = hull.ordered_vertices[(i + 1) % m];
                dist = dist.min(point_segment_distance(mid, a, b));
            }
            assert!(dist <= 1e-7, "midpoint {dist} away from hull boundary");
        }
    }

    fn point_segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
        let ab = [b[0] - a[0], b[1] - a[1]];
        let ap = [p[0] - a[0], p[1] - a[1]];
        let len2 = ab[0] * ab[0] + ab[1] * ab[1];
        let t = if len2 > 0.0 {
            ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let q = [a[0] + t * ab[0], a[1] + t * ab[1]];
        (p[0] - q[0]).hypot(p[1] - q[1])
    }
}
