//! Constraint-system data model: polytopes in `a_i^T x <= b_i` form with all
//! `b_i > 0`, right-hand-side perturbation, polar points, roundness reports,
//! and the artificial-constraint augmentation that manufactures a known
//! starting vertex for the shadow walk.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{dot, norm, normalize, scale, solve_square};
use crate::oracle::Enumeration;
use crate::sampling::{sample_exponential, sample_rho_perturbation, RhoPerturbationParams, RngStream};
use crate::tol;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolytopeError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("artificial constraint system is singular")]
    SingularSystem,
    #[error("input polytope is unbounded")]
    UnboundedInput,
}

/// Anything that exposes rows `a_i` and right-hand sides: plain polytopes and
/// their perturbations. The walk and the oracle are generic over this.
pub trait LinearSystem {
    fn dim(&self) -> usize;
    fn len(&self) -> usize;
    fn row(&self, i: usize) -> &[f64];
    fn rhs(&self, i: usize) -> f64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Max of `a_i . x - rhs_i` over all rows; feasible iff <= tolerance.
    fn max_violation(&self, x: &[f64]) -> f64 {
        (0..self.len())
            .map(|i| dot(self.row(i), x) - self.rhs(i))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn is_feasible(&self, x: &[f64]) -> bool {
        self.max_violation(x) <= tol::FEASIBILITY
    }
}

/// `{ x | a_i^T x <= b_i, i in [n] }` with every `b_i > 0` (the origin is
/// strictly interior by construction).
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    d: usize,
    n: usize,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    pub name: Option<String>,
}

impl Polytope {
    pub fn new(rows: Vec<Vec<f64>>, rhs: Vec<f64>) -> Result<Self, PolytopeError> {
        let n = rows.len();
        if n == 0 {
            return Err(PolytopeError::Invariant("no constraints".into()));
        }
        let d = rows[0].len();
        if d < 2 {
            return Err(PolytopeError::Invariant("dimension must be at least 2".into()));
        }
        if rows.iter().any(|r| r.len() != d) {
            return Err(PolytopeError::Invariant("ragged constraint matrix".into()));
        }
        if rhs.len() != n {
            return Err(PolytopeError::Invariant("rhs length differs from row count".into()));
        }
        if n < d {
            return Err(PolytopeError::Invariant(format!(
                "need at least d = {d} constraints, got {n}"
            )));
        }
        if rows.iter().flatten().chain(rhs.iter()).any(|x| !x.is_finite()) {
            return Err(PolytopeError::Invariant("non-finite entry".into()));
        }
        for (i, b) in rhs.iter().enumerate() {
            if *b <= 0.0 {
                return Err(PolytopeError::Invariant(format!("b[{i}] = {b} is not positive")));
            }
        }
        for (i, r) in rows.iter().enumerate() {
            if norm(r) <= tol::PIVOT {
                return Err(PolytopeError::Invariant(format!("row {i} is (near) zero")));
            }
        }
        Ok(Polytope {
            d,
            n,
            rows,
            rhs,
            name: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn rhs_vec(&self) -> &[f64] {
        &self.rhs
    }

    /// The polar points `a_i / b_i`; the polytope is bounded iff the origin
    /// lies strictly inside their convex hull.
    pub fn polar_points(&self) -> Vec<Vec<f64>> {
        self.rows
            .iter()
            .zip(&self.rhs)
            .map(|(a, b)| scale(a, 1.0 / b))
            .collect()
    }

    pub fn from_json_str(text: &str) -> Result<Self, PolytopeError> {
        let doc: PolytopeDoc =
            serde_json::from_str(text).map_err(|e| PolytopeError::Parse(e.to_string()))?;
        doc.into_polytope()
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self, PolytopeError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PolytopeError::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn to_document(&self) -> PolytopeDoc {
        PolytopeDoc {
            name: self.name.clone(),
            d: self.d,
            n: self.n,
            a: self.rows.clone(),
            b: self.rhs.clone(),
        }
    }
}

impl LinearSystem for Polytope {
    fn dim(&self) -> usize {
        self.d
    }
    fn len(&self) -> usize {
        self.n
    }
    fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }
    fn rhs(&self, i: usize) -> f64 {
        self.rhs[i]
    }
}

/// On-disk document form: `{"d": .., "n": .., "A": [[..]], "b": [..]}` with an
/// optional `name`. Unknown fields are rejected.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub d: usize,
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

impl PolytopeDoc {
    fn into_polytope(self) -> Result<Polytope, PolytopeError> {
        if self.a.len() != self.n {
            return Err(PolytopeError::Parse(format!(
                "A has {} rows but n = {}",
                self.a.len(),
                self.n
            )));
        }
        if self.a.iter().any(|r| r.len() != self.d) {
            return Err(PolytopeError::Parse("row width differs from d".into()));
        }
        let mut p = Polytope::new(self.a, self.b)?;
        p.name = self.name;
        Ok(p)
    }
}

/// A polytope together with realized exponential right-hand-side inflations.
#[derive(Debug, Clone)]
pub struct PerturbedPolytope {
    base: Polytope,
    r: Vec<f64>,
    lambda: f64,
    effective: Vec<f64>,
}

impl PerturbedPolytope {
    /// Wrap explicit perturbation values (tests, or restricting an augmented
    /// system back to its original rows).
    pub fn with_perturbations(
        base: Polytope,
        r: Vec<f64>,
        lambda: f64,
    ) -> Result<Self, PolytopeError> {
        if r.len() != base.n {
            return Err(PolytopeError::Invariant(
                "perturbation length differs from row count".into(),
            ));
        }
        if r.iter().any(|x| *x < 0.0 || !x.is_finite()) {
            return Err(PolytopeError::Invariant(
                "perturbations must be finite and nonnegative".into(),
            ));
        }
        let effective = base.rhs.iter().zip(&r).map(|(b, r)| b + r).collect();
        Ok(PerturbedPolytope {
            base,
            r,
            lambda,
            effective,
        })
    }

    pub fn base(&self) -> &Polytope {
        &self.base
    }

    pub fn perturbations(&self) -> &[f64] {
        &self.r
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `max_i r_i`.
    pub fn max_perturbation(&self) -> f64 {
        self.r.iter().fold(0.0f64, |a, b| a.max(*b))
    }

    /// `max_i r_i / b_i`: `Q` is contained in `(1 + this) * P` row-wise.
    pub fn max_relative_perturbation(&self) -> f64 {
        self.r
            .iter()
            .zip(self.base.rhs_vec())
            .fold(0.0f64, |a, (r, b)| a.max(r / b))
    }
}

impl LinearSystem for PerturbedPolytope {
    fn dim(&self) -> usize {
        self.base.d
    }
    fn len(&self) -> usize {
        self.base.n
    }
    fn row(&self, i: usize) -> &[f64] {
        &self.base.rows[i]
    }
    fn rhs(&self, i: usize) -> f64 {
        self.effective[i]
    }
}

/// Inflate each right-hand side by an independent exponential of expectation
/// `lambda`.
pub fn perturb(p: &Polytope, lambda: f64, rng: &mut RngStream) -> PerturbedPolytope {
    let r: Vec<f64> = (0..p.n).map(|_| sample_exponential(rng, lambda)).collect();
    let effective = p.rhs.iter().zip(&r).map(|(b, r)| b + r).collect();
    PerturbedPolytope {
        base: p.clone(),
        r,
        lambda,
        effective,
    }
}

/// `B(0,1) in P` (inner) and `P in B(0,k)` (outer) report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RoundnessReport {
    pub inner_ok: bool,
    pub outer_radius: f64,
    pub is_k_round: bool,
}

/// Roundness against an exhaustive vertex enumeration of `p` (the caller
/// supplies the oracle output; unbounded inputs are rejected).
pub fn roundness(
    p: &Polytope,
    k: f64,
    enumeration: &Enumeration,
) -> Result<RoundnessReport, PolytopeError> {
    assert!(k >= 1.0, "k must be at least 1");
    if !enumeration.rays.is_empty() {
        return Err(PolytopeError::UnboundedInput);
    }
    let inner_ok = p
        .rows
        .iter()
        .zip(&p.rhs)
        .all(|(a, b)| b / norm(a) >= 1.0 - tol::COLLINEAR);
    let outer_radius = enumeration
        .vertices
        .iter()
        .map(|v| norm(&v.point))
        .fold(0.0f64, f64::max);
    Ok(RoundnessReport {
        inner_ok,
        outer_radius,
        is_k_round: inner_ok && outer_radius <= k + tol::COLLINEAR,
    })
}

/// The augmented polytope `P'` with `d` extra facets, the vertex they cut out,
/// and the perturbed objective used by the walk.
#[derive(Debug, Clone)]
pub struct ArtificialSetup {
    pub augmented: Polytope,
    pub x0: Vec<f64>,
    /// Unit objective: a rho-perturbation of `(1,..,1)/sqrt(d)`.
    pub objective: Vec<f64>,
    pub logk: f64,
    pub rho: f64,
    /// Indices of the added rows inside `augmented` (`n .. n+d`).
    pub artificial_rows: std::ops::Range<usize>,
}

impl ArtificialSetup {
    pub fn is_artificial(&self, row: usize) -> bool {
        self.artificial_rows.contains(&row)
    }
}

/// Row directions `w_i = -(sum_j e_j) + 2 sqrt(2d) e_i / logk^2`, scaled to
/// `w_bar_i = 3 w_i / (4 |w_i|)`.
pub fn artificial_rows(d: usize, logk: f64) -> Vec<Vec<f64>> {
    let gamma = 2.0 * (2.0 * d as f64).sqrt() / (logk * logk);
    (0..d)
        .map(|i| {
            let mut w: Vec<f64> = vec![-1.0; d];
            w[i] += gamma;
            scale(&w, 3.0 / (4.0 * norm(&w)))
        })
        .collect()
}

/// Augment `p` with the `d` artificial facets (`w_bar_i^T x <= 1`), solve for
/// the vertex `x0` they define, and draw the objective as a rho-perturbation
/// of the unit diagonal direction.
pub fn add_artificial_constraints(
    p: &Polytope,
    logk: f64,
    rho: f64,
    rng: &mut RngStream,
) -> Result<ArtificialSetup, PolytopeError> {
    let d = p.d;
    let diag = normalize(&vec![1.0; d]).expect("unit diagonal");
    let params = RhoPerturbationParams::new(rho, diag)
        .map_err(|e| PolytopeError::Invariant(e.to_string()))?;
    let objective = sample_rho_perturbation(rng, &params);
    with_objective(p, logk, rho, objective)
}

/// As [`add_artificial_constraints`] but with a caller-chosen objective;
/// useful for deterministic fixtures.
pub fn with_objective(
    p: &Polytope,
    logk: f64,
    rho: f64,
    objective: Vec<f64>,
) -> Result<ArtificialSetup, PolytopeError> {
    let d = p.d;
    if !(logk > 1.0) {
        return Err(PolytopeError::Invariant("logk must exceed 1".into()));
    }
    if !(rho > 0.0 && rho < 1.0 / (d as f64).sqrt()) {
        return Err(PolytopeError::Invariant("rho must lie in (0, 1/sqrt(d))".into()));
    }
    if (norm(&objective) - 1.0).abs() > 1e-9 {
        return Err(PolytopeError::Invariant("objective must be a unit vector".into()));
    }
    let extra = artificial_rows(d, logk);
    let x0 = solve_square(&extra, &vec![1.0; d]).map_err(|_| PolytopeError::SingularSystem)?;

    let mut rows = p.rows.clone();
    let mut rhs = p.rhs.clone();
    rows.extend(extra);
    rhs.extend(std::iter::repeat(1.0).take(d));
    let augmented = Polytope::new(rows, rhs)?;
    Ok(ArtificialSetup {
        augmented,
        x0,
        objective,
        logk,
        rho,
        artificial_rows: p.n..p.n + d,
    })
}
