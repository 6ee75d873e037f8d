//! Closed-form evaluators for the shadow-size, angle, and edge-length bounds,
//! plus the exact binomial/harmonic identity behind the max-of-exponentials
//! expectation. Evaluators return raw formula values even when vacuous
//! (probability bounds above 1); display-level clamping is the caller's job.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("invalid bound inputs: {0}")]
    InvalidInputs(String),
    #[error("unknown bound kind `{0}`")]
    UnknownKind(String),
}

/// Shared argument bundle for the bound evaluators.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BoundInputs {
    pub d: usize,
    pub n: usize,
    pub k: f64,
    pub lambda: f64,
    pub rho: f64,
    pub t: f64,
    pub epsilon: f64,
}

impl BoundInputs {
    pub fn validate(&self) -> Result<(), BoundsError> {
        let fail = |m: &str| Err(BoundsError::InvalidInputs(m.to_string()));
        if self.d < 3 {
            return fail("d must be at least 3");
        }
        if self.n < self.d {
            return fail("n must be at least d");
        }
        if self.k < 1.0 {
            return fail("k must be at least 1");
        }
        if !(self.lambda > 0.0) {
            return fail("lambda must be positive");
        }
        if !(self.rho > 0.0 && self.rho < 1.0 / (self.d as f64).sqrt()) {
            return fail("rho must lie in (0, 1/sqrt(d))");
        }
        if !(self.t > 1.0) {
            return fail("t must exceed 1");
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return fail("epsilon must lie in (0, 1)");
        }
        Ok(())
    }
}

pub type Rational = Ratio<i128>;

/// n-th harmonic number, exact and as a double. Exact arithmetic is reliable
/// for n <= 30 (the identity-check range); i128 ratios stay far from overflow
/// there.
pub fn harmonic(n: u32) -> (Rational, f64) {
    assert!(n >= 1);
    let mut exact = Rational::new(0, 1);
    for k in 1..=n {
        exact += Rational::new(1, k as i128);
    }
    let value = *exact.numer() as f64 / *exact.denom() as f64;
    (exact, value)
}

pub fn harmonic_f64(n: u32) -> f64 {
    harmonic(n).1
}

fn binomial_exact(n: u32, k: u32) -> i128 {
    let mut c: i128 = 1;
    for i in 1..=k as i128 {
        c = c * (n as i128 - k as i128 + i) / i;
    }
    c
}

/// Verifies `sum_{k=1}^{n} (-1)^{k+1} C(n,k) / k = H_n` in exact rationals.
pub fn binomial_identity_check(n: u32) -> bool {
    assert!(n <= 30, "exact arithmetic range is n <= 30");
    let mut sum = Rational::new(0, 1);
    for k in 1..=n {
        let term = Rational::new(binomial_exact(n, k), k as i128);
        if k % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum == harmonic(n).0
}

/// Expected shadow size bound in the k-round case:
/// `(16 sqrt(2) / 3) * pi k (1 + lambda H_n) sqrt(d) n / lambda`.
pub fn shadow_bound_round(inputs: &BoundInputs) -> f64 {
    let h = harmonic_f64(inputs.n as u32);
    (16.0 * 2f64.sqrt() / 3.0) * PI * inputs.k * (1.0 + inputs.lambda * h)
        * (inputs.d as f64).sqrt()
        * inputs.n as f64
        / inputs.lambda
}

/// Expected shadow size bound in the non-k-round case:
/// `26 pi t (1 + lambda H_n) sqrt(d) n / (lambda rho)`.
pub fn shadow_bound_nonround(inputs: &BoundInputs) -> f64 {
    let h = harmonic_f64(inputs.n as u32);
    26.0 * PI * inputs.t * (1.0 + inputs.lambda * h) * (inputs.d as f64).sqrt()
        * inputs.n as f64
        / (inputs.lambda * inputs.rho)
}

/// `P[cos(theta_I(V)) < eps | S_I(V)] <= ((d-2)/2) eps^2` for uniform planes.
pub fn angle_bound_round(d: usize, epsilon: f64) -> f64 {
    assert!(d >= 2);
    (d as f64 - 2.0) / 2.0 * epsilon * epsilon
}

/// `P[cos(theta_I(V)) < eps | S_I(V)] <= 3.4 (eps/rho)^2` for rho-perturbed planes.
pub fn angle_bound_perturbed(epsilon: f64, rho: f64) -> f64 {
    assert!(epsilon > 0.0 && rho > 0.0);
    3.4 * (epsilon / rho) * (epsilon / rho)
}

/// Lower bound on the expected shadow edge length:
/// `(3 sqrt(2) / 16) * lambda / (n sqrt(d))`.
pub fn edge_length_lower_bound(d: usize, n: usize, lambda: f64) -> f64 {
    (3.0 * 2f64.sqrt() / 16.0) * lambda / (n as f64 * (d as f64).sqrt())
}

/// Edge-length tail: `P[delta(I) < eps | A(I)] <= n eps / (2 lambda)`.
pub fn delta_tail_bound(n: usize, lambda: f64, epsilon: f64) -> f64 {
    n as f64 * epsilon / (2.0 * lambda)
}

/// Overview-style bound on the expected maximum perturbation,
/// `lambda ln(n e)`; the exact expectation is `lambda H_n`.
pub fn max_perturbation_bound_overview(n: usize, lambda: f64) -> f64 {
    lambda * (n as f64 * std::f64::consts::E).ln()
}

/// Exact expected maximum of n independent exponentials of expectation lambda.
pub fn max_perturbation_expectation(n: usize, lambda: f64) -> f64 {
    lambda * harmonic_f64(n as u32)
}

/// Coefficient of the original non-round shadow bound, kept only for
/// side-by-side comparison with [`shadow_bound_nonround`]'s 26.
pub const ORIGINAL_NONROUND_COEFF: f64 = 42.0;

/// Original edge-length coefficient 1/6, superseded by 3*sqrt(2)/16.
pub const ORIGINAL_EDGE_LENGTH_COEFF: f64 = 1.0 / 6.0;

/// Named bound evaluators, selectable at runtime (CLI `bounds --kind ...`).
pub struct BoundEvaluator {
    pub kind: &'static str,
    pub describe: &'static str,
    pub eval: fn(&BoundInputs) -> f64,
}

pub static BOUND_REGISTRY: &[BoundEvaluator] = &[
    BoundEvaluator {
        kind: "shadow-round",
        describe: "expected shadow size, k-round case",
        eval: shadow_bound_round,
    },
    BoundEvaluator {
        kind: "shadow-nonround",
        describe: "expected shadow size within B(0,t), non-round case",
        eval: shadow_bound_nonround,
    },
    BoundEvaluator {
        kind: "angle-round",
        describe: "conditional angle tail, uniform planes",
        eval: |i| angle_bound_round(i.d, i.epsilon),
    },
    BoundEvaluator {
        kind: "angle-perturbed",
        describe: "conditional angle tail, rho-perturbed planes",
        eval: |i| angle_bound_perturbed(i.epsilon, i.rho),
    },
    BoundEvaluator {
        kind: "edge-length-lower",
        describe: "lower bound on expected shadow edge length",
        eval: |i| edge_length_lower_bound(i.d, i.n, i.lambda),
    },
    BoundEvaluator {
        kind: "delta-tail",
        describe: "edge length tail P[delta < eps | edge]",
        eval: |i| delta_tail_bound(i.n, i.lambda, i.epsilon),
    },
    BoundEvaluator {
        kind: "max-exp",
        describe: "exact expected maximum perturbation, lambda * H_n",
        eval: |i| max_perturbation_expectation(i.n, i.lambda),
    },
    BoundEvaluator {
        kind: "max-exp-overview",
        describe: "overview bound lambda * ln(n e)",
        eval: |i| max_perturbation_bound_overview(i.n, i.lambda),
    },
];

pub fn find_bound(kind: &str) -> Result<&'static BoundEvaluator, BoundsError> {
    BOUND_REGISTRY
        .iter()
        .find(|b| b.kind == kind)
        .ok_or_else(|| BoundsError::UnknownKind(kind.to_string()))
}
