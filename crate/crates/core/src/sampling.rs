//! Deterministic, seedable random sources: exponential draws, uniform unit
//! vectors, and rho-perturbations of a base direction.
//!
//! Streams are counter-based (ChaCha block cipher in counter mode) so that a
//! `(seed, stream_id)` pair fully determines the draw sequence on every
//! platform, and distinct stream ids give statistically independent streams.
//! Monte Carlo code assigns one stream per trial, `stream_id = trial index`.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{axpy, dot, norm, normalize, scale};
use crate::tol;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SamplingError {
    #[error("base direction must be a unit vector (|1 - norm| <= {})", tol::UNIT)]
    BaseNotUnit,
    #[error("rho must lie in (0, pi)")]
    RhoOutOfRange,
}

/// A seedable, splittable random stream.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha12Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RngStream {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform draw from `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Standard normal via Box-Muller; consumes two uniforms.
    pub fn next_normal(&mut self) -> f64 {
        let u1 = 1.0 - self.next_f64(); // (0, 1], keeps ln finite
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}

/// Inverse-CDF exponential draw with expectation `lambda`.
pub fn sample_exponential(rng: &mut RngStream, lambda: f64) -> f64 {
    assert!(lambda > 0.0, "lambda must be positive");
    exponential_inverse_cdf(rng.next_f64(), lambda)
}

/// `-lambda ln(1 - u)`, exposed for oracle checks of the inverse CDF.
pub fn exponential_inverse_cdf(u: f64, lambda: f64) -> f64 {
    -lambda * (1.0 - u).ln()
}

/// Uniform point on the unit sphere in R^d (normalized Gaussian vector).
pub fn sample_unit_vector(rng: &mut RngStream, d: usize) -> Vec<f64> {
    assert!(d >= 2, "ambient dimension must be at least 2");
    loop {
        let g: Vec<f64> = (0..d).map(|_| rng.next_normal()).collect();
        if let Some(v) = normalize(&g) {
            return v;
        }
    }
}

/// Parameters of a rho-perturbation: angle exponential of expectation `rho`
/// truncated to `[0, pi]`, around the unit direction `base`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RhoPerturbationParams {
    pub rho: f64,
    pub base: Vec<f64>,
}

impl RhoPerturbationParams {
    pub fn new(rho: f64, base: Vec<f64>) -> Result<Self, SamplingError> {
        if !(rho > 0.0 && rho < std::f64::consts::PI) {
            return Err(SamplingError::RhoOutOfRange);
        }
        if (norm(&base) - 1.0).abs() > tol::UNIT {
            return Err(SamplingError::BaseNotUnit);
        }
        Ok(RhoPerturbationParams { rho, base })
    }
}

/// Inverse CDF of the exponential law of expectation `rho` restricted to
/// `[0, pi]`: `F(t) = (1 - e^{-t/rho}) / (1 - e^{-pi/rho})`.
pub fn truncated_exp_angle(rng: &mut RngStream, rho: f64) -> f64 {
    let z = 1.0 - (-std::f64::consts::PI / rho).exp();
    let u = rng.next_f64();
    -rho * (-(u * z)).ln_1p()
}

/// Unit vector at truncated-exponential angle `theta` to `params.base`,
/// uniform among directions at that angle.
pub fn sample_rho_perturbation(rng: &mut RngStream, params: &RhoPerturbationParams) -> Vec<f64> {
    let theta = truncated_exp_angle(rng, params.rho);
    rotate_towards(rng, &params.base, theta)
}

/// `cos(theta) * base + sin(theta) * w` with `w` uniform in the hyperplane
/// orthogonal to `base`.
pub fn rotate_towards(rng: &mut RngStream, base: &[f64], theta: f64) -> Vec<f64> {
    let d = base.len();
    let w = loop {
        let g: Vec<f64> = (0..d).map(|_| rng.next_normal()).collect();
        let ortho = axpy(&g, -dot(&g, base), base);
        if let Some(w) = normalize(&ortho) {
            break w;
        }
    };
    axpy(&scale(base, theta.cos()), theta.sin(), &w)
}
