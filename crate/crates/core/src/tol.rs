//! Global numeric tolerances.
//!
//! Every comparison in the crate goes through one of these constants so that
//! the brute-force oracle and the pivoting solver agree on what counts as a
//! tie. Perturbed instances make exact ties measure-zero; these guards only
//! matter on hand-built degenerate fixtures.

/// Collinearity / hull membership tolerance: points within this distance of a
/// hull edge are treated as interior.
pub const COLLINEAR: f64 = 1e-9;

/// Pivot magnitude below which a square system is reported singular.
pub const PIVOT: f64 = 1e-12;

/// Feasibility slack for constraint satisfaction checks (`a·x <= b + FEASIBILITY`).
pub const FEASIBILITY: f64 = 1e-8;

/// Distance under which two enumerated vertices are considered coincident.
pub const VERTEX_MERGE: f64 = 1e-7;

/// Residual allowed when validating unit norms and orthogonality.
pub const UNIT: f64 = 1e-12;

/// Angular tolerance for sweep-angle comparisons in the shadow walk.
pub const ANGLE: f64 = 1e-10;
