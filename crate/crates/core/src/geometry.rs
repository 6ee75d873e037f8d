//! Dense small-dimension linear algebra, 2-D projection, and a planar convex
//! hull. Everything here is pure and allocation-happy; ambient dimensions stay
//! in the single digits.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tol;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("input vectors are (nearly) linearly dependent")]
    DegenerateSpan,
    #[error("square system is singular (pivot below {} in magnitude)", tol::PIVOT)]
    SingularSystem,
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

pub fn scale(v: &[f64], s: f64) -> Vec<f64> {
    v.iter().map(|x| x * s).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `a + s*b`
pub fn axpy(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub fn normalize(v: &[f64]) -> Option<Vec<f64>> {
    let n = norm(v);
    if n <= tol::PIVOT {
        None
    } else {
        Some(scale(v, 1.0 / n))
    }
}

/// Matrix-vector product for a row-major dense matrix.
pub fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, v)).collect()
}

/// An ordered orthonormal pair spanning a 2-D subspace of R^d.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Plane2 {
    pub e1: Vec<f64>,
    pub e2: Vec<f64>,
}

impl Plane2 {
    pub fn dim(&self) -> usize {
        self.e1.len()
    }

    /// Lift plane coordinates back into R^d.
    pub fn lift(&self, xy: [f64; 2]) -> Vec<f64> {
        axpy(&scale(&self.e1, xy[0]), xy[1], &self.e2)
    }
}

/// Gram-Schmidt on `(a, b)`: `e1 = a/|a|`, `e2` the normalized residual of `b`.
pub fn orthonormalize(a: &[f64], b: &[f64]) -> Result<Plane2, GeometryError> {
    assert_eq!(a.len(), b.len());
    let e1 = normalize(a).ok_or(GeometryError::DegenerateSpan)?;
    let residual = axpy(b, -dot(b, &e1), &e1);
    // sin(angle between a and b) = |residual| / |b|
    if norm(&residual) <= 1e-9 * norm(b) {
        return Err(GeometryError::DegenerateSpan);
    }
    let e2 = normalize(&residual).ok_or(GeometryError::DegenerateSpan)?;
    Ok(Plane2 { e1, e2 })
}

/// Orthogonal projection of `p` onto the plane, in plane coordinates.
pub fn project(p: &[f64], plane: &Plane2) -> [f64; 2] {
    [dot(p, &plane.e1), dot(p, &plane.e2)]
}

/// Solve `M x = rhs` by Gaussian elimination with partial pivoting.
pub fn solve_square(m: &[Vec<f64>], rhs: &[f64]) -> Result<Vec<f64>, GeometryError> {
    let d = rhs.len();
    debug_assert!(m.len() == d && m.iter().all(|r| r.len() == d));
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut x: Vec<f64> = rhs.to_vec();
    for col in 0..d {
        let (piv, piv_val) = (col..d)
            .map(|r| (r, a[r][col].abs()))
            .max_by(|l, r| l.1.total_cmp(&r.1))
            .unwrap();
        if piv_val < tol::PIVOT {
            return Err(GeometryError::SingularSystem);
        }
        a.swap(col, piv);
        x.swap(col, piv);
        for r in col + 1..d {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..d {
                    a[r][c] -= f * a[col][c];
                }
                x[r] -= f * x[col];
            }
        }
    }
    for col in (0..d).rev() {
        x[col] /= a[col][col];
        for r in 0..col {
            x[r] -= a[r][col] * x[col];
        }
    }
    Ok(x)
}

/// Determinant via the same elimination as [`solve_square`].
pub fn determinant(m: &[Vec<f64>]) -> f64 {
    let d = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut det = 1.0;
    for col in 0..d {
        let (piv, piv_val) = (col..d)
            .map(|r| (r, a[r][col].abs()))
            .max_by(|l, r| l.1.total_cmp(&r.1))
            .unwrap();
        if piv_val < tol::PIVOT {
            return 0.0;
        }
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..d {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..d {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    det
}

/// A strictly convex planar hull in counterclockwise order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Hull2 {
    pub ordered_vertices: Vec<[f64; 2]>,
    pub edge_count: usize,
    pub perimeter: f64,
}

impl Hull2 {
    /// Index of the hull vertex within `tol::VERTEX_MERGE` of `p`, if any.
    pub fn vertex_index(&self, p: [f64; 2]) -> Option<usize> {
        self.ordered_vertices
            .iter()
            .position(|v| (v[0] - p[0]).hypot(v[1] - p[1]) <= tol::VERTEX_MERGE)
    }
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Monotone-chain convex hull. Points within [`tol::COLLINEAR`] of a hull edge
/// are dropped, so the result is in strictly convex position. Degenerate
/// inputs produce `edge_count` 0 (a point) or 1 (a segment).
pub fn convex_hull_2d(points: &[[f64; 2]]) -> Hull2 {
    let mut pts: Vec<[f64; 2]> = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup_by(|a, b| (a[0] - b[0]).hypot(a[1] - b[1]) <= tol::COLLINEAR);

    if pts.len() <= 2 {
        let perimeter = if pts.len() == 2 {
            (pts[0][0] - pts[1][0]).hypot(pts[0][1] - pts[1][1])
        } else {
            0.0
        };
        let edge_count = pts.len().saturating_sub(1);
        return Hull2 {
            ordered_vertices: pts,
            edge_count,
            perimeter,
        };
    }

    // A point survives only if it sits strictly left of the chord spanned by
    // its neighbors, at distance > COLLINEAR (cross = dist * chord length).
    let strict_turn = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| {
        let chord = (b[0] - o[0]).hypot(b[1] - o[1]);
        cross(o, a, b) > tol::COLLINEAR * chord.max(1e-300)
    };

    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && !strict_turn(lower[lower.len() - 2], lower[lower.len() - 1], p) {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && !strict_turn(upper[upper.len() - 2], upper[upper.len() - 1], p) {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);

    if lower.len() == 2 {
        let perimeter = (lower[0][0] - lower[1][0]).hypot(lower[0][1] - lower[1][1]);
        return Hull2 {
            ordered_vertices: lower,
            edge_count: 1,
            perimeter,
        };
    }

    let m = lower.len();
    let perimeter: f64 = (0..m)
        .map(|i| {
            let a = lower[i];
            let b = lower[(i + 1) % m];
            (a[0] - b[0]).hypot(a[1] - b[1])
        })
        .sum();
    Hull2 {
        ordered_vertices: lower,
        edge_count: m,
        perimeter,
    }
}
