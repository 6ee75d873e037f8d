//! Brute-force ground truth at desk scale: exhaustive vertex enumeration over
//! all d-subsets of constraints, edge extraction, shadow statistics for a
//! given plane, and a complete boundedness decision via recession-ray search.
//!
//! Everything here is deliberately exponential and guarded by a size budget;
//! it exists to check the walking solver and to drive the Monte Carlo
//! estimates, not to scale.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{convex_hull_2d, dot, norm, normalize, project, solve_square, sub, Hull2, Plane2};
use crate::polytope::LinearSystem;
use crate::tol;

pub const MAX_DIM: usize = 7;
pub const MAX_ROWS: usize = 38;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("instance exceeds the enumeration budget (d <= {MAX_DIM}, n <= {MAX_ROWS})")]
    BudgetExceeded,
}

/// A geometric vertex: possibly several bases resolve to the same point under
/// degeneracy, and the tight set is computed geometrically.
#[derive(Debug, Clone)]
pub struct GeoVertex {
    pub point: Vec<f64>,
    /// Every nonsingular feasible d-subset of constraints defining this point.
    pub bases: Vec<Vec<usize>>,
    /// All constraints tight at the point (superset of each basis).
    pub tight: Vec<usize>,
}

#[derive(Debug, Clone, Default)]
pub struct Enumeration {
    pub vertices: Vec<GeoVertex>,
    pub rays: Vec<Vec<f64>>,
}

fn check_budget<S: LinearSystem>(sys: &S) -> Result<(), OracleError> {
    if sys.dim() > MAX_DIM || sys.len() > MAX_ROWS {
        return Err(OracleError::BudgetExceeded);
    }
    Ok(())
}

/// Visit every k-subset of `0..n` in lexicographic order.
fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// One unit direction spanning the nullspace of the given rows, or `None` if
/// the rows already span everything.
fn nullspace_direction(rows: &[&[f64]], d: usize) -> Option<Vec<f64>> {
    let m = rows.len();
    let mut a: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut r = 0;
    for col in 0..d {
        if r >= m {
            break;
        }
        let (pr, pv) = (r..m)
            .map(|i| (i, a[i][col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if pv < tol::PIVOT {
            continue;
        }
        a.swap(r, pr);
        let piv = a[r][col];
        for x in a[r].iter_mut() {
            *x /= piv;
        }
        let src = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            let f = row[col];
            if i != r && f != 0.0 {
                for (x, s) in row.iter_mut().zip(&src) {
                    *x -= f * s;
                }
            }
        }
        pivots.push((r, col));
        r += 1;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free = (0..d).find(|c| !pivot_cols.contains(c))?;
    let mut q = vec![0.0; d];
    q[free] = 1.0;
    for &(pr, pc) in &pivots {
        q[pc] = -a[pr][free];
    }
    normalize(&q)
}

/// All vertices (deduplicated geometrically, every basis kept) and all
/// extreme recession rays.
pub fn enumerate_vertices<S: LinearSystem>(sys: &S) -> Result<Enumeration, OracleError> {
    check_budget(sys)?;
    let d = sys.dim();
    let n = sys.len();
    let mut vertices: Vec<GeoVertex> = Vec::new();

    for_each_combination(n, d, |idx| {
        let m: Vec<Vec<f64>> = idx.iter().map(|&i| sys.row(i).to_vec()).collect();
        let rhs: Vec<f64> = idx.iter().map(|&i| sys.rhs(i)).collect();
        let Ok(x) = solve_square(&m, &rhs) else {
            return;
        };
        if !sys.is_feasible(&x) {
            return;
        }
        if let Some(v) = vertices
            .iter_mut()
            .find(|v| norm(&sub(&v.point, &x)) <= tol::VERTEX_MERGE)
        {
            v.bases.push(idx.to_vec());
        } else {
            let tight: Vec<usize> = (0..n)
                .filter(|&i| (dot(sys.row(i), &x) - sys.rhs(i)).abs() <= tol::FEASIBILITY)
                .collect();
            vertices.push(GeoVertex {
                point: x,
                bases: vec![idx.to_vec()],
                tight,
            });
        }
    });

    let mut rays: Vec<Vec<f64>> = Vec::new();
    let mut push_ray = |rays: &mut Vec<Vec<f64>>, q: Vec<f64>| {
        if rays
            .iter()
            .all(|r| norm(&sub(r, &q)) > tol::VERTEX_MERGE)
        {
            rays.push(q);
        }
    };

    // Lineality first: if the rows do not span R^d, any nullspace direction
    // recedes in both signs.
    let all_rows: Vec<&[f64]> = (0..n).map(|i| sys.row(i)).collect();
    if let Some(q) = nullspace_direction(&all_rows, d) {
        push_ray(&mut rays, q.clone());
        push_ray(&mut rays, q.iter().map(|x| -x).collect());
    } else {
        // Pointed recession cone: every extreme ray is the nullspace of some
        // d-1 rows. Check both orientations for feasibility at infinity.
        for_each_combination(n, d - 1, |idx| {
            let rows: Vec<&[f64]> = idx.iter().map(|&i| sys.row(i)).collect();
            let Some(q) = nullspace_direction(&rows, d) else {
                return;
            };
            for cand in [q.clone(), q.iter().map(|x| -x).collect::<Vec<f64>>()] {
                let recedes = (0..n).all(|i| dot(sys.row(i), &cand) <= tol::COLLINEAR);
                if recedes {
                    push_ray(&mut rays, cand);
                }
            }
        });
    }

    Ok(Enumeration { vertices, rays })
}

/// Geometry-only edge data: the (d-1)-subset of constraints shared by two
/// adjacent vertices, and the edge length on the polytope.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeGeometry {
    /// d-1 independent constraint indices defining the edge line.
    pub tight: Vec<usize>,
    /// Indices into the enumeration's vertex list.
    pub endpoints: (usize, usize),
    /// Edge length delta(I) in the ambient space.
    pub delta: f64,
}

/// Greedily pick `target` independent rows out of `candidates`.
fn independent_subset<S: LinearSystem>(
    sys: &S,
    candidates: &[usize],
    target: usize,
) -> Option<Vec<usize>> {
    let d = sys.dim();
    let mut chosen: Vec<usize> = Vec::new();
    for &i in candidates {
        if chosen.len() == target {
            break;
        }
        let mut rows: Vec<&[f64]> = chosen.iter().map(|&j| sys.row(j)).collect();
        rows.push(sys.row(i));
        // full-rank check: rank of rows equals rows.len() iff the nullspace
        // has dimension d - rows.len()
        if rank(&rows, d) == rows.len() {
            chosen.push(i);
        }
    }
    (chosen.len() == target).then_some(chosen)
}

fn rank(rows: &[&[f64]], d: usize) -> usize {
    let m = rows.len();
    let mut a: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
    let mut r = 0;
    for col in 0..d {
        if r >= m {
            break;
        }
        let (pr, pv) = (r..m)
            .map(|i| (i, a[i][col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if pv < tol::PIVOT {
            continue;
        }
        a.swap(r, pr);
        for i in r + 1..m {
            let f = a[i][col] / a[r][col];
            if f != 0.0 {
                for c in col..d {
                    a[i][c] -= f * a[r][c];
                }
            }
        }
        r += 1;
    }
    r
}

/// Edges = pairs of vertices whose tight sets share at least d-1 independent
/// constraints.
pub fn enumerate_edges<S: LinearSystem>(sys: &S, e: &Enumeration) -> Vec<EdgeGeometry> {
    let d = sys.dim();
    let mut edges = Vec::new();
    for i in 0..e.vertices.len() {
        for j in i + 1..e.vertices.len() {
            let shared: Vec<usize> = e.vertices[i]
                .tight
                .iter()
                .filter(|t| e.vertices[j].tight.contains(t))
                .copied()
                .collect();
            if shared.len() < d - 1 {
                continue;
            }
            if let Some(tight) = independent_subset(sys, &shared, d - 1) {
                let delta = norm(&sub(&e.vertices[i].point, &e.vertices[j].point));
                edges.push(EdgeGeometry {
                    tight,
                    endpoints: (i, j),
                    delta,
                });
            }
        }
    }
    edges
}

/// An edge with its shadow statistics for a particular plane.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub tight: Vec<usize>,
    pub endpoints: (usize, usize),
    pub delta: f64,
    /// Event S_I(V): the edge appears on the shadow polygon boundary.
    pub on_shadow: bool,
    /// Length of the projected edge.
    pub shadow_length: f64,
    /// Norm of the projection of the unit edge direction onto the plane.
    pub cos_theta: f64,
}

/// Project the whole vertex set, build the shadow hull, and mark the edges
/// whose projected endpoints are consecutive hull vertices. When several
/// polytope edges project onto the same hull edge (degenerate planes), only
/// the lexicographically smallest index set is marked.
pub fn shadow_stats<S: LinearSystem>(
    sys: &S,
    plane: &Plane2,
) -> Result<(Hull2, Vec<EdgeRecord>, Enumeration), OracleError> {
    let e = enumerate_vertices(sys)?;
    let edges = enumerate_edges(sys, &e);
    let projections: Vec<[f64; 2]> = e.vertices.iter().map(|v| project(&v.point, plane)).collect();
    let hull = convex_hull_2d(&projections);

    let hull_slot: Vec<Option<usize>> = projections
        .iter()
        .map(|&p| hull.vertex_index(p))
        .collect();
    let consecutive = |a: usize, b: usize| -> bool {
        let m = hull.ordered_vertices.len();
        if m < 2 || a == b {
            return false;
        }
        let diff = (a + m - b) % m;
        diff == 1 || diff == m - 1
    };

    let mut taken: Vec<(usize, usize)> = Vec::new();
    let mut records: Vec<EdgeRecord> = Vec::with_capacity(edges.len());
    for edge in edges {
        let (i, j) = edge.endpoints;
        let dir = normalize(&sub(&e.vertices[j].point, &e.vertices[i].point))
            .expect("edge endpoints distinct");
        let cos_theta = {
            let p = project(&dir, plane);
            p[0].hypot(p[1]).min(1.0)
        };
        let pi = projections[i];
        let pj = projections[j];
        let shadow_length = (pi[0] - pj[0]).hypot(pi[1] - pj[1]);
        let on_shadow = match (hull_slot[i], hull_slot[j]) {
            (Some(a), Some(b)) if consecutive(a, b) => {
                let key = (a.min(b), a.max(b));
                if taken.contains(&key) {
                    false
                } else {
                    taken.push(key);
                    true
                }
            }
            _ => false,
        };
        records.push(EdgeRecord {
            tight: edge.tight,
            endpoints: edge.endpoints,
            delta: edge.delta,
            on_shadow,
            shadow_length,
            cos_theta,
        });
    }
    Ok((hull, records, e))
}

#[derive(Debug, Clone)]
pub enum Boundedness {
    Bounded { vertices: Vec<Vec<f64>> },
    Unbounded { ray: Vec<f64> },
}

impl Boundedness {
    pub fn is_bounded(&self) -> bool {
        matches!(self, Boundedness::Bounded { .. })
    }
}

/// Complete boundedness decision with a witness: a recession ray, or the full
/// vertex set.
pub fn decide_bounded<S: LinearSystem>(sys: &S) -> Result<Boundedness, OracleError> {
    let e = enumerate_vertices(sys)?;
    Ok(match e.rays.first() {
        Some(ray) => Boundedness::Unbounded { ray: ray.clone() },
        None => Boundedness::Bounded {
            vertices: e.vertices.into_iter().map(|v| v.point).collect(),
        },
    })
}
