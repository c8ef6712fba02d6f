//! Critical point of the inventory, covariance of the tilted walk, and the
//! associated spherical triangle.
//!
//! Under the half-space hypothesis the inventory is strictly convex and
//! coercive in exponential coordinates, so Newton descent from the origin
//! finds its unique positive critical point. The normalized mixed second
//! partials there give the correlation coefficients (a, b, c); the inverse
//! of the closed-form Cholesky factor of the correlation matrix maps the
//! octant to a cone whose spherical section is the triangle of the model.

use std::fmt;

use crate::geom::{self, Mat3, Vec3};
use crate::stepset::{half_space_witness, Inventory};

#[derive(Debug)]
pub enum CriticalError {
    /// Hypothesis (H) fails: the steps fit in a half-space, so the inventory
    /// has no interior minimum.
    HalfSpacePrecondition { witness_normal: [i64; 3] },
    NoConvergence { iterations: u32, residual: f64 },
    /// Correlation matrix determinant at or below the degeneracy threshold.
    DegenerateCovariance { det: f64 },
    /// The requested angles do not define a positive definite cosine matrix.
    NotRealizable { det: f64 },
}

impl fmt::Display for CriticalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CriticalError::HalfSpacePrecondition { witness_normal: n } => write!(
                f,
                "step set lies in the half-space with normal ({}, {}, {})",
                n[0], n[1], n[2]
            ),
            CriticalError::NoConvergence {
                iterations,
                residual,
            } => write!(
                f,
                "Newton iteration did not converge after {iterations} steps (residual {residual:.3e})"
            ),
            CriticalError::DegenerateCovariance { det } => {
                write!(f, "correlation matrix is degenerate (det = {det:.3e})")
            }
            CriticalError::NotRealizable { det } => write!(
                f,
                "cosine matrix of the angles is not positive definite (det = {det:.3e})"
            ),
        }
    }
}

impl std::error::Error for CriticalError {}

/// Critical point of the inventory in the open positive octant.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalData {
    pub point: Vec3,
    /// Inventory value at the point: the exponential growth of excursions.
    pub rho: f64,
    /// Max gradient magnitude of the inventory at the reported point.
    pub residual: f64,
    pub iterations: u32,
}

/// Correlation coefficients and Cholesky factor at the critical point.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceData {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub matrix: Mat3,
    pub cholesky_l: Mat3,
}

/// Spherical triangle with `angles[i]` at `vertices[i]` and `side_lengths[i]`
/// the arc opposite `vertices[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SphericalTriangle {
    pub vertices: [Vec3; 3],
    pub angles: [f64; 3],
    pub side_lengths: [f64; 3],
}

const GRAD_TOL: f64 = 1e-13;
const MAX_NEWTON_ITER: u32 = 200;
const DEGENERACY_TOL: f64 = 1e-12;

/// Minimizes the inventory over the open octant by Newton descent in
/// exponential coordinates, starting from the all-ones point.
pub fn find_critical_point(inv: &Inventory) -> Result<CriticalData, CriticalError> {
    if let Some(n) = half_space_witness(&inv.support()) {
        return Err(CriticalError::HalfSpacePrecondition { witness_normal: n });
    }
    let steps = inv.weighted_support();
    // g(u) = chi(e^u), a strictly convex, coercive sum of exponentials
    let value = |u: &Vec3| -> f64 { steps.iter().map(|(s, w)| w * dot_is(s, u).exp()).sum() };
    let grad = |u: &Vec3| -> Vec3 {
        let mut g = [0.0; 3];
        for (s, w) in &steps {
            let e = w * dot_is(s, u).exp();
            for i in 0..3 {
                g[i] += s[i] as f64 * e;
            }
        }
        g
    };
    let hess = |u: &Vec3| -> Mat3 {
        let mut h = [[0.0; 3]; 3];
        for (s, w) in &steps {
            let e = w * dot_is(s, u).exp();
            for i in 0..3 {
                for j in i..3 {
                    h[i][j] += (s[i] * s[j]) as f64 * e;
                }
            }
        }
        for i in 0..3 {
            for j in 0..i {
                h[i][j] = h[j][i];
            }
        }
        h
    };

    // the reported residual is the inventory gradient at e^u, evaluated
    // directly; at lopsided critical points it differs from the u-gradient
    // by factors 1/x_i, so it drives the stopping test
    let x_residual = |u: &Vec3| -> f64 {
        let p = [u[0].exp(), u[1].exp(), u[2].exp()];
        let g = inv.gradient(p);
        g.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    };

    let mut u = [0.0; 3];
    let mut fu = value(&u);
    let mut best = (u, x_residual(&u));
    let mut iterations = MAX_NEWTON_ITER;
    let mut stalls = 0;
    for iter in 0..MAX_NEWTON_ITER {
        let res = x_residual(&u);
        if res < best.1 {
            best = (u, res);
        }
        if res <= GRAD_TOL {
            iterations = iter;
            break;
        }
        let g = grad(&u);
        let h = hess(&u);
        let Some(d) = geom::solve_spd(&h, &[-g[0], -g[1], -g[2]]) else {
            // cannot happen under (H); report with the current residual
            return Err(CriticalError::NoConvergence {
                iterations: iter,
                residual: res,
            });
        };
        // inside the quadratic basin the objective is flat to f64
        // resolution and backtracking on f-values degenerates into
        // micro-steps; take pure Newton steps while the residual contracts
        if res <= 1e-6 {
            let cand = [u[0] + d[0], u[1] + d[1], u[2] + d[2]];
            if x_residual(&cand) < res {
                u = cand;
                fu = value(&u);
                continue;
            }
            stalls += 1;
            if stalls > 4 {
                iterations = iter;
                break;
            }
        }
        // backtracking line search (Armijo, c = 1/4)
        let slope = geom::dot(&g, &d);
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let cand = [u[0] + t * d[0], u[1] + t * d[1], u[2] + t * d[2]];
            let fc = value(&cand);
            if fc <= fu + 0.25 * t * slope {
                u = cand;
                fu = fc;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            stalls += 1;
            if stalls > 8 {
                iterations = iter;
                break;
            }
        }
    }
    let (u, residual) = best;
    if residual > 1e-12 {
        return Err(CriticalError::NoConvergence {
            iterations,
            residual,
        });
    }
    Ok(finish(inv, u, iterations))
}

fn dot_is(s: &[i64; 3], u: &Vec3) -> f64 {
    s[0] as f64 * u[0] + s[1] as f64 * u[1] + s[2] as f64 * u[2]
}

fn finish(inv: &Inventory, u: Vec3, iterations: u32) -> CriticalData {
    let point = [u[0].exp(), u[1].exp(), u[2].exp()];
    let g = inv.gradient(point);
    let residual = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    CriticalData {
        point,
        rho: inv.eval(point),
        residual,
        iterations,
    }
}

/// Correlation coefficients of the zero-drift tilted walk and the closed-form
/// lower Cholesky factor of its correlation matrix.
pub fn covariance(inv: &Inventory, cp: &CriticalData) -> Result<CovarianceData, CriticalError> {
    let p = cp.point;
    let xx = inv.second_partial(0, 0, p);
    let yy = inv.second_partial(1, 1, p);
    let zz = inv.second_partial(2, 2, p);
    let a = inv.second_partial(0, 1, p) / (xx * yy).sqrt();
    let b = inv.second_partial(0, 2, p) / (xx * zz).sqrt();
    let c = inv.second_partial(1, 2, p) / (yy * zz).sqrt();
    covariance_from_correlations(a, b, c).map_err(|det| CriticalError::DegenerateCovariance { det })
}

/// Builds [`CovarianceData`] directly from correlation coefficients; `Err`
/// carries the failing determinant.
pub fn covariance_from_correlations(a: f64, b: f64, c: f64) -> Result<CovarianceData, f64> {
    let det = correlation_det(a, b, c);
    if !(det > DEGENERACY_TOL) || a.abs() >= 1.0 || b.abs() >= 1.0 || c.abs() >= 1.0 {
        return Err(det);
    }
    let matrix = [[1.0, a, b], [a, 1.0, c], [b, c, 1.0]];
    let ra = (1.0 - a * a).sqrt();
    let cholesky_l = [
        [1.0, 0.0, 0.0],
        [a, ra, 0.0],
        [b, (c - a * b) / ra, det.sqrt() / ra],
    ];
    Ok(CovarianceData {
        a,
        b,
        c,
        matrix,
        cholesky_l,
    })
}

pub fn correlation_det(a: f64, b: f64, c: f64) -> f64 {
    1.0 - a * a - b * b - c * c + 2.0 * a * b * c
}

/// The spherical triangle of the decorrelated octant. Vertices are the
/// normalized columns of `L^-1` ordered so that the angle at `vertices[i]`
/// is `angles[i] = arccos(-corr_i)` for `corr = (a, b, c)`, and
/// `side_lengths[i]` is the arc opposite `vertices[i]`.
pub fn triangle_of(cov: &CovarianceData) -> SphericalTriangle {
    let linv = geom::invert_lower(&cov.cholesky_l);
    // column j of L^-1 carries the angle arccos of the negated correlation
    // between the two *other* coordinates: arccos(-a) sits at column 3,
    // arccos(-b) at column 2, arccos(-c) at column 1
    let vertices = [
        geom::normalize(&geom::column(&linv, 2)),
        geom::normalize(&geom::column(&linv, 1)),
        geom::normalize(&geom::column(&linv, 0)),
    ];
    let (a, b, c) = (cov.a, cov.b, cov.c);
    let angles = [(-a).acos(), (-b).acos(), (-c).acos()];
    let side_lengths = [
        side_cos(a, b, c).acos(),
        side_cos(b, a, c).acos(),
        side_cos(c, a, b).acos(),
    ];
    SphericalTriangle {
        vertices,
        angles,
        side_lengths,
    }
}

/// cos of the side opposite the `arccos(-r)` vertex, where `s` and `t` are
/// the other two correlations.
fn side_cos(r: f64, s: f64, t: f64) -> f64 {
    ((s * t - r) / ((1.0 - s * s) * (1.0 - t * t)).sqrt()).clamp(-1.0, 1.0)
}

impl SphericalTriangle {
    /// Triangle from its vertices, with angles and side lengths recomputed
    /// from the geometry. Vertices must be unit and linearly independent.
    pub fn from_vertices(vertices: [Vec3; 3]) -> Self {
        let angles = [
            vertex_angle(&vertices[0], &vertices[1], &vertices[2]),
            vertex_angle(&vertices[1], &vertices[0], &vertices[2]),
            vertex_angle(&vertices[2], &vertices[0], &vertices[1]),
        ];
        let side_lengths = [
            geom::dot(&vertices[1], &vertices[2]).clamp(-1.0, 1.0).acos(),
            geom::dot(&vertices[0], &vertices[2]).clamp(-1.0, 1.0).acos(),
            geom::dot(&vertices[0], &vertices[1]).clamp(-1.0, 1.0).acos(),
        ];
        SphericalTriangle {
            vertices,
            angles,
            side_lengths,
        }
    }

    pub fn spherical_excess(&self) -> f64 {
        self.angles.iter().sum::<f64>() - std::f64::consts::PI
    }
}

/// Angle at `v` between the great-circle arcs toward `p` and `q`.
pub fn vertex_angle(v: &Vec3, p: &Vec3, q: &Vec3) -> f64 {
    let tp = tangent(v, p);
    let tq = tangent(v, q);
    geom::dot(&tp, &tq).clamp(-1.0, 1.0).acos()
}

fn tangent(v: &Vec3, p: &Vec3) -> Vec3 {
    let c = geom::dot(v, p);
    geom::normalize(&geom::sub(p, &geom::scale(v, c)))
}

/// Polar triangle: vertex `i` is the unit vector orthogonal to the other two
/// original vertices, on the same side as vertex `i`.
pub fn polar_triangle(t: &SphericalTriangle) -> SphericalTriangle {
    let v = &t.vertices;
    let polar_vertex = |i: usize, j: usize, k: usize| -> Vec3 {
        let mut n = geom::normalize(&geom::cross(&v[j], &v[k]));
        if geom::dot(&n, &v[i]) < 0.0 {
            n = geom::scale(&n, -1.0);
        }
        n
    };
    SphericalTriangle::from_vertices([
        polar_vertex(0, 1, 2),
        polar_vertex(1, 2, 0),
        polar_vertex(2, 0, 1),
    ])
}

/// Weighted atom of a step distribution: `(displacement, weight)`.
pub type Atom = (Vec3, f64);

/// Realizes a triangle with the given angles as the covariance structure of
/// an eight-atom zero-drift walk: the atoms are `L (u, v, w)` over the sign
/// choices `u, v, w = +-1`, each with weight 1/8.
pub fn realize_triangle(angles: [f64; 3]) -> Result<(CovarianceData, Vec<Atom>), CriticalError> {
    for &angle in &angles {
        if !(angle > 0.0 && angle < std::f64::consts::PI) {
            return Err(CriticalError::NotRealizable {
                det: correlation_det(-angles[0].cos(), -angles[1].cos(), -angles[2].cos()),
            });
        }
    }
    let (a, b, c) = (-angles[0].cos(), -angles[1].cos(), -angles[2].cos());
    let cov =
        covariance_from_correlations(a, b, c).map_err(|det| CriticalError::NotRealizable { det })?;
    let l = &cov.cholesky_l;
    let mut atoms = Vec::with_capacity(8);
    for signs in 0..8u32 {
        let s = [
            if signs & 1 == 0 { 1.0 } else { -1.0 },
            if signs & 2 == 0 { 1.0 } else { -1.0 },
            if signs & 4 == 0 { 1.0 } else { -1.0 },
        ];
        atoms.push((geom::mat_vec(l, &s), 0.125));
    }
    Ok((cov, atoms))
}
