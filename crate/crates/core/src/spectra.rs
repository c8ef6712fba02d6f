//! Closed-form principal eigenvalues and critical-exponent formulas.
//!
//! Birectangular triangles, spherical digons, the sphere-tiling triangles
//! and revolution caps are the known cases with explicit Dirichlet spectra;
//! everything else goes through the finite element solver in [`crate::fem`].

use std::f64::consts::PI;
use std::fmt;

use crate::critical::CriticalData;
use crate::stepset::{half_space_witness, Inventory};

#[derive(Debug)]
pub enum SpectraError {
    /// Angle outside the valid open interval.
    AngleDomain { value: f64 },
    /// Tiling spectra exist only for (2,3,3), (2,3,4), (2,3,5) and (2,2,r).
    UnsupportedTriple { p: u32, q: u32, r: u32 },
    HalfSpacePrecondition { witness_normal: [i64; 3] },
}

impl fmt::Display for SpectraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectraError::AngleDomain { value } => {
                write!(f, "angle {value} outside the valid domain")
            }
            SpectraError::UnsupportedTriple { p, q, r } => {
                write!(f, "({p},{q},{r}) is not a spherical tiling triple")
            }
            SpectraError::HalfSpacePrecondition { witness_normal: n } => write!(
                f,
                "step set lies in the half-space with normal ({}, {}, {})",
                n[0], n[1], n[2]
            ),
        }
    }
}

impl std::error::Error for SpectraError {}

/// Principal Dirichlet eigenvalue of the birectangular triangle with third
/// angle `beta`: (pi/beta + 1)(pi/beta + 2).
pub fn birectangular_lambda1(beta: f64) -> Result<f64, SpectraError> {
    if !(beta > 0.0 && beta < PI) {
        return Err(SpectraError::AngleDomain { value: beta });
    }
    let t = PI / beta;
    Ok((t + 1.0) * (t + 2.0))
}

/// Principal Dirichlet eigenvalue of the spherical digon with angle `alpha`:
/// (pi/alpha)(pi/alpha + 1). `alpha = pi` is the half-sphere, eigenvalue 2.
pub fn digon_lambda1(alpha: f64) -> Result<f64, SpectraError> {
    if !(alpha > 0.0 && alpha <= PI) {
        return Err(SpectraError::AngleDomain { value: alpha });
    }
    let t = PI / alpha;
    Ok(t * (t + 1.0))
}

/// Dirichlet spectra of the tiling triangles T(p,q,r) with angles
/// (pi/p, pi/q, pi/r): eigenvalues nu(nu+1) with nu running over an affine
/// lattice per triple. Returns the first `count` values sorted ascending,
/// with multiplicity.
pub fn tiling_eigenvalues(p: u32, q: u32, r: u32, count: usize) -> Result<Vec<f64>, SpectraError> {
    let lattice: (u64, u64, u64) = match (p, q, r) {
        (2, 3, 3) => (6, 3, 4),
        (2, 3, 4) => (9, 6, 6),
        (2, 3, 5) => (15, 6, 10),
        (2, 2, r) if r >= 2 => (r as u64 + 1, 2, r as u64),
        _ => return Err(SpectraError::UnsupportedTriple { p, q, r }),
    };
    let (base, s1, s2) = lattice;
    let mut nus: Vec<u64> = Vec::new();
    let mut cap = base + s1.max(s2);
    loop {
        nus.clear();
        let mut l1 = 0;
        while base + s1 * l1 <= cap {
            let mut l2 = 0;
            while base + s1 * l1 + s2 * l2 <= cap {
                nus.push(base + s1 * l1 + s2 * l2);
                l2 += 1;
            }
            l1 += 1;
        }
        if nus.len() >= count {
            break;
        }
        cap *= 2;
    }
    nus.sort_unstable();
    nus.truncate(count);
    Ok(nus.iter().map(|&nu| (nu * (nu + 1)) as f64).collect())
}

/// Principal Dirichlet eigenvalue of the revolution cap with apex angle
/// `zeta`: nu(nu+1) for the smallest positive root nu of the Legendre
/// function P_nu(cos zeta). The axisymmetric m = 0 mode carries the
/// principal eigenvalue.
pub fn cap_lambda1(zeta: f64) -> Result<f64, SpectraError> {
    if !(zeta > 0.0 && zeta < PI) {
        return Err(SpectraError::AngleDomain { value: zeta });
    }
    let x = zeta.cos();
    let nu = smallest_legendre_root(x);
    Ok(nu * (nu + 1.0))
}

/// P_nu(x) via the hypergeometric series 2F1(-nu, nu+1; 1; (1-x)/2),
/// valid for x in (-1, 1].
pub fn legendre_p(nu: f64, x: f64) -> f64 {
    let t = (1.0 - x) / 2.0;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut k = 0f64;
    loop {
        term *= (k - nu) * (k + nu + 1.0) / ((k + 1.0) * (k + 1.0)) * t;
        sum += term;
        k += 1.0;
        // the terms may grow until k ~ nu, so only trust smallness past that
        if k > nu + 8.0 && term.abs() <= 1e-16 * sum.abs().max(1e-300) {
            break;
        }
        if k > 2e6 {
            break;
        }
    }
    sum
}

fn smallest_legendre_root(x: f64) -> f64 {
    let f = |nu: f64| legendre_p(nu, x);
    // geometric bracket growth from (0, 1]
    let mut hi = 1.0f64;
    let mut lo = 0.0f64;
    for _ in 0..64 {
        if f(hi) < 0.0 {
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    // the doubling may have skipped an even number of roots; scan for the
    // first sign change inside the bracket
    let mut a = lo;
    let mut b = hi;
    let steps = 64;
    let fa0 = f(a);
    let mut prev = (a, fa0);
    for i in 1..=steps {
        let t = lo + (hi - lo) * i as f64 / steps as f64;
        let ft = f(t);
        if prev.1 > 0.0 && ft <= 0.0 {
            a = prev.0;
            b = t;
            break;
        }
        prev = (t, ft);
    }
    // bisection to 1e-10
    let mut fa = f(a);
    for _ in 0..200 {
        if b - a <= 1e-10 {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fa > 0.0) == (fm > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Excursion exponent from the principal eigenvalue:
/// lambda = sqrt(lambda1 + 1/4) + 1.
pub fn excursion_exponent(lambda1: f64) -> f64 {
    (lambda1 + 0.25).sqrt() + 1.0
}

/// Exit exponent of Brownian motion from a d-dimensional cone whose
/// spherical section has principal eigenvalue `lambda1_section`:
/// sqrt(lambda1 + (1 - d/2)^2) + (1 - d/2).
pub fn cone_exponent(d: u32, lambda1_section: f64) -> f64 {
    let shift = 1.0 - d as f64 / 2.0;
    (lambda1_section + shift * shift).sqrt() + shift
}

/// Which of the known total-walk regimes applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TotalWalksCase {
    /// Drift with all entries positive: exponent 0.
    InteriorDrift,
    /// Zero drift: beta = lambda/2 - 3/4.
    ZeroDrift,
    /// Inventory minimizer interior to [1,inf)^3: beta = lambda.
    InteriorMinimizer,
    /// None of the three proven regimes.
    Unresolved,
}

impl fmt::Display for TotalWalksCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TotalWalksCase::InteriorDrift => "interior-drift",
            TotalWalksCase::ZeroDrift => "zero-drift",
            TotalWalksCase::InteriorMinimizer => "interior-minimizer",
            TotalWalksCase::Unresolved => "unresolved",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TotalWalksExponent {
    pub case: TotalWalksCase,
    /// Exponent when the case is one of the three proven regimes.
    pub beta: Option<f64>,
    /// Minimizer of the inventory over the box [1,inf)^3.
    pub minimizer: [f64; 3],
    /// Inventory value at the box minimizer: growth of the total count.
    pub rho_total: f64,
}

/// Classifies the total-walk asymptotics. The drift test is exact (rational
/// arithmetic on the weights); the box minimizer comes from Newton descent
/// over the KKT face patterns of [1,inf)^3 in exponential coordinates.
pub fn total_walks_exponent(
    inv: &Inventory,
    cp: &CriticalData,
    lambda1: f64,
) -> Result<TotalWalksExponent, SpectraError> {
    if let Some(n) = half_space_witness(&inv.support()) {
        return Err(SpectraError::HalfSpacePrecondition { witness_normal: n });
    }
    let (minimizer, rho_total) = minimize_over_unit_box(inv);
    let lambda = excursion_exponent(lambda1);

    let drift = exact_drift(inv);
    use num_traits::Signed;
    if drift.iter().all(|d| d.is_positive()) {
        return Ok(TotalWalksExponent {
            case: TotalWalksCase::InteriorDrift,
            beta: Some(0.0),
            minimizer,
            rho_total,
        });
    }
    if drift.iter().all(num_traits::Zero::is_zero) {
        return Ok(TotalWalksExponent {
            case: TotalWalksCase::ZeroDrift,
            beta: Some(lambda / 2.0 - 0.75),
            minimizer,
            rho_total,
        });
    }
    if cp.point.iter().all(|&v| v > 1.0 + 1e-9) {
        return Ok(TotalWalksExponent {
            case: TotalWalksCase::InteriorMinimizer,
            beta: Some(lambda),
            minimizer,
            rho_total,
        });
    }
    Ok(TotalWalksExponent {
        case: TotalWalksCase::Unresolved,
        beta: None,
        minimizer,
        rho_total,
    })
}

fn exact_drift(inv: &Inventory) -> [num_rational::BigRational; 3] {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::Zero;
    let mut d = [
        BigRational::zero(),
        BigRational::zero(),
        BigRational::zero(),
    ];
    for (e, w) in inv.terms() {
        for i in 0..3 {
            d[i] += w * BigRational::from(BigInt::from(e[i]));
        }
    }
    d
}

/// Minimizes chi over [1,inf)^3 by enumerating the 8 active-face patterns in
/// exponential coordinates (u >= 0); the first KKT-consistent pattern is the
/// global minimum by convexity.
fn minimize_over_unit_box(inv: &Inventory) -> ([f64; 3], f64) {
    let steps = inv.weighted_support();
    let value = |u: &[f64; 3]| -> f64 {
        steps
            .iter()
            .map(|(s, w)| w * (s[0] as f64 * u[0] + s[1] as f64 * u[1] + s[2] as f64 * u[2]).exp())
            .sum()
    };
    let grad = |u: &[f64; 3]| -> [f64; 3] {
        let mut g = [0.0; 3];
        for (s, w) in &steps {
            let e = w * (s[0] as f64 * u[0] + s[1] as f64 * u[1] + s[2] as f64 * u[2]).exp();
            for i in 0..3 {
                g[i] += s[i] as f64 * e;
            }
        }
        g
    };

    // patterns ordered by number of free coordinates, so the corner and the
    // low-dimensional faces are checked first
    let patterns: [&[usize]; 8] = [
        &[],
        &[0],
        &[1],
        &[2],
        &[0, 1],
        &[0, 2],
        &[1, 2],
        &[0, 1, 2],
    ];
    let mut best: Option<([f64; 3], f64)> = None;
    for free in patterns {
        if let Some(u) = face_minimum(&steps, free) {
            if free.iter().all(|&i| u[i] > 0.0 || free.len() == 0) && u.iter().all(|v| v.is_finite())
            {
                // KKT: free coordinates are optimal by construction, fixed
                // coordinates need non-negative gradient
                let g = grad(&u);
                let interior_ok = free.iter().all(|&i| u[i] > 1e-12);
                let fixed_ok = (0..3)
                    .filter(|i| !free.contains(i))
                    .all(|i| g[i] >= -1e-9 * (1.0 + value(&u)));
                if interior_ok && fixed_ok {
                    let x = [u[0].exp(), u[1].exp(), u[2].exp()];
                    return (x, value(&u));
                }
            }
        }
        if best.is_none() {
            best = Some(([0.0; 3], value(&[0.0; 3])));
        }
    }
    // numerically every pattern failed KKT; fall back to the corner
    let (u, v) = best.unwrap();
    ([u[0].exp(), u[1].exp(), u[2].exp()], v)
}

/// Newton minimization of the exponential sum restricted to the face where
/// only the `free` coordinates vary. `None` when the face has no interior
/// critical point (the restricted function decreases toward infinity).
fn face_minimum(steps: &[([i64; 3], f64)], free: &[usize]) -> Option<[f64; 3]> {
    let mut u = [0.0f64; 3];
    if free.is_empty() {
        return Some(u);
    }
    let k = free.len();
    for _ in 0..100 {
        let mut g = vec![0.0; k];
        let mut h = vec![vec![0.0; k]; k];
        for (s, w) in steps {
            let e = w * (s[0] as f64 * u[0] + s[1] as f64 * u[1] + s[2] as f64 * u[2]).exp();
            for (ii, &i) in free.iter().enumerate() {
                g[ii] += s[i] as f64 * e;
                for (jj, &j) in free.iter().enumerate() {
                    h[ii][jj] += (s[i] * s[j]) as f64 * e;
                }
            }
        }
        let gnorm = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if gnorm <= 1e-12 {
            return Some(u);
        }
        // solve h d = -g by Gaussian elimination (k <= 3)
        let mut aug = h.clone();
        for (row, gi) in aug.iter_mut().zip(&g) {
            row.push(-gi);
        }
        for col in 0..k {
            let piv = (col..k).max_by(|&a, &b| {
                aug[a][col].abs().partial_cmp(&aug[b][col].abs()).unwrap()
            })?;
            if aug[piv][col].abs() < 1e-300 {
                return None;
            }
            aug.swap(col, piv);
            for row in 0..k {
                if row != col {
                    let f = aug[row][col] / aug[col][col];
                    for c in col..=k {
                        let delta = f * aug[col][c];
                        aug[row][c] -= delta;
                    }
                }
            }
        }
        let d: Vec<f64> = (0..k).map(|i| aug[i][k] / aug[i][i]).collect();
        let mut t = 1.0;
        let f0: f64 = steps
            .iter()
            .map(|(s, w)| w * (s[0] as f64 * u[0] + s[1] as f64 * u[1] + s[2] as f64 * u[2]).exp())
            .sum();
        let slope: f64 = g.iter().zip(&d).map(|(a, b)| a * b).sum();
        let mut moved = false;
        for _ in 0..60 {
            let mut cand = u;
            for (ii, &i) in free.iter().enumerate() {
                cand[i] = u[i] + t * d[ii];
            }
            let fc: f64 = steps
                .iter()
                .map(|(s, w)| {
                    w * (s[0] as f64 * cand[0] + s[1] as f64 * cand[1] + s[2] as f64 * cand[2])
                        .exp()
                })
                .sum();
            if fc <= f0 + 0.25 * t * slope {
                u = cand;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if !moved {
            return Some(u);
        }
        // diverging to -infinity along a non-coercive face
        if u.iter().any(|v| v.abs() > 60.0) {
            return None;
        }
    }
    Some(u)
}

/// Continued-fraction probe of `pi / arccos(-c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalityProbe {
    pub verdict: RationalityVerdict,
    /// Best convergent `(p, q)` with `q <= max_denominator`.
    pub best: (i64, i64),
    /// Absolute gap between the ratio and its best convergent.
    pub gap: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RationalityVerdict {
    LikelyRational,
    NoSmallRational,
}

/// Scans the continued-fraction convergents of `pi / arccos(-c)` for a
/// denominator-bounded rational match within 1e-12. A numeric stand-in for
/// the minimal-polynomial irrationality arguments.
pub fn rationality_probe(c: f64, max_denominator: i64) -> Result<RationalityProbe, SpectraError> {
    if !(c.abs() < 1.0) {
        return Err(SpectraError::AngleDomain { value: c });
    }
    let target = PI / (-c).acos();
    let mut best = (target.round() as i64, 1i64);
    let mut gap = (target - target.round()).abs();

    // continued fraction convergents p_k/q_k
    let (mut p0, mut q0) = (1i64, 0i64);
    let (mut p1, mut q1) = (target.floor() as i64, 1i64);
    let mut frac = target - target.floor();
    for _ in 0..64 {
        let approx = p1 as f64 / q1 as f64;
        if (target - approx).abs() < gap || q1 == 1 {
            best = (p1, q1);
            gap = (target - approx).abs();
        }
        if gap <= 1e-12 {
            return Ok(RationalityProbe {
                verdict: RationalityVerdict::LikelyRational,
                best,
                gap,
            });
        }
        if frac.abs() < 1e-15 {
            break;
        }
        let next = 1.0 / frac;
        let a = next.floor();
        frac = next - a;
        let p2 = (a as i64).checked_mul(p1).and_then(|v| v.checked_add(p0));
        let q2 = (a as i64).checked_mul(q1).and_then(|v| v.checked_add(q0));
        let (Some(p2), Some(q2)) = (p2, q2) else {
            break;
        };
        if q2 > max_denominator {
            break;
        }
        (p0, q0) = (p1, q1);
        (p1, q1) = (p2, q2);
    }
    Ok(RationalityProbe {
        verdict: RationalityVerdict::NoSmallRational,
        best,
        gap,
    })
}
