//! Small fixed-size vector and matrix helpers shared by the geometric modules.

pub type Vec3 = [f64; 3];
pub type Mat3 = [[f64; 3]; 3];

pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub fn normalize(a: &Vec3) -> Vec3 {
    let n = norm(a);
    [a[0] / n, a[1] / n, a[2] / n]
}

pub fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale(a: &Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn mat_vec(m: &Mat3, v: &Vec3) -> Vec3 {
    [dot(&m[0], v), dot(&m[1], v), dot(&m[2], v)]
}

/// Column `j` of a row-major 3x3 matrix.
pub fn column(m: &Mat3, j: usize) -> Vec3 {
    [m[0][j], m[1][j], m[2][j]]
}

/// Inverse of a lower-triangular matrix with nonzero diagonal.
pub fn invert_lower(l: &Mat3) -> Mat3 {
    let mut inv = [[0.0; 3]; 3];
    for j in 0..3 {
        let mut e = [0.0; 3];
        e[j] = 1.0;
        // forward substitution
        let mut x = [0.0; 3];
        for i in 0..3 {
            let mut s = e[i];
            for (k, xk) in x.iter().enumerate().take(i) {
                s -= l[i][k] * xk;
            }
            x[i] = s / l[i][i];
        }
        for i in 0..3 {
            inv[i][j] = x[i];
        }
    }
    inv
}

/// Solves the symmetric positive definite 3x3 system `m x = b` by Cholesky.
/// Returns `None` when a pivot is not strictly positive.
pub fn solve_spd(m: &Mat3, b: &Vec3) -> Option<Vec3> {
    let mut l = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..=i {
            let mut s = m[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[i][j] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    // forward then backward substitution
    let mut y = [0.0; 3];
    for i in 0..3 {
        let mut s = b[i];
        for (k, yk) in y.iter().enumerate().take(i) {
            s -= l[i][k] * yk;
        }
        y[i] = s / l[i][i];
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let mut s = y[i];
        for k in i + 1..3 {
            s -= l[k][i] * x[k];
        }
        x[i] = s / l[i][i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_inverse_roundtrip() {
        let l = [[1.0, 0.0, 0.0], [0.5, 2.0, 0.0], [-0.3, 0.7, 1.5]];
        let inv = invert_lower(&l);
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for k in 0..3 {
                    s += l[i][k] * inv[k][j];
                }
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((s - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn spd_solve() {
        let m = [[4.0, 1.0, 0.2], [1.0, 3.0, -0.5], [0.2, -0.5, 2.0]];
        let b = [1.0, -2.0, 0.5];
        let x = solve_spd(&m, &b).unwrap();
        let r = mat_vec(&m, &x);
        for i in 0..3 {
            assert!((r[i] - b[i]).abs() < 1e-12);
        }
    }
}
