//! Exact-rational phase-1 simplex, used only to decide feasibility of the
//! tiny homogeneous systems behind the dimensionality test. Bland's rule
//! keeps the method cycle-free; all arithmetic is in `BigRational`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Rat = BigRational;

pub enum RowKind {
    /// `coeffs . a >= rhs`
    Ge,
    /// `coeffs . a == rhs`
    Eq,
}

pub struct LpRow {
    pub coeffs: Vec<Rat>,
    pub kind: RowKind,
    pub rhs: Rat,
}

/// Is there an `a >= 0` satisfying every row?
pub fn feasible(nvars: usize, rows: &[LpRow]) -> bool {
    let m = rows.len();
    let n_surplus = rows
        .iter()
        .filter(|r| matches!(r.kind, RowKind::Ge))
        .count();
    let n_total = nvars + n_surplus + m; // structural + surplus + artificial
    let rhs_col = n_total;

    // tableau rows: [structural | surplus | artificial | rhs]
    let mut tab: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut surplus_used = 0;
    for (i, row) in rows.iter().enumerate() {
        let mut t = vec![Rat::zero(); n_total + 1];
        t[..nvars].clone_from_slice(&row.coeffs);
        if let RowKind::Ge = row.kind {
            t[nvars + surplus_used] = -Rat::one();
            surplus_used += 1;
        }
        t[rhs_col] = row.rhs.clone();
        // normalize to a non-negative right-hand side before adding the
        // artificial, so the artificial basis is feasible
        if t[rhs_col].is_negative() {
            for v in t.iter_mut() {
                *v = -v.clone();
            }
        }
        t[nvars + n_surplus + i] = Rat::one();
        tab.push(t);
    }
    let mut basis: Vec<usize> = (0..m).map(|i| nvars + n_surplus + i).collect();
    let artificial = |j: usize| j >= nvars + n_surplus;

    loop {
        // reduced costs for the phase-1 objective (sum of artificials)
        let mut entering = None;
        for j in 0..n_total {
            let mut d = if artificial(j) { Rat::one() } else { Rat::zero() };
            for (i, &bi) in basis.iter().enumerate() {
                if artificial(bi) {
                    d -= &tab[i][j];
                }
            }
            if d.is_negative() {
                entering = Some(j); // Bland: first improving column
                break;
            }
        }
        let Some(j) = entering else {
            let mut objective = Rat::zero();
            for (i, &bi) in basis.iter().enumerate() {
                if artificial(bi) {
                    objective += &tab[i][rhs_col];
                }
            }
            return objective.is_zero();
        };

        // ratio test, Bland tie-break on the leaving basis index
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..m {
            if tab[i][j].is_positive() {
                let ratio = &tab[i][rhs_col] / &tab[i][j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            // phase-1 objective is bounded below by zero, so an unbounded
            // column cannot occur; treat defensively as infeasible
            return false;
        };

        let pivot = tab[r][j].clone();
        for v in tab[r].iter_mut() {
            *v /= &pivot;
        }
        for i in 0..m {
            if i != r && !tab[i][j].is_zero() {
                let factor = tab[i][j].clone();
                for col in 0..=n_total {
                    let delta = &factor * &tab[r][col];
                    tab[i][col] -= delta;
                }
            }
        }
        basis[r] = j;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn r(n: i64) -> Rat {
        Rat::from_i64(n).unwrap()
    }

    #[test]
    fn feasible_simple() {
        // a1 - a2 = -1, a >= 0 is feasible (a1=0, a2=1)
        let rows = vec![LpRow {
            coeffs: vec![r(1), r(-1)],
            kind: RowKind::Eq,
            rhs: r(-1),
        }];
        assert!(feasible(2, &rows));
    }

    #[test]
    fn infeasible_simple() {
        // a1 + a2 = -1 with a >= 0 is infeasible
        let rows = vec![LpRow {
            coeffs: vec![r(1), r(1)],
            kind: RowKind::Eq,
            rhs: r(-1),
        }];
        assert!(!feasible(2, &rows));
    }

    #[test]
    fn mixed_rows() {
        // a1 - a2 >= 0 and a2 - a1 = 1: infeasible
        let rows = vec![
            LpRow {
                coeffs: vec![r(1), r(-1)],
                kind: RowKind::Ge,
                rhs: r(0),
            },
            LpRow {
                coeffs: vec![r(-1), r(1)],
                kind: RowKind::Eq,
                rhs: r(1),
            },
        ];
        assert!(!feasible(2, &rows));
        // drop the first row: feasible
        let rows2 = vec![LpRow {
            coeffs: vec![r(-1), r(1)],
            kind: RowKind::Eq,
            rhs: r(1),
        }];
        assert!(feasible(2, &rows2));
    }
}
