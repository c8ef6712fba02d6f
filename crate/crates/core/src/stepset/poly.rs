//! Laurent polynomials with exact rational coefficients, in one or two
//! variables. Used for Hadamard decompositions and the walk-group sections.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Rat = BigRational;

/// Laurent polynomial in a single variable.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly1 {
    terms: BTreeMap<i64, Rat>,
}

/// Laurent polynomial in an ordered pair of variables.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly2 {
    terms: BTreeMap<[i64; 2], Rat>,
}

impl LaurentPoly1 {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, exp: i64, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rat)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> Rat {
        self.terms.get(&exp).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn scaled(&self, factor: &Rat) -> Self {
        let mut out = Self::new();
        for (e, c) in &self.terms {
            out.add_term(*e, c * factor);
        }
        out
    }

    /// Leading entry in exponent order (the lexicographically first term).
    pub fn first_term(&self) -> Option<(i64, &Rat)> {
        self.terms.iter().next().map(|(e, c)| (*e, c))
    }

    pub fn eval_rat(&self, v: &Rat) -> Option<Rat> {
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            acc += c * pow_rat(v, *e)?;
        }
        Some(acc)
    }
}

impl LaurentPoly2 {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, exp: [i64; 2], coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = ([i64; 2], &Rat)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> Rat {
        self.terms.get(&[0, 0]).cloned().unwrap_or_else(Rat::zero)
    }

    /// Copy with the constant term removed.
    pub fn without_constant(&self) -> Self {
        let mut out = self.clone();
        out.terms.remove(&[0, 0]);
        out
    }

    pub fn first_term(&self) -> Option<([i64; 2], &Rat)> {
        self.terms.iter().next().map(|(e, c)| (*e, c))
    }

    pub fn scaled(&self, factor: &Rat) -> Self {
        let mut out = Self::new();
        for (e, c) in &self.terms {
            out.add_term(*e, c * factor);
        }
        out
    }

    /// `self == factor * other`, exactly.
    pub fn is_multiple_of(&self, other: &Self, factor: &Rat) -> bool {
        if self.terms.len() != other.terms.len() {
            return false;
        }
        self.terms.iter().all(|(e, c)| {
            other
                .terms
                .get(e)
                .map(|oc| *c == oc * factor)
                .unwrap_or(false)
        })
    }

    pub fn eval_rat(&self, v: &[Rat; 2]) -> Option<Rat> {
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            acc += c * pow_rat(&v[0], e[0])? * pow_rat(&v[1], e[1])?;
        }
        Some(acc)
    }
}

/// `v^e` for integer (possibly negative) `e`; `None` when `v = 0` and `e < 0`.
pub fn pow_rat(v: &Rat, e: i64) -> Option<Rat> {
    if e == 0 {
        return Some(Rat::one());
    }
    if v.is_zero() && e < 0 {
        return None;
    }
    let p = v.pow(e.unsigned_abs() as u32 as i32);
    if e > 0 {
        Some(p)
    } else {
        Some(p.recip())
    }
}

fn fmt_terms<'a, I>(f: &mut fmt::Formatter<'_>, terms: I, vars: &[&str]) -> fmt::Result
where
    I: Iterator<Item = (Vec<i64>, &'a Rat)>,
{
    let mut first = true;
    for (exps, coeff) in terms {
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        let monomial: Vec<String> = exps
            .iter()
            .zip(vars)
            .filter(|(e, _)| **e != 0)
            .map(|(e, v)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        if monomial.is_empty() {
            write!(f, "{coeff}")?;
        } else if coeff.is_one() {
            write!(f, "{}", monomial.join("*"))?;
        } else if (-coeff).is_one() {
            write!(f, "-{}", monomial.join("*"))?;
        } else {
            write!(f, "{coeff}*{}", monomial.join("*"))?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for LaurentPoly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.terms.iter().map(|(e, c)| (vec![*e], c)), &["s"])
    }
}

impl fmt::Display for LaurentPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(
            f,
            self.terms.iter().map(|(e, c)| (e.to_vec(), c)),
            &["p", "q"],
        )
    }
}
