//! Step sets of 3D lattice walks: parsing, validation, and structure.
//!
//! A model is a finite set of integer displacement vectors with positive
//! rational weights. This module builds the inventory (characteristic
//! Laurent polynomial), decides the half-space hypothesis exactly, computes
//! the dimensionality of the octant constraints by exact-rational linear
//! programming, and detects Hadamard product structure of the inventory.

mod lp;
pub mod poly;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use poly::{LaurentPoly1, LaurentPoly2, Rat};

/// Coordinate axes, used to name Hadamard permutations and group generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    /// The two remaining axes, in coordinate order.
    pub fn others(self) -> (Axis, Axis) {
        match self {
            Axis::X => (Axis::Y, Axis::Z),
            Axis::Y => (Axis::X, Axis::Z),
            Axis::Z => (Axis::X, Axis::Y),
        }
    }

    pub fn label(self) -> char {
        match self {
            Axis::X => 'x',
            Axis::Y => 'y',
            Axis::Z => 'z',
        }
    }
}

#[derive(Debug)]
pub enum StepSetError {
    /// Cross-section string must have exactly 26 cells after removing whitespace.
    BadLength(usize),
    BadChar(char),
    Json(String),
    ZeroStep,
    NonPositiveWeight(String),
    DuplicateStep([i64; 3]),
    Empty,
}

impl fmt::Display for StepSetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepSetError::BadLength(n) => {
                write!(f, "cross-section string has {n} cells, expected 26")
            }
            StepSetError::BadChar(c) => write!(f, "cross-section cell {c:?} is not '0' or '1'"),
            StepSetError::Json(msg) => write!(f, "malformed step JSON: {msg}"),
            StepSetError::ZeroStep => write!(f, "the zero displacement is not a step"),
            StepSetError::NonPositiveWeight(w) => write!(f, "step weight {w} is not positive"),
            StepSetError::DuplicateStep(d) => {
                write!(f, "duplicate step ({}, {}, {})", d[0], d[1], d[2])
            }
            StepSetError::Empty => write!(f, "step set is empty"),
        }
    }
}

impl std::error::Error for StepSetError {}

/// A single weighted lattice step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub dx: i64,
    pub dy: i64,
    pub dz: i64,
    pub weight: Rat,
}

impl Step {
    /// Unit-weight step.
    pub fn new(dx: i64, dy: i64, dz: i64) -> Result<Self, StepSetError> {
        Self::weighted(dx, dy, dz, Rat::one())
    }

    pub fn weighted(dx: i64, dy: i64, dz: i64, weight: Rat) -> Result<Self, StepSetError> {
        if (dx, dy, dz) == (0, 0, 0) {
            return Err(StepSetError::ZeroStep);
        }
        if !weight.is_positive() {
            return Err(StepSetError::NonPositiveWeight(weight.to_string()));
        }
        Ok(Step { dx, dy, dz, weight })
    }

    pub fn displacement(&self) -> [i64; 3] {
        [self.dx, self.dy, self.dz]
    }
}

/// A validated, non-empty set of steps with distinct displacements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepSet {
    steps: Vec<Step>,
}

impl StepSet {
    pub fn new(steps: Vec<Step>) -> Result<Self, StepSetError> {
        if steps.is_empty() {
            return Err(StepSetError::Empty);
        }
        let mut seen = BTreeSet::new();
        for s in &steps {
            if !seen.insert(s.displacement()) {
                return Err(StepSetError::DuplicateStep(s.displacement()));
            }
        }
        Ok(StepSet { steps })
    }

    /// Unit-weight step set from displacement triples.
    pub fn from_displacements(disps: &[[i64; 3]]) -> Result<Self, StepSetError> {
        let steps = disps
            .iter()
            .map(|d| Step::new(d[0], d[1], d[2]))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(steps)
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: a constructed set is never empty
    }

    pub fn displacements(&self) -> Vec<[i64; 3]> {
        self.steps.iter().map(Step::displacement).collect()
    }

    pub fn total_weight(&self) -> Rat {
        self.steps.iter().map(|s| s.weight.clone()).sum()
    }

    /// Exact drift vector: the weighted sum of the steps.
    pub fn drift(&self) -> [Rat; 3] {
        let mut d = [Rat::zero(), Rat::zero(), Rat::zero()];
        for s in &self.steps {
            d[0] += &s.weight * BigRational::from(BigInt::from(s.dx));
            d[1] += &s.weight * BigRational::from(BigInt::from(s.dy));
            d[2] += &s.weight * BigRational::from(BigInt::from(s.dz));
        }
        d
    }

    /// True when every displacement lies in `{-1,0,1}^3`.
    pub fn is_small_step(&self) -> bool {
        self.steps
            .iter()
            .all(|s| s.dx.abs() <= 1 && s.dy.abs() <= 1 && s.dz.abs() <= 1)
    }

    pub fn inventory(&self) -> Inventory {
        Inventory::from_step_set(self)
    }

    /// Parses either a 26-cell cross-section string or a JSON document.
    pub fn parse(text: &str) -> Result<Self, StepSetError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_cross_section(text)
        }
    }

    /// Decodes the cross-section format: three z-layers (z = -1, 0, +1),
    /// each with rows y = -1, 0, +1 and columns x = -1, 0, +1, where the
    /// middle layer omits the origin cell. Whitespace is ignored.
    pub fn from_cross_section(text: &str) -> Result<Self, StepSetError> {
        let cells: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cells.len() != 26 {
            return Err(StepSetError::BadLength(cells.len()));
        }
        let mut steps = Vec::new();
        for (cell, c) in cross_section_cells().zip(cells) {
            match c {
                '0' => {}
                '1' => steps.push(Step::new(cell[0], cell[1], cell[2])?),
                other => return Err(StepSetError::BadChar(other)),
            }
        }
        Self::new(steps)
    }

    /// Encodes back to the cross-section format. `None` when the set has a
    /// non-unit weight or a displacement outside `{-1,0,1}^3`.
    pub fn to_cross_section(&self) -> Option<String> {
        if !self.is_small_step() || self.steps.iter().any(|s| !s.weight.is_one()) {
            return None;
        }
        let set: BTreeSet<[i64; 3]> = self.displacements().into_iter().collect();
        Some(
            cross_section_cells()
                .map(|cell| if set.contains(&cell) { '1' } else { '0' })
                .collect(),
        )
    }

    /// Decodes `{"steps":[{"dx":..,"dy":..,"dz":..,"weight":..}]}`; the
    /// optional weight is a positive integer or a rational string `"p/q"`.
    pub fn from_json(text: &str) -> Result<Self, StepSetError> {
        let doc: serde_json::Value =
            serde_json::from_str(text).map_err(|e| StepSetError::Json(e.to_string()))?;
        let list = doc
            .get("steps")
            .and_then(|v| v.as_array())
            .ok_or_else(|| StepSetError::Json("missing \"steps\" array".into()))?;
        let mut steps = Vec::with_capacity(list.len());
        for item in list {
            let get = |key: &str| -> Result<i64, StepSetError> {
                item.get(key)
                    .and_then(|v| v.as_i64())
                    .ok_or_else(|| StepSetError::Json(format!("step needs integer \"{key}\"")))
            };
            let (dx, dy, dz) = (get("dx")?, get("dy")?, get("dz")?);
            let weight = match item.get("weight") {
                None => Rat::one(),
                Some(serde_json::Value::Number(n)) => {
                    let i = n.as_i64().ok_or_else(|| {
                        StepSetError::Json(format!("weight {n} is not an integer; use \"p/q\""))
                    })?;
                    Rat::from(BigInt::from(i))
                }
                Some(serde_json::Value::String(s)) => parse_rational(s)?,
                Some(other) => {
                    return Err(StepSetError::Json(format!("bad weight value {other}")));
                }
            };
            steps.push(Step::weighted(dx, dy, dz, weight)?);
        }
        Self::new(steps)
    }

    pub fn to_json(&self) -> String {
        let steps: Vec<serde_json::Value> = self
            .steps
            .iter()
            .map(|s| {
                let mut obj = serde_json::json!({"dx": s.dx, "dy": s.dy, "dz": s.dz});
                if !s.weight.is_one() {
                    obj["weight"] = serde_json::Value::String(s.weight.to_string());
                }
                obj
            })
            .collect();
        serde_json::json!({ "steps": steps }).to_string()
    }
}

/// Fixed cell order of the cross-section format.
fn cross_section_cells() -> impl Iterator<Item = [i64; 3]> {
    (-1..=1).flat_map(|dz| {
        (-1..=1).flat_map(move |dy| {
            (-1..=1).filter_map(move |dx| {
                if (dx, dy, dz) == (0, 0, 0) {
                    None
                } else {
                    Some([dx, dy, dz])
                }
            })
        })
    })
}

/// Parses `"p"` or `"p/q"` into a positive rational.
pub fn parse_rational(s: &str) -> Result<Rat, StepSetError> {
    let parse_int = |t: &str| -> Result<BigInt, StepSetError> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| StepSetError::Json(format!("bad rational {s:?}")))
    };
    let r = match s.split_once('/') {
        Some((num, den)) => {
            let d = parse_int(den)?;
            if d.is_zero() {
                return Err(StepSetError::Json(format!("bad rational {s:?}")));
            }
            Rat::new(parse_int(num)?, d)
        }
        None => Rat::from(parse_int(s)?),
    };
    Ok(r)
}

// ---------------------------------------------------------------------------
// Inventory
// ---------------------------------------------------------------------------

/// The inventory (characteristic Laurent polynomial) of a step set:
/// chi(x,y,z) = sum of weight * x^i y^j z^k over the steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inventory {
    terms: BTreeMap<[i64; 3], Rat>,
    bounds: [[i64; 2]; 3],
}

impl Inventory {
    pub fn from_step_set(s: &StepSet) -> Self {
        let mut terms = BTreeMap::new();
        let mut bounds = [[i64::MAX, i64::MIN]; 3];
        for step in s.steps() {
            let d = step.displacement();
            for axis in 0..3 {
                bounds[axis][0] = bounds[axis][0].min(d[axis]);
                bounds[axis][1] = bounds[axis][1].max(d[axis]);
            }
            terms.insert(d, step.weight.clone());
        }
        Inventory { terms, bounds }
    }

    pub fn terms(&self) -> impl Iterator<Item = ([i64; 3], &Rat)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn support(&self) -> Vec<[i64; 3]> {
        self.terms.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exponent range `[min, max]` along `axis`.
    pub fn bounds(&self, axis: Axis) -> [i64; 2] {
        self.bounds[axis.index()]
    }

    pub fn total_weight(&self) -> Rat {
        self.terms.values().cloned().sum()
    }

    /// Weighted steps as `(displacement, weight as f64)`, for numeric work.
    pub fn weighted_support(&self) -> Vec<([i64; 3], f64)> {
        self.terms
            .iter()
            .map(|(e, c)| (*e, c.to_f64().expect("weight fits in f64")))
            .collect()
    }

    pub fn eval(&self, p: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c.to_f64().unwrap() * powi3(p, *e))
            .sum()
    }

    /// First partial with respect to axis `i`.
    pub fn partial(&self, i: usize, p: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                if e[i] == 0 {
                    0.0
                } else {
                    let mut shifted = *e;
                    shifted[i] -= 1;
                    c.to_f64().unwrap() * e[i] as f64 * powi3(p, shifted)
                }
            })
            .sum()
    }

    pub fn gradient(&self, p: [f64; 3]) -> [f64; 3] {
        [self.partial(0, p), self.partial(1, p), self.partial(2, p)]
    }

    /// Second partial d^2 chi / (d axis_i d axis_j).
    pub fn second_partial(&self, i: usize, j: usize, p: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let factor = if i == j {
                    e[i] * (e[i] - 1)
                } else {
                    e[i] * e[j]
                };
                if factor == 0 {
                    return 0.0;
                }
                let mut shifted = *e;
                shifted[i] -= 1;
                shifted[j] -= 1;
                c.to_f64().unwrap() * factor as f64 * powi3(p, shifted)
            })
            .sum()
    }

    pub fn hessian(&self, p: [f64; 3]) -> [[f64; 3]; 3] {
        let mut h = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in i..3 {
                h[i][j] = self.second_partial(i, j, p);
                h[j][i] = h[i][j];
            }
        }
        h
    }
}

fn powi3(p: [f64; 3], e: [i64; 3]) -> f64 {
    p[0].powi(e[0] as i32) * p[1].powi(e[1] as i32) * p[2].powi(e[2] as i32)
}

// ---------------------------------------------------------------------------
// Half-space test
// ---------------------------------------------------------------------------

/// Outcome of the half-space test (hypothesis (H) fails iff `contained`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSpaceVerdict {
    pub contained: bool,
    /// Integer normal with non-negative inner product against every step.
    pub witness_normal: Option<[i64; 3]>,
}

/// Decides exactly whether all steps fit in a closed half-space through the
/// origin. Candidate normals are the cross products of step pairs (extreme
/// rays of the dual cone are supported on two steps), plus the steps
/// themselves and per-step orthogonals for the rank-deficient cases.
pub fn half_space_check(s: &StepSet) -> HalfSpaceVerdict {
    match half_space_witness(&s.displacements()) {
        Some(n) => HalfSpaceVerdict {
            contained: true,
            witness_normal: Some(n),
        },
        None => HalfSpaceVerdict {
            contained: false,
            witness_normal: None,
        },
    }
}

pub(crate) fn half_space_witness(disps: &[[i64; 3]]) -> Option<[i64; 3]> {
    let valid = |n: [i64; 3]| -> bool {
        n != [0, 0, 0] && disps.iter().all(|s| dot_i(n, *s) >= 0)
    };
    let axes = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    for (i, &a) in disps.iter().enumerate() {
        for cand in [a, neg(a)] {
            if valid(cand) {
                return Some(cand);
            }
        }
        for axis in axes {
            let c = cross_i(a, axis);
            for cand in [c, neg(c)] {
                if valid(cand) {
                    return Some(cand);
                }
            }
        }
        for &b in &disps[i + 1..] {
            let c = cross_i(a, b);
            for cand in [c, neg(c)] {
                if valid(cand) {
                    return Some(cand);
                }
            }
        }
    }
    None
}

fn dot_i(a: [i64; 3], b: [i64; 3]) -> i128 {
    a.iter()
        .zip(b)
        .map(|(&x, y)| x as i128 * y as i128)
        .sum()
}

fn cross_i(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn neg(a: [i64; 3]) -> [i64; 3] {
    [-a[0], -a[1], -a[2]]
}

// ---------------------------------------------------------------------------
// Dimensionality
// ---------------------------------------------------------------------------

/// Dimensionality verdict: the smallest `dim` such that the `witness`
/// inequalities (axis indices) force the remaining octant inequalities for
/// every non-negative multiplicity vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dimensionality {
    pub dim: u8,
    pub witness: Vec<usize>,
}

/// Smallest `d` such that some `d` of the three coordinate-sum inequalities
/// imply the other `3 - d`. Implication is decided exactly: inequality `i`
/// follows from the set `D` iff no `a >= 0` satisfies the `D` inequalities
/// together with `sum_s a_s s_i < 0` (homogeneous Farkas, so the strict
/// inequality can be normalized to `= -1`).
pub fn dimensionality(s: &StepSet) -> Dimensionality {
    let subsets: [&[usize]; 8] = [
        &[],
        &[0],
        &[1],
        &[2],
        &[0, 1],
        &[0, 2],
        &[1, 2],
        &[0, 1, 2],
    ];
    for assumed in subsets {
        let ok = (0..3)
            .filter(|t| !assumed.contains(t))
            .all(|t| implication_holds(s, assumed, t));
        if ok {
            return Dimensionality {
                dim: assumed.len() as u8,
                witness: assumed.to_vec(),
            };
        }
    }
    unreachable!("the full set of inequalities implies itself")
}

/// Does assuming the octant inequalities for axes in `assumed` force the
/// inequality for axis `target`, over non-negative step multiplicities?
pub fn implication_holds(s: &StepSet, assumed: &[usize], target: usize) -> bool {
    let disps = s.displacements();
    let coeffs_for = |axis: usize| -> Vec<Rat> {
        disps
            .iter()
            .map(|d| Rat::from(BigInt::from(d[axis])))
            .collect()
    };
    let mut rows: Vec<lp::LpRow> = assumed
        .iter()
        .map(|&axis| lp::LpRow {
            coeffs: coeffs_for(axis),
            kind: lp::RowKind::Ge,
            rhs: Rat::zero(),
        })
        .collect();
    rows.push(lp::LpRow {
        coeffs: coeffs_for(target),
        kind: lp::RowKind::Eq,
        rhs: -Rat::one(),
    });
    !lp::feasible(disps.len(), &rows)
}

// ---------------------------------------------------------------------------
// Hadamard structure
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HadamardKind {
    None,
    Type12,
    Type21,
    Both,
}

impl fmt::Display for HadamardKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            HadamardKind::None => "none",
            HadamardKind::Type12 => "(1,2)",
            HadamardKind::Type21 => "(2,1)",
            HadamardKind::Both => "both",
        };
        f.write_str(s)
    }
}

/// One concrete decomposition. In the `(1,2)` form the inventory splits as
/// `U(q) + V(q) T(r,s)` with `q` the single axis; in the `(2,1)` form as
/// `U(r,s) + V(r,s) T(q)`. The bivariate parts use the pair axes in
/// coordinate order.
#[derive(Clone, Debug)]
pub enum HadamardParts {
    OneTwo {
        u: LaurentPoly1,
        v: LaurentPoly1,
        t: LaurentPoly2,
    },
    TwoOne {
        u: LaurentPoly2,
        v: LaurentPoly2,
        t: LaurentPoly1,
    },
}

#[derive(Clone, Debug)]
pub struct HadamardForm {
    pub single_axis: Axis,
    pub pair_axes: (Axis, Axis),
    pub parts: HadamardParts,
}

impl HadamardForm {
    pub fn is_one_two(&self) -> bool {
        matches!(self.parts, HadamardParts::OneTwo { .. })
    }

    /// Re-expands `U + V*T` into inventory exponents, for verification.
    pub fn recombine(&self) -> BTreeMap<[i64; 3], Rat> {
        let q = self.single_axis.index();
        let (r, s) = (self.pair_axes.0.index(), self.pair_axes.1.index());
        let mut out: BTreeMap<[i64; 3], Rat> = BTreeMap::new();
        let mut add = |exp: [i64; 3], coeff: Rat| {
            if coeff.is_zero() {
                return;
            }
            let slot = out.entry(exp).or_insert_with(Rat::zero);
            *slot += coeff;
            if slot.is_zero() {
                out.remove(&exp);
            }
        };
        match &self.parts {
            HadamardParts::OneTwo { u, v, t } => {
                for (e, c) in u.terms() {
                    let mut exp = [0i64; 3];
                    exp[q] = e;
                    add(exp, c.clone());
                }
                for (ev, cv) in v.terms() {
                    for (et, ct) in t.terms() {
                        let mut exp = [0i64; 3];
                        exp[q] = ev;
                        exp[r] = et[0];
                        exp[s] = et[1];
                        add(exp, cv * ct);
                    }
                }
            }
            HadamardParts::TwoOne { u, v, t } => {
                for (e, c) in u.terms() {
                    let mut exp = [0i64; 3];
                    exp[r] = e[0];
                    exp[s] = e[1];
                    add(exp, c.clone());
                }
                for (ev, cv) in v.terms() {
                    for (et, ct) in t.terms() {
                        let mut exp = [0i64; 3];
                        exp[r] = ev[0];
                        exp[s] = ev[1];
                        exp[q] = et;
                        add(exp, cv * ct);
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct HadamardDecomposition {
    pub kind: HadamardKind,
    pub forms: Vec<HadamardForm>,
}

/// Tests, for each choice of single axis, whether the inventory admits the
/// `(1,2)` form `U(q) + V(q) T(r,s)` or the `(2,1)` form `U(r,s) + V(r,s) T(q)`.
/// Canonical form: `T` has zero constant term and its lexicographically first
/// nonzero coefficient is 1.
pub fn hadamard_decompose(s: &StepSet) -> HadamardDecomposition {
    let inv = s.inventory();
    let mut forms = Vec::new();
    for axis in Axis::ALL {
        if let Some(parts) = try_one_two(&inv, axis) {
            forms.push(HadamardForm {
                single_axis: axis,
                pair_axes: axis.others(),
                parts,
            });
        }
        if let Some(parts) = try_two_one(&inv, axis) {
            forms.push(HadamardForm {
                single_axis: axis,
                pair_axes: axis.others(),
                parts,
            });
        }
    }
    HadamardDecomposition {
        kind: derive_kind(&forms),
        forms,
    }
}

/// A (1,2) split `U(q) + V(q) T(r,s)` with `U` proportional to the
/// non-constant part of `V` can be re-read as a (2,1) split about the same
/// axis (and vice versa); the two are one split, not evidence of both
/// structures. `Both` therefore requires the two forms to occur about
/// distinct single axes.
fn derive_kind(forms: &[HadamardForm]) -> HadamardKind {
    let axes12: BTreeSet<Axis> = forms
        .iter()
        .filter(|f| f.is_one_two())
        .map(|f| f.single_axis)
        .collect();
    let axes21: BTreeSet<Axis> = forms
        .iter()
        .filter(|f| !f.is_one_two())
        .map(|f| f.single_axis)
        .collect();
    let genuinely_both = axes12
        .iter()
        .any(|q| axes21.iter().any(|p| p != q));
    match (axes12.is_empty(), axes21.is_empty()) {
        (true, true) => HadamardKind::None,
        (false, true) => HadamardKind::Type12,
        (true, false) => HadamardKind::Type21,
        (false, false) if genuinely_both => HadamardKind::Both,
        // both readings exist but only about one shared axis: report the
        // (1,2) reading, which determines the (2,1) one
        (false, false) => HadamardKind::Type12,
    }
}

/// Layers of the inventory by the power of `q`: `chi = sum_i q^i f_i(r,s)`.
fn layers(inv: &Inventory, q: Axis) -> BTreeMap<i64, LaurentPoly2> {
    let qi = q.index();
    let (r, s) = q.others();
    let mut out: BTreeMap<i64, LaurentPoly2> = BTreeMap::new();
    for (e, c) in inv.terms() {
        out.entry(e[qi])
            .or_default()
            .add_term([e[r.index()], e[s.index()]], c.clone());
    }
    out
}

fn try_one_two(inv: &Inventory, q: Axis) -> Option<HadamardParts> {
    let layers = layers(inv, q);
    // non-constant parts of all layers must be pairwise proportional
    let mut t: Option<LaurentPoly2> = None;
    for g in layers.values().map(LaurentPoly2::without_constant) {
        if g.is_zero() {
            continue;
        }
        match &t {
            None => {
                let (_, lead) = g.first_term().expect("nonzero");
                t = Some(g.scaled(&lead.recip()));
            }
            Some(t0) => {
                let (e0, _) = t0.first_term().expect("nonzero");
                let factor = g
                    .terms()
                    .find(|(e, _)| *e == e0)
                    .map(|(_, c)| c.clone())?;
                if !g.is_multiple_of(t0, &factor) {
                    return None;
                }
            }
        }
    }
    let t = t?; // no (r,s) movement at all: not a (1,2) product
    let (e0, _) = t.first_term().expect("nonzero");
    let mut u = LaurentPoly1::new();
    let mut v = LaurentPoly1::new();
    for (i, f) in &layers {
        u.add_term(*i, f.constant_term());
        let g = f.without_constant();
        if !g.is_zero() {
            let factor = g
                .terms()
                .find(|(e, _)| *e == e0)
                .map(|(_, c)| c.clone())
                .expect("proportional layers share support");
            v.add_term(*i, factor);
        }
    }
    if v.is_zero() {
        return None;
    }
    Some(HadamardParts::OneTwo { u, v, t })
}

fn try_two_one(inv: &Inventory, q: Axis) -> Option<HadamardParts> {
    let layers = layers(inv, q);
    // layers at nonzero powers of q must be pairwise proportional
    let mut v: Option<LaurentPoly2> = None;
    for (_, g) in layers.iter().filter(|(i, _)| **i != 0) {
        match &v {
            None => {
                let (_, lead) = g.first_term()?;
                v = Some(g.scaled(&lead.recip()));
            }
            Some(v0) => {
                let (e0, _) = v0.first_term().expect("nonzero");
                let factor = g
                    .terms()
                    .find(|(e, _)| *e == e0)
                    .map(|(_, c)| c.clone())?;
                if !g.is_multiple_of(v0, &factor) {
                    return None;
                }
            }
        }
    }
    let v = v?; // no movement along q: not a (2,1) product
    let (e0, _) = v.first_term().expect("nonzero");
    let mut t = LaurentPoly1::new();
    for (i, g) in layers.iter().filter(|(i, _)| **i != 0) {
        let factor = g
            .terms()
            .find(|(e, _)| *e == e0)
            .map(|(_, c)| c.clone())
            .expect("proportional layers share support");
        t.add_term(*i, factor);
    }
    let u = layers.get(&0).cloned().unwrap_or_default();
    if t.is_zero() {
        return None;
    }
    Some(HadamardParts::TwoOne { u, v, t })
}

// ---------------------------------------------------------------------------

/// Well-known models used across tests and documentation.
pub mod models {
    use super::StepSet;

    pub const SIMPLE_WALK_CROSS: &str = "000010000 01011010 000010000";
    pub const KREWERAS_CROSS: &str = "000010000 01010000 000000001";
    /// (1,2)-type Hadamard model of the introduction figure:
    /// `U(z) + V(z) T(x,y)` with `U = z + 1/z`, `V = z + 1 + 1/z`,
    /// `T` the first scarecrow.
    pub const HADAMARD_12_CROSS: &str = "101011110 10101110 101011110";
    /// (2,1)-type Hadamard model of the introduction figure:
    /// 2D simple walk plus scarecrow times `z + 1/z`.
    pub const HADAMARD_21_CROSS: &str = "101001110 01011010 101001110";

    pub fn simple_walk() -> StepSet {
        StepSet::from_cross_section(SIMPLE_WALK_CROSS).unwrap()
    }

    pub fn kreweras() -> StepSet {
        StepSet::from_cross_section(KREWERAS_CROSS).unwrap()
    }

    /// The three 2D scarecrow step sets, as `(dy, dz)` pairs.
    pub const SCARECROWS: [[[i64; 2]; 5]; 3] = [
        [[-1, -1], [0, 1], [1, 0], [-1, 1], [1, -1]],
        [[1, 1], [1, -1], [0, -1], [-1, 0], [-1, 1]],
        [[0, 1], [1, 1], [1, -1], [-1, -1], [-1, 0]],
    ];

    /// Embeds a 2D model `T(y,z)` as the (1,2)-type Hadamard walk
    /// `x + 1/x + T(y,z)`.
    pub fn embed_12(pairs: &[[i64; 2]]) -> StepSet {
        let mut disps = vec![[1, 0, 0], [-1, 0, 0]];
        disps.extend(pairs.iter().map(|p| [0, p[0], p[1]]));
        StepSet::from_displacements(&disps).unwrap()
    }

    /// First exceptional model: birectangular triangle, correlation sqrt(7)/3.
    pub const EXCEPTIONAL_1_CROSS: &str = "100000001 00000000 100111001";
    /// Second exceptional model: birectangular triangle, correlation sqrt(7/10).
    pub const EXCEPTIONAL_2_CROSS: &str = "100000100 10100010 001000001";
}

#[cfg(test)]
mod tests;
