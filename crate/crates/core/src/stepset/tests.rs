use super::models::*;
use super::*;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn disps(s: &StepSet) -> BTreeSet<[i64; 3]> {
    s.displacements().into_iter().collect()
}

#[test]
fn parse_simple_walk() {
    let s = simple_walk();
    let want: BTreeSet<[i64; 3]> = [
        [1, 0, 0],
        [-1, 0, 0],
        [0, 1, 0],
        [0, -1, 0],
        [0, 0, 1],
        [0, 0, -1],
    ]
    .into_iter()
    .collect();
    assert_eq!(disps(&s), want);
}

#[test]
fn parse_kreweras() {
    let s = kreweras();
    let want: BTreeSet<[i64; 3]> = [[-1, 0, 0], [0, -1, 0], [0, 0, -1], [1, 1, 1]]
        .into_iter()
        .collect();
    assert_eq!(disps(&s), want);
}

#[test]
fn parse_rejects_malformed_input() {
    assert!(matches!(
        StepSet::from_cross_section("0101"),
        Err(StepSetError::BadLength(4))
    ));
    assert!(matches!(
        StepSet::from_cross_section(&"2".repeat(26)),
        Err(StepSetError::BadChar('2'))
    ));
    assert!(matches!(
        StepSet::from_cross_section(&"0".repeat(26)),
        Err(StepSetError::Empty)
    ));
}

#[test]
fn parse_json_weighted() {
    let s = StepSet::parse(r#"{"steps":[{"dx":1,"dy":0,"dz":0,"weight":"3/2"},{"dx":-1,"dy":0,"dz":0}]}"#)
        .unwrap();
    assert_eq!(s.len(), 2);
    assert_eq!(s.steps()[0].weight, Rat::new(3.into(), 2.into()));
    assert_eq!(s.steps()[1].weight, Rat::one());

    assert!(StepSet::parse(r#"{"steps":[{"dx":0,"dy":0,"dz":0}]}"#).is_err());
    assert!(StepSet::parse(r#"{"steps":[{"dx":1,"dy":0,"dz":0,"weight":"-1"}]}"#).is_err());
    assert!(StepSet::parse(
        r#"{"steps":[{"dx":1,"dy":0,"dz":0},{"dx":1,"dy":0,"dz":0}]}"#
    )
    .is_err());
}

#[test]
fn cross_section_roundtrip_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..10_000 {
        let bits: u32 = rng.gen_range(1..(1 << 26));
        let text: String = (0..26)
            .map(|i| if bits >> i & 1 == 1 { '1' } else { '0' })
            .collect();
        let parsed = StepSet::from_cross_section(&text).unwrap();
        let emitted = parsed.to_cross_section().unwrap();
        assert_eq!(emitted, text);
        let reparsed = StepSet::from_cross_section(&emitted).unwrap();
        assert_eq!(reparsed, parsed);
    }
}

#[test]
fn json_roundtrip() {
    let s = StepSet::parse(r#"{"steps":[{"dx":2,"dy":-1,"dz":0,"weight":"5/3"},{"dx":0,"dy":0,"dz":-1}]}"#)
        .unwrap();
    let again = StepSet::parse(&s.to_json()).unwrap();
    assert_eq!(again, s);
}

#[test]
fn half_space_examples() {
    let contained = StepSet::from_displacements(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap();
    let v = half_space_check(&contained);
    assert!(v.contained);
    let n = v.witness_normal.unwrap();
    for d in contained.displacements() {
        assert!(n[0] * d[0] + n[1] * d[1] + n[2] * d[2] >= 0);
    }

    assert!(!half_space_check(&simple_walk()).contained);
    assert!(!half_space_check(&kreweras()).contained);
}

#[test]
fn half_space_degenerate_sets() {
    // single step
    let s = StepSet::from_displacements(&[[2, -1, 3]]).unwrap();
    assert!(half_space_check(&s).contained);
    // opposite steps on a line: any orthogonal normal works
    let s = StepSet::from_displacements(&[[1, 1, 0], [-1, -1, 0]]).unwrap();
    let v = half_space_check(&s);
    assert!(v.contained);
    let n = v.witness_normal.unwrap();
    assert_eq!(n[0] + n[1], 0);
    // planar set: the plane normal is a witness
    let s = StepSet::from_displacements(&[[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0]]).unwrap();
    assert!(half_space_check(&s).contained);
}

/// Brute-force oracle: scan random integer normals; any witness it finds
/// must be confirmed by the exact pair-normal enumeration.
#[test]
fn half_space_agrees_with_random_normal_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..60 {
        let n_steps = rng.gen_range(1..=6);
        let mut d = Vec::new();
        for _ in 0..n_steps {
            loop {
                let s = [
                    rng.gen_range(-1..=1i64),
                    rng.gen_range(-1..=1i64),
                    rng.gen_range(-1..=1i64),
                ];
                if s != [0, 0, 0] && !d.contains(&s) {
                    d.push(s);
                    break;
                }
            }
        }
        let set = StepSet::from_displacements(&d).unwrap();
        let verdict = half_space_check(&set);
        let mut oracle_witness = None;
        for _ in 0..10_000 {
            let n = [
                rng.gen_range(-3..=3i64),
                rng.gen_range(-3..=3i64),
                rng.gen_range(-3..=3i64),
            ];
            if n == [0, 0, 0] {
                continue;
            }
            if d.iter().all(|s| n[0] * s[0] + n[1] * s[1] + n[2] * s[2] >= 0) {
                oracle_witness = Some(n);
                break;
            }
        }
        if oracle_witness.is_some() {
            assert!(verdict.contained, "oracle found a witness for {d:?}");
        }
        if let Some(n) = verdict.witness_normal {
            for s in &d {
                assert!(n[0] * s[0] + n[1] * s[1] + n[2] * s[2] >= 0);
            }
        }
    }
}

#[test]
fn dimensionality_examples() {
    assert_eq!(dimensionality(&simple_walk()).dim, 3);
    let two_d =
        StepSet::from_displacements(&[[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1]])
            .unwrap();
    assert_eq!(dimensionality(&two_d).dim, 2);
    let zero_d = StepSet::from_displacements(&[[1, 1, 1]]).unwrap();
    assert_eq!(dimensionality(&zero_d).dim, 0);
    assert_eq!(dimensionality(&kreweras()).dim, 3);
}

#[test]
fn dimensionality_witness_verifies_and_stays_in_range() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let n_steps = rng.gen_range(1..=7);
        let mut d = Vec::new();
        for _ in 0..n_steps {
            loop {
                let s = [
                    rng.gen_range(-1..=1i64),
                    rng.gen_range(-1..=1i64),
                    rng.gen_range(-1..=1i64),
                ];
                if s != [0, 0, 0] && !d.contains(&s) {
                    d.push(s);
                    break;
                }
            }
        }
        let set = StepSet::from_displacements(&d).unwrap();
        let result = dimensionality(&set);
        assert!(result.dim <= 3);
        assert_eq!(result.witness.len(), result.dim as usize);
        for target in 0..3 {
            if !result.witness.contains(&target) {
                assert!(implication_holds(&set, &result.witness, target));
            }
        }
    }
}

#[test]
fn hadamard_simple_walk_is_both() {
    let d = hadamard_decompose(&simple_walk());
    assert_eq!(d.kind, HadamardKind::Both);
    // U = x + 1/x, V = 1, T = y + 1/y + z + 1/z about the x axis
    let form = d
        .forms
        .iter()
        .find(|f| f.is_one_two() && f.single_axis == Axis::X)
        .unwrap();
    if let HadamardParts::OneTwo { u, v, t } = &form.parts {
        assert_eq!(u.coeff(1), Rat::one());
        assert_eq!(u.coeff(-1), Rat::one());
        assert_eq!(v.coeff(0), Rat::one());
        assert_eq!(t.terms().count(), 4);
    } else {
        unreachable!()
    }
}

#[test]
fn hadamard_figure_models() {
    let h12 = StepSet::from_cross_section(HADAMARD_12_CROSS).unwrap();
    let d12 = hadamard_decompose(&h12);
    assert_eq!(d12.kind, HadamardKind::Type12);
    let form = &d12.forms[0];
    assert_eq!(form.single_axis, Axis::Z);
    if let HadamardParts::OneTwo { u, v, .. } = &form.parts {
        // U = z + 1/z, V = z + 1 + 1/z
        assert_eq!(u.coeff(1), Rat::one());
        assert_eq!(u.coeff(-1), Rat::one());
        assert_eq!(u.coeff(0), Rat::zero());
        assert_eq!(v.coeff(0), Rat::one());
        assert_eq!(v.coeff(1), Rat::one());
        assert_eq!(v.coeff(-1), Rat::one());
    } else {
        panic!("expected a (1,2) form");
    }

    let h21 = StepSet::from_cross_section(HADAMARD_21_CROSS).unwrap();
    let d21 = hadamard_decompose(&h21);
    assert_eq!(d21.kind, HadamardKind::Type21);
    assert!(d21.forms.iter().all(|f| !f.is_one_two()));
    assert_eq!(d21.forms[0].single_axis, Axis::Z);
}

#[test]
fn hadamard_recombination_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    for _ in 0..400 {
        let bits: u32 = rng.gen_range(1..(1 << 26));
        let text: String = (0..26)
            .map(|i| if bits >> i & 1 == 1 { '1' } else { '0' })
            .collect();
        let set = StepSet::from_cross_section(&text).unwrap();
        let dec = hadamard_decompose(&set);
        let chi: BTreeMap<[i64; 3], Rat> =
            set.inventory().terms().map(|(e, c)| (e, c.clone())).collect();
        for form in &dec.forms {
            assert_eq!(form.recombine(), chi, "recombination mismatch for {text}");
            checked += 1;
        }
    }
    // the random sample must actually exercise some decompositions
    assert!(checked > 0);
}

#[test]
fn hadamard_weighted_model() {
    // chi = (x + 1/x) + 2 * (y z + 1/(y z)) has a (1,2) form with V = 2
    let s = StepSet::new(vec![
        Step::new(1, 0, 0).unwrap(),
        Step::new(-1, 0, 0).unwrap(),
        Step::weighted(0, 1, 1, Rat::from(BigInt::from(2))).unwrap(),
        Step::weighted(0, -1, -1, Rat::from(BigInt::from(2))).unwrap(),
    ])
    .unwrap();
    let d = hadamard_decompose(&s);
    assert!(matches!(d.kind, HadamardKind::Type12 | HadamardKind::Both));
    let form = d.forms.iter().find(|f| f.is_one_two()).unwrap();
    if let HadamardParts::OneTwo { v, t, .. } = &form.parts {
        // canonical T has leading coefficient 1, so the factor 2 sits in V
        assert_eq!(t.first_term().unwrap().1, &Rat::one());
        assert_eq!(v.coeff(0), Rat::from(BigInt::from(2)));
    }
}

#[test]
fn inventory_gradient_hessian_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let n_steps = rng.gen_range(2..=8);
        let mut d = Vec::new();
        for _ in 0..n_steps {
            loop {
                let s = [
                    rng.gen_range(-2..=2i64),
                    rng.gen_range(-2..=2i64),
                    rng.gen_range(-2..=2i64),
                ];
                if s != [0, 0, 0] && !d.contains(&s) {
                    d.push(s);
                    break;
                }
            }
        }
        let inv = StepSet::from_displacements(&d).unwrap().inventory();
        for _ in 0..100 {
            let p = [
                rng.gen_range(0.5..2.0),
                rng.gen_range(0.5..2.0),
                rng.gen_range(0.5..2.0),
            ];
            let h = 1e-6;
            for i in 0..3 {
                let mut pp = p;
                let mut pm = p;
                pp[i] += h;
                pm[i] -= h;
                let fd = (inv.eval(pp) - inv.eval(pm)) / (2.0 * h);
                let an = inv.gradient(p)[i];
                let scale = an.abs().max(1.0);
                assert!((fd - an).abs() / scale < 1e-6, "grad axis {i}");
            }
            // hessian against central differences of the analytic gradient,
            // which keeps the rounding floor below the 1e-6 target
            let hess = inv.hessian(p);
            for j in 0..3 {
                let mut pp = p;
                let mut pm = p;
                pp[j] += h;
                pm[j] -= h;
                let gp = inv.gradient(pp);
                let gm = inv.gradient(pm);
                for i in 0..3 {
                    let fd = (gp[i] - gm[i]) / (2.0 * h);
                    let an = hess[i][j];
                    let scale = an.abs().max(1.0);
                    assert!((fd - an).abs() / scale < 1e-6, "hess {i}{j}: {fd} vs {an}");
                }
            }
        }
    }
}
