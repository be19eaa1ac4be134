use fwc_core::families::*;
use fwc_core::funclib::FuncSpec;
use fwc_core::lincode::{LinearCode, WeightDistribution, DEFAULT_BUDGET};
use fwc_core::Error;
use num_bigint::BigUint;
use proptest::prelude::*;

const B: u64 = DEFAULT_BUDGET;

fn fam(f: FamilyId, q: u32, m: u32) -> Family {
    Family::new(&FamilySpec::new(f, q, m)).unwrap()
}

fn params(c: &LinearCode) -> (usize, usize, Option<usize>, WeightDistribution) {
    let w = c.weight_distribution(B).unwrap();
    (c.n(), c.k(), w.min_distance(), w)
}

fn pairs(w: &WeightDistribution) -> Vec<(usize, u64)> {
    w.support().into_iter().map(|(i, c)| (i, u64::try_from(c).unwrap())).collect()
}

fn profile_pairs(v: &Value) -> Vec<(usize, u64)> {
    let Value::Dist(d) = v else { panic!("not a distribution: {v}") };
    d.iter().map(|(w, c)| (*w as usize, c.parse().unwrap())).collect()
}

fn mm(shift: u32, complement: bool) -> FuncSpec {
    FuncSpec::BentMaioranaMcFarland { pi_exp: 1, shift, complement }
}

#[test]
fn base_code_parameters() {
    let c = fam(FamilyId::F1, 2, 2).build_code();
    assert_eq!(c.field().size(), 4);
    let (n, k, d, w) = params(&c);
    assert_eq!((n, k, d), (9, 3, Some(6)));
    assert_eq!(pairs(&w), vec![(0, 1), (6, 36), (8, 27)]);

    let c = fam(FamilyId::F2, 3, 3).build_code();
    assert_eq!(c.field().size(), 27);
    let (n, k, d, _) = params(&c);
    assert_eq!((n, k, d), (244, 3, Some(232)));

    assert_eq!(fam(FamilyId::F2, 2, 2).build_code().n(), 9);
}

#[test]
fn generator_layout() {
    let f = fam(FamilyId::F2, 3, 2);
    let c = f.build_code();
    let g = c.generator();
    assert_eq!((g[0][0], g[1][0], g[2][0]), (0, 1, 0));
    for (j, (x, y)) in f.defining_set().into_iter().enumerate() {
        assert_eq!((g[0][j + 1], g[1][j + 1], g[2][j + 1]), (1, x, y));
    }
}

#[test]
fn defining_set_membership_order_and_completeness() {
    for f in [fam(FamilyId::F1, 3, 2), fam(FamilyId::F2, 2, 3), fam(FamilyId::F3, 2, 3), fam(FamilyId::F6, 2, 2)] {
        let mid = f.tower().mid().clone();
        let qm = f.tower().qm;
        let mut expected = Vec::new();
        for x in 0..qm {
            for y in 0..qm {
                if mid.add(f.f_table()[x as usize], f.g_table()[y as usize]) == 0 {
                    expected.push((x, y));
                }
            }
        }
        assert_eq!(f.defining_set(), expected, "{}", f.spec().label());
    }
}

#[test]
fn subfield_code_parameters() {
    let (n, k, d, _) = params(&fam(FamilyId::F1, 2, 2).subfield_code(&[1, 2]).unwrap());
    assert_eq!((n, k, d), (9, 5, Some(2)));
    let f = fam(FamilyId::F2, 2, 4);
    let (n, k, d, _) = params(&f.subfield_code(&f.polynomial_basis()).unwrap());
    assert_eq!((n, k, d), (129, 8, Some(64)));
}

#[test]
fn punctured_code_parameters() {
    let cases = [
        (FamilySpec::new(FamilyId::F1, 2, 2), (8, 5, 2)),
        (FamilySpec::new(FamilyId::F2, 2, 2), (8, 4, 4)),
        (FamilySpec::new(FamilyId::F1, 3, 2), (27, 5, 15)),
        (FamilySpec::new(FamilyId::F2, 2, 3), (32, 6, 16)),
        (FamilySpec::new(FamilyId::F4, 2, 3), (32, 7, 12)),
    ];
    for (spec, want) in cases {
        let (n, k, d, _) = params(&punctured_subfield_code(&spec).unwrap());
        assert_eq!((n, k, d), (want.0, want.1, Some(want.2)), "{}", spec.label());
    }
}

#[test]
fn trace_code_dimensions() {
    assert_eq!(fam(FamilyId::F2, 2, 2).trace_code().k(), 4);
    assert_eq!(fam(FamilyId::F3, 2, 3).trace_code().k(), 7);
}

#[test]
fn dependent_basis_is_domain_error() {
    let f = fam(FamilyId::F2, 3, 2);
    assert!(matches!(f.subfield_code(&[1, 2]), Err(Error::Domain(_))));
    assert!(matches!(f.subfield_code(&[0, 3]), Err(Error::Domain(_))));
    assert!(f.subfield_code(&[1]).is_err());
}

#[test]
fn invalid_specs_are_rejected() {
    let bad = [
        FamilySpec::new(FamilyId::F1, 2, 3),
        FamilySpec::new(FamilyId::F2, 6, 2),
        FamilySpec::new(FamilyId::F3, 3, 3),
        FamilySpec::new(FamilyId::F3, 2, 4),
        FamilySpec::new(FamilyId::F4, 2, 2),
        FamilySpec::new(FamilyId::F5, 2, 3),
        FamilySpec::new(FamilyId::F6, 4, 2),
        FamilySpec::new(FamilyId::F1, 2, 2).with_functions(FuncSpec::Trace, FuncSpec::Trace),
        FamilySpec::new(FamilyId::F3, 2, 3).with_functions(FuncSpec::Trace, FuncSpec::Trace),
        FamilySpec::new(FamilyId::F3, 2, 3).with_functions(FuncSpec::Trace, FuncSpec::TraceOfMonomial { t: 7 }),
        FamilySpec::new(FamilyId::F5, 2, 2).with_functions(FuncSpec::Trace, FuncSpec::Trace),
        FamilySpec::new(FamilyId::F6, 2, 2).with_functions(mm(0, false), mm(0, false)),
        FamilySpec::new(FamilyId::F4, 2, 5)
            .with_functions(FuncSpec::TraceOfMonomial { t: 3 }, FuncSpec::TraceOfMonomial { t: 3 }),
    ];
    for spec in bad {
        let err = Family::new(&spec).unwrap_err();
        assert!(matches!(err, Error::Spec(_)), "{}: {err}", spec.label());
    }
    assert!("F7".parse::<FamilyId>().is_err());
    assert_eq!("F4".parse::<FamilyId>().unwrap(), FamilyId::F4);
}

#[test]
fn subfield_and_trace_row_spaces_agree_on_every_family() {
    for (id, q, m) in [
        (FamilyId::F1, 2, 2),
        (FamilyId::F1, 3, 2),
        (FamilyId::F2, 2, 2),
        (FamilyId::F2, 3, 3),
        (FamilyId::F3, 2, 3),
        (FamilyId::F4, 2, 3),
        (FamilyId::F5, 2, 2),
        (FamilyId::F6, 2, 2),
        (FamilyId::F6, 2, 4),
    ] {
        let f = fam(id, q, m);
        let sub = f.subfield_code(&f.polynomial_basis()).unwrap();
        assert!(sub.same_row_space(&f.trace_code()), "{}", f.spec().label());
    }
}

#[test]
fn f1_subfield_table_rows() {
    // q even: weight q³−q²−q carries q⁴−2q³+q².
    for q in [2u64, 4, 8] {
        let f = fam(FamilyId::F1, q as u32, 2);
        let p = expected_profile(&f).unwrap();
        let Value::Dist(d) = p.code(CodeKind::Subfield).unwrap().distribution.as_ref().unwrap() else { panic!() };
        let w = q * q * q - q * q - q;
        let want = q.pow(4) - 2 * q.pow(3) + q * q;
        assert_eq!(d.get(&w).map(String::as_str), Some(want.to_string().as_str()), "q = {q}");
    }
    let w = fam(FamilyId::F1, 4, 2).subfield_code(&[1, 4]).unwrap().weight_distribution(B).unwrap();
    assert_eq!(w.count(44), BigUint::from(144u32));
}

#[test]
fn binary_f2_punctured_closed_form() {
    for m in 2..=6u32 {
        let p = expected_profile(&fam(FamilyId::F2, 2, m)).unwrap();
        let got = profile_pairs(p.code(CodeKind::Punctured).unwrap().distribution.as_ref().unwrap());
        let want = vec![(0, 1), (1usize << (2 * m - 2), (1u64 << (2 * m)) - 2), (1 << (2 * m - 1), 1)];
        assert_eq!(got, want, "m = {m}");
    }
    for m in [2u32, 3, 4] {
        let w = punctured_subfield_code(&FamilySpec::new(FamilyId::F2, 2, m)).unwrap().weight_distribution(B).unwrap();
        let want = vec![(0, 1), (1usize << (2 * m - 2), (1u64 << (2 * m)) - 2), (1 << (2 * m - 1), 1)];
        assert_eq!(pairs(&w), want, "m = {m}");
    }
}

#[test]
fn f5_subfield_multiplicities() {
    for m in [2u32, 4] {
        let f = fam(FamilyId::F5, 2, m);
        let w = f.subfield_code(&f.polynomial_basis()).unwrap().weight_distribution(B).unwrap();
        let mut got: Vec<u64> = pairs(&w).into_iter().filter(|&(i, _)| i > 0).map(|(_, c)| c).collect();
        let t = 1u64 << m;
        let mut want = vec![t, t * t - 2 * t - 2, t * t, t, 1];
        got.sort_unstable();
        want.sort_unstable();
        assert_eq!(got, want, "m = {m}");
    }
}

#[test]
fn profile_totals_equal_code_size() {
    let mut specs = Vec::new();
    for q in [2u32, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27] {
        specs.push(FamilySpec::new(FamilyId::F1, q, 2));
        for m in 2..=5 {
            if (q as u64).pow(m) <= 1 << 16 {
                specs.push(FamilySpec::new(FamilyId::F2, q, m));
            }
        }
    }
    for m in [3u32, 5, 7] {
        specs.push(FamilySpec::new(FamilyId::F3, 2, m));
        specs.push(FamilySpec::new(FamilyId::F4, 2, m));
    }
    for m in [2u32, 4, 6, 8] {
        specs.push(FamilySpec::new(FamilyId::F5, 2, m));
        specs.push(FamilySpec::new(FamilyId::F6, 2, m));
        specs.push(FamilySpec::new(FamilyId::F6, 2, m).with_functions(mm(0, false), mm(1, false)));
    }
    for spec in specs {
        let p = expected_profile(&Family::new(&spec).unwrap()).unwrap();
        for c in &p.codes {
            let size = (c.field_size as i128).pow(c.k as u32);
            let Some(eff) = c.effective_distribution() else {
                assert!(c.no_closed_form.is_some());
                continue;
            };
            let Value::Dist(d) = eff else { panic!() };
            assert_eq!(d.get(&0).map(String::as_str), Some("1"), "{} {:?}", spec.label(), c.kind);
            assert_eq!(eff.dist_total(), Some(size), "{} {:?}", spec.label(), c.kind);
            let printed = c.distribution.as_ref().unwrap().dist_total();
            if c.corrected_distribution.is_none() {
                assert_eq!(printed, Some(size), "{} {:?}", spec.label(), c.kind);
            } else {
                assert_ne!(printed, Some(size), "pinned correction on a consistent table: {}", spec.label());
            }
        }
    }
}

#[test]
fn out_of_range_parameters_have_no_closed_form() {
    let err = expected_profile(&fam(FamilyId::F2, 3, 1)).unwrap_err();
    assert!(matches!(err, Error::NoClosedForm(_)), "{err}");
    let p = expected_profile(&fam(FamilyId::F4, 2, 3)).unwrap();
    assert!(p.code(CodeKind::Subfield).unwrap().no_closed_form.is_some());
    assert!(p.code(CodeKind::Punctured).unwrap().distribution.is_some());
}

fn assert_clean(r: &FamilyReport) {
    assert!(r.passed, "{}: {:?}", r.spec.label(), r.diffs);
    assert_eq!(r.count(ClaimStatus::Fail), 0);
    for c in &r.cross_checks {
        assert!(c.passed, "{}: {} {}", r.spec.label(), c.name, c.detail);
    }
}

#[test]
fn zero_diff_instances() {
    for (id, q, m) in [(FamilyId::F1, 2, 2), (FamilyId::F1, 3, 2), (FamilyId::F2, 2, 2), (FamilyId::F2, 3, 2), (FamilyId::F2, 2, 3), (FamilyId::F3, 2, 3)] {
        let r = verify_family(&FamilySpec::new(id, q, m)).unwrap();
        assert_clean(&r);
        assert_eq!(r.count(ClaimStatus::Erratum) + r.count(ClaimStatus::Reported), if id == FamilyId::F3 { 1 } else { 0 });
        assert!(r.diffs.is_empty());
    }
}

#[test]
fn pinned_corrections_are_reported_as_errata() {
    let r = verify_family(&FamilySpec::new(FamilyId::F2, 4, 2)).unwrap();
    assert_clean(&r);
    let c = r.claim("punctured.distribution").unwrap();
    assert_eq!(c.status, ClaimStatus::Erratum);
    assert_eq!(profile_pairs(c.actual.as_ref().unwrap()).iter().find(|p| p.0 == 64).map(|p| p.1), Some(21));

    let r = verify_family(&FamilySpec::new(FamilyId::F3, 2, 3)).unwrap();
    let c = r.claim("subfield.dual.k").unwrap();
    assert_eq!((c.status, c.printed.clone(), c.actual.clone()), (ClaimStatus::Erratum, Value::Int(6), Some(Value::Int(26))));
    assert_eq!(r.claim("subfield.dual.d").unwrap().status, ClaimStatus::Pass);

    let r = verify_family(&FamilySpec::new(FamilyId::F6, 2, 2)).unwrap();
    assert_clean(&r);
    assert_eq!(r.claim("subfield.dual.k").unwrap().status, ClaimStatus::Reported);
    assert_eq!(r.claim("subfield.dual.k").unwrap().actual, Some(Value::Int(2)));
    let c = r.claim("punctured.dual.d").unwrap();
    assert_eq!((c.status, c.actual.clone()), (ClaimStatus::Erratum, Some(Value::Int(6))));
}

#[test]
fn table_for_odd_q_even_m_needs_correction_from_m4() {
    let r = verify_family(&FamilySpec::new(FamilyId::F2, 3, 2)).unwrap();
    assert_eq!(r.claim("punctured.distribution").unwrap().status, ClaimStatus::Pass);
    let r = verify_family(&FamilySpec::new(FamilyId::F2, 3, 4)).unwrap();
    assert_clean(&r);
    let c = r.claim("punctured.distribution").unwrap();
    assert_eq!(c.status, ClaimStatus::Erratum);
    assert_eq!(profile_pairs(c.actual.as_ref().unwrap()).iter().find(|p| p.0 == 2 * 729).map(|p| p.1), Some(19194));
}

#[test]
fn walsh_provenance_drives_lengths() {
    let cases = [
        (FamilySpec::new(FamilyId::F6, 2, 2), -4),
        (FamilySpec::new(FamilyId::F6, 2, 2).with_functions(mm(0, false), mm(1, false)), 4),
        (FamilySpec::new(FamilyId::F6, 2, 4), -16),
        (FamilySpec::new(FamilyId::F4, 2, 3), 0),
        (FamilySpec::new(FamilyId::F4, 2, 5), 0),
    ];
    for (spec, w) in cases {
        let f = Family::new(&spec).unwrap();
        let m = f.m();
        let prov = f.walsh().unwrap();
        let sum = |t: &[u32]| t.iter().map(|&v| if v == 0 { 1i64 } else { -1 }).sum::<i64>();
        assert_eq!((prov.w_f_zero, prov.w_g_zero), (sum(f.f_table()), sum(f.g_table())));
        assert_eq!(prov.w, prov.w_f_zero * prov.w_g_zero);
        assert_eq!(prov.w, w, "{}", spec.label());
        let pairs_total: u64 = prov.w_prime.values().sum();
        assert_eq!(pairs_total, (1u64 << (2 * m)) - 1);
        let len = (1i64 << (2 * m - 1)) + w / 2;
        assert_eq!(f.defining_set().len() as i64, len);
        assert_eq!(f.punctured_subfield_code().unwrap().n() as i64, len);
    }
    assert!(fam(FamilyId::F3, 2, 3).walsh().is_none());
}

#[test]
fn delta_offset_and_dual_distance_checks() {
    let r = verify_family(&FamilySpec::new(FamilyId::F1, 2, 2)).unwrap();
    for name in ["delta_offset", "subfield.dual_distance_monotone", "length_formula", "hyperplane_weight_identity"] {
        assert!(r.cross_check(name).is_some_and(|c| c.passed), "{name}");
    }
    assert_eq!(r.claim("base.hermitian_self_orthogonal").unwrap().status, ClaimStatus::Pass);
}

#[test]
fn trace_codeword_matches_generator_combination() {
    let f = fam(FamilyId::F2, 3, 2);
    let d = f.defining_set();
    let t = f.trace_code();
    let sub = f.subfield_code(&f.polynomial_basis()).unwrap();
    assert!(sub.same_row_space(&t));
    let w = f.trace_codeword(&d, 1, 4, 7);
    assert_eq!(w.len(), d.len() + 1);
    let ext = LinearCode::new(t.field().clone(), t.basis().iter().cloned().chain([w]).collect()).unwrap();
    assert_eq!(ext.k(), t.k());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn basis_invariance(seed in any::<u64>(), which in 0usize..4) {
        let (id, q, m) = [(FamilyId::F2, 3, 2), (FamilyId::F2, 2, 3), (FamilyId::F1, 4, 2), (FamilyId::F5, 2, 4)][which];
        let f = fam(id, q, m);
        let reference = f.subfield_code(&f.polynomial_basis()).unwrap();
        let wref = reference.weight_distribution(B).unwrap();
        for basis in f.random_bases(2, seed) {
            let c = f.subfield_code(&basis).unwrap();
            prop_assert!(c.same_row_space(&reference));
            prop_assert_eq!(c.weight_distribution(B).unwrap(), wref.clone());
        }
    }

    #[test]
    fn hyperplane_identity_on_random_messages(u in proptest::collection::vec(0u32..3, 12)) {
        let f = fam(FamilyId::F2, 3, 2);
        let c = f.subfield_code(&f.polynomial_basis()).unwrap();
        let v = &u[..c.generator().len()];
        prop_assert!(c.hyperplane_weight_check(v).unwrap());
    }
}
