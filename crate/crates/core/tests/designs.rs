use std::sync::Arc;

use fwc_core::designs::*;
use fwc_core::families::{punctured_subfield_code, ClaimStatus, CodeKind, Family, FamilyId, FamilySpec};
use fwc_core::galois::{Field, FieldTower};
use fwc_core::lincode::{macwilliams_transform, LinearCode, DEFAULT_BUDGET};
use fwc_core::Error;
use proptest::prelude::*;

const B: u64 = DEFAULT_BUDGET;

fn field(q: u32) -> Arc<Field> {
    FieldTower::for_q(q, 1).unwrap().mid().clone()
}

fn f1_base(q: u32) -> LinearCode {
    Family::new(&FamilySpec::new(FamilyId::F1, q, 2)).unwrap().code(CodeKind::Base).unwrap()
}

fn rm13() -> LinearCode {
    punctured_subfield_code(&FamilySpec::new(FamilyId::F2, 2, 2)).unwrap()
}

#[test]
fn f1_weight_six_supports() {
    let d = supports_of_weight(&f1_base(2), 6, B).unwrap();
    assert_eq!((d.n, d.kappa, d.block_count(), d.codewords), (9, 6, 12, 36));
    assert_eq!(verify_t_design(&d, 2).unwrap(), 5);
    assert!(design_count_identity(12, 9, 6, 2, 5));

    let s = complement_design(&d);
    assert_eq!((s.kappa, s.block_count()), (3, 12));
    let v = verified(&s, 2).unwrap();
    assert!(v.is_steiner());
    assert_eq!(complement_design(&s).blocks, d.blocks);
}

#[test]
fn f1_q3_complement_is_steiner() {
    let d = supports_of_weight(&f1_base(3), 24, B).unwrap();
    assert_eq!((d.block_count(), d.codewords), (63, 504));
    assert_eq!(verify_t_design(&d, 2).unwrap(), 46);
    let s = complement_design(&d);
    assert_eq!((s.n, s.kappa), (28, 4));
    assert_eq!(verify_t_design(&s, 2).unwrap(), 1);
}

#[test]
fn reed_muller_weight_four() {
    let d = supports_of_weight(&rm13(), 4, B).unwrap();
    assert_eq!((d.block_count(), d.codewords), (14, 14));
    assert_eq!(verify_t_design(&d, 3).unwrap(), 1);
    assert_eq!(verify_t_design(&d, 2).unwrap(), 3);
}

#[test]
fn full_space_top_weight_is_one_block() {
    let f = field(3);
    let rows: Vec<Vec<u32>> = (0..4).map(|i| (0..4).map(|j| (i == j) as u32).collect()).collect();
    let c = LinearCode::new(f, rows).unwrap();
    let d = supports_of_weight(&c, 4, B).unwrap();
    assert_eq!(d.blocks, vec![vec![0, 1, 2, 3]]);
    assert_eq!(d.codewords, 16);
    for t in 0..=4 {
        assert_eq!(verify_t_design(&d, t).unwrap(), 1);
    }
}

#[test]
fn single_block_in_larger_point_set_is_not_a_design() {
    let d = DesignInstance::new(5, 3, vec![vec![2, 0, 4]]).unwrap();
    assert_eq!(d.blocks, vec![vec![0, 2, 4]]);
    let err = verify_t_design(&d, 3).unwrap_err();
    assert!(matches!(err, Error::NotADesign(_)), "{err}");
    match check_t_design(&d, 1).unwrap() {
        DesignVerdict::NotADesign { first, first_count, other, other_count } => {
            assert_eq!((first, first_count), (vec![0], 1));
            assert_eq!((other, other_count), (vec![1], 0));
        }
        v => panic!("{v:?}"),
    }
    assert_eq!(verify_t_design(&d, 0).unwrap(), 1);
}

#[test]
fn design_instance_dedups_and_validates() {
    let d = DesignInstance::new(4, 2, vec![vec![1, 0], vec![0, 1], vec![2, 3]]).unwrap();
    assert_eq!(d.blocks, vec![vec![0, 1], vec![2, 3]]);
    assert!(matches!(DesignInstance::new(4, 2, vec![vec![0, 4]]), Err(Error::Structural(_))));
    assert!(matches!(DesignInstance::new(4, 2, vec![vec![0, 1, 2]]), Err(Error::Structural(_))));
    assert!(matches!(check_t_design(&d, 3), Err(Error::Domain(_))));
}

#[test]
fn empty_weight_class_is_an_error() {
    assert!(matches!(supports_of_weight(&f1_base(2), 7, B), Err(Error::EmptyDesign(_))));
    assert!(matches!(supports_of_weight(&rm13(), 2, B), Err(Error::EmptyDesign(_))));
}

#[test]
fn support_search_agrees_with_dual_enumeration() {
    for code in [f1_base(2), rm13()] {
        let w = code.weight_distribution(B).unwrap();
        let dual = macwilliams_transform(&w, code.k()).unwrap();
        let d = dual.min_distance().unwrap();
        let searched = dual_min_weight_supports(&code, d).unwrap();
        let enumerated = supports_of_weight(&code.dual(), d, B).unwrap();
        assert_eq!(searched, enumerated);
        assert_eq!(u64::try_from(dual.count(d)).unwrap(), searched.codewords);
    }
    let wide = f1_base(9);
    assert!(matches!(dual_min_weight_supports(&wide, 4), Err(Error::Resource(_))));
}

#[test]
fn assmus_mattson_audit_examples() {
    let c = f1_base(2);
    let w = c.weight_distribution(B).unwrap();
    let dual = macwilliams_transform(&w, c.k()).unwrap();
    let a = assmus_mattson_audit(&w, &dual, 2, Side::Code, 6);
    assert!(a.holds);
    assert_eq!((a.orientation, a.d, a.s), (Side::Dual, 3, 1));
    // The hypothesis with t = 3 fails in both orientations.
    assert!(!assmus_mattson_audit(&w, &dual, 3, Side::Code, 6).holds);
}

#[test]
fn export_formats() {
    let d = supports_of_weight(&rm13(), 4, B).unwrap();
    let v = verified(&d, 3).unwrap();
    let json: serde_json::Value = serde_json::from_str(&v.to_json()).unwrap();
    let keys: Vec<&str> = json.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["blocks", "kappa", "lambda", "n", "t"]);
    assert!(v.to_json().starts_with(r#"{"n":8,"t":3,"kappa":4,"lambda":1,"blocks":[[0,"#));
    let text = v.to_text();
    assert_eq!(text.lines().count(), 14);
    assert!(text.lines().all(|l| l.split(' ').count() == 4));
}

#[test]
fn lambda_from_blocks_requires_integrality() {
    assert_eq!(lambda_from_blocks(12, 9, 6, 2), Some(5));
    assert_eq!(lambda_from_blocks(11, 9, 6, 2), None);
    assert_eq!(binomial(136, 4), Some(13_633_830));
}

#[test]
fn theorem_report() {
    let r = verify_design_theorems(&DesignOptions::default()).unwrap();
    assert!(r.passed, "{:#?}", r.claims.iter().filter(|c| c.status == ClaimStatus::Fail).collect::<Vec<_>>());
    let get = |id: &str| r.claim(id).unwrap_or_else(|| panic!("missing {id}"));
    let lam = |id: &str| (get(id).status, get(id).lambda);
    assert_eq!(lam("f1.q2.m2.base.weight_6"), (ClaimStatus::Pass, Some(5)));
    assert_eq!(lam("f1.q2.m2.base.weight_6.complement"), (ClaimStatus::Pass, Some(1)));
    assert_eq!(lam("f1.q3.m2.base.weight_24.complement"), (ClaimStatus::Pass, Some(1)));
    assert_eq!(lam("f1.q3.m2.base.dual.weight_3"), (ClaimStatus::Pass, Some(2)));
    assert_eq!(get("f1.q3.m2.base.dual.weight_3").method, DesignMethod::SupportSearch);
    assert_eq!(lam("f2.q2.m2.punctured.weight_4"), (ClaimStatus::Pass, Some(1)));
    assert_eq!(lam("f2.q2.m3.punctured.weight_16"), (ClaimStatus::Pass, Some(7)));
    assert_eq!(lam("f2.q2.m2.punctured.dual.weight_4"), (ClaimStatus::Pass, Some(1)));
    assert_eq!(get("f2.q2.m3.punctured.dual.other_weights").status, ClaimStatus::Skipped);
    for w in [-16, 16] {
        let id = format!("f6.q2.m4.w{w}.punctured.dual.other_weights");
        assert_eq!(get(&id).status, ClaimStatus::Skipped);
    }
    for c in &r.claims {
        if c.status == ClaimStatus::Pass {
            assert_eq!(c.lambda, c.expected_lambda, "{}", c.id);
            assert_eq!(c.count_identity, Some(true), "{}", c.id);
            if c.method != DesignMethod::Complement {
                assert!(c.assmus_mattson.as_ref().is_some_and(|a| a.holds), "{}", c.id);
            }
        }
    }
    let f6m2 = r.claims.iter().filter(|c| c.family == FamilyId::F6 && c.m == 2).count();
    assert!(f6m2 >= 7);
    assert!(r.claims.iter().filter(|c| c.family == FamilyId::F6 && c.m == 2).all(|c| c.status == ClaimStatus::Pass));
}

fn random_code(q: u32, k: usize, n: usize, seed: &[u32]) -> Option<LinearCode> {
    let f = field(q);
    let rows: Vec<Vec<u32>> = (0..k).map(|i| (0..n).map(|j| seed[(i * n + j) % seed.len()] % q).collect()).collect();
    LinearCode::new(f, rows).ok().filter(|c| c.k() > 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn supports_share_scalar_multiples(q in proptest::sample::select(vec![2u32, 3, 4, 5]), seed in proptest::collection::vec(0u32..1000, 24)) {
        let Some(c) = random_code(q, 3, 8, &seed) else { return Ok(()) };
        let w = c.weight_distribution(B).unwrap();
        let dmin = w.min_distance().unwrap();
        for (kappa, count) in w.support().into_iter().filter(|&(i, _)| i > 0) {
            let d = supports_of_weight(&c, kappa, B).unwrap();
            let (words, blocks) = (d.codewords, d.block_count() as u64);
            prop_assert_eq!(count, words.into());
            // Scalar multiples always share a support; at the minimum weight
            // nothing else does.
            prop_assert_eq!(words % (q as u64 - 1), 0);
            prop_assert!(words >= blocks * (q as u64 - 1));
            if kappa == dmin {
                prop_assert_eq!(words, blocks * (q as u64 - 1));
            }
        }
    }

    #[test]
    fn identity_and_complements_of_designs(seed in proptest::collection::vec(0u32..2, 40), t in 1usize..3) {
        let Some(c) = random_code(2, 4, 10, &seed) else { return Ok(()) };
        let w = c.weight_distribution(B).unwrap();
        for (kappa, _) in w.support().into_iter().filter(|&(i, _)| i >= t && i + t <= 10) {
            let d = supports_of_weight(&c, kappa, B).unwrap();
            if let DesignVerdict::Design { lambda } = check_t_design(&d, t).unwrap() {
                prop_assert!(design_count_identity(d.block_count() as u64, d.n, kappa, t, lambda));
                let comp = complement_design(&d);
                let lc = verify_t_design(&comp, t);
                prop_assert!(lc.is_ok());
                prop_assert_eq!(complement_design(&comp).blocks, d.blocks.clone());
            }
        }
    }
}
