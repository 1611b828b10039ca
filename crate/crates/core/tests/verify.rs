use dpf_core::chaos::ProblemParams;
use dpf_core::pareto::nondominated_sort;
use dpf_core::verify::{
    check_dominance_preservation, check_pareto_set_equality, pareto_filter_bruteforce, supports, EquivalenceReport,
    EXPORTED_VIOLATIONS,
};
use dpf_core::{Error, ProblemInstance, ProblemKind};
use rand::{Rng, SeedableRng};

fn inst(kind: ProblemKind, m: usize, d: usize) -> ProblemInstance {
    ProblemInstance::new(kind, m, d).unwrap()
}

#[test]
fn explicit_and_implicit_kinds_preserve_dominance() {
    for kind in [ProblemKind::Dpf1, ProblemKind::Dpf3] {
        let r = check_dominance_preservation(&inst(kind, 3, 2), 10_000, 1).unwrap();
        assert_eq!(r.samples_tested, 10_000);
        assert_eq!(r.violation_count, 0, "{kind}: {:?}", r.violations.first());
        assert!(r.passed && r.violations.is_empty());
    }
    for kind in [ProblemKind::Dpf2, ProblemKind::Dpf4, ProblemKind::Dpf1a, ProblemKind::Dpf4a] {
        let r = check_dominance_preservation(&inst(kind, 6, 3), 3_000, 2).unwrap();
        assert!(r.passed, "{kind}");
    }
}

#[test]
fn implicit_pairs_cover_every_threshold_case() {
    let r = check_dominance_preservation(&inst(ProblemKind::Dpf4, 10, 5), 3_000, 5).unwrap();
    let cases = r.threshold_cases.unwrap();
    assert!(cases.above > 0 && cases.straddling > 0 && cases.below > 0, "{cases:?}");
    assert_eq!(cases.above + cases.straddling + cases.below, 3_000);
    assert!(check_dominance_preservation(&inst(ProblemKind::Dpf1, 3, 2), 10, 0)
        .unwrap()
        .threshold_cases
        .is_none());
}

#[test]
fn decreasing_layer_is_detected() {
    let params = ProblemParams {
        weight_vectors: Some(vec![vec![-0.5, 0.8551368]]),
        thresholds: None,
    };
    let p = inst(ProblemKind::Dpf1, 3, 2).with_params(params).unwrap();
    let r = check_dominance_preservation(&p, 10_000, 1).unwrap();
    assert!(r.violation_count > 0);
    assert!(!r.passed);
    let v = &r.violations[0];
    assert_ne!(v.relation_in_base, v.relation_in_full);
}

#[test]
fn report_json_keeps_the_first_violations() {
    let params = ProblemParams {
        weight_vectors: Some(vec![vec![-1.0, -1.0]]),
        thresholds: None,
    };
    let p = inst(ProblemKind::Dpf1, 3, 2).with_params(params).unwrap();
    let r = check_dominance_preservation(&p, 2_000, 3).unwrap();
    assert!(r.violations.len() > EXPORTED_VIOLATIONS);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("reports/dpf1.json");
    r.write_json(&path).unwrap();
    let back: EquivalenceReport = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(back.violations.len(), EXPORTED_VIOLATIONS);
    assert_eq!(back.violations[..], r.violations[..EXPORTED_VIOLATIONS]);
    assert_eq!(back.violation_count, r.violation_count);
    assert!(!back.passed);
}

#[test]
fn pareto_sets_agree_on_random_clouds() {
    let kinds = [
        ProblemKind::Dpf1,
        ProblemKind::Dpf2,
        ProblemKind::Dpf3,
        ProblemKind::Dpf4,
        ProblemKind::Dpf1a,
        ProblemKind::Dpf2a,
        ProblemKind::Dpf3a,
        ProblemKind::Dpf4a,
    ];
    for kind in kinds {
        for (m, d) in [(3, 2), (6, 3)] {
            let r = check_pareto_set_equality(&inst(kind, m, d), 1_000, 7).unwrap();
            assert!(r.equal, "{kind} m={m} d={d}");
            assert!(!r.full_front.is_empty());
        }
    }
}

#[test]
fn demo_implicit_keeps_its_pareto_set_but_not_every_pairwise_relation() {
    // Across the branch the constant arm stands in for a different essential
    // objective, so the full space can order pairs that are incomparable in
    // essential space. Optimal points never form such pairs.
    let p = inst(ProblemKind::DemoImplicit, 3, 2);
    let pairs = check_dominance_preservation(&p, 20_000, 1).unwrap();
    assert!(pairs.violation_count > 0);
    let sets = check_pareto_set_equality(&p, 1_000, 1).unwrap();
    assert!(sets.equal);
}

#[test]
fn unsupported_kinds_are_rejected() {
    for (kind, m, d) in [
        (ProblemKind::Dpf5, 3, 2),
        (ProblemKind::Dpf5a, 3, 2),
        (ProblemKind::Dtlz5Im, 4, 2),
        (ProblemKind::DemoPartial, 3, 2),
    ] {
        assert!(!supports(kind));
        assert!(matches!(
            check_dominance_preservation(&inst(kind, m, d), 10, 0),
            Err(Error::Contract(_))
        ));
    }
}

#[test]
fn bruteforce_filter_examples() {
    assert_eq!(pareto_filter_bruteforce(&[[0.0, 1.0], [1.0, 0.0], [1.0, 1.0]]), vec![0, 1]);
    assert_eq!(pareto_filter_bruteforce(&[[0.3, 0.3]; 4]), vec![0, 1, 2, 3]);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
    let pts: Vec<Vec<f64>> = (0..200).map(|_| (0..3).map(|_| rng.gen::<f64>()).collect()).collect();
    let mut front0 = nondominated_sort(&pts).swap_remove(0);
    front0.sort_unstable();
    assert_eq!(pareto_filter_bruteforce(&pts), front0);
}
