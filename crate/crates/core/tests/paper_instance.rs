use lamcert::data::{paper_potential_basis, paper_preset};
use lamcert::linalg::vector;
use lamcert::operator::{CertifiedOperator, OperatorFamily};
use lamcert::report::Status;
use lamcert::scalar::{q, qi};
use lamcert::t4::{solve_t4, verify_large_t4, verify_t4_chain};
use lamcert::verify::{
    check_proposition_computer, check_states_excluded, imt_certificates, run_full_verification, solve_coefficients,
    InterpolationSystem,
};
use lamcert::{QVector, Rational};

fn v(entries: &[(i64, i64)]) -> QVector {
    entries.iter().map(|&(n, d)| q(n, d)).collect()
}

fn operator() -> (lamcert::t4::LargeT4Data, OperatorFamily, CertifiedOperator) {
    let data = paper_preset();
    let family = solve_coefficients(&data).unwrap();
    let op = CertifiedOperator::new(family.clone()).unwrap();
    (data, family, op)
}

#[test]
fn symbol_reproduces_the_legs() {
    let (data, family, _) = operator();
    assert_eq!(family.symbol_b(&[qi(-14), qi(5)]), v(&[(-1, 15), (-2, 15), (-4, 15)]));
    assert_eq!(family.symbol_b(&[qi(19), qi(-8)]), v(&[(7, 15), (-1, 15), (-2, 15)]));
    for i in 0..3 {
        for l in 0..4 {
            assert_eq!(&family.symbol_b(data.node(i, l)), data.leg(i, l));
        }
    }
    assert_eq!(family.degree(), 11);
    for j in 0..3 {
        assert_ne!(family.component(j).leading_x_coeff(), &qi(0));
    }
}

#[test]
fn chain_equations_and_staircase_values() {
    let data = paper_preset();
    let cfg = &data.configs[0];
    // a1 = p + 2 c1
    assert_eq!(data.states[0], vector::add(&cfg.p, &vector::scale(&cfg.c[0], &qi(2))));
    for (i, cfg) in data.configs.iter().enumerate() {
        assert!(verify_t4_chain(cfg).holds, "ordering {}", i + 1);
        assert!(cfg.k.iter().all(|k| *k == qi(i as i64 + 2)));
    }
    let mut broken = cfg.clone();
    broken.k[0] = qi(3);
    assert!(!verify_t4_chain(&broken).holds);
}

#[test]
fn t4_tables_from_points_and_factors() {
    let data = paper_preset();
    for cfg in &data.configs {
        let (p, c) = solve_t4(&cfg.points, &cfg.k).unwrap();
        assert_eq!(p, cfg.p);
        assert_eq!(c, cfg.c);
    }
    assert_eq!(data.configs[1].p, v(&[(18, 65), (27, 65), (8, 65)]));
}

#[test]
fn constant_rank_and_balanced() {
    let (data, family, _) = operator();
    assert!(family.constant_rank_certificate().passes());
    assert_eq!(family.symbol_a(&[qi(1), qi(1)]).rank(), 2);
    assert_eq!(family.symbol_a(&[qi(1), qi(0)]).rank(), 2);
    assert!(family.is_balanced(&data.nodes));
}

#[test]
fn wave_cone_decisions() {
    let (data, _, op) = operator();
    let verdict = op.wave_cone_member(&v(&[(19, 65), (-4, 65), (-6, 65)])).unwrap();
    assert!(verdict.member);
    assert_eq!(verdict.witness_direction, Some(vec![qi(2), qi(-17)]));
    let verdict = op.wave_cone_member(&v(&[(7, 15), (-1, 15), (-2, 15)])).unwrap();
    assert_eq!(verdict.witness_direction, Some(vec![qi(19), qi(-8)]));
    assert!(!op.wave_cone_member(&[qi(1), qi(-1), qi(0)]).unwrap().member);
    // a2 - a1 has two zero components; a3 - a4 pits q2 + q3 against q1
    let a = &data.states;
    assert!(!op.wave_cone_member(&vector::sub(&a[1], &a[0])).unwrap().member);
    assert!(!op.wave_cone_member(&vector::sub(&a[2], &a[3])).unwrap().member);
    assert!(op.wave_cone_member(&[qi(0), qi(0), qi(0)]).unwrap().member);
}

#[test]
fn claims_report_and_perturbations() {
    let (data, family, _) = operator();
    let report = check_proposition_computer(&family, &data);
    assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
    for name in ["item3/gcd/Q1-Q2", "item4/gcd/Q3-R3", "coeff/x^11/q2+q3", "item2/independence/a4"] {
        assert_eq!(report.status_of(name), Some(Status::Pass), "{name}");
    }

    let doubled = OperatorFamily::new([
        family.component(0).scale(&qi(2)),
        family.component(1).clone(),
        family.component(2).clone(),
    ])
    .unwrap();
    let report = check_proposition_computer(&doubled, &data);
    assert_eq!(report.status_of("interpolation/node-consistency"), Some(Status::Fail));
    for name in ["item3/gcd/Q1-Q2", "item3/gcd/Q1-Q3", "item3/gcd/Q2-Q3"] {
        assert_eq!(report.status_of(name), Some(Status::Pass), "{name}");
    }
}

#[test]
fn states_are_pairwise_excluded() {
    let (data, _, op) = operator();
    let report = check_states_excluded(&op, &data.states);
    assert!(report.passed());
    assert_eq!(report.status_of("excluded/a2-a2"), Some(Status::ExpectedMember));
    assert_eq!(report.entries.iter().filter(|e| e.status == Status::Pass).count(), 6);
}

#[test]
fn large_t4_with_repeated_ordering_fails_independence() {
    let (mut data, _, op) = operator();
    assert!(verify_large_t4(&data, &op).passed());
    data.perms[2] = data.perms[0];
    data.configs[2] = data.configs[0].clone();
    let report = verify_large_t4(&data, &op);
    assert!(!report.passed());
    assert!(report.failures().any(|e| e.name.starts_with("t4/independence")));
}

#[test]
fn implicit_function_certificates() {
    let (data, family, _) = operator();
    let report = imt_certificates(&family, &data).unwrap();
    assert_eq!(report.entries.len(), 6);
    assert!(report.passed());
    for e in &report.entries {
        if let Some(cof) = e.witnesses.get("det-cofactor") {
            assert_eq!(cof, &e.witnesses["det"]);
        }
        assert_ne!(e.witnesses["det"], "0");
    }
}

#[test]
fn interpolation_matrix_is_invertible() {
    let data = paper_preset();
    let system = InterpolationSystem::from_data(&data);
    assert_ne!(system.determinant(), qi(0));
    assert_eq!(system.residual_failures(&system.solve().unwrap()), 0);
}

#[test]
fn potential_for_the_staircase_base_point() {
    let (data, family, _) = operator();
    let basis = paper_potential_basis(&data);
    let e = v(&[(2, 15), (4, 15), (8, 15)]);
    let p = family.potential_polynomial_for_constant(&e, &basis).unwrap();
    assert_eq!(family.apply_b_to_poly(&p).unwrap(), e);
    let ones = vec![qi(1); 3];
    let p = family.potential_polynomial_for_constant(&ones, &basis).unwrap();
    assert_eq!(family.apply_b_to_poly(&p).unwrap(), ones);
}

#[test]
fn full_pipeline_passes_and_is_deterministic() {
    let data = paper_preset();
    let (report, family) = run_full_verification(&data);
    assert!(family.is_some());
    assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
    let (again, _) = run_full_verification(&data);
    assert_eq!(report.to_json(), again.to_json());
    let _unused: Rational = qi(0);
}
