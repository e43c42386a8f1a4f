mod common;

use bellnoise::oracle::{oracle_threshold_tables, ORACLE_MAX_DIMENSION};
use bellnoise::*;
use num_traits::One;

#[test]
fn vertex_and_joint_programs_agree_on_random_settings() {
    let mut rng = common::rng(0xA11CE);
    for n in 2..=4 {
        for case in 0..20 {
            let tables = prediction_tables(&common::random_settings(&mut rng, n)).unwrap();
            let joint = solve_threshold_tables(&tables).unwrap();
            let vertex = oracle_threshold_tables(&tables).unwrap();
            assert!(
                (joint.v_crit - vertex.v_crit).abs() <= 1e-7,
                "n={n} case {case}: joint {} vs vertex {}",
                joint.v_crit,
                vertex.v_crit
            );
        }
    }
}

#[test]
fn qubit_programs_match_chsh() {
    let mut rng = common::rng(0xC45);
    for case in 0..30 {
        let s = common::random_settings(&mut rng, 2);
        let chsh = chsh_analytic(&s).unwrap();
        let joint = solve_threshold(&s).unwrap().v_crit;
        let vertex = oracle_threshold(&s).unwrap().v_crit;
        assert!(
            (chsh.v_crit - joint).abs() <= 1e-6,
            "case {case}: S={}",
            chsh.s
        );
        assert!((chsh.v_crit - vertex).abs() <= 1e-6, "case {case}");
        assert!((joint - vertex).abs() <= 1e-6, "case {case}");
        assert!(
            chsh.s <= 2.0 * 2f64.sqrt() + 1e-12,
            "beyond the Tsirelson bound"
        );
    }
}

#[test]
fn standard_qubit_point_saturates_tsirelson() {
    let chsh = chsh_analytic(&standard_settings(Dimension::new(2).unwrap())).unwrap();
    assert!((chsh.s - 2.0 * 2f64.sqrt()).abs() < 1e-12);
    assert!((chsh.v_crit - 1.0 / 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn identical_alice_observables_are_classical() {
    let mut rng = common::rng(3);
    let s = common::random_settings(&mut rng, 2);
    let same = PhaseSettings::new(s.a1.clone(), s.a1.clone(), s.b1.clone(), s.b2.clone()).unwrap();
    let chsh = chsh_analytic(&same).unwrap();
    assert!(chsh.s <= 2.0 + 1e-12);
    assert_eq!(chsh.v_crit, 1.0);
    assert!((solve_threshold(&same).unwrap().v_crit - 1.0).abs() < 1e-9);
}

#[test]
fn vertex_counts_and_ranges() {
    assert_eq!(enumerate_vertices(2).unwrap().len(), 16);
    assert_eq!(enumerate_vertices(3).unwrap().len(), 81);
    for v in enumerate_vertices(4).unwrap() {
        assert!(v.marginals(4).iter().all(|&b| b <= 1));
        assert!([v.k1, v.k2, v.l1, v.l2].iter().all(|&o| o < 4));
    }
    assert!(matches!(
        enumerate_vertices(ORACLE_MAX_DIMENSION + 1),
        Err(OracleError::TooLarge(_))
    ));
}

#[test]
fn exact_qubit_threshold_is_root_half() {
    let settings = standard_settings_exact(Dimension::new(2).unwrap());
    let exact = exact_vertex_threshold::<Sqrt2Field>(&settings).unwrap();
    assert_eq!(exact.v_crit, Sqrt2Field::from_parts((0, 1), (1, 2)));
    assert_eq!(exact.f_threshold, Sqrt2Field::one() - exact.v_crit.clone());
}

#[test]
fn exact_qutrit_threshold_matches_floats() {
    let settings = standard_settings_exact(Dimension::new(3).unwrap());
    let exact = exact_vertex_threshold::<Sqrt3Field>(&settings).unwrap();
    let float = solve_threshold(&standard_settings(Dimension::new(3).unwrap())).unwrap();
    assert!((exact.f_threshold.to_f64() - float.f_threshold).abs() < 1e-9);
}

#[test]
fn verification_suite_is_green() {
    let report = verify_suite(2, 4);
    for c in &report.checks {
        assert!(c.passed, "{}: {}", c.name, c.detail);
    }
    assert!(report.passed());
}
