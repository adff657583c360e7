use super::*;
use crate::measures::{crenoa, RoofConfig};
use crate::states::{antisymmetric_333, ghz, random_mixed, random_pure, theorem1_saturating, theorem3_saturating, w_state};
use crate::tensor::{Bipartition, ComplexMatrix, MixedState, PureState};
use crate::{Error, C64};
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use proptest::prelude::*;

fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn quick() -> RoofConfig {
    RoofConfig { restarts: 16, iterations: 200, ..RoofConfig::default() }
}

fn ghz3(a: f64) -> PureState {
    ghz(3, r(a), r((1.0 - a * a).sqrt())).unwrap()
}

fn product(parts: &[&PureState]) -> PureState {
    let mut dims = Vec::new();
    let mut amps = vec![r(1.0)];
    for p in parts {
        dims.extend_from_slice(p.dims());
        amps = amps.iter().flat_map(|x| p.amplitudes().iter().map(move |y| x * y)).collect();
    }
    PureState::new(dims, amps).unwrap()
}

fn only(report: &CheckReport) -> &InequalityReport {
    assert_eq!(report.inequalities.len(), 1);
    &report.inequalities[0]
}

fn exact_term(label: &str, v: f64) -> Term {
    Term::plain(label, v, Bound::Exact)
}

fn term(v: f64, bound: Bound) -> Term {
    Term::plain("t", v, bound)
}

#[test]
fn verdict_requires_matching_bound_directions() {
    // smaller side an upper bound, larger side a lower bound: certified
    let r = InequalityReport::new("x", Relation::AtMost, Side::sum(vec![term(0.2, Bound::Upper)]), Side::sum(vec![term(0.5, Bound::Lower)]));
    assert_eq!(r.verdict, Verdict::Verified);
    assert!((r.slack - 0.3).abs() < 1e-15);
    assert_eq!(r.tolerance, SAMPLED_TOLERANCE);

    let r = InequalityReport::new("x", Relation::AtMost, Side::sum(vec![term(0.2, Bound::Lower)]), Side::sum(vec![term(0.5, Bound::Exact)]));
    assert_eq!(r.verdict, Verdict::Consistent);

    let r = InequalityReport::new("x", Relation::AtLeast, Side::sum(vec![term(0.2, Bound::Upper)]), Side::sum(vec![term(0.5, Bound::Lower)]));
    assert_eq!(r.verdict, Verdict::Violated);

    let r = InequalityReport::new("x", Relation::AtLeast, Side::sum(vec![term(0.2, Bound::Lower)]), Side::sum(vec![term(0.5, Bound::Exact)]));
    assert_eq!(r.verdict, Verdict::Inconclusive);

    let r = InequalityReport::new("x", Relation::AtLeast, Side::sum(vec![exact_term("a", 1.0)]), Side::sum(vec![exact_term("b", 1.0 + 5e-7)]));
    assert_eq!(r.tolerance, EXACT_TOLERANCE);
    assert_eq!(r.verdict, Verdict::Verified);
}

#[test]
fn equalities_need_exact_terms_for_a_firm_verdict() {
    let eq = |l: Term, rr: Term| InequalityReport::new("e", Relation::Equal, Side::sum(vec![l]), Side::sum(vec![rr])).verdict;
    assert_eq!(eq(exact_term("a", 1.0), exact_term("b", 1.0)), Verdict::Verified);
    assert_eq!(eq(exact_term("a", 1.0), exact_term("b", 1.1)), Verdict::Violated);
    assert_eq!(eq(exact_term("a", 1.0), term(1.0005, Bound::Upper)), Verdict::Consistent);
    assert_eq!(eq(exact_term("a", 1.0), term(1.1, Bound::Upper)), Verdict::Inconclusive);
}

#[test]
fn absolute_sides_keep_lower_bounds_only_when_sign_agrees() {
    let mut neg = term(0.5, Bound::Upper);
    neg.weight = -1.0;
    // 0.2 (lower) - 0.5 (upper): the raw sum is a lower bound but negative
    let side = Side::abs(vec![term(0.2, Bound::Lower), neg.clone()]);
    assert!((side.value() - 0.3).abs() < 1e-15);
    assert_eq!(side.bound(), Bound::Estimate);
    let side = Side::abs(vec![term(0.7, Bound::Lower), neg]);
    assert_eq!(side.bound(), Bound::Lower);
    let side = Side::abs(vec![term(0.2, Bound::Upper)]);
    assert_eq!(side.bound(), Bound::Estimate);
    let mut up = term(0.9, Bound::Lower);
    up.weight = -1.0;
    assert_eq!(Side::abs(vec![up]).bound(), Bound::Lower);
}

#[test]
fn report_verdict_is_the_worst() {
    let ok = InequalityReport::new("a", Relation::AtMost, Side::sum(vec![exact_term("a", 0.0)]), Side::sum(vec![exact_term("b", 1.0)]));
    let bad = InequalityReport::new("b", Relation::AtMost, Side::sum(vec![exact_term("a", 2.0)]), Side::sum(vec![exact_term("b", 1.0)]));
    let report = CheckReport { name: "pair".to_string(), inequalities: vec![ok.clone(), bad] };
    assert_eq!(report.verdict(), Verdict::Violated);
    assert_eq!(CheckReport::single(ok).verdict(), Verdict::Verified);
}

#[test]
fn ckw_on_ghz_w_and_product_states() {
    let cfg = quick();
    let g = ckw_check(&ghz3(0.6), &cfg).unwrap();
    let g = only(&g);
    assert!((g.lhs.value() - 0.9216).abs() < 1e-12);
    assert!(g.rhs.value().abs() < 1e-12);
    assert_eq!(g.verdict, Verdict::Verified);

    let w = ckw_check(&w_state(3).unwrap(), &cfg).unwrap();
    let w = only(&w);
    assert!(w.slack.abs() < 1e-6, "slack {}", w.slack);
    assert_eq!(w.verdict, Verdict::Verified);

    let zero = PureState::basis(vec![2, 2, 2], &[0, 1, 0]).unwrap();
    let z = ckw_check(&zero, &cfg).unwrap();
    assert_eq!(z.verdict(), Verdict::Verified);
    assert!(only(&z).slack.abs() < 1e-12);
}

#[test]
fn coa_dual_uses_the_derived_pair_values() {
    let cfg = quick();
    let w = coa_dual_check(&w_state(3).unwrap(), &cfg).unwrap();
    let w = only(&w);
    assert!((w.rhs.value() - 8.0 / 9.0).abs() < 1e-9);
    assert_eq!(w.verdict, Verdict::Verified);

    // pairwise C_a = 2ab = 1, so the dual reads 1 <= 2
    let g = coa_dual_check(&ghz3(core::f64::consts::FRAC_1_SQRT_2), &cfg).unwrap();
    let g = only(&g);
    assert!((g.lhs.value() - 1.0).abs() < 1e-9);
    assert!((g.rhs.value() - 2.0).abs() < 1e-9);
    assert_eq!(g.verdict, Verdict::Verified);
}

#[test]
fn cren_and_crenoa_duals_on_w_states() {
    let cfg = quick();
    let w = cren_monogamy_check(&w_state(3).unwrap(), &cfg).unwrap();
    assert!(only(&w).slack.abs() < 1e-6);
    assert_eq!(w.verdict(), Verdict::Verified);
    assert_eq!(cren_monogamy_check(&ghz3(0.6), &cfg).unwrap().verdict(), Verdict::Verified);

    for n in 3..=5 {
        let d = crenoa_dual_check(&w_state(n).unwrap(), &cfg).unwrap();
        let d = only(&d);
        let nf = n as f64;
        assert!((d.lhs.value() - 4.0 * (nf - 1.0) / (nf * nf)).abs() < 1e-9);
        assert!(d.slack.abs() < 1e-9);
        assert_eq!(d.verdict, Verdict::Verified);
    }
}

#[test]
fn qubit_checks_reject_qudits() {
    let psi = antisymmetric_333();
    let cfg = quick();
    for f in [ckw_check, coa_dual_check, cren_monogamy_check, crenoa_dual_check] {
        assert!(matches!(f(&psi, &cfg), Err(Error::Shape(_))));
    }
    let two = PureState::basis(vec![2, 2], &[0, 0]).unwrap();
    assert!(matches!(theorem2_check(&two, &cfg), Err(Error::Shape(_))));
    assert!(matches!(theorem3_check(&two, &cfg), Err(Error::Shape(_))));
    let four = MixedState::from_pure(&w_state(4).unwrap());
    assert!(matches!(theorem1_check(&four, &cfg), Err(Error::Shape(_))));
    assert!(matches!(corollary1_check(&MixedState::from_pure(&psi), &cfg), Err(Error::Shape(_))));
    assert!(matches!(decomposition_identity_check(&psi, &cfg), Err(Error::Shape(_))));
}

#[test]
fn theorem1_saturates_and_holds_on_ghz() {
    let cfg = quick();
    for a in [0.3, 0.5, 0.8] {
        let psi = theorem1_saturating(r(a), r((1.0 - a * a).sqrt())).unwrap();
        let t = theorem1_check(&MixedState::from_pure(&psi), &cfg).unwrap();
        let t = only(&t);
        assert!(t.slack.abs() <= 1e-3, "a={a} slack {}", t.slack);
        assert_eq!(t.verdict, Verdict::Verified);
    }
    let t = theorem1_check(&MixedState::from_pure(&ghz3(0.6)), &cfg).unwrap();
    let t = only(&t);
    assert!((t.lhs.value() - 0.9216).abs() < 1e-9);
    assert!((t.rhs.value() - 2.0 * 0.9216).abs() < 1e-9);
    assert_eq!(t.verdict, Verdict::Verified);
}

#[test]
fn theorem1_on_mixed_input_is_never_certified() {
    let cfg = quick();
    for seed in 0..3 {
        let rho = random_mixed(&[2, 2, 2], 2, seed).unwrap();
        let t = theorem1_check(&rho, &cfg).unwrap();
        assert_eq!(t.verdict(), Verdict::Consistent, "seed {seed}: {:?}", only(&t).slack);
    }
}

fn swap_symmetric(seed: u64) -> PureState {
    let psi = random_pure(&[2, 2, 2], seed).unwrap();
    let swapped = psi.permuted(&[0, 2, 1]).unwrap();
    let amps = psi.amplitudes().iter().zip(swapped.amplitudes()).map(|(x, y)| x + y).collect();
    PureState::from_unnormalized(vec![2, 2, 2], amps).unwrap()
}

#[test]
fn theorem1_respects_exchange_symmetry() {
    let (u, v) = (swap_symmetric(11), swap_symmetric(12));
    let m = ComplexMatrix::outer(u.amplitudes(), u.amplitudes())
        .scaled(0.65)
        .add(&ComplexMatrix::outer(v.amplitudes(), v.amplitudes()).scaled(0.35));
    let rho = MixedState::new(vec![2, 2, 2], m).unwrap();
    let t = theorem1_check(&rho, &RoofConfig::default()).unwrap();
    let t = only(&t);
    let (b, c) = (t.rhs.terms[0].contribution(), t.rhs.terms[1].contribution());
    assert!((b - c).abs() <= 2e-3, "B {b} vs C {c}");
}

#[test]
fn corollary1_chains_on_ghz_and_w() {
    let cfg = quick();
    for n in [3, 4] {
        let a = 0.6;
        let psi = ghz(n, r(a), r(0.8)).unwrap();
        let c = corollary1_check(&MixedState::from_pure(&psi), &cfg).unwrap();
        assert_eq!(c.inequalities.len(), 2);
        let q = 4.0 * 0.36 * 0.64;
        assert!((c.inequalities[0].lhs.value() - q).abs() < 1e-9);
        assert!((c.inequalities[0].rhs.value() - (n - 1) as f64 * q).abs() < 1e-9);
        assert_eq!(c.verdict(), Verdict::Verified);

        let w = corollary1_check(&MixedState::from_pure(&w_state(n).unwrap()), &cfg).unwrap();
        let nf = n as f64;
        assert!((w.inequalities[0].rhs.value() - 4.0 * (nf - 1.0).powi(2) / (nf * nf)).abs() < 1e-9);
        assert_eq!(w.verdict(), Verdict::Verified);
    }
}

#[test]
fn theorem2_on_w4_has_half_slack() {
    let t = theorem2_check(&w_state(4).unwrap(), &quick()).unwrap();
    let t = only(&t);
    assert!((t.slack - 0.5).abs() < 1e-9);
    assert!((t.rhs.value() - 1.0).abs() < 1e-9);
    assert_eq!(t.verdict, Verdict::Verified);
}

#[test]
fn theorem2_and_theorem3_on_ghz() {
    let cfg = quick();
    for n in [3, 4] {
        let psi = ghz(n, r(0.6), r(0.8)).unwrap();
        let q = 0.9216;
        let t2 = theorem2_check(&psi, &cfg).unwrap();
        assert!((only(&t2).lhs.value() - 2.0 * (n - 1) as f64 * q).abs() < 1e-9);
        assert_eq!(t2.verdict(), Verdict::Verified);
        let t3 = theorem3_check(&psi, &cfg).unwrap();
        assert!(only(&t3).rhs.value().abs() < 1e-12);
        assert_eq!(t3.verdict(), Verdict::Verified);
    }
}

#[test]
fn theorem3_saturating_state_has_unentangled_b_pairs() {
    let s = 1.0 / 3f64.sqrt();
    let psi = theorem3_saturating(r(s), r(s), r(s)).unwrap();
    let t = theorem3_check(&psi, &quick()).unwrap();
    let t = only(&t);
    let b_pairs: Vec<_> = t.rhs.terms.iter().filter(|t| t.weight < 0.0).collect();
    assert_eq!(b_pairs.len(), 2);
    for p in b_pairs {
        assert!(p.contribution().abs() <= 1e-6, "{} = {}", p.label, p.value);
    }
}

#[test]
fn antisymmetric_chain() {
    let psi = antisymmetric_333();
    let cfg = quick();
    let t1 = theorem1_check(&MixedState::from_pure(&psi), &cfg).unwrap();
    assert!((only(&t1).lhs.value() - 4.0).abs() < 1e-9);
    assert!((only(&t1).rhs.value() - 8.0).abs() < 1e-9);
    assert_eq!(t1.verdict(), Verdict::Verified);

    let t2 = theorem2_check(&psi, &cfg).unwrap();
    let t2 = only(&t2);
    assert!((t2.lhs.value() - 4.0).abs() < 1e-2);
    assert!((t2.rhs.value() - 4.0).abs() < 1e-9);
    assert_ne!(t2.verdict, Verdict::Violated);
    let t3 = theorem3_check(&psi, &cfg).unwrap();
    assert!(only(&t3).rhs.value() < 1e-2);
}

#[test]
fn decomposition_identity_on_closed_form_states() {
    let cfg = quick();
    for psi in [ghz3(0.6), w_state(3).unwrap(), PureState::basis(vec![2, 2, 2], &[1, 0, 1]).unwrap()] {
        let rep = decomposition_identity_check(&psi, &cfg).unwrap();
        assert_eq!(rep.inequalities.len(), 2);
        for eq in &rep.inequalities {
            assert!(eq.slack.abs() <= 1e-6, "{}: {}", eq.name, eq.slack);
            assert_eq!(eq.verdict, Verdict::Verified);
        }
    }
}

#[test]
fn decomposition_identity_on_random_three_qubit_states() {
    for seed in 0..6 {
        let psi = random_pure(&[2, 2, 2], seed).unwrap();
        let rep = decomposition_identity_check(&psi, &quick()).unwrap();
        assert_eq!(rep.verdict(), Verdict::Verified, "seed {seed}");
    }
}

#[test]
fn decomposition_identity_with_a_qutrit_rest_is_not_certified() {
    // with a qutrit rest the residual roof is sampled and the identity
    // itself need not hold; the roof overshoots the missing share
    let psi = random_pure(&[2, 2, 3], 1).unwrap();
    let rep = decomposition_identity_check(&psi, &quick()).unwrap();
    for eq in &rep.inequalities {
        assert_eq!(eq.rhs.terms[1].bound, Bound::Upper);
        assert_eq!(eq.verdict, Verdict::Inconclusive, "{}: {}", eq.name, eq.slack);
    }
}

#[test]
fn entropy_bounds_on_simple_states() {
    let mixed = MixedState::new(vec![2, 2], ComplexMatrix::identity(4).scaled(0.25)).unwrap();
    let cut = Bipartition::new(vec![0], vec![1]).unwrap();
    let e = entropy_subadditivity_check(&mixed, &cut).unwrap();
    assert_eq!(e.inequalities.len(), 2);
    assert!((e.inequalities[0].lhs.value() - 1.0).abs() < 1e-12);
    assert!((e.inequalities[0].rhs.value() - 0.75).abs() < 1e-12);
    assert!(e.inequalities[1].rhs.value().abs() < 1e-12);
    assert_eq!(e.verdict(), Verdict::Verified);
    assert_eq!(e.inequalities[0].tolerance, 1e-9);

    let pure = MixedState::from_pure(&random_pure(&[2, 3], 3).unwrap());
    let e = entropy_subadditivity_check(&pure, &cut).unwrap();
    assert!(e.inequalities[1].rhs.value() < 1e-12);
    assert_eq!(e.verdict(), Verdict::Verified);

    let bad = Bipartition::split(&[0], 3).unwrap();
    assert!(entropy_subadditivity_check(&mixed, &bad).is_err());
}

#[test]
fn product_cut_kills_pairs_with_the_first_party() {
    let a = random_pure(&[2], 4).unwrap();
    let rest = random_pure(&[2, 2, 2], 9).unwrap();
    let psi = product(&[&a, &rest]);
    let t = theorem2_check(&psi, &quick()).unwrap();
    let t = only(&t);
    // terms: 2 N_a^2(rho_01), then the rho_0c block
    for term in &t.lhs.terms[..3] {
        assert!(term.value <= 1e-6, "{} = {}", term.label, term.value);
    }
}

#[test]
fn more_restarts_keep_a_verified_report_verified() {
    let psi = random_pure(&[3, 2, 2], 21).unwrap();
    let low = theorem2_check(&psi, &RoofConfig { restarts: 4, ..RoofConfig::default() }).unwrap();
    let high = theorem2_check(&psi, &RoofConfig { restarts: 24, ..RoofConfig::default() }).unwrap();
    assert_eq!(low.verdict(), Verdict::Verified);
    assert_eq!(high.verdict(), Verdict::Verified);
    assert!(only(&high).slack >= only(&low).slack - 1e-12);
}

#[test]
fn suite_example2_and_example3_rows() {
    let cfg = quick();
    let params = SuiteParams { w_parties: vec![3], ..SuiteParams::default() };
    let res = closed_form_suite(2, &params, &cfg).unwrap();
    let row = res.rows().find(|(_, r)| r.quantity == "N^2(0,1|rest)").unwrap().1;
    assert!((row.computed - 8.0 / 9.0).abs() < 1e-9);
    assert_eq!(row.flag(), Flag::Ok);
    assert_eq!(res.discrepancies(), 0);
    assert_eq!(res.violations(), 0);

    let res = closed_form_suite(3, &params, &cfg).unwrap();
    let lhs = res.rows().find(|(_, r)| r.quantity == "theorem2 lhs").unwrap().1;
    assert!((lhs.computed - 4.0).abs() < 1e-2);
    assert_eq!(res.violations(), 0);
}

#[test]
fn suite_example1_flags_the_printed_pair_value() {
    let res = closed_form_suite(1, &SuiteParams::default(), &quick()).unwrap();
    assert_eq!(res.cases.len(), 4);
    let printed: Vec<_> = res.rows().filter(|(_, r)| r.quantity == "N_a^2(rho_01) printed").map(|(_, r)| r.flag()).collect();
    assert!(printed.iter().all(|f| *f == Flag::Discrepancy));
    let derived = res.rows().filter(|(_, r)| r.quantity == "N_a^2(rho_01)");
    assert!(derived.map(|(_, r)| r).all(|r| r.flag() == Flag::Ok && r.provenance == Provenance::DerivedOracle));
    assert_eq!(res.verdict(), Verdict::Verified);
}

#[test]
fn suite_example4_single_cut_matches_schmidt_computation() {
    let params = SuiteParams { vacuum_weights: vec![0.7], coefficient_sets: SuiteParams::default().coefficient_sets[..1].to_vec(), ..SuiteParams::default() };
    let res = closed_form_suite(4, &params, &quick()).unwrap();
    assert_eq!(res.cases.len(), 1);
    let row = res.rows().find(|(_, r)| r.quantity == "N^2(0|rest)").unwrap().1;
    let expected = 4.0 * 0.49 * (1.0 / 3.0) * (2.0 / 3.0);
    assert!((row.computed - expected).abs() < 1e-9);
    assert_eq!(row.flag(), Flag::Ok);
}

#[test]
fn suite_rejects_bad_input() {
    let cfg = quick();
    assert!(closed_form_suite(5, &SuiteParams::default(), &cfg).is_err());
    let bad = SuiteParams { vacuum_weights: vec![1.5], ..SuiteParams::default() };
    assert!(closed_form_suite(4, &bad, &cfg).is_err());
    let bad = SuiteParams { ghz_parties: vec![2], ..SuiteParams::default() };
    assert!(closed_form_suite(1, &bad, &cfg).is_err());
    let mut bad = SuiteParams::default();
    bad.coefficient_sets[0].rows.pop();
    bad.coefficient_sets[0].rows.pop();
    assert!(closed_form_suite(4, &bad, &cfg).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn three_qubit_sandwich(seed in 0u64..10_000) {
        let psi = random_pure(&[2, 2, 2], seed).unwrap();
        let cfg = quick();
        let t2 = theorem2_check(&psi, &cfg).unwrap();
        let t3 = theorem3_check(&psi, &cfg).unwrap();
        let (upper, block, lower) = (only(&t2).lhs.value(), only(&t2).rhs.value(), only(&t3).rhs.value());
        prop_assert!(lower <= block + 1e-3, "{} > {}", lower, block);
        prop_assert!(block <= upper + 1e-3, "{} > {}", block, upper);
    }

    #[test]
    fn entropy_holds_on_random_two_qubit_states(seed in 0u64..10_000, rank in 1usize..=4) {
        let rho = random_mixed(&[2, 2], rank, seed).unwrap();
        let e = entropy_subadditivity_check(&rho, &Bipartition::new(vec![0], vec![1]).unwrap()).unwrap();
        prop_assert_eq!(e.verdict(), Verdict::Verified);
    }

    #[test]
    fn pair_roofs_in_reports_match_direct_calls(seed in 0u64..10_000) {
        let psi = random_pure(&[2, 2, 2], seed).unwrap();
        let cfg = quick();
        let t2 = theorem2_check(&psi, &cfg).unwrap();
        let direct = crenoa(&psi.reduced(&[0, 1]).unwrap(), &Bipartition::new(vec![0], vec![1]).unwrap(), &cfg).unwrap();
        prop_assert!((only(&t2).lhs.terms[0].contribution() - 2.0 * direct.squared()).abs() < 1e-12);
    }
}
