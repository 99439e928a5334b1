use dampsym::bateman::{h_b_operator, PhaseState4};
use dampsym::constraint_reduce::{
    branch_check, classical_constraint_check, cross_ratio_diagnostic, good_operator_check, lift_wavefunction,
    reduce_wavefunction, ConstraintSet, ReductionMaps,
};
use dampsym::error::Error;
use dampsym::model_core::PhysParams;
use dampsym::weylalg::WeylOp;
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn p() -> PhysParams {
    PhysParams::default()
}

#[test]
fn initial_constants() {
    let pp = p();
    let big2 = pp.big_omega().unwrap().powi(2);
    let s = ConstraintSet::new(&pp).unwrap().constrained_initial(1.0, 0.0);
    assert!((s.y - pp.omega * pp.omega / big2).abs() < 1e-15);
    assert!((s.p_y - pp.m * pp.gamma / 2.0).abs() < 1e-15);
    let rep = classical_constraint_check(&s, 5.0, &pp).unwrap();
    assert!(rep.pass, "{rep:?}");
    // the displayed e^{+gamma t} form of the p_y relation is not preserved
    assert!(rep.literal_py_violation > 1e-3, "{rep:?}");
}

#[test]
fn off_surface_start_is_rejected() {
    let s = PhaseState4::new(1.0, 0.0, 0.0, 0.0, 0.0);
    assert!(matches!(classical_constraint_check(&s, 1.0, &p()), Err(Error::OffConstraintSurface { .. })));
}

#[test]
fn good_operators_commute_with_the_first_constraint() {
    let pp = p();
    let cs = ConstraintSet::new(&pp).unwrap();
    for g in cs.good_operators() {
        assert!(g.commutator(&cs.c1).is_zero());
    }
    let c12 = cs.c1.commutator(&cs.c2);
    assert!(c12.approx_eq(&WeylOp::scalar(C64::new(0.0, 2.0 * pp.hbar)), 1e-14), "{c12}");
    assert!(!h_b_operator(&pp).commutator(&cs.c1).is_zero());
    assert!(good_operator_check(&pp).unwrap().all_pass());
}

#[test]
fn branch_map() {
    let b = branch_check(&p()).unwrap();
    assert!(b.pass, "{b:?}");
    for a in [1.0, -1.0, 2.5, -0.3] {
        let m = ReductionMaps::new(&p(), a).unwrap();
        for t in [0.05, 0.4, 1.0] {
            let t = t * a.signum();
            if m.check_time(t).is_ok() {
                assert_eq!(m.tau(t).signum(), a.signum(), "A = {a}, t = {t}");
            }
        }
    }
}

#[test]
fn cross_ratio_mismatch_of_the_printed_chain() {
    let m = ReductionMaps::new(&p(), 1.0).unwrap();
    let d = cross_ratio_diagnostic(&m, (0.3, 1.2)).unwrap();
    // the printed chain does not relate the two free times by a Moebius map
    assert_eq!(d.reduced.len(), 3);
    assert!((d.max_mismatch - 3.6293830929215787e-2).abs() < 1e-8, "{d:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constraints_are_preserved(x0 in -2.0..2.0f64, px0 in -2.0..2.0f64) {
        let pp = p();
        let s = ConstraintSet::new(&pp).unwrap().constrained_initial(x0, px0);
        let rep = classical_constraint_check(&s, 5.0, &pp).unwrap();
        prop_assert!(rep.max_y_violation < 1e-8 && rep.max_py_violation < 1e-8, "{:?}", rep);
    }

    #[test]
    fn lift_then_reduce_is_identity(a in prop_oneof![Just(1.0), Just(-1.0)], s in 0.1..0.9f64, c in -1.0..1.0f64) {
        let pp = p();
        let m = ReductionMaps::new(&pp, a).unwrap();
        let t = a * s;
        prop_assume!(m.check_time(t).is_ok());
        let psi = |xp: f64| C64::new((-(xp - c).powi(2)).exp(), 0.5 * xp);
        let xps = [-1.0, -0.2, 0.3, 1.1];
        let ys = [-0.7, 0.0, 0.4, 1.5];
        let phi = |x: f64, y: f64| lift_wavefunction(psi, &m, x, y, t).unwrap();
        let back = reduce_wavefunction(phi, &m, t, &xps, &ys).unwrap();
        for (xp, v) in xps.iter().zip(&back) {
            prop_assert!((v - psi(*xp)).norm() < 1e-10);
        }
    }
}
