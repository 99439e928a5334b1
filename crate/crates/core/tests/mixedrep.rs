use dampsym::mixedrep::{
    certify, eigenfunction_eval, evolve_first_order, loop_monodromy, monodromy_check, scan_spectrum, spectrum_enumerate,
    stationary_residual, EigenLabel, MixedGrid, MixedPoint,
};
use dampsym::model_core::PhysParams;
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn p() -> PhysParams {
    PhysParams::default()
}

fn hw() -> f64 {
    p().hbar * p().big_omega().unwrap()
}

/// RK4 along -V, i.e. the characteristic flow run backwards for time `t`.
fn backward(q: MixedPoint, t: f64, steps: usize) -> MixedPoint {
    let pp = p();
    let big = pp.big_omega().unwrap();
    let v = |x: f64, y: f64| (-0.5 * pp.gamma * x + y / pp.m, -0.5 * pp.gamma * y - pp.m * big * big * x);
    let h = -t / steps as f64;
    let (mut x, mut y) = (q.x, q.p_y);
    for _ in 0..steps {
        let k1 = v(x, y);
        let k2 = v(x + 0.5 * h * k1.0, y + 0.5 * h * k1.1);
        let k3 = v(x + 0.5 * h * k2.0, y + 0.5 * h * k2.1);
        let k4 = v(x + h * k3.0, y + h * k3.1);
        x += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        y += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
    }
    MixedPoint::new(x, y)
}

#[test]
fn bump_transport_matches_integrated_characteristics() {
    let bump = |q: &MixedPoint| C64::new((-(q.x - 0.5).powi(2) - (q.p_y + 0.2).powi(2)).exp(), 0.3 * q.x);
    let grid = MixedGrid::uniform((-2.0, 2.0), (-2.0, 2.0), 9, 9);
    let vals = evolve_first_order(bump, &grid, 1.0, &p()).unwrap();
    for (q, v) in grid.points().zip(&vals) {
        let want = bump(&backward(q, 1.0, 2000));
        assert!((v - want).norm() < 1e-8, "{q:?}");
    }
}

#[test]
fn eigenfunction_against_complex_powers() {
    let pp = p();
    let big = pp.big_omega().unwrap();
    let label = EigenLabel::new(2, 0.7, &pp).unwrap();
    let z = C64::new(1.0, 1.0);
    let got = eigenfunction_eval(&label, &MixedPoint::from_z(z, pp.m, big), &pp).unwrap();
    let want = (z / z.norm()).powi(2) * C64::new(z.norm_sqr(), 0.0).powc(C64::new(0.0, -0.7));
    assert!((got - want).norm() < 1e-12, "{got} vs {want}");
}

#[test]
fn single_valued_energies() {
    let pp = p();
    let m = monodromy_check(3.0 * hw(), 0.0, &pp).unwrap();
    assert!(m.single_valued && (m.factor - 1.0).norm() < 1e-12);
    let e = 2.0 * hw() + 0.37 * pp.hbar * pp.gamma;
    assert!(monodromy_check(e, 0.37, &pp).unwrap().single_valued);
    let f = loop_monodromy(e, 0.37, 1.0, 720, &pp).unwrap();
    assert!((f - 1.0).norm() < 1e-9, "{f}");
    let off = monodromy_check(2.5 * hw(), 0.0, &pp).unwrap();
    assert!(!off.single_valued);
    assert!((loop_monodromy(2.5 * hw(), 0.0, 0.7, 720, &pp).unwrap() + 1.0).norm() < 1e-9);
}

#[test]
fn spectrum_rule() {
    let pp = p();
    assert!((EigenLabel::new(1, 0.0, &pp).unwrap().energy - hw()).abs() < 1e-15);
    assert!((EigenLabel::new(0, 1.0, &pp).unwrap().energy - pp.hbar * pp.gamma).abs() < 1e-15);
    let l = EigenLabel::new(-2, 0.5, &pp).unwrap();
    assert!((l.energy - (-2.0 * hw() + 0.5 * pp.hbar * pp.gamma)).abs() < 1e-14);
    let c = certify(&l, &pp, 9).unwrap();
    assert!(c.pass, "{c:?}");
}

#[test]
fn enumeration_gives_consecutive_levels() {
    let pp = p();
    let labels = spectrum_enumerate((0, 3), &[0.0], &pp, 1).unwrap();
    let ratios: Vec<f64> = labels.iter().map(|c| c.label.energy / hw()).collect();
    assert_eq!(ratios.len(), 4);
    for (k, r) in ratios.iter().enumerate() {
        assert!((r - k as f64).abs() < 1e-12);
    }
    assert!(labels.iter().all(|c| c.pass));
}

#[test]
fn scan_finds_exactly_the_rule() {
    let pp = p();
    for lambda in [0.0, 0.25, 0.5] {
        let r = scan_spectrum(lambda, -5.0 * hw(), 5.0 * hw(), 2001, &pp, 4).unwrap();
        assert_eq!(r.accepted.len(), r.expected.len(), "lambda = {lambda}");
        assert!(r.max_rule_deviation < 1e-9 && r.max_residual < 1e-5, "{r:?}");
    }
}

#[test]
fn origin_is_rejected() {
    let pp = p();
    let l = EigenLabel::new(1, 0.0, &pp).unwrap();
    assert!(eigenfunction_eval(&l, &MixedPoint::new(0.0, 0.0), &pp).is_err());
}

proptest! {
    #[test]
    fn eigenfunctions_are_pure_phases(n in -4i64..5, lambda in -1.0..1.0f64, x in -3.0..3.0f64, py in -3.0..3.0f64) {
        prop_assume!(x.hypot(py) > 1e-3);
        let pp = p();
        let l = EigenLabel::new(n, lambda, &pp).unwrap();
        let v = eigenfunction_eval(&l, &MixedPoint::new(x, py), &pp).unwrap();
        prop_assert!((v.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigenfunctions_are_stationary(n in -3i64..4, lambda in 0.0..1.0f64, x in 0.3..2.0f64, py in -2.0..2.0f64) {
        let pp = p();
        let l = EigenLabel::new(n, lambda, &pp).unwrap();
        let r = stationary_residual(|q| eigenfunction_eval(&l, q, &pp), l.energy, &MixedPoint::new(x, py), &pp).unwrap();
        prop_assert!(r.norm() < 1e-6 * l.energy.abs().max(hw()));
    }
}
