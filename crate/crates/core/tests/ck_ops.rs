use dampsym::bateman::{bateman_basic_ops, h_b_operator};
use dampsym::ck_ops::{
    build_catalog, classical_flow_check, conservation_defect, k_table, reduce_k_minus_one, solve_ck_extensions,
    verify_reconstruction, verify_seven_algebra,
};
use dampsym::model_core::PhysParams;
use dampsym::weylalg::{MonomialKey, WeylOp};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

const TOL: f64 = 1e-12;

fn ih() -> C64 {
    C64::new(0.0, 1.0)
}

fn at_zero(op: &WeylOp) -> C64 {
    op.coeffs_at(0.0)
        .into_iter()
        .find(|(k, _)| *k == MonomialKey::new(0, 0, 0, 0, 0))
        .map_or(C64::new(0.0, 0.0), |(_, c)| c)
}

#[test]
fn selected_brackets() {
    let p = PhysParams::default();
    let c = build_catalog(p).unwrap();
    let xp = c.x.commutator(&c.p);
    assert!(xp.approx_eq(&WeylOp::scalar(ih()), TOL), "{xp}");
    let hx = c.h.commutator(&c.x);
    assert!(hx.approx_eq(&c.pi.scale(ih() / p.m), TOL), "{hx}");
    let hg2 = c.h.commutator(&c.g2);
    let want = &(&c.g1.scale(-2.0 * ih()) + &c.g2.scale(ih() * p.gamma)) + &WeylOp::scalar(-2.0 * ih());
    assert!(hg2.approx_eq(&want, TOL), "{hg2}");
    let xq = c.x.commutator(&c.q_tilde);
    assert!(xq.approx_eq(&c.g2.scale(ih() / p.m), TOL), "{xq}");
}

#[test]
fn gauge_functions_at_time_zero() {
    let c = build_catalog(PhysParams::default()).unwrap();
    assert!(at_zero(&c.g2).norm() < 1e-15);
    assert!((at_zero(&c.g1) + 1.0).norm() < 1e-14, "{}", at_zero(&c.g1));
}

#[test]
fn both_printed_forms_of_x_and_p_agree() {
    let c = build_catalog(PhysParams::default()).unwrap();
    assert!(c.x.approx_eq(&c.alt.x_alt, TOL));
    assert!(c.p.approx_eq(&c.alt.p_alt, TOL));
    for k in 0..10 {
        let t = -2.0 + 0.43 * k as f64;
        let a = c.x.coeffs_at(t);
        let b = c.alt.x_alt.coeffs_at(t);
        assert_eq!(a.len(), b.len());
        for ((ka, va), (kb, vb)) in a.iter().zip(&b) {
            assert_eq!(ka, kb);
            assert!((va - vb).norm() < 1e-13, "t = {t}, {ka}");
        }
    }
}

#[test]
fn x_and_p_are_integrals_of_motion() {
    let p = PhysParams::default();
    let c = build_catalog(p).unwrap();
    for op in [&c.x, &c.p] {
        assert!(conservation_defect(op, &p).max_amplitude() < TOL);
    }
    // the energy-like operator is not
    let h = dampsym::ck_ops::h_dho(&p);
    assert!(conservation_defect(&h, &p).max_amplitude() > 1e-3);
}

#[test]
fn extension_family_is_one_dimensional() {
    let p = PhysParams::default();
    let fam = solve_ck_extensions(&p).unwrap();
    assert_eq!(fam.dimension(), 1);
    assert!(k_table(&p, 1.0).jacobi_residual() < 1e-12);
    assert!(k_table(&p, -1.0).jacobi_residual() < 1e-12);
}

#[test]
fn k_minus_one_reduction_on_bateman_space() {
    let p = PhysParams::default();
    let red = reduce_k_minus_one(&build_catalog(p).unwrap()).unwrap();
    let [x, pp, q, _pi] = bateman_basic_ops(&p).unwrap();
    let pi = &red.basic[3];
    assert!(x.commutator(&q).is_zero());
    assert!(q.commutator(pi).approx_eq(&WeylOp::scalar(ih() * p.hbar), TOL));
    let hp = h_b_operator(&p).commutator(&pp);
    assert!(hp.approx_eq(&q.scale(ih() * p.hbar * p.m * p.omega * p.omega), TOL), "{hp}");
    let hx = h_b_operator(&p).commutator(&x);
    assert!(hx.approx_eq(&pi.scale(ih() * p.hbar / p.m), TOL), "{hx}");

    let rec = verify_reconstruction(&red, &p, 7).unwrap();
    assert!(rec.offset.is_some());
    assert!(classical_flow_check(&p, 11, 50) < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn seven_algebra_closes_for_any_underdamped_parameters(
        m in 0.5..2.0f64, gamma in 0.01..1.5f64, omega in 0.8..2.0f64, hbar in 0.5..2.0f64
    ) {
        let p = PhysParams::new(m, gamma, omega, hbar).unwrap();
        prop_assert!(verify_seven_algebra(&build_catalog(p).unwrap()).is_ok());
    }
}
