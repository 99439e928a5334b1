use dampsym::arnold::{qat_forward, qat_inverse, qat_transport_check, Gaussian};
use dampsym::ck_evolve::{evolve_ck, schrodinger_residual, EvolveConfig};
use dampsym::grid::{GridState, Picture};
use dampsym::model_core::{build_basis, PhysParams};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

#[test]
fn ck_evolved_gaussian_matches_free_packet() {
    let p = PhysParams::default();
    let b = build_basis(p).unwrap();
    let g = Gaussian::new(1.0, 0.5, 0.8);
    let n_steps = 1500;
    let cfg = EvolveConfig { dt: 0.3 / n_steps as f64, n_steps, x_min: -15.95, x_max: 15.95, n: 4096, snapshot_every: n_steps };
    let init = cfg.state_from(p, |x| g.initial(p.hbar, x));
    let last = evolve_ck(&init, &cfg).unwrap().pop().unwrap();
    let exact = g.ck_grid(&b, cfg.x_min, cfg.x_max, cfg.n, last.t).unwrap();
    assert!((last.t - 0.3).abs() < 1e-12);
    let err = last.l2_distance(&exact).unwrap();
    assert!(err < 1e-6, "L2 error {err:.3e}");

    // the same state, mapped forward, is the free packet at tau(0.3)
    let free = qat_forward(&exact, &b).unwrap();
    let tau = b.tau(0.3).unwrap();
    let worst = (0..free.len())
        .map(|i| (free.psi[i] - g.free(p.m, p.hbar, free.x(i), tau)).norm())
        .fold(0.0, f64::max);
    assert!(worst < 1e-12, "{worst:.3e}");
}

#[test]
fn free_packet_pulls_back_to_a_solution() {
    let p = PhysParams::default();
    let b = build_basis(p).unwrap();
    let g = Gaussian::new(-0.5, 1.0, 0.7);
    let t = b.time_from_tau(0.2).unwrap();
    let r = qat_transport_check(&g, &b, t, 1e-3, -12.0, 12.0, 2048).unwrap();
    assert!(r.residual < 1e-6, "{r:?}");
    assert!(r.roundtrip_l2 < 1e-12, "{r:?}");
}

#[test]
fn pictures_are_checked() {
    let b = build_basis(PhysParams::default()).unwrap();
    let s = GridState::from_fn(-1.0, 1.0, 16, 0.1, PhysParams::default(), |_| C64::new(1.0, 0.0));
    assert!(qat_inverse(&s, &b).is_err());
    let mut f = s.clone();
    f.picture = Picture::Free;
    assert!(qat_forward(&f, &b).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn roundtrip_is_identity(x0 in -2.0..2.0f64, p0 in -2.0..2.0f64, sigma in 0.5..1.5f64, t in -1.2..1.2f64) {
        let p = PhysParams::default();
        let b = build_basis(p).unwrap();
        let g = Gaussian::new(x0, p0, sigma);
        let s = g.ck_grid(&b, -12.0, 12.0, 512, t).unwrap();
        let back = qat_inverse(&qat_forward(&s, &b).unwrap(), &b).unwrap();
        prop_assert!(back.l2_distance(&s).unwrap() < 1e-12);
        // the discrete norm is preserved by the Jacobian factor
        let f = qat_forward(&s, &b).unwrap();
        prop_assert!((f.norm_sq() - s.norm_sq()).abs() < 1e-12);
    }
}

#[test]
fn analytic_ck_packet_solves_the_equation() {
    let p = PhysParams::default();
    let b = build_basis(p).unwrap();
    let g = Gaussian::new(0.3, -0.4, 0.9);
    let h = 1e-3;
    let states: [GridState; 5] = std::array::from_fn(|k| g.ck_grid(&b, -12.0, 12.0, 2048, 0.8 + (k as f64 - 2.0) * h).unwrap());
    let r = schrodinger_residual(&states, h).unwrap();
    assert!(r < 1e-5, "{r:.3e}");
}
