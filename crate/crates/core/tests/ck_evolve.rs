use std::f64::consts::PI;

use dampsym::arnold::Gaussian;
use dampsym::ck_evolve::{apply, conservation_report, evolve_ck, expectation, EvolveConfig};
use dampsym::ck_ops::build_catalog;
use dampsym::error::Error;
use dampsym::grid::GridState;
use dampsym::model_core::{build_basis, classical_trajectory, PhysParams};
use dampsym::weylalg::WeylOp;
use num_complex::Complex64 as C64;

fn config(t_final: f64, dt: f64, n: usize, every: usize) -> EvolveConfig {
    let n_steps = (t_final / dt).round() as usize;
    EvolveConfig { dt: t_final / n_steps as f64, n_steps, x_min: -15.95, x_max: 15.95, n, snapshot_every: every }
}

fn run(p: PhysParams, g: &Gaussian, cfg: &EvolveConfig) -> Vec<GridState> {
    let init = cfg.state_from(p, |x| g.initial(p.hbar, x)).normalized();
    evolve_ck(&init, cfg).unwrap()
}

fn position(s: &GridState) -> f64 {
    expectation(&WeylOp::x(), s).unwrap().re
}

#[test]
fn integrals_of_motion_drift_below_1e6_over_a_period() {
    let p = PhysParams::default();
    let period = 2.0 * PI / p.big_omega().unwrap();
    let cfg = config(period, 2e-4, 4096, 500);
    let snaps = run(p, &Gaussian::new(1.0, 0.5, 0.8), &cfg);
    let c = build_catalog(p).unwrap();
    let rep = conservation_report(&snaps, &[("X", &c.x), ("P", &c.p)], cfg.dt).unwrap();
    for name in ["X", "P"] {
        let d = rep.entry(name).unwrap().rel_drift;
        assert!(d < 1e-6, "{name}: {d:.3e}");
    }
    assert!(rep.norm_drift_per_step < 1e-12);
}

#[test]
fn time_stepping_is_second_order() {
    let p = PhysParams::default();
    let b = build_basis(p).unwrap();
    let g = Gaussian::new(1.0, 0.5, 0.8);
    let err = |dt: f64| {
        let cfg = config(1.0, dt, 4096, 1_000_000);
        let last = run(p, &g, &cfg).pop().unwrap();
        let exact = g.ck_grid(&b, cfg.x_min, cfg.x_max, cfg.n, last.t).unwrap();
        last.l2_distance(&exact).unwrap()
    };
    let (e1, e2) = (err(0.02), err(0.01));
    let ratio = e1 / e2;
    println!("errors {e1:.3e} {e2:.3e}, ratio {ratio:.3}");
    assert!((3.5..=4.5).contains(&ratio), "{e1:.3e} / {e2:.3e} = {ratio:.3}");
}

#[test]
fn mean_position_tracks_classical_trajectory() {
    let p = PhysParams::default();
    let b = build_basis(p).unwrap();
    let cfg = config(3.0, 5e-4, 4096, 600);
    let snaps = run(p, &Gaussian::new(1.0, 0.0, 0.8), &cfg);
    let times: Vec<f64> = snaps.iter().map(|s| s.t).collect();
    let tr = classical_trajectory(&b, 1.0, 0.0, &times);
    for (s, x) in snaps.iter().zip(&tr.positions) {
        assert!((position(s) - x).abs() < 1e-5, "t = {}: {} vs {x}", s.t, position(s));
    }
}

#[test]
fn undamped_coherent_state_oscillates_rigidly() {
    let p = PhysParams { gamma: 0.0, ..Default::default() };
    let sigma = (p.hbar / (2.0 * p.m * p.omega)).sqrt();
    let cfg = config(PI, 5e-4, 4096, 400);
    let snaps = run(p, &Gaussian::new(1.0, 0.0, sigma), &cfg);
    let x2 = &WeylOp::x() * &WeylOp::x();
    for s in &snaps {
        let mean = position(s);
        let var = expectation(&x2, s).unwrap().re - mean * mean;
        assert!((mean - s.t.cos()).abs() < 1e-5, "t = {}", s.t);
        assert!((var - sigma * sigma).abs() < 1e-5, "t = {}: {var}", s.t);
    }
}

#[test]
fn free_packet_spreads() {
    let p = PhysParams { gamma: 0.0, omega: 0.0, ..Default::default() };
    let s0 = 0.6;
    let cfg = config(2.0, 5e-4, 4096, 400);
    let snaps = run(p, &Gaussian::new(0.0, 0.0, s0), &cfg);
    let x2 = &WeylOp::x() * &WeylOp::x();
    for s in &snaps {
        let want = s0 * s0 * (1.0 + (p.hbar * s.t / (2.0 * p.m * s0 * s0)).powi(2));
        let got = expectation(&x2, s).unwrap().re - position(s).powi(2);
        assert!((got - want).abs() < 1e-5 * want, "t = {}: {got} vs {want}", s.t);
    }
}

#[test]
fn canonical_commutator_on_the_grid() {
    let p = PhysParams::default();
    let c = build_catalog(p).unwrap();
    let g = Gaussian::new(0.4, -0.7, 0.9);
    let mut s = GridState::from_fn(-15.95, 15.95, 4096, 0.6, p, |x| g.initial(p.hbar, x)).normalized();
    s.t = 0.6;
    let then = |a: &WeylOp, b: &WeylOp| {
        let mut tmp = s.clone();
        tmp.psi = apply(b, &s).unwrap();
        apply(a, &tmp).unwrap()
    };
    let xp = then(&c.x, &c.p);
    let px = then(&c.p, &c.x);
    let num: C64 = s.psi.iter().zip(xp.iter().zip(&px)).map(|(a, (u, v))| a.conj() * (u - v)).sum();
    let val = num * s.dx / s.norm_sq();
    assert!((val - C64::new(0.0, p.hbar)).norm() < 1e-8, "{val}");
}

#[test]
fn leaking_packet_is_reported() {
    let p = PhysParams::default();
    let cfg = EvolveConfig { dt: 1e-3, n_steps: 2000, x_min: -3.0, x_max: 3.0, n: 256, snapshot_every: 100 };
    let g = Gaussian::new(0.0, 4.0, 0.5);
    let init = cfg.state_from(p, |x| g.initial(p.hbar, x));
    assert!(matches!(evolve_ck(&init, &cfg), Err(Error::BoundaryLeak { .. })));
}

#[test]
fn bad_grid_rejected() {
    let cfg = EvolveConfig { dt: 1e-3, n_steps: 1, x_min: -1.0, x_max: 1.0, n: 1000, snapshot_every: 1 };
    assert!(cfg.validate().is_err());
    let cfg = EvolveConfig { n: 1024, dt: 0.0, ..cfg };
    assert!(cfg.validate().is_err());
}
