use dampsym::bateman::{
    bateman_coordinates, bateman_to_canonical, canonical_to_bateman, classical_consistency, classical_flow,
    gaussian_propagate, h_b, h_b_operator, h_canonical, propagator, symplectic_defect, verify_bateman_algebra,
    GaussianState4, PhaseState4,
};
use dampsym::model_core::{build_basis, classical_trajectory, PhysParams};
use dampsym::weylalg::WeylOp;
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn ih(p: &PhysParams) -> C64 {
    C64::new(0.0, p.hbar)
}

#[test]
fn algebra_entries() {
    let p = PhysParams::default();
    let [x, y, px, py] = bateman_coordinates(&p);
    assert!(x.commutator(&px).approx_eq(&WeylOp::scalar(ih(&p)), 1e-15));
    assert!(x.commutator(&y).is_zero());
    let hx = h_b_operator(&p).commutator(&x);
    let want = (&(-&py) + &x.scale_real(p.m * p.gamma / 2.0)).scale(ih(&p) / p.m);
    assert!(hx.approx_eq(&want, 1e-14), "{hx}");
    assert!(verify_bateman_algebra(&p).is_ok());
}

#[test]
fn canonical_map_is_symplectic_and_carries_the_hamiltonian() {
    let p = PhysParams::default();
    assert!(symplectic_defect(&p).unwrap() < 1e-12);
    let cc = classical_consistency(&p, 100, 10.0, 3).unwrap();
    assert!(cc.hamiltonian_max_dev < 1e-10, "{cc:?}");
    assert!(cc.trajectory_max_err < 1e-6, "{cc:?}");
    assert!(cc.energy_drift < 1e-9, "{cc:?}");
}

#[test]
fn x_projection_is_the_damped_trajectory() {
    let p = PhysParams::default();
    let b = build_basis(p).unwrap();
    let s0 = PhaseState4::new(-0.7, 1.2, 0.9, -0.5, 0.0);
    let tr = classical_flow(s0, 10.0, 0.05, &p).unwrap();
    let times: Vec<f64> = tr.states.iter().map(|s| s.t).collect();
    let closed = classical_trajectory(&b, s0.x, s0.p_y / p.m - 0.5 * p.gamma * s0.x, &times);
    for (s, x) in tr.states.iter().zip(&closed.positions) {
        assert!((s.x - x).abs() < 1e-9, "t = {}", s.t);
    }
    let h0 = h_b(&s0.vec(), &p);
    for s in &tr.states {
        assert!((h_b(&s.vec(), &p) - h0).abs() < 1e-10);
    }
}

#[test]
fn ehrenfest_at_time_zero() {
    let p = PhysParams::default();
    let g = GaussianState4::coherent([0.8, -0.3, 0.2, 0.6], 0.7, 1.1, p.hbar);
    let h = 1e-4;
    let xp = gaussian_propagate(&g, h, &p).mean[0];
    let xm = gaussian_propagate(&g, -h, &p).mean[0];
    let rate = (xp - xm) / (2.0 * h);
    let want = g.mean[3] / p.m - 0.5 * p.gamma * g.mean[0];
    assert!((rate - want).abs() < 1e-8, "{rate} vs {want}");
    // the same coefficients from (i/hbar)[H_B, x]
    let [x, _, _, py] = bateman_coordinates(&p);
    let heis = h_b_operator(&p).commutator(&x).scale(C64::new(0.0, 1.0 / p.hbar));
    assert!(heis.approx_eq(&(&py.scale_real(1.0 / p.m) - &x.scale_real(0.5 * p.gamma)), 1e-14));
}

proptest! {
    #[test]
    fn hamiltonian_is_preserved_by_the_map(v in prop::array::uniform4(-3.0..3.0f64)) {
        let p = PhysParams::default();
        let c = bateman_to_canonical(v.map(|a| C64::new(a, 0.0)), &p).unwrap();
        let hb = h_b(&v, &p);
        prop_assert!((h_canonical(c, &p) - hb).norm() < 1e-10 * (1.0 + hb.abs()));
        let back = canonical_to_bateman(c, &p).unwrap();
        for k in 0..4 {
            prop_assert!((back[k] - v[k]).norm() < 1e-12 * (1.0 + v[k].abs()));
        }
    }

    #[test]
    fn gaussian_means_follow_the_classical_flow_and_keep_uncertainty(
        mean in prop::array::uniform4(-2.0..2.0f64), sx in 0.4..2.0f64, sy in 0.4..2.0f64, t in 0.1..6.0f64
    ) {
        let p = PhysParams::default();
        let g = GaussianState4::coherent(mean, sx, sy, p.hbar);
        let gt = gaussian_propagate(&g, t, &p);
        let tr = classical_flow(PhaseState4::from_vec(mean, 0.0), t, t, &p).unwrap();
        let last = tr.states.last().unwrap().vec();
        for k in 0..4 {
            prop_assert!((gt.mean[k] - last[k]).abs() < 1e-9 * (1.0 + last[k].abs()));
        }
        let (a, b) = (g.symplectic_eigenvalues(), gt.symplectic_eigenvalues());
        prop_assert!((a[0] - b[0]).abs() < 1e-9 && (a[1] - b[1]).abs() < 1e-9, "{a:?} {b:?}");
        prop_assert!(gt.is_physical(p.hbar));
    }

    #[test]
    fn reversed_solutions_are_solutions(v in prop::array::uniform4(-2.0..2.0f64), t in 0.1..4.0f64) {
        let p = PhysParams::default();
        let s = PhaseState4::from_vec(v, 0.0);
        let fwd = propagator(&p, t) * nalgebra::Vector4::from(v);
        let end = PhaseState4::from_vec([fwd[0], fwd[1], fwd[2], fwd[3]], t).time_reversed();
        let back = propagator(&p, t) * nalgebra::Vector4::from(end.vec());
        let want = s.time_reversed().vec();
        for k in 0..4 {
            prop_assert!((back[k] - want[k]).abs() < 1e-10 * (1.0 + want[k].abs()));
        }
    }
}
