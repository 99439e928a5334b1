//! The Bateman dual system (x, p_x) + (y, p_y).

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{verify_realization, LieTable};
use crate::model_core::PhysParams;
use crate::ode;
use crate::report::AlgebraReport;
use crate::weylalg::WeylOp;

/// Phase-space point in the order (x, y, p_x, p_y).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseState4 {
    pub x: f64,
    pub y: f64,
    pub p_x: f64,
    pub p_y: f64,
    pub t: f64,
}

impl PhaseState4 {
    pub fn new(x: f64, y: f64, p_x: f64, p_y: f64, t: f64) -> Self {
        PhaseState4 { x, y, p_x, p_y, t }
    }

    pub fn vec(&self) -> [f64; 4] {
        [self.x, self.y, self.p_x, self.p_y]
    }

    pub fn from_vec(v: [f64; 4], t: f64) -> Self {
        PhaseState4 { x: v[0], y: v[1], p_x: v[2], p_y: v[3], t }
    }

    /// Antisymplectic reflection exchanging the damped and amplified partners.
    /// Together with t -> -t it maps Bateman solutions to solutions.
    pub fn time_reversed(&self) -> Self {
        PhaseState4 { x: self.y, y: self.x, p_x: -self.p_y, p_y: -self.p_x, t: -self.t }
    }
}

/// Symplectic form for the ordering (x, y, p_x, p_y).
pub fn symplectic_j() -> Matrix4<f64> {
    Matrix4::new(
        0.0, 0.0, 1.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        -1.0, 0.0, 0.0, 0.0, //
        0.0, -1.0, 0.0, 0.0,
    )
}

pub fn h_b(v: &[f64; 4], p: &PhysParams) -> f64 {
    let big2 = p.omega * p.omega - p.gamma * p.gamma / 4.0;
    let [x, y, px, py] = *v;
    px * py / p.m + 0.5 * p.gamma * (y * py - x * px) + p.m * big2 * x * y
}

/// Hamiltonian in the canonical variables (X, P, Q, Pi).
pub fn h_canonical<T>(xpqpi: [T; 4], p: &PhysParams) -> T
where
    T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Mul<Output = T> + std::ops::Add<Output = T>,
{
    let [x, pp, q, pi] = xpqpi;
    let w2 = p.omega * p.omega;
    pi * pp * (-1.0 / p.m) + q * pi * (-p.gamma) + pi * pi * (-1.0 / p.m) + x * q * (p.m * w2) + q * q * (-p.m * w2)
}

/// `d/dt (x, y, p_x, p_y) = S (x, y, p_x, p_y)` under H_B.
pub fn flow_matrix(p: &PhysParams) -> Matrix4<f64> {
    let (m, g) = (p.m, p.gamma);
    let big2 = p.omega * p.omega - g * g / 4.0;
    Matrix4::new(
        -g / 2.0, 0.0, 0.0, 1.0 / m, //
        0.0, g / 2.0, 1.0 / m, 0.0, //
        0.0, -m * big2, g / 2.0, 0.0, //
        -m * big2, 0.0, 0.0, -g / 2.0,
    )
}

/// Exact linear propagator `exp(S t)`.
pub fn propagator(p: &PhysParams, t: f64) -> Matrix4<f64> {
    (flow_matrix(p) * t).exp()
}

/// Rows X, P, Q, Pi; columns x, y, p_x, p_y.
pub fn canonical_map_matrix(p: &PhysParams) -> Result<Matrix4<C64>> {
    if p.gamma == 0.0 {
        return Err(Error::DegenerateParams("the map is singular at gamma = 0".into()));
    }
    let big = p.big_omega()?;
    if big == 0.0 {
        return Err(Error::DegenerateParams("the map is singular at Omega = 0".into()));
    }
    let i = C64::i();
    let (m, g, w) = (p.m, p.gamma, p.omega);
    let s = (-(i * g * big)).sqrt();
    let r = |z: C64| z / s;
    let z = C64::new(0.0, 0.0);
    let re = |v: f64| C64::new(v, 0.0);
    Ok(Matrix4::new(
        r(-i * g * big / (2.0 * w)), r(re(w)), z, r(-i * big / (m * w)),
        r(i * m * w * big), r(re(-w * m * g / 2.0)), r(re(w)), z,
        r(i * g * big / (2.0 * w)), r(re(w)), z, r(-i * big / (m * w)),
        r(-i * m * w * big), r(re(-w * m * g / 2.0)), r(re(-w)), z,
    ))
}

/// The displayed transformation: Bateman variables to (X, P, Q, Pi).
pub fn bateman_to_canonical(v: [C64; 4], p: &PhysParams) -> Result<[C64; 4]> {
    let out = canonical_map_matrix(p)? * Vector4::from(v);
    Ok([out[0], out[1], out[2], out[3]])
}

/// Inverse transformation: (X, P, Q, Pi) to (x, y, p_x, p_y).
pub fn canonical_to_bateman(c: [C64; 4], p: &PhysParams) -> Result<[C64; 4]> {
    let inv = canonical_map_matrix(p)?
        .try_inverse()
        .ok_or_else(|| Error::DegenerateParams("canonical map is not invertible".into()))?;
    let out = inv * Vector4::from(c);
    Ok([out[0], out[1], out[2], out[3]])
}

/// `|M J M^T - J|_max` with M reordered to (X, Q, P, Pi) against (x, y, p_x, p_y).
pub fn symplectic_defect(p: &PhysParams) -> Result<f64> {
    let m = canonical_map_matrix(p)?;
    let mq = Matrix4::from_rows(&[m.row(0), m.row(2), m.row(1), m.row(3)]);
    let j = symplectic_j().map(|v| C64::new(v, 0.0));
    Ok((mq * j * mq.transpose() - j).iter().map(|z| z.norm()).fold(0.0, f64::max))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BatemanTrajectory {
    pub states: Vec<PhaseState4>,
}

impl BatemanTrajectory {
    pub fn write_csv<W: std::io::Write>(&self, w: W, p: &PhysParams) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["t", "x", "y", "p_x", "p_y", "H_B"])?;
        for s in &self.states {
            wr.serialize((s.t, s.x, s.y, s.p_x, s.p_y, h_b(&s.vec(), p)))?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// Hamilton's equations of H_B integrated with an adaptive 8th-order scheme,
/// sampled every `dt`.
pub fn classical_flow(s0: PhaseState4, t_final: f64, dt: f64, p: &PhysParams) -> Result<BatemanTrajectory> {
    if !(dt > 0.0) {
        return Err(Error::config("dt", "must be positive"));
    }
    let s = flow_matrix(p);
    let rhs = move |_t: f64, v: &[f64; 4]| {
        let d = s * Vector4::from(*v);
        [d[0], d[1], d[2], d[3]]
    };
    let span = t_final - s0.t;
    let n = (span.abs() / dt).round().max(1.0) as usize;
    let times: Vec<f64> = (0..=n).map(|k| s0.t + span * k as f64 / n as f64).collect();
    let vs = ode::integrate_at(rhs, s0.t, s0.vec(), &times)?;
    Ok(BatemanTrajectory { states: times.iter().zip(vs).map(|(&t, v)| PhaseState4::from_vec(v, t)).collect() })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianState4 {
    pub mean: [f64; 4],
    pub cov: [[f64; 4]; 4],
    pub t: f64,
}

impl GaussianState4 {
    pub fn cov_matrix(&self) -> Matrix4<f64> {
        Matrix4::from_fn(|i, j| self.cov[i][j])
    }

    pub fn from_matrix(mean: [f64; 4], cov: &Matrix4<f64>, t: f64) -> Self {
        let mut c = [[0.0; 4]; 4];
        for (i, row) in c.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = 0.5 * (cov[(i, j)] + cov[(j, i)]);
            }
        }
        GaussianState4 { mean, cov: c, t }
    }

    /// Product of minimum-uncertainty packets in x and y.
    pub fn coherent(mean: [f64; 4], sx: f64, sy: f64, hbar: f64) -> Self {
        let mut cov = [[0.0; 4]; 4];
        cov[0][0] = sx * sx;
        cov[1][1] = sy * sy;
        cov[2][2] = hbar * hbar / (4.0 * sx * sx);
        cov[3][3] = hbar * hbar / (4.0 * sy * sy);
        GaussianState4 { mean, cov, t: 0.0 }
    }

    /// Williamson invariants from `det cov` and `tr((J cov)^2)`, ascending.
    pub fn symplectic_eigenvalues(&self) -> [f64; 2] {
        let c = self.cov_matrix();
        let jc = symplectic_j() * c;
        let sum = -(jc * jc).trace() / 2.0;
        let prod = c.determinant().max(0.0).sqrt();
        let disc = (sum * sum - 4.0 * prod).max(0.0).sqrt();
        let a = ((sum - disc) / 2.0).max(0.0).sqrt();
        let b = ((sum + disc) / 2.0).max(0.0).sqrt();
        [a, b]
    }

    /// Robertson-Schrodinger bound `cov + (i hbar/2) J >= 0`.
    pub fn is_physical(&self, hbar: f64) -> bool {
        self.symplectic_eigenvalues()[0] >= hbar / 2.0 * (1.0 - 1e-12)
    }
}

/// Exact propagation under the quadratic H_B: means by the linear flow,
/// covariance by `Phi cov Phi^T`.
pub fn gaussian_propagate(g: &GaussianState4, t_final: f64, p: &PhysParams) -> GaussianState4 {
    let phi = propagator(p, t_final - g.t);
    let mean = phi * Vector4::from(g.mean);
    let cov = phi * g.cov_matrix() * phi.transpose();
    GaussianState4::from_matrix([mean[0], mean[1], mean[2], mean[3]], &cov, t_final)
}

/// Position-space operators x, y, p_x = -i hbar dx, p_y = -i hbar dy.
pub fn bateman_coordinates(p: &PhysParams) -> [WeylOp; 4] {
    let mih = C64::new(0.0, -p.hbar);
    [WeylOp::x(), WeylOp::y(), WeylOp::dx().scale(mih), WeylOp::dy().scale(mih)]
}

pub fn h_b_operator(p: &PhysParams) -> WeylOp {
    let [x, y, px, py] = bateman_coordinates(p);
    let big2 = p.omega * p.omega - p.gamma * p.gamma / 4.0;
    let kin = (&px * &py).scale_real(1.0 / p.m);
    let dil = (&(&y * &py) - &(&x * &px)).scale_real(p.gamma / 2.0);
    let pot = (&x * &y).scale_real(p.m * big2);
    &(&kin + &dil) + &pot
}

/// X, P, Q, Pi realized on the Bateman Hilbert space through the linear map.
pub fn bateman_basic_ops(p: &PhysParams) -> Result<[WeylOp; 4]> {
    let m = canonical_map_matrix(p)?;
    let coords = bateman_coordinates(p);
    let row = |r: usize| {
        (0..4).fold(WeylOp::zero(), |acc, c| &acc + &coords[c].scale(m[(r, c)]))
    };
    Ok([row(0), row(1), row(2), row(3)])
}

pub fn bateman_table(p: &PhysParams) -> LieTable {
    let (m, g) = (p.m, p.gamma);
    let big2 = p.omega * p.omega - g * g / 4.0;
    let mut t = LieTable::new(&["x", "y", "p_x", "p_y", "H_B"]);
    t.set("x", "p_x", &[], 1.0)
        .set("y", "p_y", &[], 1.0)
        .set("H_B", "x", &[("p_y", -1.0 / m), ("x", g / 2.0)], 0.0)
        .set("H_B", "p_x", &[("p_x", -g / 2.0), ("y", m * big2)], 0.0)
        .set("H_B", "y", &[("p_x", -1.0 / m), ("y", -g / 2.0)], 0.0)
        .set("H_B", "p_y", &[("p_y", g / 2.0), ("x", m * big2)], 0.0);
    t
}

pub fn verify_bateman_algebra(p: &PhysParams) -> Result<AlgebraReport> {
    p.validate()?;
    let [x, y, px, py] = bateman_coordinates(p);
    let h = h_b_operator(p);
    let ops = [("x", &x), ("y", &y), ("p_x", &px), ("p_y", &py), ("H_B", &h)];
    verify_realization(&bateman_table(p), &ops, p.hbar, 1e-12, "Bateman 5+1 algebra").into_result()
}

/// `H_B` expectation for a Gaussian (symmetric ordering of the quadratic form).
pub fn h_b_expectation(g: &GaussianState4, p: &PhysParams) -> f64 {
    let big2 = p.omega * p.omega - p.gamma * p.gamma / 4.0;
    let c = &g.cov;
    let mu = &g.mean;
    let e = |i: usize, j: usize| c[i][j] + mu[i] * mu[j];
    e(2, 3) / p.m + 0.5 * p.gamma * (e(1, 3) - e(0, 2)) + p.m * big2 * e(0, 1)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassicalConsistency {
    pub samples: usize,
    /// max |H(map(v)) - H_B(v)| / (1 + |H_B|) over random points
    pub hamiltonian_max_dev: f64,
    pub symplectic_defect: f64,
    pub t_final: f64,
    /// max |x_Bateman(t) - x_closed_form(t)| over [0, t_final]
    pub trajectory_max_err: f64,
    /// max relative H_B drift along the same flow
    pub energy_drift: f64,
}

impl ClassicalConsistency {
    pub fn passed(&self) -> bool {
        self.hamiltonian_max_dev < 1e-10 && self.symplectic_defect < 1e-12 && self.trajectory_max_err < 1e-6
    }
}

/// The canonical map carries H_B to the canonical Hamiltonian, and the
/// x-projection of the Bateman flow is the damped closed-form trajectory.
pub fn classical_consistency(p: &PhysParams, samples: usize, t_final: f64, seed: u64) -> Result<ClassicalConsistency> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut hamiltonian_max_dev: f64 = 0.0;
    for _ in 0..samples {
        let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
        let c = bateman_to_canonical(v.map(|a| C64::new(a, 0.0)), p)?;
        let hb = h_b(&v, p);
        hamiltonian_max_dev = hamiltonian_max_dev.max((h_canonical(c, p) - hb).norm() / (1.0 + hb.abs()));
    }
    let basis = crate::model_core::build_basis(*p)?;
    let s0 = PhaseState4::new(1.0, 0.5, -0.3, 0.4, 0.0);
    let traj = classical_flow(s0, t_final, 0.01, p)?;
    let v0 = s0.p_y / p.m - 0.5 * p.gamma * s0.x;
    let times: Vec<f64> = traj.states.iter().map(|s| s.t).collect();
    let closed = crate::model_core::classical_trajectory(&basis, s0.x, v0, &times);
    let trajectory_max_err = traj.states.iter().zip(&closed.positions).map(|(s, x)| (s.x - x).abs()).fold(0.0, f64::max);
    let h0 = h_b(&s0.vec(), p);
    let energy_drift = traj.states.iter().map(|s| (h_b(&s.vec(), p) - h0).abs() / h0.abs().max(1e-300)).fold(0.0, f64::max);
    Ok(ClassicalConsistency {
        samples,
        hamiltonian_max_dev,
        symplectic_defect: symplectic_defect(p)?,
        t_final,
        trajectory_max_err,
        energy_drift,
    })
}
