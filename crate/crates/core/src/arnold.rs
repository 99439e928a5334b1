//! Quantum Arnold transformation between Caldirola-Kanai and free-particle
//! wavefunctions.
//!
//! The forward map sends the x-grid to the kappa-grid `x/u2` point by point,
//! so no interpolation is involved and the `sqrt(u2)` prefactor is exactly the
//! Jacobian that keeps the discrete norm fixed.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridState, Picture};
use crate::model_core::{ClassicalBasis, PhysParams};
use crate::weylalg::WeylOp;

/// Exponent coefficient `c` of the chirp `exp(i c x^2)` removed by the forward map.
fn chirp(basis: &ClassicalBasis, t: f64) -> f64 {
    let p = &basis.params;
    -0.5 * (p.m / p.hbar) * basis.du2(t) / (basis.w(t) * basis.u2(t))
}

pub fn qat_forward(state: &GridState, basis: &ClassicalBasis) -> Result<GridState> {
    if state.picture != Picture::Ck {
        return Err(Error::Grid("qat_forward expects a Caldirola-Kanai state".into()));
    }
    let t = state.t;
    basis.check_domain(t)?;
    let u2 = basis.u2(t);
    let c = chirp(basis, t);
    let amp = u2.sqrt();
    let psi = state
        .psi
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let x = state.x(i);
            z * C64::from_polar(amp, c * x * x)
        })
        .collect();
    Ok(GridState {
        x0: state.x0 / u2,
        dx: state.dx / u2,
        psi,
        t: basis.tau(t)?,
        params: state.params,
        picture: Picture::Free,
    })
}

pub fn qat_inverse(state: &GridState, basis: &ClassicalBasis) -> Result<GridState> {
    if state.picture != Picture::Free {
        return Err(Error::Grid("qat_inverse expects a free-particle state".into()));
    }
    let t = basis.time_from_tau(state.t)?;
    let u2 = basis.u2(t);
    let c = chirp(basis, t);
    let amp = 1.0 / u2.sqrt();
    let x0 = state.x0 * u2;
    let dx = state.dx * u2;
    let psi = state
        .psi
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let x = x0 + i as f64 * dx;
            z * C64::from_polar(amp, -c * x * x)
        })
        .collect();
    Ok(GridState { x0, dx, psi, t, params: state.params, picture: Picture::Ck })
}

/// Gaussian wave packet data: center, momentum and width at time zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gaussian {
    pub x0: f64,
    pub p0: f64,
    pub sigma: f64,
}

impl Gaussian {
    pub fn new(x0: f64, p0: f64, sigma: f64) -> Self {
        Gaussian { x0, p0, sigma }
    }

    /// Normalized packet at time zero; identical in both pictures.
    pub fn initial(&self, hbar: f64, x: f64) -> C64 {
        let s2 = self.sigma * self.sigma;
        let d = x - self.x0;
        let norm = (2.0 * std::f64::consts::PI * s2).powf(-0.25);
        C64::from_polar(norm * (-d * d / (4.0 * s2)).exp(), self.p0 * d / hbar)
    }

    /// Free-particle evolution to time `tau`.
    pub fn free(&self, m: f64, hbar: f64, kappa: f64, tau: f64) -> C64 {
        self.free_at(m, hbar, C64::new(kappa, 0.0), tau)
    }

    /// Analytic continuation of [`Gaussian::free`] to complex positions.
    pub fn free_at(&self, m: f64, hbar: f64, kappa: C64, tau: f64) -> C64 {
        let s2 = self.sigma * self.sigma;
        let a = C64::new(1.0, hbar * tau / (2.0 * m * s2));
        let d = kappa - self.x0;
        let c = d - self.p0 * tau / m;
        let norm = (2.0 * std::f64::consts::PI * s2).powf(-0.25);
        let expo = -c * c / (4.0 * s2 * a) + C64::i() * (d * (self.p0 / hbar) - self.p0 * self.p0 * tau / (2.0 * m * hbar));
        norm / a.sqrt() * expo.exp()
    }

    /// Exact Caldirola-Kanai evolution, obtained by pulling back the free packet.
    pub fn ck(&self, basis: &ClassicalBasis, x: f64, t: f64) -> Result<C64> {
        self.ck_at(basis, C64::new(x, 0.0), t)
    }

    /// Analytic continuation of [`Gaussian::ck`] to complex positions.
    pub fn ck_at(&self, basis: &ClassicalBasis, x: C64, t: f64) -> Result<C64> {
        basis.check_domain(t)?;
        let p = &basis.params;
        let u2 = basis.u2(t);
        let tau = basis.tau(t)?;
        let c = chirp(basis, t);
        Ok(self.free_at(p.m, p.hbar, x / u2, tau) * (C64::new(0.0, -c) * x * x).exp() / u2.sqrt())
    }

    pub fn ck_grid(&self, basis: &ClassicalBasis, x_min: f64, x_max: f64, n: usize, t: f64) -> Result<GridState> {
        basis.check_domain(t)?;
        let mut s = GridState::from_fn(x_min, x_max, n, t, basis.params, |_| C64::new(0.0, 0.0));
        for i in 0..n {
            s.psi[i] = self.ck(basis, s.x(i), t)?;
        }
        Ok(s)
    }

    pub fn free_grid(&self, params: PhysParams, k_min: f64, k_max: f64, n: usize, tau: f64) -> GridState {
        let mut s = GridState::from_fn(k_min, k_max, n, tau, params, |k| self.free(params.m, params.hbar, k, tau));
        s.picture = Picture::Free;
        s
    }
}

/// Free momentum and initial-position operators at free time `tau`, acting on
/// the kappa variable (written with the engine's `x`).
pub fn free_operators(p: &PhysParams, tau: f64) -> (WeylOp, WeylOp) {
    let pi = WeylOp::dx().scale(C64::new(0.0, -p.hbar));
    let kappa = &WeylOp::x() + &WeylOp::dx().scale(C64::new(0.0, p.hbar * tau / p.m));
    (kappa, pi)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransportReport {
    pub t: f64,
    pub tau: f64,
    pub h: f64,
    /// max |i hbar psi_t - H psi| of the pulled-back packet on interior points
    pub residual: f64,
    /// L2 distance between a free packet and forward(inverse(packet))
    pub roundtrip_l2: f64,
}

/// Pull an analytic free packet back through the inverse map at five times
/// around `t`, each sampled on the kappa-grid that lands on the common x-grid
/// `[x_min, x_max]`, and measure how well the images solve the damped equation.
pub fn qat_transport_check(g: &Gaussian, basis: &ClassicalBasis, t: f64, h: f64, x_min: f64, x_max: f64, n: usize) -> Result<TransportReport> {
    let p = basis.params;
    let dx = (x_max - x_min) / (n - 1) as f64;
    let mut images = Vec::with_capacity(5);
    for k in 0..5 {
        let tk = t + (k as f64 - 2.0) * h;
        basis.check_domain(tk)?;
        let u2 = basis.u2(tk);
        let tau = basis.tau(tk)?;
        let (k0, dk) = (x_min / u2, dx / u2);
        let free = g.free_grid(p, k0, k0 + dk * (n - 1) as f64, n, tau);
        let back = qat_inverse(&free, basis)?;
        images.push(GridState { x0: x_min, dx, ..back });
    }
    let images: [GridState; 5] = images.try_into().expect("five states");
    let residual = crate::ck_evolve::schrodinger_residual(&images, h)?;
    let tau = basis.tau(t)?;
    let u2 = basis.u2(t);
    let free = g.free_grid(p, x_min / u2, x_max / u2, n, tau);
    let again = qat_forward(&qat_inverse(&free, basis)?, basis)?;
    let roundtrip_l2 = free.l2_distance(&again)?;
    Ok(TransportReport { t, tau, h, residual, roundtrip_l2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_core::build_basis;

    #[test]
    fn identity_at_time_zero() {
        let b = build_basis(PhysParams::default()).unwrap();
        let g = Gaussian::new(0.5, 1.0, 0.7);
        let s = g.ck_grid(&b, -6.0, 6.0, 257, 0.0).unwrap();
        let f = qat_forward(&s, &b).unwrap();
        assert!(f.t.abs() < 1e-15);
        assert!((f.dx - s.dx).abs() < 1e-15);
        for (a, c) in s.psi.iter().zip(&f.psi) {
            assert!((a - c).norm() < 1e-15);
        }
    }

    #[test]
    fn oscillator_ground_state_maps_to_free_packet() {
        let p = PhysParams { gamma: 0.0, ..Default::default() };
        let b = build_basis(p).unwrap();
        let g = Gaussian::new(0.0, 0.0, std::f64::consts::FRAC_1_SQRT_2);
        let t = 0.8;
        let s = GridState::from_fn(-6.0, 6.0, 401, t, p, |x| {
            C64::from_polar(std::f64::consts::PI.powf(-0.25) * (-x * x / 2.0).exp(), -t / 2.0)
        });
        let f = qat_forward(&s, &b).unwrap();
        for i in 0..f.len() {
            let want = g.free(1.0, 1.0, f.x(i), t.tan());
            assert!((f.psi[i] - want).norm() < 1e-13);
        }
    }
}
