//! Crank-Nicolson propagation of the Caldirola-Kanai equation on a uniform grid.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{dn, GridState, Picture};
use crate::model_core::PhysParams;
use crate::weylalg::WeylOp;

/// Amplitude at the outer grid points above which a run is aborted.
pub const LEAK_THRESHOLD: f64 = 1e-6;
const EDGE_WIDTH: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolveConfig {
    pub dt: f64,
    pub n_steps: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
    /// keep every k-th state (the initial and final states are always kept)
    #[serde(default = "one")]
    pub snapshot_every: usize,
}

fn one() -> usize {
    1
}

impl EvolveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::config("dt", "must be positive"));
        }
        if !self.n.is_power_of_two() || self.n < 16 {
            return Err(Error::config("n", "must be a power of two, at least 16"));
        }
        if !(self.x_max > self.x_min) {
            return Err(Error::config("x_max", "must exceed x_min"));
        }
        if self.snapshot_every == 0 {
            return Err(Error::config("snapshot_every", "must be at least 1"));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n - 1) as f64
    }

    pub fn state_from(&self, params: PhysParams, f: impl Fn(f64) -> C64) -> GridState {
        GridState::from_fn(self.x_min, self.x_max, self.n, 0.0, params, f)
    }
}

/// Solve the tridiagonal system `sub[i] u[i-1] + diag[i] u[i] + sup[i] u[i+1] = rhs[i]`
/// in place.
fn thomas(sub: &[C64], diag: &[C64], sup: &[C64], rhs: &mut [C64]) {
    let n = diag.len();
    let mut c = vec![C64::new(0.0, 0.0); n];
    c[0] = sup[0] / diag[0];
    rhs[0] /= diag[0];
    for i in 1..n {
        let den = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / den;
        rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / den;
    }
    for i in (0..n - 1).rev() {
        let next = rhs[i + 1];
        rhs[i] -= c[i] * next;
    }
}

/// One Crank-Nicolson step from `t` to `t + dt`, Dirichlet ends.
///
/// Space uses the compact fourth-order Laplacian `M^{-1} delta^2 / dx^2` with
/// `M = tridiag(1, 10, 1)/12`. Multiplying through by `M` keeps both sides
/// tridiagonal; since `M` and `delta^2` commute the discrete generator is
/// Hermitian and the step is unitary.
pub fn cn_step(psi: &mut [C64], x0: f64, dx: f64, t: f64, dt: f64, p: &PhysParams) {
    let n = psi.len();
    let tm = t + 0.5 * dt;
    let a = p.hbar * p.hbar / (2.0 * p.m) * (-p.gamma * tm).exp() / (dx * dx);
    let b = 0.5 * p.m * p.omega * p.omega * (p.gamma * tm).exp();
    let v: Vec<f64> = (0..n).map(|i| {
        let x = x0 + i as f64 * dx;
        b * x * x
    }).collect();
    let f = C64::new(0.0, 0.5 * dt / p.hbar);
    let (m_off, m_diag) = (1.0 / 12.0, 10.0 / 12.0);
    let zero = C64::new(0.0, 0.0);
    let mut sub = vec![zero; n];
    let mut diag = vec![zero; n];
    let mut sup = vec![zero; n];
    let mut rhs = vec![zero; n];
    for i in 0..n {
        // row i of M H: off-diagonals -a + V_j/12, diagonal 2a + 10 V_i/12
        let h_ii = 2.0 * a + m_diag * v[i];
        diag[i] = m_diag + f * h_ii;
        let mut r = (m_diag - f * h_ii) * psi[i];
        if i > 0 {
            let h = -a + m_off * v[i - 1];
            sub[i] = m_off + f * h;
            r += (m_off - f * h) * psi[i - 1];
        }
        if i + 1 < n {
            let h = -a + m_off * v[i + 1];
            sup[i] = m_off + f * h;
            r += (m_off - f * h) * psi[i + 1];
        }
        rhs[i] = r;
    }
    thomas(&sub, &diag, &sup, &mut rhs);
    psi.copy_from_slice(&rhs);
}

pub fn evolve_ck(state: &GridState, cfg: &EvolveConfig) -> Result<Vec<GridState>> {
    cfg.validate()?;
    if state.picture != Picture::Ck || state.len() != cfg.n || (state.dx - cfg.dx()).abs() > 1e-12 * cfg.dx() {
        return Err(Error::Grid("initial state is not on the configured grid".into()));
    }
    let p = state.params;
    let mut cur = state.clone();
    let mut out = vec![cur.clone()];
    for step in 1..=cfg.n_steps {
        cn_step(&mut cur.psi, cur.x0, cur.dx, cur.t, cfg.dt, &p);
        cur.t = state.t + step as f64 * cfg.dt;
        let edge = cur.edge_amplitude(EDGE_WIDTH);
        if edge > LEAK_THRESHOLD {
            return Err(Error::BoundaryLeak { amplitude: edge, step });
        }
        if step % cfg.snapshot_every == 0 || step == cfg.n_steps {
            out.push(cur.clone());
        }
    }
    Ok(out)
}

/// `op psi` on the grid; `y`, `dy` and `dt` monomials are rejected.
pub fn apply(op: &WeylOp, state: &GridState) -> Result<Vec<C64>> {
    let mut out = vec![C64::new(0.0, 0.0); state.len()];
    for (key, coeff) in op.terms() {
        if key.dt > 0 {
            return Err(Error::UnsupportedOperator(format!("time derivative in {key}")));
        }
        if key.y > 0 || key.dy > 0 {
            return Err(Error::UnsupportedOperator(format!("second particle variable in {key}")));
        }
        if key.dx > 4 {
            return Err(Error::UnsupportedOperator(format!("derivative order {} too high", key.dx)));
        }
        let c = coeff.eval(state.t);
        let d = dn(&state.psi, state.dx, key.dx);
        for (i, v) in d.into_iter().enumerate() {
            out[i] += c * state.x(i).powi(key.x as i32) * v;
        }
    }
    Ok(out)
}

/// `<psi|op|psi> / <psi|psi>`.
pub fn expectation(op: &WeylOp, state: &GridState) -> Result<C64> {
    let o = apply(op, state)?;
    let num: C64 = state.psi.iter().zip(&o).map(|(a, b)| a.conj() * b).sum();
    let den: f64 = state.psi.iter().map(|z| z.norm_sqr()).sum();
    Ok(num / den)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftEntry {
    pub name: String,
    pub initial: C64,
    pub max_drift: f64,
    pub rel_drift: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConservationReport {
    pub entries: Vec<DriftEntry>,
    pub max_norm_drift: f64,
    /// largest norm change between consecutive snapshots divided by the steps between them
    pub norm_drift_per_step: f64,
    pub snapshots: usize,
}

impl ConservationReport {
    pub fn entry(&self, name: &str) -> Option<&DriftEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

pub fn conservation_report(snapshots: &[GridState], ops: &[(&str, &WeylOp)], dt: f64) -> Result<ConservationReport> {
    let first = snapshots.first().ok_or_else(|| Error::Grid("no snapshots".into()))?;
    let n0 = first.norm_sq();
    let mut entries = Vec::new();
    for (name, op) in ops {
        let initial = expectation(op, first)?;
        let mut max_drift: f64 = 0.0;
        for s in snapshots {
            max_drift = max_drift.max((expectation(op, s)? - initial).norm());
        }
        let scale = initial.norm();
        let rel_drift = if scale > 0.0 { max_drift / scale } else { max_drift };
        entries.push(DriftEntry { name: name.to_string(), initial, max_drift, rel_drift });
    }
    let mut max_norm_drift: f64 = 0.0;
    let mut per_step: f64 = 0.0;
    for w in snapshots.windows(2) {
        let steps = ((w[1].t - w[0].t) / dt).round().max(1.0);
        per_step = per_step.max((w[1].norm_sq() - w[0].norm_sq()).abs() / steps);
        max_norm_drift = max_norm_drift.max((w[1].norm_sq() - n0).abs());
    }
    Ok(ConservationReport { entries, max_norm_drift, norm_drift_per_step: per_step, snapshots: snapshots.len() })
}

/// Largest `|i hbar psi_t - H psi|` at the middle of five equally spaced states
/// (spacing `h`), using a five-point time stencil and restricted to interior points.
pub fn schrodinger_residual(states: &[GridState; 5], h: f64) -> Result<f64> {
    for s in &states[1..] {
        s.same_grid(&states[0])?;
    }
    let mid = &states[2];
    let p = mid.params;
    let h_op = crate::ck_ops::h_dho(&p);
    let hpsi = apply(&h_op, mid)?;
    let n = mid.len();
    let mut worst: f64 = 0.0;
    for i in 4..n - 4 {
        let dt = (states[0].psi[i] - states[1].psi[i] * 8.0 + states[3].psi[i] * 8.0 - states[4].psi[i]) / (12.0 * h);
        let r = C64::new(0.0, p.hbar) * dt - hpsi[i];
        worst = worst.max(r.norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arnold::Gaussian;

    #[test]
    fn thomas_matches_dense_product() {
        let diag: Vec<C64> = (0..6).map(|i| C64::new(3.0 + i as f64, 0.5)).collect();
        let sub: Vec<C64> = (0..6).map(|i| C64::new(-1.0, 0.1 * i as f64)).collect();
        let sup: Vec<C64> = (0..6).map(|i| C64::new(0.5, -0.2 * i as f64)).collect();
        let x: Vec<C64> = (0..6).map(|i| C64::new(i as f64, 1.0 - i as f64)).collect();
        let mut b: Vec<C64> = (0..6)
            .map(|i| {
                let mut v = diag[i] * x[i];
                if i > 0 {
                    v += sub[i] * x[i - 1];
                }
                if i < 5 {
                    v += sup[i] * x[i + 1];
                }
                v
            })
            .collect();
        thomas(&sub, &diag, &sup, &mut b);
        for i in 0..6 {
            assert!((b[i] - x[i]).norm() < 1e-13);
        }
    }

    #[test]
    fn identity_and_time_derivative() {
        let p = PhysParams::default();
        let s = GridState::from_fn(-8.0, 8.0, 513, 0.0, p, |x| Gaussian::new(0.3, 0.5, 1.0).initial(1.0, x));
        assert!((expectation(&WeylOp::identity(), &s).unwrap() - 1.0).norm() < 1e-12);
        assert!(matches!(expectation(&WeylOp::dt(), &s), Err(Error::UnsupportedOperator(_))));
    }

    #[test]
    fn leak_detected() {
        let p = PhysParams::default();
        let cfg = EvolveConfig { dt: 1e-2, n_steps: 400, x_min: -3.0, x_max: 3.0, n: 256, snapshot_every: 50 };
        let s = cfg.state_from(p, |x| Gaussian::new(0.0, 4.0, 0.3).initial(1.0, x));
        assert!(matches!(evolve_ck(&s, &cfg), Err(Error::BoundaryLeak { .. })));
    }
}
