//! Physical parameters, the classical solutions u1/u2 of the damped oscillator,
//! trajectories and the classical Arnold map.

use std::io::Write;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::coeffring::ExpPoly;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PhysParams {
    pub m: f64,
    pub gamma: f64,
    pub omega: f64,
    pub hbar: f64,
}

impl Default for PhysParams {
    fn default() -> Self {
        PhysParams { m: 1.0, gamma: 0.2, omega: 1.0, hbar: 1.0 }
    }
}

impl PhysParams {
    pub fn new(m: f64, gamma: f64, omega: f64, hbar: f64) -> Result<Self> {
        let p = PhysParams { m, gamma, omega, hbar };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field, reason: &str| Err(Error::InvalidParams { field, reason: reason.to_string() });
        if !(self.m > 0.0 && self.m.is_finite()) {
            return bad("m", "must be positive");
        }
        if !(self.hbar > 0.0 && self.hbar.is_finite()) {
            return bad("hbar", "must be positive");
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return bad("gamma", "must be non-negative");
        }
        if !(self.omega >= 0.0 && self.omega.is_finite()) {
            return bad("omega", "must be non-negative");
        }
        Ok(())
    }

    pub fn is_underdamped(&self) -> bool {
        self.omega > self.gamma / 2.0
    }

    pub fn require_underdamped(&self) -> Result<()> {
        self.validate()?;
        if self.is_underdamped() {
            Ok(())
        } else {
            Err(Error::OverdampedUnsupported { omega: self.omega, gamma: self.gamma })
        }
    }

    /// Reduced frequency `sqrt(omega^2 - gamma^2/4)` on the underdamped branch.
    pub fn big_omega(&self) -> Result<f64> {
        self.require_underdamped()?;
        Ok((self.omega * self.omega - self.gamma * self.gamma / 4.0).sqrt())
    }

    /// Principal complex square root; imaginary when overdamped, `i gamma/2` at omega = 0.
    pub fn big_omega_c(&self) -> C64 {
        C64::new(self.omega * self.omega - self.gamma * self.gamma / 4.0, 0.0).sqrt()
    }
}

/// `(u1, u2)` for a given (possibly complex) reduced frequency.
pub fn basis_polys(gamma: f64, big_omega: C64) -> (ExpPoly, ExpPoly) {
    let damp = ExpPoly::exp_real(-gamma / 2.0);
    let s = ExpPoly::sin(big_omega);
    let c = ExpPoly::cos(big_omega);
    let u1 = (&damp * &s).scale(C64::new(1.0, 0.0) / big_omega);
    let u2 = &damp * &(&c + &s.scale(C64::new(gamma / 2.0, 0.0) / big_omega));
    (u1, u2)
}

#[derive(Clone, Debug)]
pub struct ClassicalBasis {
    pub u1: ExpPoly,
    pub u2: ExpPoly,
    pub w: ExpPoly,
    pub params: PhysParams,
    domain: (f64, f64),
}

pub fn build_basis(params: PhysParams) -> Result<ClassicalBasis> {
    let big = params.big_omega()?;
    let (u1, u2) = basis_polys(params.gamma, C64::new(big, 0.0));
    let w = &(&u1.diff() * &u2) - &(&u1 * &u2.diff());
    let domain = locate_domain(&u2, big);
    Ok(ClassicalBasis { u1, u2, w, params, domain })
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    while (hi - lo).abs() > 1e-12 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Maximal interval around 0 with u2 > 0, by scanning for a sign change then bisecting.
fn locate_domain(u2: &ExpPoly, big_omega: f64) -> (f64, f64) {
    let f = |t: f64| u2.eval(t).re;
    let step = (std::f64::consts::PI / big_omega) / 64.0;
    let edge = |dir: f64| {
        let mut a = 0.0;
        loop {
            let b = a + dir * step;
            if f(b) <= 0.0 {
                return bisect(f, a, b);
            }
            a = b;
        }
    };
    (edge(-1.0), edge(1.0))
}

impl ClassicalBasis {
    pub fn big_omega(&self) -> f64 {
        self.params.big_omega().expect("basis is only built for underdamped parameters")
    }

    pub fn u1(&self, t: f64) -> f64 {
        self.u1.eval(t).re
    }

    pub fn u2(&self, t: f64) -> f64 {
        self.u2.eval(t).re
    }

    pub fn du1(&self, t: f64) -> f64 {
        self.u1.diff().eval(t).re
    }

    pub fn du2(&self, t: f64) -> f64 {
        self.u2.diff().eval(t).re
    }

    pub fn w(&self, t: f64) -> f64 {
        self.w.eval(t).re
    }

    /// Open interval around t = 0 on which u2 > 0.
    pub fn arnold_domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn in_domain(&self, t: f64) -> bool {
        t > self.domain.0 && t < self.domain.1 && self.u2(t) > 0.0
    }

    /// Free time `tau = u1/u2`.
    pub fn tau(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        Ok(self.u1(t) / self.u2(t))
    }

    pub fn check_domain(&self, t: f64) -> Result<()> {
        if self.in_domain(t) {
            Ok(())
        } else {
            Err(Error::CausticCrossed { t, u2: self.u2(t) })
        }
    }

    /// Inverse of `tau(t)` on the Arnold domain.
    ///
    /// `tau = 1/(Omega cot(Omega t) + gamma/2)`, so `Omega t = atan2(Omega tau, 1 - gamma tau/2)`;
    /// one Newton step with `tau' = W/u2^2` removes the last rounding.
    pub fn time_from_tau(&self, tau: f64) -> Result<f64> {
        if !tau.is_finite() {
            return Err(Error::TimeOutOfRange { tau });
        }
        let big = self.big_omega();
        let mut t = (big * tau).atan2(1.0 - 0.5 * self.params.gamma * tau) / big;
        if !self.in_domain(t) {
            return Err(Error::TimeOutOfRange { tau });
        }
        let u2 = self.u2(t);
        let step = (self.u1(t) / u2 - tau) * u2 * u2 / self.w(t);
        if self.in_domain(t - step) {
            t -= step;
        }
        Ok(t)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub positions: Vec<f64>,
    /// Canonical Caldirola-Kanai momentum `m e^{gamma t} xdot`.
    pub momenta: Vec<f64>,
}

impl Trajectory {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["t", "x", "p"])?;
        for i in 0..self.times.len() {
            wr.serialize((self.times[i], self.positions[i], self.momenta[i]))?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// `x(t) = x0 u2(t) + v0 u1(t)`.
pub fn classical_trajectory(basis: &ClassicalBasis, x0: f64, v0: f64, times: &[f64]) -> Trajectory {
    let p = basis.params;
    let positions = times.iter().map(|&t| x0 * basis.u2(t) + v0 * basis.u1(t)).collect();
    let momenta = times
        .iter()
        .map(|&t| p.m * (p.gamma * t).exp() * (x0 * basis.du2(t) + v0 * basis.du1(t)))
        .collect();
    Trajectory { times: times.to_vec(), positions, momenta }
}

/// Classical Arnold transformation `(x, t) -> (x/u2, u1/u2)`.
pub fn arnold_map(basis: &ClassicalBasis, x: f64, t: f64) -> Result<(f64, f64)> {
    basis.check_domain(t)?;
    let u2 = basis.u2(t);
    Ok((x / u2, basis.u1(t) / u2))
}
