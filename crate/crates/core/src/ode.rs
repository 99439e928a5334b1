//! Thin wrapper over the Dopri5 integrator for small fixed-size systems.
//!
//! The crate's DOP853 tableau has the wrong node for stage 12, which only
//! shows up for time-dependent right-hand sides, so it is avoided.

use ode_solvers::{Dopri5, OutputType, SVector, System};

use crate::error::{Error, Result};

struct Rhs<F, const N: usize> {
    f: F,
}

impl<F, const N: usize> System<f64, SVector<f64, N>> for Rhs<F, N>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    fn system(&self, t: f64, y: &SVector<f64, N>, dy: &mut SVector<f64, N>) {
        let mut s = [0.0; N];
        s.copy_from_slice(y.as_slice());
        let d = (self.f)(t, &s);
        dy.as_mut_slice().copy_from_slice(&d);
    }
}

pub const RTOL: f64 = 1e-12;
pub const ATOL: f64 = 1e-14;

/// Integrate `y' = f(t, y)` from `t0` to `t1` (either direction).
pub fn integrate<F, const N: usize>(f: F, t0: f64, y0: [f64; N], t1: f64) -> Result<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    integrate_tol(f, t0, y0, t1, RTOL, ATOL)
}

pub fn integrate_tol<F, const N: usize>(f: F, t0: f64, y0: [f64; N], t1: f64, rtol: f64, atol: f64) -> Result<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    if t1 == t0 {
        return Ok(y0);
    }
    let mut solver = Dopri5::new(Rhs { f }, t0, t1, t1 - t0, SVector::from(y0), rtol, atol);
    // dense output mishandles negative times
    solver.set_output(OutputType::Sparse);
    solver
        .integrate()
        .map_err(|e| Error::DegenerateParams(format!("ODE integration failed: {e}")))?;
    let last = solver.y_out().last().expect("integrator produced no output");
    let mut out = [0.0; N];
    out.copy_from_slice(last.as_slice());
    Ok(out)
}

/// States at each requested time, integrating piecewise from `t0`.
pub fn integrate_at<F, const N: usize>(f: F, t0: f64, y0: [f64; N], times: &[f64]) -> Result<Vec<[f64; N]>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N] + Copy,
{
    let mut out = Vec::with_capacity(times.len());
    let (mut t, mut y) = (t0, y0);
    for &ti in times {
        y = integrate(f, t, y, ti)?;
        t = ti;
        out.push(y);
    }
    Ok(out)
}
