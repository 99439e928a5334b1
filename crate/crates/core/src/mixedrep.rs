//! Bateman quantization in the mixed `(x, p_y)` representation.
//!
//! Wavefunctions obey the first-order equation
//! `d phi/dt = -(-gamma x/2 + p_y/m) d phi/dx - (-gamma p_y/2 - m Omega^2 x) d phi/dp_y`,
//! i.e. `d phi/dt = D phi` with `D = -V . grad`. Stationary states satisfy
//! `i hbar D phi = E phi`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model_core::PhysParams;

/// Single-valuedness threshold on `|factor - 1|`.
pub const MONODROMY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedPoint {
    pub x: f64,
    pub p_y: f64,
}

impl MixedPoint {
    pub fn new(x: f64, p_y: f64) -> Self {
        MixedPoint { x, p_y }
    }

    /// `z = p_y + i m Omega x`
    pub fn z(&self, m: f64, big: f64) -> C64 {
        C64::new(self.p_y, m * big * self.x)
    }

    pub fn from_z(z: C64, m: f64, big: f64) -> Self {
        MixedPoint { x: z.im / (m * big), p_y: z.re }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenLabel {
    pub energy: f64,
    pub n: i64,
    pub lambda: f64,
}

impl EigenLabel {
    pub fn new(n: i64, lambda: f64, p: &PhysParams) -> Result<Self> {
        let big = p.big_omega()?;
        Ok(EigenLabel { energy: n as f64 * p.hbar * big + lambda * p.hbar * p.gamma, n, lambda })
    }

    /// `lambda~ = i lambda`
    pub fn lambda_tilde(&self) -> C64 {
        C64::new(0.0, self.lambda)
    }
}

/// Angular exponent `a = (E - hbar gamma lambda)/(hbar Omega)`; the
/// eigenfunction is `exp(i a arg z - i lambda ln|z|^2)`.
pub fn angular_exponent(energy: f64, lambda: f64, p: &PhysParams) -> Result<f64> {
    Ok((energy - p.hbar * p.gamma * lambda) / (p.hbar * p.big_omega()?))
}

/// Eigenfunction with a given continuous determination of `arg z`.
pub fn eigenfunction_with_arg(energy: f64, lambda: f64, arg: f64, modulus_sq: f64, p: &PhysParams) -> Result<C64> {
    if modulus_sq == 0.0 {
        return Err(Error::OriginSingular);
    }
    let a = angular_exponent(energy, lambda, p)?;
    Ok(C64::from_polar(1.0, a * arg - lambda * modulus_sq.ln()))
}

/// Eigenfunction on the principal determination `arg z in (-pi, pi]`.
pub fn eigenfunction_eval(label: &EigenLabel, pt: &MixedPoint, p: &PhysParams) -> Result<C64> {
    let z = pt.z(p.m, p.big_omega()?);
    eigenfunction_with_arg(label.energy, label.lambda, z.arg(), z.norm_sqr(), p)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Monodromy {
    pub factor: C64,
    pub error: f64,
    pub single_valued: bool,
}

/// Phase picked up by the eigenfunction along one loop of `z` around the origin.
pub fn monodromy_check(energy: f64, lambda: f64, p: &PhysParams) -> Result<Monodromy> {
    let a = angular_exponent(energy, lambda, p)?;
    let factor = C64::from_polar(1.0, 2.0 * PI * a);
    let error = (factor - 1.0).norm();
    Ok(Monodromy { factor, error, single_valued: error < MONODROMY_TOL })
}

/// The same factor obtained by walking `z` around the circle `|z| = radius`
/// in `steps` pieces, tracking `arg z` continuously from the sampled points.
pub fn loop_monodromy(energy: f64, lambda: f64, radius: f64, steps: usize, p: &PhysParams) -> Result<C64> {
    let start = C64::new(radius, 0.0);
    let mut arg = start.arg();
    let mut prev = start;
    let phi0 = eigenfunction_with_arg(energy, lambda, arg, start.norm_sqr(), p)?;
    let mut phi = phi0;
    for k in 1..=steps {
        let z = C64::from_polar(radius, 2.0 * PI * k as f64 / steps as f64);
        arg += (z / prev).arg();
        prev = z;
        phi = eigenfunction_with_arg(energy, lambda, arg, z.norm_sqr(), p)?;
    }
    Ok(phi / phi0)
}

/// Image of `(x, p_y)` after time `t` along the characteristic flow `V`.
pub fn characteristic_flow(pt: &MixedPoint, t: f64, p: &PhysParams) -> Result<MixedPoint> {
    let big = p.big_omega()?;
    let e = (-0.5 * p.gamma * t).exp();
    let (s, c) = (big * t).sin_cos();
    Ok(MixedPoint {
        x: e * (c * pt.x + s * pt.p_y / (p.m * big)),
        p_y: e * (c * pt.p_y - p.m * big * s * pt.x),
    })
}

/// Sample grid in the `(x, p_y)` plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedGrid {
    pub xs: Vec<f64>,
    pub pys: Vec<f64>,
}

impl MixedGrid {
    pub fn uniform(x: (f64, f64), py: (f64, f64), nx: usize, np: usize) -> Self {
        let lin = |(a, b): (f64, f64), n: usize| (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect();
        MixedGrid { xs: lin(x, nx), pys: lin(py, np) }
    }

    pub fn points(&self) -> impl Iterator<Item = MixedPoint> + '_ {
        self.xs.iter().flat_map(move |&x| self.pys.iter().map(move |&py| MixedPoint::new(x, py)))
    }
}

/// Transport initial data to time `t` by the method of characteristics:
/// `phi(q, t) = phi0(Phi_{-t} q)`. Values are ordered as `grid.points()`.
pub fn evolve_first_order<F>(phi0: F, grid: &MixedGrid, t: f64, p: &PhysParams) -> Result<Vec<C64>>
where
    F: Fn(&MixedPoint) -> C64,
{
    grid.points().map(|q| Ok(phi0(&characteristic_flow(&q, -t, p)?))).collect()
}

/// `i hbar D phi - E phi` at `pt`, derivatives by five-point differences.
pub fn stationary_residual<F>(phi: F, energy: f64, pt: &MixedPoint, p: &PhysParams) -> Result<C64>
where
    F: Fn(&MixedPoint) -> Result<C64>,
{
    let big = p.big_omega()?;
    let h = 1e-4 * (1.0 + pt.x.abs().max(pt.p_y.abs()));
    let d = |dx: f64, dp: f64| -> Result<C64> {
        let f = |s: f64| phi(&MixedPoint::new(pt.x + s * dx, pt.p_y + s * dp));
        Ok((f(-2.0 * h)? - f(-h)? * 8.0 + f(h)? * 8.0 - f(2.0 * h)?) / (12.0 * h))
    };
    let phi_x = d(1.0, 0.0)?;
    let phi_p = d(0.0, 1.0)?;
    let dphi = phi_x * (0.5 * p.gamma * pt.x - pt.p_y / p.m) + phi_p * (0.5 * p.gamma * pt.p_y + p.m * big * big * pt.x);
    Ok(C64::new(0.0, p.hbar) * dphi - phi(pt)? * energy)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifiedLabel {
    pub label: EigenLabel,
    pub monodromy_error: f64,
    /// largest residual over the sample points, relative to `max(|E|, hbar Omega) |phi|`
    pub residual: f64,
    pub pass: bool,
}

pub const RESIDUAL_TOL: f64 = 1e-5;

fn sample_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<MixedPoint> {
    let mut pts = Vec::with_capacity(n);
    while pts.len() < n {
        let q = MixedPoint::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        if q.x.hypot(q.p_y) > 0.2 {
            pts.push(q);
        }
    }
    pts
}

pub fn certify(label: &EigenLabel, p: &PhysParams, seed: u64) -> Result<CertifiedLabel> {
    let big = p.big_omega()?;
    let mono = monodromy_check(label.energy, label.lambda, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = label.energy.abs().max(p.hbar * big);
    let mut worst: f64 = 0.0;
    for q in sample_points(&mut rng, 50) {
        let r = stationary_residual(|pt| eigenfunction_eval(label, pt, p), label.energy, &q, p)?;
        worst = worst.max(r.norm() / scale);
    }
    Ok(CertifiedLabel {
        label: *label,
        monodromy_error: mono.error,
        residual: worst,
        pass: mono.single_valued && worst < RESIDUAL_TOL,
    })
}

pub fn spectrum_enumerate(n_range: (i64, i64), lambdas: &[f64], p: &PhysParams, seed: u64) -> Result<Vec<CertifiedLabel>> {
    let mut out = Vec::new();
    for &lambda in lambdas {
        for n in n_range.0..=n_range.1 {
            let label = EigenLabel::new(n, lambda, p)?;
            let c = certify(&label, p, seed ^ (n as u64).wrapping_mul(0x9e37) ^ lambda.to_bits())?;
            if c.monodromy_error < MONODROMY_TOL {
                out.push(c);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub lambda: f64,
    pub grid_points: usize,
    /// grid energies accepted by the monodromy test
    pub grid_accepted: usize,
    /// refined energies where the monodromy factor returns to one
    pub accepted: Vec<f64>,
    pub expected: Vec<f64>,
    pub max_rule_deviation: f64,
    pub max_residual: f64,
    pub pass: bool,
}

/// Scan energies over `[e_min, e_max]` with `points` samples, locate every
/// energy where the loop factor equals one by bracketing the zero crossings
/// of its imaginary part, and compare with `n hbar Omega + lambda hbar gamma`.
pub fn scan_spectrum(lambda: f64, e_min: f64, e_max: f64, points: usize, p: &PhysParams, seed: u64) -> Result<ScanReport> {
    let big = p.big_omega()?;
    let hw = p.hbar * big;
    let energy = |k: usize| e_min + (e_max - e_min) * k as f64 / (points - 1) as f64;
    let im = |e: f64| -> Result<f64> { Ok(monodromy_check(e, lambda, p)?.factor.im) };

    let mut grid_accepted = 0;
    let mut accepted = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..points {
        let e = energy(k);
        let cur = im(e)?;
        if monodromy_check(e, lambda, p)?.single_valued {
            grid_accepted += 1;
            accepted.push(e);
        }
        if let Some((pe, pv)) = prev {
            if pv.signum() != cur.signum() {
                let (mut lo, mut hi, mut flo) = (pe, e, pv);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid == lo || mid == hi {
                        break;
                    }
                    let fm = im(mid)?;
                    if fm.signum() == flo.signum() {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                let root = if im(lo)?.abs() < im(hi)?.abs() { lo } else { hi };
                // crossings at factor -1 are discarded here
                if monodromy_check(root, lambda, p)?.single_valued {
                    accepted.push(root);
                }
            }
        }
        prev = Some((e, cur));
    }
    accepted.sort_by(f64::total_cmp);
    accepted.dedup_by(|a, b| (*a - *b).abs() < 1e-9 * hw);

    let offset = lambda * p.hbar * p.gamma;
    let n_lo = ((e_min - offset) / hw).ceil() as i64;
    let n_hi = ((e_max - offset) / hw).floor() as i64;
    let expected: Vec<f64> = (n_lo..=n_hi).map(|n| n as f64 * hw + offset).collect();

    let mut max_rule_deviation: f64 = 0.0;
    let mut max_residual: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = sample_points(&mut rng, 50);
    for &e in &accepted {
        let nearest = ((e - offset) / hw).round();
        max_rule_deviation = max_rule_deviation.max((e - (nearest * hw + offset)).abs());
        let scale = e.abs().max(hw);
        for q in &pts {
            let r = stationary_residual(
                |pt| {
                    let zz = pt.z(p.m, big);
                    eigenfunction_with_arg(e, lambda, zz.arg(), zz.norm_sqr(), p)
                },
                e,
                q,
                p,
            )?;
            max_residual = max_residual.max(r.norm() / scale);
        }
    }
    let pass = accepted.len() == expected.len() && max_rule_deviation < 1e-9 && max_residual < RESIDUAL_TOL;
    Ok(ScanReport { lambda, grid_points: points, grid_accepted, accepted, expected, max_rule_deviation, max_residual, pass })
}
