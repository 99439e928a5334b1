//! Wavefunctions on uniform 1-D grids.

use std::io::Write;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model_core::PhysParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Picture {
    /// Caldirola-Kanai wavefunction in (x, t)
    Ck,
    /// free-particle wavefunction in (kappa, tau)
    Free,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridState {
    pub x0: f64,
    pub dx: f64,
    pub psi: Vec<C64>,
    pub t: f64,
    pub params: PhysParams,
    pub picture: Picture,
}

impl GridState {
    pub fn from_fn(x_min: f64, x_max: f64, n: usize, t: f64, params: PhysParams, f: impl Fn(f64) -> C64) -> Self {
        let dx = (x_max - x_min) / (n - 1) as f64;
        let psi = (0..n).map(|i| f(x_min + i as f64 * dx)).collect();
        GridState { x0: x_min, dx, psi, t, params, picture: Picture::Ck }
    }

    pub fn len(&self) -> usize {
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.x(i)).collect()
    }

    pub fn norm_sq(&self) -> f64 {
        self.psi.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.dx
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm_sq().sqrt();
        for z in self.psi.iter_mut() {
            *z /= n;
        }
        self
    }

    /// Largest |psi| over the first and last `width` points.
    pub fn edge_amplitude(&self, width: usize) -> f64 {
        let n = self.len();
        let w = width.min(n);
        self.psi[..w].iter().chain(self.psi[n - w..].iter()).map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn inner(&self, other: &GridState) -> Result<C64> {
        self.same_grid(other)?;
        Ok(self.psi.iter().zip(&other.psi).map(|(a, b)| a.conj() * b).sum::<C64>() * self.dx)
    }

    pub fn same_grid(&self, other: &GridState) -> Result<()> {
        // rounding from mapping a grid back and forth scales with its extent
        let extent = self.x0.abs() + self.dx.abs() * self.len() as f64;
        let tol = 1e-9 * self.dx.abs() + 1e-12 * extent;
        if self.len() != other.len()
            || (self.x0 - other.x0).abs() > tol
            || (self.dx - other.dx).abs() * self.len() as f64 > tol
        {
            return Err(Error::Grid(format!(
                "grids differ: ({}, {}, {}) vs ({}, {}, {})",
                self.x0,
                self.dx,
                self.len(),
                other.x0,
                other.dx,
                other.len()
            )));
        }
        Ok(())
    }

    /// L2 distance on a shared grid.
    pub fn l2_distance(&self, other: &GridState) -> Result<f64> {
        self.same_grid(other)?;
        Ok((self.psi.iter().zip(&other.psi).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>() * self.dx).sqrt())
    }

    /// Cubic (Catmull-Rom) resampling onto a new uniform grid; zero outside.
    pub fn resample(&self, x_min: f64, dx: f64, n: usize) -> GridState {
        let psi = (0..n).map(|i| self.interp(x_min + i as f64 * dx)).collect();
        GridState { x0: x_min, dx, psi, t: self.t, params: self.params, picture: self.picture }
    }

    pub fn interp(&self, x: f64) -> C64 {
        let n = self.len() as isize;
        let s = (x - self.x0) / self.dx;
        let i = s.floor() as isize;
        let f = s - i as f64;
        let at = |k: isize| if k < 0 || k >= n { C64::new(0.0, 0.0) } else { self.psi[k as usize] };
        if i < -1 || i > n {
            return C64::new(0.0, 0.0);
        }
        let (p0, p1, p2, p3) = (at(i - 1), at(i), at(i + 1), at(i + 2));
        let a = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
        let b = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
        let c = -0.5 * p0 + 0.5 * p2;
        ((a * f + b) * f + c) * f + p1
    }

    /// Columns x, re, im after a one-line metadata header.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# t={} x0={} dx={} n={} picture={:?}", self.t, self.x0, self.dx, self.len(), self.picture)?;
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["x", "re", "im"])?;
        for (i, z) in self.psi.iter().enumerate() {
            wr.serialize((self.x(i), z.re, z.im))?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// Fourth-order centered first derivative; second-order one-sided at the two
/// outermost points on each side.
pub fn d1(psi: &[C64], dx: f64) -> Vec<C64> {
    let n = psi.len();
    let mut out = vec![C64::new(0.0, 0.0); n];
    for i in 0..n {
        out[i] = if i >= 2 && i + 2 < n {
            (psi[i - 2] - psi[i - 1] * 8.0 + psi[i + 1] * 8.0 - psi[i + 2]) / (12.0 * dx)
        } else if i >= 1 && i + 1 < n {
            (psi[i + 1] - psi[i - 1]) / (2.0 * dx)
        } else {
            C64::new(0.0, 0.0)
        };
    }
    out
}

/// Fourth-order centered second derivative.
pub fn d2(psi: &[C64], dx: f64) -> Vec<C64> {
    let n = psi.len();
    let mut out = vec![C64::new(0.0, 0.0); n];
    for i in 0..n {
        out[i] = if i >= 2 && i + 2 < n {
            (-psi[i - 2] + psi[i - 1] * 16.0 - psi[i] * 30.0 + psi[i + 1] * 16.0 - psi[i + 2]) / (12.0 * dx * dx)
        } else if i >= 1 && i + 1 < n {
            (psi[i + 1] - psi[i] * 2.0 + psi[i - 1]) / (dx * dx)
        } else {
            C64::new(0.0, 0.0)
        };
    }
    out
}

/// Derivative of any order up to 4, by repeated application.
pub fn dn(psi: &[C64], dx: f64, order: u32) -> Vec<C64> {
    match order {
        0 => psi.to_vec(),
        1 => d1(psi, dx),
        2 => d2(psi, dx),
        k => d2(&dn(psi, dx, k - 2), dx),
    }
}
