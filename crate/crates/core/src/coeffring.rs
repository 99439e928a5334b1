//! Exponential polynomials `sum c t^k e^{a t}` with complex `c` and `a`.
//!
//! Every time-dependent coefficient in the operator algebra lives here. Trig
//! functions enter through Euler decomposition, so the ring is closed under
//! products and derivatives.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

/// Terms whose amplitude is below this fraction of the largest raw amplitude are dropped.
pub const ZERO_THRESHOLD: f64 = 1e-14;
/// Two rates closer than this (relative to max(1, |a|)) are treated as equal.
pub const RATE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: C64,
    pub power: u32,
    pub rate: C64,
}

impl Term {
    pub fn new(coeff: C64, power: u32, rate: C64) -> Self {
        Term { coeff, power, rate }
    }

    fn same_kind(&self, other: &Term) -> bool {
        self.power == other.power
            && (self.rate - other.rate).norm() <= RATE_TOL * self.rate.norm().max(other.rate.norm()).max(1.0)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExpPoly {
    terms: Vec<Term>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    pub fn constant(c: C64) -> Self {
        Self::normalize(vec![Term::new(c, 0, C64::new(0.0, 0.0))])
    }

    pub fn real(c: f64) -> Self {
        Self::constant(C64::new(c, 0.0))
    }

    /// `e^{a t}`
    pub fn exp(rate: C64) -> Self {
        Self::normalize(vec![Term::new(C64::new(1.0, 0.0), 0, rate)])
    }

    pub fn exp_real(rate: f64) -> Self {
        Self::exp(C64::new(rate, 0.0))
    }

    /// `t^k`
    pub fn t_pow(k: u32) -> Self {
        Self::normalize(vec![Term::new(C64::new(1.0, 0.0), k, C64::new(0.0, 0.0))])
    }

    /// `cos(w t)` for complex `w`.
    pub fn cos(w: C64) -> Self {
        let i = C64::i();
        let h = C64::new(0.5, 0.0);
        Self::normalize(vec![Term::new(h, 0, i * w), Term::new(h, 0, -i * w)])
    }

    /// `sin(w t)` for complex `w`.
    pub fn sin(w: C64) -> Self {
        let i = C64::i();
        let h = C64::new(0.0, -0.5);
        Self::normalize(vec![Term::new(h, 0, i * w), Term::new(-h, 0, -i * w)])
    }

    /// Canonical form: like terms merged, near-zero amplitudes dropped, sorted.
    pub fn normalize(raw: Vec<Term>) -> Self {
        let scale = raw.iter().map(|t| t.coeff.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return Self::zero();
        }
        let mut merged: Vec<Term> = Vec::with_capacity(raw.len());
        for t in raw {
            match merged.iter_mut().find(|m| m.same_kind(&t)) {
                Some(m) => m.coeff += t.coeff,
                None => merged.push(t),
            }
        }
        merged.retain(|t| t.coeff.norm() > ZERO_THRESHOLD * scale);
        for t in merged.iter_mut() {
            // exact zero rates keep sorting and display stable
            if t.rate.re.abs() <= RATE_TOL * 1e-2 {
                t.rate.re = 0.0;
            }
            if t.rate.im.abs() <= RATE_TOL * 1e-2 {
                t.rate.im = 0.0;
            }
        }
        merged.sort_by(|a, b| {
            a.power
                .cmp(&b.power)
                .then(a.rate.re.total_cmp(&b.rate.re))
                .then(a.rate.im.total_cmp(&b.rate.im))
        });
        ExpPoly { terms: merged }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_amplitude(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm()).fold(0.0, f64::max)
    }

    /// True if the function is a constant (no t-dependence).
    pub fn as_constant(&self) -> Option<C64> {
        match self.terms.as_slice() {
            [] => Some(C64::new(0.0, 0.0)),
            [t] if t.power == 0 && t.rate == C64::new(0.0, 0.0) => Some(t.coeff),
            _ => None,
        }
    }

    pub fn diff(&self) -> Self {
        let mut raw = Vec::with_capacity(2 * self.terms.len());
        for t in &self.terms {
            if t.power > 0 {
                raw.push(Term::new(t.coeff * t.power as f64, t.power - 1, t.rate));
            }
            raw.push(Term::new(t.coeff * t.rate, t.power, t.rate));
        }
        Self::normalize(raw)
    }

    pub fn diff_n(&self, n: u32) -> Self {
        (0..n).fold(self.clone(), |f, _| f.diff())
    }

    pub fn eval(&self, t: f64) -> C64 {
        self.terms
            .iter()
            .map(|term| term.coeff * t.powi(term.power as i32) * (term.rate * t).exp())
            .sum()
    }

    /// Value for contexts where the result should be real, with the imaginary
    /// part returned alongside if it is not negligible (above 1e-12 relative).
    pub fn eval_real(&self, t: f64) -> (f64, Option<f64>) {
        let v = self.eval(t);
        let mag = self
            .terms
            .iter()
            .map(|term| (term.coeff * t.powi(term.power as i32) * (term.rate * t).exp()).norm())
            .fold(0.0, f64::max);
        let im = if v.im.abs() > 1e-12 * mag.max(f64::MIN_POSITIVE) { Some(v.im) } else { None };
        (v.re, im)
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::normalize(self.terms.iter().map(|t| Term::new(t.coeff * c, t.power, t.rate)).collect())
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    pub fn powi(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Raw product terms, not normalized; used by the operator engine so that
    /// cancellations are judged against the full set of contributions.
    pub(crate) fn product_terms(&self, other: &Self, factor: C64, out: &mut Vec<Term>) {
        for a in &self.terms {
            for b in &other.terms {
                out.push(Term::new(a.coeff * b.coeff * factor, a.power + b.power, a.rate + b.rate));
            }
        }
    }

    /// Coefficientwise comparison in canonical form, relative to the larger
    /// of the two amplitudes.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.deviation(other) <= tol
    }

    /// Largest amplitude of `self - other` relative to the largest amplitude of either.
    pub fn deviation(&self, other: &Self) -> f64 {
        let scale = self.max_amplitude().max(other.max_amplitude());
        if scale == 0.0 {
            return 0.0;
        }
        (self - other).max_amplitude() / scale
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, t) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.6}{:+.6}i)", t.coeff.re, t.coeff.im)?;
            if t.power > 0 {
                write!(f, "t^{}", t.power)?;
            }
            if t.rate != C64::new(0.0, 0.0) {
                write!(f, "e^(({:.6}{:+.6}i)t)", t.rate.re, t.rate.im)?;
            }
        }
        Ok(())
    }
}

impl Add for &ExpPoly {
    type Output = ExpPoly;
    fn add(self, rhs: &ExpPoly) -> ExpPoly {
        ExpPoly::normalize(self.terms.iter().chain(rhs.terms.iter()).copied().collect())
    }
}

impl Sub for &ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: &ExpPoly) -> ExpPoly {
        let neg = rhs.terms.iter().map(|t| Term::new(-t.coeff, t.power, t.rate));
        ExpPoly::normalize(self.terms.iter().copied().chain(neg).collect())
    }
}

impl Mul for &ExpPoly {
    type Output = ExpPoly;
    fn mul(self, rhs: &ExpPoly) -> ExpPoly {
        let mut raw = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        self.product_terms(rhs, C64::new(1.0, 0.0), &mut raw);
        ExpPoly::normalize(raw)
    }
}

impl Neg for &ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        self.scale_real(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ExpPoly {
            type Output = ExpPoly;
            fn $m(self, rhs: ExpPoly) -> ExpPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&ExpPoly> for ExpPoly {
            type Output = ExpPoly;
            fn $m(self, rhs: &ExpPoly) -> ExpPoly {
                (&self).$m(rhs)
            }
        }
        impl $tr<ExpPoly> for &ExpPoly {
            type Output = ExpPoly;
            fn $m(self, rhs: ExpPoly) -> ExpPoly {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        -&self
    }
}

impl Mul<C64> for &ExpPoly {
    type Output = ExpPoly;
    fn mul(self, c: C64) -> ExpPoly {
        self.scale(c)
    }
}

impl Mul<f64> for &ExpPoly {
    type Output = ExpPoly;
    fn mul(self, c: f64) -> ExpPoly {
        self.scale_real(c)
    }
}

impl Mul<C64> for ExpPoly {
    type Output = ExpPoly;
    fn mul(self, c: C64) -> ExpPoly {
        self.scale(c)
    }
}

impl Mul<f64> for ExpPoly {
    type Output = ExpPoly;
    fn mul(self, c: f64) -> ExpPoly {
        self.scale_real(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn euler_cos() {
        let w = c(0.99);
        let raw = vec![Term::new(c(0.5), 0, C64::i() * w), Term::new(c(0.5), 0, -C64::i() * w)];
        let f = ExpPoly::normalize(raw);
        assert_eq!(f, ExpPoly::cos(w));
        assert_relative_eq!(f.eval(0.7).re, (0.99f64 * 0.7).cos(), epsilon = 1e-15);
    }

    #[test]
    fn cancellation_and_merge() {
        let z = ExpPoly::normalize(vec![Term::new(c(1.0), 0, c(0.0)), Term::new(c(-1.0), 0, c(0.0))]);
        assert!(z.is_zero());
        let g = c(0.2);
        let f = ExpPoly::normalize(vec![Term::new(c(2.0), 1, g), Term::new(c(3.0), 1, g)]);
        assert_eq!(f.terms(), &[Term::new(c(5.0), 1, g)]);
    }

    #[test]
    fn derivative_rules() {
        let e = ExpPoly::exp_real(-0.2);
        assert!(e.diff().approx_eq(&e.scale_real(-0.2), 1e-15));
        assert!(ExpPoly::t_pow(1).diff().approx_eq(&ExpPoly::one(), 0.0));
    }

    #[test]
    fn pythagoras() {
        let w = C64::new(0.7, 0.1);
        let s = ExpPoly::sin(w);
        let co = ExpPoly::cos(w);
        let one = &(&s * &s) + &(&co * &co);
        assert!(one.approx_eq(&ExpPoly::one(), 1e-14));
        assert_eq!(one.as_constant().map(|v| (v.re - 1.0).abs() < 1e-14), Some(true));
    }

    #[test]
    fn exp_value() {
        let e = ExpPoly::exp_real(-0.2);
        let (re, im) = e.eval_real(1.0);
        assert_eq!(im, None);
        // independent scalar evaluation
        assert_relative_eq!(re, 0.8187307530779818, epsilon = 1e-15);
    }

    #[test]
    fn residue_is_dropped_relative_to_inputs() {
        let big = ExpPoly::real(1e3);
        let almost = ExpPoly::real(1e3 + 1e-12);
        assert!((&almost - &big).is_zero());
    }
}
