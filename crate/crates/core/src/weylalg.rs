//! Normal-ordered differential operators in (x, y, t) with exponential-polynomial
//! coefficients.
//!
//! A monomial `f(t) x^a y^b dx^c dy^d dt^e` always has every multiplication to
//! the left of every derivative; products are reordered with Leibniz.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coeffring::{ExpPoly, Term};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MonomialKey {
    pub x: u32,
    pub y: u32,
    pub dx: u32,
    pub dy: u32,
    pub dt: u32,
}

impl MonomialKey {
    pub const ONE: MonomialKey = MonomialKey { x: 0, y: 0, dx: 0, dy: 0, dt: 0 };

    pub fn new(x: u32, y: u32, dx: u32, dy: u32, dt: u32) -> Self {
        MonomialKey { x, y, dx, dy, dt }
    }

    pub fn degree(&self) -> u32 {
        self.x + self.y + self.dx + self.dy + self.dt
    }
}

impl fmt::Display for MonomialKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = [("x", self.x), ("y", self.y), ("dx", self.dx), ("dy", self.dy), ("dt", self.dt)];
        let mut first = true;
        for (name, p) in parts {
            if p == 0 {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if p == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{p}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct WeylOp {
    terms: BTreeMap<MonomialKey, ExpPoly>,
}

fn binom(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn falling(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64)
}

impl WeylOp {
    pub fn zero() -> Self {
        WeylOp { terms: BTreeMap::new() }
    }

    pub fn identity() -> Self {
        Self::monomial(ExpPoly::one(), MonomialKey::ONE)
    }

    pub fn scalar(c: C64) -> Self {
        Self::monomial(ExpPoly::constant(c), MonomialKey::ONE)
    }

    /// Multiplication by a function of time.
    pub fn coeff(f: ExpPoly) -> Self {
        Self::monomial(f, MonomialKey::ONE)
    }

    pub fn monomial(f: ExpPoly, key: MonomialKey) -> Self {
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert(key, f);
        }
        WeylOp { terms }
    }

    pub fn x() -> Self {
        Self::monomial(ExpPoly::one(), MonomialKey::new(1, 0, 0, 0, 0))
    }
    pub fn y() -> Self {
        Self::monomial(ExpPoly::one(), MonomialKey::new(0, 1, 0, 0, 0))
    }
    pub fn dx() -> Self {
        Self::monomial(ExpPoly::one(), MonomialKey::new(0, 0, 1, 0, 0))
    }
    pub fn dy() -> Self {
        Self::monomial(ExpPoly::one(), MonomialKey::new(0, 0, 0, 1, 0))
    }
    pub fn dt() -> Self {
        Self::monomial(ExpPoly::one(), MonomialKey::new(0, 0, 0, 0, 1))
    }

    pub fn from_raw(raw: BTreeMap<MonomialKey, Vec<Term>>) -> Self {
        let terms = raw
            .into_iter()
            .map(|(k, v)| (k, ExpPoly::normalize(v)))
            .filter(|(_, f)| !f.is_zero())
            .collect();
        WeylOp { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MonomialKey, &ExpPoly)> {
        self.terms.iter()
    }

    pub fn coeff_of(&self, key: &MonomialKey) -> Option<&ExpPoly> {
        self.terms.get(key)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn has_time_derivative(&self) -> bool {
        self.terms.keys().any(|k| k.dt > 0)
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.degree()).max().unwrap_or(0)
    }

    /// Constant multiple of the identity, if that is what the operator is.
    pub fn as_scalar(&self) -> Option<C64> {
        match self.terms.len() {
            0 => Some(C64::new(0.0, 0.0)),
            1 => self.terms.get(&MonomialKey::ONE).and_then(|f| f.as_constant()),
            _ => None,
        }
    }

    pub fn max_amplitude(&self) -> f64 {
        self.terms.values().map(|f| f.max_amplitude()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: C64) -> Self {
        WeylOp {
            terms: self
                .terms
                .iter()
                .map(|(k, f)| (*k, f.scale(c)))
                .filter(|(_, f)| !f.is_zero())
                .collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    /// Left multiplication by a function of time (no reordering needed).
    pub fn mul_coeff(&self, g: &ExpPoly) -> Self {
        WeylOp {
            terms: self
                .terms
                .iter()
                .map(|(k, f)| (*k, f * g))
                .filter(|(_, f)| !f.is_zero())
                .collect(),
        }
    }

    /// Explicit time derivative of the coefficients, dO/dt at fixed operators.
    pub fn time_derivative(&self) -> Self {
        WeylOp {
            terms: self
                .terms
                .iter()
                .map(|(k, f)| (*k, f.diff()))
                .filter(|(_, f)| !f.is_zero())
                .collect(),
        }
    }

    /// Coefficients evaluated at time `t`.
    pub fn coeffs_at(&self, t: f64) -> Vec<(MonomialKey, C64)> {
        self.terms.iter().map(|(k, f)| (*k, f.eval(t))).collect()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        let mut raw: BTreeMap<MonomialKey, Vec<Term>> = BTreeMap::new();
        product_into(self, other, C64::new(1.0, 0.0), &mut raw);
        product_into(other, self, C64::new(-1.0, 0.0), &mut raw);
        Self::from_raw(raw)
    }

    /// Largest coefficient deviation relative to the largest amplitude in either operator.
    pub fn deviation(&self, other: &Self) -> f64 {
        let scale = self.max_amplitude().max(other.max_amplitude());
        if scale == 0.0 {
            return 0.0;
        }
        (self - other).max_amplitude() / scale
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.deviation(other) <= tol
    }
}

fn product_into(a: &WeylOp, b: &WeylOp, factor: C64, out: &mut BTreeMap<MonomialKey, Vec<Term>>) {
    for (ka, fa) in &a.terms {
        for (kb, fb) in &b.terms {
            for l in 0..=ka.dt {
                let gl = if l == 0 { fb.clone() } else { fb.diff_n(l) };
                if gl.is_zero() {
                    continue;
                }
                let cl = binom(ka.dt, l);
                for j in 0..=ka.dx.min(kb.x) {
                    let cj = binom(ka.dx, j) * falling(kb.x, j);
                    for k in 0..=ka.dy.min(kb.y) {
                        let ck = binom(ka.dy, k) * falling(kb.y, k);
                        let key = MonomialKey {
                            x: ka.x + kb.x - j,
                            y: ka.y + kb.y - k,
                            dx: ka.dx - j + kb.dx,
                            dy: ka.dy - k + kb.dy,
                            dt: ka.dt - l + kb.dt,
                        };
                        let entry = out.entry(key).or_default();
                        fa.product_terms(&gl, factor * (cl * cj * ck), entry);
                    }
                }
            }
        }
    }
}

impl Mul for &WeylOp {
    type Output = WeylOp;
    fn mul(self, rhs: &WeylOp) -> WeylOp {
        let mut raw = BTreeMap::new();
        product_into(self, rhs, C64::new(1.0, 0.0), &mut raw);
        WeylOp::from_raw(raw)
    }
}

impl Add for &WeylOp {
    type Output = WeylOp;
    fn add(self, rhs: &WeylOp) -> WeylOp {
        let mut raw: BTreeMap<MonomialKey, Vec<Term>> = BTreeMap::new();
        for (k, f) in self.terms.iter().chain(rhs.terms.iter()) {
            raw.entry(*k).or_default().extend_from_slice(f.terms());
        }
        WeylOp::from_raw(raw)
    }
}

impl Sub for &WeylOp {
    type Output = WeylOp;
    fn sub(self, rhs: &WeylOp) -> WeylOp {
        let mut raw: BTreeMap<MonomialKey, Vec<Term>> = BTreeMap::new();
        for (k, f) in &self.terms {
            raw.entry(*k).or_default().extend_from_slice(f.terms());
        }
        for (k, f) in &rhs.terms {
            raw.entry(*k)
                .or_default()
                .extend(f.terms().iter().map(|t| Term::new(-t.coeff, t.power, t.rate)));
        }
        WeylOp::from_raw(raw)
    }
}

impl Neg for &WeylOp {
    type Output = WeylOp;
    fn neg(self) -> WeylOp {
        self.scale_real(-1.0)
    }
}

impl Neg for WeylOp {
    type Output = WeylOp;
    fn neg(self) -> WeylOp {
        self.scale_real(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for WeylOp {
            type Output = WeylOp;
            fn $m(self, rhs: WeylOp) -> WeylOp {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&WeylOp> for WeylOp {
            type Output = WeylOp;
            fn $m(self, rhs: &WeylOp) -> WeylOp {
                (&self).$m(rhs)
            }
        }
        impl $tr<WeylOp> for &WeylOp {
            type Output = WeylOp;
            fn $m(self, rhs: WeylOp) -> WeylOp {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Mul<C64> for &WeylOp {
    type Output = WeylOp;
    fn mul(self, c: C64) -> WeylOp {
        self.scale(c)
    }
}
impl Mul<C64> for WeylOp {
    type Output = WeylOp;
    fn mul(self, c: C64) -> WeylOp {
        self.scale(c)
    }
}
impl Mul<f64> for &WeylOp {
    type Output = WeylOp;
    fn mul(self, c: f64) -> WeylOp {
        self.scale_real(c)
    }
}
impl Mul<f64> for WeylOp {
    type Output = WeylOp;
    fn mul(self, c: f64) -> WeylOp {
        self.scale_real(c)
    }
}
impl Mul<&ExpPoly> for &WeylOp {
    type Output = WeylOp;
    fn mul(self, f: &ExpPoly) -> WeylOp {
        self.mul_coeff(f)
    }
}
impl Mul<ExpPoly> for WeylOp {
    type Output = WeylOp;
    fn mul(self, f: ExpPoly) -> WeylOp {
        self.mul_coeff(&f)
    }
}

impl fmt::Display for WeylOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (k, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[{c}]·{k}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MonomialDoc {
    x: u32,
    y: u32,
    dx: u32,
    dy: u32,
    dt: u32,
    /// (re, im, k, a_re, a_im)
    coeff: Vec<(f64, f64, u32, f64, f64)>,
}

#[derive(Serialize, Deserialize)]
struct WeylDoc {
    monomials: Vec<MonomialDoc>,
}

impl Serialize for WeylOp {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let monomials = self
            .terms
            .iter()
            .map(|(k, f)| MonomialDoc {
                x: k.x,
                y: k.y,
                dx: k.dx,
                dy: k.dy,
                dt: k.dt,
                coeff: f.terms().iter().map(|t| (t.coeff.re, t.coeff.im, t.power, t.rate.re, t.rate.im)).collect(),
            })
            .collect();
        WeylDoc { monomials }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeylOp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = WeylDoc::deserialize(d)?;
        let raw = doc
            .monomials
            .into_iter()
            .map(|m| {
                let key = MonomialKey::new(m.x, m.y, m.dx, m.dy, m.dt);
                let terms = m
                    .coeff
                    .into_iter()
                    .map(|(re, im, k, ar, ai)| Term::new(C64::new(re, im), k, C64::new(ar, ai)))
                    .collect();
                (key, terms)
            })
            .collect();
        Ok(WeylOp::from_raw(raw))
    }
}
