//! Free damped particle (omega = 0): basic operators and the
//! infinite-dimensional algebra generated by `P_n`, `Y_n`, truncated at level N.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::ck_ops::{ck_operators, h_time};
use crate::coeffring::ExpPoly;
use crate::error::{Error, Result};
use crate::model_core::PhysParams;
use crate::report::AlgebraReport;
use crate::weylalg::{MonomialKey, WeylOp};

pub const DP_TOL: f64 = 1e-12;
pub const DEFAULT_LEVEL: usize = 6;

/// Which exponential sits in the `dx` part of X.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum XVariant {
    /// `(1 - e^{-gamma t})`
    Decaying,
    /// `(1 - e^{+gamma t})`
    Growing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gen {
    HG,
    HDP,
    X,
    P(usize),
    Y(usize),
}

impl Gen {
    pub fn name(&self) -> String {
        match self {
            Gen::HG => "H_G".into(),
            Gen::HDP => "H_DP".into(),
            Gen::X => "X".into(),
            Gen::P(n) => format!("P_{n}"),
            Gen::Y(n) => format!("Y_{n}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DpAlgebra {
    pub params: PhysParams,
    pub level: usize,
    pub h_g: WeylOp,
    pub h_dp: WeylOp,
    pub x: WeylOp,
    pub p: Vec<WeylOp>,
    pub y: Vec<WeylOp>,
}

pub fn x_operator(p: &PhysParams, variant: XVariant) -> WeylOp {
    let rate = match variant {
        XVariant::Decaying => -p.gamma,
        XVariant::Growing => p.gamma,
    };
    let f = &ExpPoly::one() - &ExpPoly::exp_real(rate);
    &WeylOp::x() + &WeylOp::dx().mul_coeff(&f.scale(C64::new(0.0, p.hbar / (p.m * p.gamma))))
}

/// `-i hbar e^{-gamma n t} dx`
pub fn p_n(p: &PhysParams, n: usize) -> WeylOp {
    WeylOp::dx().mul_coeff(&ExpPoly::exp_real(-p.gamma * n as f64).scale(C64::new(0.0, -p.hbar)))
}

/// `i e^{-gamma n t}`
pub fn y_n(p: &PhysParams, n: usize) -> WeylOp {
    WeylOp::coeff(ExpPoly::exp_real(-p.gamma * n as f64).scale(C64::i()))
}

/// The omega of `params` is ignored; the construction is the omega = 0 model.
pub fn build_dp(params: &PhysParams, level: usize) -> Result<DpAlgebra> {
    build_dp_variant(params, level, XVariant::Decaying)
}

pub fn build_dp_variant(params: &PhysParams, level: usize, variant: XVariant) -> Result<DpAlgebra> {
    let p = PhysParams { omega: 0.0, ..*params };
    p.validate()?;
    if p.gamma <= 0.0 {
        return Err(Error::InvalidParams { field: "gamma", reason: "the damped particle needs gamma > 0".into() });
    }
    if level == 0 {
        return Err(Error::InvalidParams { field: "N", reason: "truncation level must be at least 1".into() });
    }
    let h_g = WeylOp::monomial(ExpPoly::exp_real(p.gamma).scale(C64::new(0.0, p.hbar)), MonomialKey::new(0, 0, 0, 0, 1));
    Ok(DpAlgebra {
        params: p,
        level,
        h_g,
        h_dp: h_time(p.hbar),
        x: x_operator(&p, variant),
        p: (0..=level).map(|n| p_n(&p, n)).collect(),
        y: (0..=level).map(|n| y_n(&p, n)).collect(),
    })
}

impl DpAlgebra {
    pub fn generators(&self) -> Vec<Gen> {
        let mut g = vec![Gen::HG, Gen::HDP, Gen::X];
        g.extend((0..=self.level).map(Gen::P));
        g.extend((0..=self.level).map(Gen::Y));
        g
    }

    pub fn op(&self, g: Gen) -> &WeylOp {
        match g {
            Gen::HG => &self.h_g,
            Gen::HDP => &self.h_dp,
            Gen::X => &self.x,
            Gen::P(n) => &self.p[n],
            Gen::Y(n) => &self.y[n],
        }
    }

    fn combo(&self, terms: &[(Gen, C64)]) -> WeylOp {
        terms.iter().fold(WeylOp::zero(), |acc, (g, c)| &acc + &self.op(*g).scale(*c))
    }
}

/// Right-hand side of `[a, b]` from the table, as a combination of generators.
pub fn table_bracket(p: &PhysParams, a: Gen, b: Gen) -> Vec<(Gen, C64)> {
    let ih = C64::new(0.0, p.hbar);
    let lower = |n: usize, g: fn(usize) -> Gen| if n == 0 { vec![] } else { vec![(g(n - 1), -ih * p.gamma * n as f64)] };
    let keep = |n: usize, g: fn(usize) -> Gen| if n == 0 { vec![] } else { vec![(g(n), -ih * p.gamma * n as f64)] };
    let neg = |v: Vec<(Gen, C64)>| v.into_iter().map(|(g, c)| (g, -c)).collect::<Vec<_>>();
    match (a, b) {
        (Gen::HG, Gen::P(n)) => lower(n, Gen::P),
        (Gen::HDP, Gen::P(n)) => keep(n, Gen::P),
        (Gen::HG, Gen::Y(n)) => lower(n, Gen::Y),
        (Gen::HDP, Gen::Y(n)) => keep(n, Gen::Y),
        (Gen::HG, Gen::X) => vec![(Gen::P(0), -ih / p.m)],
        (Gen::HDP, Gen::X) => vec![(Gen::P(1), -ih / p.m)],
        (Gen::HG, Gen::HDP) => vec![(Gen::HG, -ih * p.gamma)],
        (Gen::X, Gen::P(n)) => vec![(Gen::Y(n), C64::new(p.hbar, 0.0))],
        (Gen::P(_) | Gen::Y(_) | Gen::X | Gen::HDP, Gen::HG)
        | (Gen::P(_) | Gen::Y(_) | Gen::X, Gen::HDP)
        | (Gen::P(_), Gen::X) => neg(table_bracket(p, b, a)),
        _ => vec![],
    }
}

fn check_pairs(alg: &DpAlgebra, gens: &[Gen], title: &str) -> AlgebraReport {
    let mut rep = AlgebraReport::new(title, DP_TOL);
    for (i, &a) in gens.iter().enumerate() {
        for &b in &gens[i + 1..] {
            let want = table_bracket(&alg.params, a, b);
            let expected = alg.combo(&want);
            let got = alg.op(a).commutator(alg.op(b));
            let label = if want.is_empty() {
                "0".to_string()
            } else {
                want.iter().map(|(g, c)| format!("({c})·{}", g.name())).collect::<Vec<_>>().join(" + ")
            };
            rep.push(format!("[{}, {}]", a.name(), b.name()), label, got.to_string(), got.deviation(&expected));
        }
    }
    rep
}

/// All brackets among `{H_G, H_DP, X, P_0..N, Y_0..N}` against the table.
pub fn verify_dp_algebra(alg: &DpAlgebra) -> Result<AlgebraReport> {
    let mut rep = check_pairs(alg, &alg.generators(), &format!("damped particle algebra (N = {})", alg.level));
    if !alg.y[0].approx_eq(&WeylOp::scalar(C64::i()), DP_TOL) {
        rep.push_flag("Y_0 = i", "i", alg.y[0].to_string(), alg.y[0].deviation(&WeylOp::scalar(C64::i())), false);
    }
    rep.into_result()
}

/// The finite subalgebra `{H_DP, P_1, Y_1, X, P_0, Y_0}`: every bracket stays inside it.
pub fn verify_finite_subalgebra(alg: &DpAlgebra) -> Result<AlgebraReport> {
    let gens = [Gen::HDP, Gen::P(1), Gen::Y(1), Gen::X, Gen::P(0), Gen::Y(0)];
    let mut rep = check_pairs(alg, &gens, "finite subalgebra {H_DP, P_1, Y_1, X, P_0, Y_0}");
    for (i, &a) in gens.iter().enumerate() {
        for &b in &gens[i + 1..] {
            let outside: Vec<String> = table_bracket(&alg.params, a, b)
                .iter()
                .filter(|(g, _)| !gens.contains(g))
                .map(|(g, _)| g.name())
                .collect();
            if !outside.is_empty() {
                rep.push_flag(format!("[{}, {}] closure", a.name(), b.name()), "inside", outside.join(", "), 1.0, false);
            }
        }
    }
    rep.into_result()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VariantReport {
    pub variant: XVariant,
    pub failures: usize,
    pub closes: bool,
}

/// Build the table with both printed forms of X and record which one closes it.
pub fn resolve_x_variant(params: &PhysParams, level: usize) -> Result<Vec<VariantReport>> {
    [XVariant::Decaying, XVariant::Growing]
        .into_iter()
        .map(|v| {
            let alg = build_dp_variant(params, level, v)?;
            let rep = check_pairs(&alg, &alg.generators(), "variant");
            let failures = rep.failures().len();
            Ok(VariantReport { variant: v, failures, closes: failures == 0 })
        })
        .collect()
}

/// `P_0` and `X` against the Caldirola-Kanai operators continued to
/// `Omega = i gamma/2`; returns the largest coefficient deviation.
pub fn omega_zero_limit(params: &PhysParams) -> Result<f64> {
    let alg = build_dp(params, 1)?;
    let p = alg.params;
    let ck = ck_operators(p.m, p.gamma, C64::new(0.0, p.gamma / 2.0), p.hbar);
    Ok(ck.x.deviation(&alg.x).max(ck.p.deviation(&alg.p[0])))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_reduces_to_position_at_time_zero() {
        let alg = build_dp(&PhysParams::default(), 2).unwrap();
        for (k, c) in alg.x.coeffs_at(0.0) {
            if k == MonomialKey::new(1, 0, 0, 0, 0) {
                assert!((c - 1.0).norm() < 1e-15);
            } else {
                assert!(c.norm() < 1e-15, "{k}: {c}");
            }
        }
    }

    #[test]
    fn growing_variant_fails_to_close() {
        let v = resolve_x_variant(&PhysParams::default(), 3).unwrap();
        assert!(v[0].closes);
        assert!(!v[1].closes);
    }

    #[test]
    fn bad_level_and_gamma_rejected() {
        assert!(build_dp(&PhysParams::default(), 0).is_err());
        assert!(build_dp(&PhysParams { gamma: 0.0, ..Default::default() }, 2).is_err());
    }
}
