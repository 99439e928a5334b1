//! Caldirola-Kanai symmetry operators and their algebras.
//!
//! The concrete operators realize the k = 1 member of the centrally extended
//! seven-dimensional algebra. Other members, the shift to `Q`, and the k = -1
//! reduction are handled at the structure-constant level, and the k = -1 basic
//! pairs are realized concretely on the Bateman Hilbert space.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::bateman::{bateman_basic_ops, h_b_operator, h_canonical};
use crate::coeffring::ExpPoly;
use crate::error::Result;
use crate::lie::{solve_central_extensions, verify_realization, ExtensionFamily, LieTable};
use crate::model_core::PhysParams;
use crate::report::AlgebraReport;
use crate::weylalg::WeylOp;

pub const SEVEN: [&str; 7] = ["X", "P", "Qt", "Pi", "H", "G1", "G2"];
pub const SHIFTED: [&str; 7] = ["X", "P", "Q", "Pi", "H", "G1", "G2"];

/// Brackets that may carry a central charge in the k-family normal form.
pub const EXTENSION_SUPPORT: [(&str, &str); 4] = [("X", "P"), ("Qt", "Pi"), ("Qt", "P"), ("H", "G2")];

/// Operators for a given reduced frequency; complex `big` is allowed so that
/// the omega -> 0 limit (`big = i gamma/2`) can be taken.
#[derive(Clone, Debug)]
pub struct CkOperators {
    pub x: WeylOp,
    pub p: WeylOp,
    pub pi: WeylOp,
    pub q_tilde: WeylOp,
    pub g1: WeylOp,
    pub g2: WeylOp,
    /// X with the combined (2 Omega cos - gamma sin)/(2 Omega) coefficient
    pub x_alt: WeylOp,
    /// P with the combined (gamma^2 + 4 Omega^2)/(4 Omega) coefficient
    pub p_alt: WeylOp,
}

pub fn ck_operators(m: f64, gamma: f64, big: C64, hbar: f64) -> CkOperators {
    let one = C64::new(1.0, 0.0);
    let g = C64::new(gamma, 0.0);
    let w2 = big * big + g * g / 4.0;
    let ih = C64::new(0.0, hbar);
    let ep = ExpPoly::exp_real(gamma / 2.0);
    let em = ExpPoly::exp_real(-gamma / 2.0);
    let c = ExpPoly::cos(big);
    let s = ExpPoly::sin(big);
    let c2 = ExpPoly::cos(big * 2.0);
    let s2 = ExpPoly::sin(big * 2.0);
    let x = WeylOp::x();
    let dx = WeylOp::dx();

    // e^{+-gamma t/2}(cos + a sin)
    let trig = |a: C64| &c + &s.scale(a);
    let sin_over = s.scale(one / (big * m));

    let x_op = &(&x * &(&ep * &trig(-g / (big * 2.0)))) + &(&dx * &(&em * &sin_over).scale(ih));
    let p_op = &(&dx * &(&em * &trig(g / (big * 2.0))).scale(-ih)) + &(&x * &(&ep * &s).scale(w2 * m / big));
    let pi_op = &(&dx * &(&em * &trig(-g / (big * 2.0))).scale(ih)) - &(&x * &(&ep * &s).scale(w2 * m / big));
    let qt_op = &(&x * &(&ep * &trig(-g * 3.0 / (big * 2.0)))) + &(&dx * &(&em * &sin_over).scale(ih));

    let g1 = &(&ExpPoly::constant(-w2 * 4.0) + &c2.scale(g * g)) + &s2.scale(g * big * 2.0);
    let g1 = WeylOp::coeff(g1.scale(one / (big * big * 4.0)));
    let g2 = WeylOp::coeff((&s * &s).scale(-g / (big * big)));

    let x_alt = &(&x * &(&ep * &(&c.scale(big * 2.0) - &s.scale(g))).scale(one / (big * 2.0)))
        + &(&dx * &(&em * &sin_over).scale(ih));
    let p_alt = &(&dx * &(&em * &(&c.scale(big * 2.0) + &s.scale(g))).scale(-ih / (big * 2.0)))
        + &(&x * &(&ep * &s).scale((g * g + big * big * 4.0) * m / (big * 4.0)));

    CkOperators { x: x_op, p: p_op, pi: pi_op, q_tilde: qt_op, g1, g2, x_alt, p_alt }
}

/// `-(hbar^2/2m) e^{-gamma t} dx^2 + (1/2) m omega^2 e^{gamma t} x^2`.
pub fn h_dho(p: &PhysParams) -> WeylOp {
    let kin = (&WeylOp::dx() * &WeylOp::dx()).mul_coeff(&ExpPoly::exp_real(-p.gamma).scale_real(-p.hbar * p.hbar / (2.0 * p.m)));
    let pot = (&WeylOp::x() * &WeylOp::x()).mul_coeff(&ExpPoly::exp_real(p.gamma).scale_real(0.5 * p.m * p.omega * p.omega));
    &kin + &pot
}

/// `i hbar d/dt`
pub fn h_time(hbar: f64) -> WeylOp {
    WeylOp::dt().scale(C64::new(0.0, hbar))
}

/// Residual of `dO/dt + (i/hbar)[H_DHO, O]`, zero for a conserved operator.
pub fn conservation_defect(op: &WeylOp, p: &PhysParams) -> WeylOp {
    &op.time_derivative() + &h_dho(p).commutator(op).scale(C64::new(0.0, 1.0 / p.hbar))
}

#[derive(Clone, Debug)]
pub struct OperatorCatalog {
    pub x: WeylOp,
    pub p: WeylOp,
    pub pi: WeylOp,
    pub q_tilde: WeylOp,
    /// `-Q~ + (1-k) X`
    pub q: WeylOp,
    pub g1: WeylOp,
    pub g2: WeylOp,
    pub h: WeylOp,
    pub params: PhysParams,
    pub k: f64,
    pub alt: CkOperators,
}

pub fn build_catalog(params: PhysParams) -> Result<OperatorCatalog> {
    let big = params.big_omega()?;
    let ops = ck_operators(params.m, params.gamma, C64::new(big, 0.0), params.hbar);
    let q = -&ops.q_tilde;
    let cat = OperatorCatalog {
        x: ops.x.clone(),
        p: ops.p.clone(),
        pi: ops.pi.clone(),
        q_tilde: ops.q_tilde.clone(),
        q,
        g1: ops.g1.clone(),
        g2: ops.g2.clone(),
        h: h_time(params.hbar),
        params,
        k: 1.0,
        alt: ops,
    };
    Ok(cat)
}

impl OperatorCatalog {
    /// Same operators with `Q = -Q~ + (1-k) X`.
    pub fn with_shift(&self, k: f64) -> Self {
        let mut c = self.clone();
        c.q = &(-&self.q_tilde) + &self.x.scale_real(1.0 - k);
        c.k = k;
        c
    }

    pub fn seven(&self) -> [(&'static str, &WeylOp); 7] {
        [
            ("X", &self.x),
            ("P", &self.p),
            ("Qt", &self.q_tilde),
            ("Pi", &self.pi),
            ("H", &self.h),
            ("G1", &self.g1),
            ("G2", &self.g2),
        ]
    }

    pub fn shifted(&self) -> [(&'static str, &WeylOp); 7] {
        [
            ("X", &self.x),
            ("P", &self.p),
            ("Q", &self.q),
            ("Pi", &self.pi),
            ("H", &self.h),
            ("G1", &self.g1),
            ("G2", &self.g2),
        ]
    }

    /// Values at t = 0 of the operator coefficients, for the spot checks.
    pub fn initial_values(&self) -> Vec<(String, Vec<(String, C64)>)> {
        self.seven()
            .iter()
            .map(|(n, op)| (n.to_string(), op.coeffs_at(0.0).into_iter().map(|(k, v)| (k.to_string(), v)).collect()))
            .collect()
    }
}

/// The k-parameterized table over (X, P, Qt, Pi, H, G1, G2).
pub fn k_table(p: &PhysParams, k: f64) -> LieTable {
    let (m, g, w2) = (p.m, p.gamma, p.omega * p.omega);
    let mut t = LieTable::new(&SEVEN);
    t.set("X", "P", &[], 1.0)
        .set("Qt", "Pi", &[("G1", 2.0)], k)
        .set("X", "Qt", &[("G2", 1.0 / m)], 0.0)
        .set("X", "Pi", &[("G1", 1.0)], 0.0)
        .set("Qt", "P", &[("G1", -1.0), ("G2", g)], 1.0 - k)
        .set("P", "Pi", &[("G2", -m * w2)], 0.0)
        .set("H", "X", &[("Pi", 1.0 / m)], 0.0)
        .set("H", "P", &[("X", 2.0 * m * w2), ("Qt", -m * w2)], 0.0)
        .set("H", "Qt", &[("X", -2.0 * g), ("P", -1.0 / m), ("Qt", g)], 0.0)
        .set("H", "Pi", &[("X", -3.0 * m * w2), ("Qt", 2.0 * m * w2), ("Pi", -g)], 0.0)
        .set("H", "G1", &[("G1", -g), ("G2", 2.0 * w2)], 0.0)
        .set("H", "G2", &[("G1", -2.0), ("G2", g)], -(1.0 + k));
    t
}

/// Table over (X, P, Q, Pi, H, G1, G2) after the shift, as printed.
pub fn shifted_table(p: &PhysParams, k: f64) -> LieTable {
    let (m, g, w2) = (p.m, p.gamma, p.omega * p.omega);
    let mut t = LieTable::new(&SHIFTED);
    t.set("X", "P", &[], 1.0)
        .set("Q", "Pi", &[("G1", -(k + 1.0))], -k)
        .set("X", "Q", &[("G2", -1.0 / m)], 0.0)
        .set("X", "Pi", &[("G1", 1.0)], 0.0)
        .set("Q", "P", &[("G1", 1.0), ("G2", -g)], 0.0)
        .set("P", "Pi", &[("G2", -m * w2)], 0.0)
        .set("H", "X", &[("Pi", 1.0 / m)], 0.0)
        .set("H", "P", &[("X", m * w2 * (1.0 + k)), ("Q", m * w2)], 0.0)
        .set("H", "Q", &[("X", g * (1.0 + k)), ("P", 1.0 / m), ("Q", g), ("Pi", (1.0 - k) / m)], 0.0)
        .set("H", "Pi", &[("X", -m * w2 * (2.0 * k + 1.0)), ("Q", -2.0 * m * w2), ("Pi", -g)], 0.0)
        .set("H", "G1", &[("G1", -g), ("G2", 2.0 * w2)], 0.0)
        .set("H", "G2", &[("G1", -2.0), ("G2", g)], -(1.0 + k));
    t
}

/// The k = -1 table as printed.
pub fn k_minus_one_table(p: &PhysParams) -> LieTable {
    let (m, g, w2) = (p.m, p.gamma, p.omega * p.omega);
    let mut t = LieTable::new(&SHIFTED);
    t.set("X", "P", &[], 1.0)
        .set("Q", "Pi", &[], 1.0)
        .set("X", "Q", &[("G2", -1.0 / m)], 0.0)
        .set("X", "Pi", &[("G1", 1.0)], 0.0)
        .set("Q", "P", &[("G1", 1.0), ("G2", -g)], 0.0)
        .set("P", "Pi", &[("G2", -m * w2)], 0.0)
        .set("H", "X", &[("Pi", 1.0 / m)], 0.0)
        .set("H", "P", &[("Q", m * w2)], 0.0)
        .set("H", "Q", &[("P", 1.0 / m), ("Pi", 2.0 / m), ("Q", g)], 0.0)
        .set("H", "Pi", &[("X", m * w2), ("Q", -2.0 * m * w2), ("Pi", -g)], 0.0)
        .set("H", "G1", &[("G1", -g), ("G2", 2.0 * w2)], 0.0)
        .set("H", "G2", &[("G1", -2.0), ("G2", g)], 0.0);
    t
}

/// The effective 5+1 algebra over (X, P, Q, Pi, H) as printed.
pub fn five_plus_one_table(p: &PhysParams) -> LieTable {
    let (m, g, w2) = (p.m, p.gamma, p.omega * p.omega);
    let mut t = LieTable::new(&["X", "P", "Q", "Pi", "H"]);
    t.set("X", "P", &[], 1.0)
        .set("Q", "Pi", &[], 1.0)
        .set("H", "X", &[("Pi", 1.0 / m)], 0.0)
        .set("H", "P", &[("Q", m * w2)], 0.0)
        .set("H", "Q", &[("P", 1.0 / m), ("Pi", 2.0 / m), ("Q", g)], 0.0)
        .set("H", "Pi", &[("X", m * w2), ("Q", -2.0 * m * w2), ("Pi", -g)], 0.0);
    t
}

/// Rows expressing (X, P, Q, Pi, H, G1, G2) in the (X, P, Qt, ...) basis.
fn shift_rows(k: f64) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = (0..7).map(|i| (0..7).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    rows[2] = vec![1.0 - k, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0];
    rows
}

/// The k-table rewritten in the shifted basis by linear algebra.
pub fn derived_shifted_table(p: &PhysParams, k: f64) -> Result<LieTable> {
    k_table(p, k).change_basis(&SHIFTED, &shift_rows(k))
}

pub fn verify_seven_algebra(cat: &OperatorCatalog) -> Result<AlgebraReport> {
    let table = k_table(&cat.params, 1.0);
    let mut rep = verify_realization(&table, &cat.seven(), cat.params.hbar, 1e-12, "seven-dimensional algebra (k = 1 realization)");
    rep.note(format!("Jacobi residual of the abstract table: {:.3e}", table.jacobi_residual()));
    rep.into_result()
}

/// Central charges compatible with Jacobi, normalized by `[X, P] = i hbar`.
pub fn solve_ck_extensions(p: &PhysParams) -> Result<ExtensionFamily> {
    solve_central_extensions(&k_table(p, 0.0).without_central(), ("X", "P", 1.0), Some(&EXTENSION_SUPPORT))
}

/// Members of the extension family at the given `k` (the charge on `[Qt, Pi]`)
/// against the central charges of the printed k-table.
pub fn extension_pattern_check(fam: &ExtensionFamily, p: &PhysParams, ks: &[f64]) -> Result<AlgebraReport> {
    let mut rep = AlgebraReport::new("central-extension family", 1e-12);
    rep.push_flag("family dimension", "1", fam.dimension().to_string(), 0.0, fam.dimension() == 1);
    let names = k_table(p, 0.0);
    let qt_pi = (names.index("Qt"), names.index("Pi"));
    for &k in ks {
        let charges = fam.specialize(qt_pi, k)?;
        let table = k_table(p, k);
        for ((a, b), z) in charges {
            let (na, nb) = (&names.names()[a], &names.names()[b]);
            let want = table.central(na, nb);
            rep.push(format!("k={k}: central [{na}, {nb}]"), format!("{want}"), format!("{z}"), (z - want).abs());
        }
    }
    rep.into_result()
}

#[derive(Clone, Debug)]
pub struct KMinusOneReduction {
    /// catalog with `Q = -Q~ + 2 X`
    pub catalog: OperatorCatalog,
    pub table: LieTable,
    pub effective: LieTable,
    /// X, P, Q, Pi realized on the Bateman space, plus H_B
    pub basic: [WeylOp; 4],
    pub h: WeylOp,
    pub report: AlgebraReport,
}

pub fn reduce_k_minus_one(cat: &OperatorCatalog) -> Result<KMinusOneReduction> {
    let p = cat.params;
    let tol = 1e-12;
    let mut rep = AlgebraReport::new("k = -1 reduction", tol);

    // shifted tables: printed vs derived from the k-table, several k
    for k in [1.0, -1.0, 0.5] {
        let derived = derived_shifted_table(&p, k)?;
        let mut r = derived.compare(&shifted_table(&p, k), &format!("shifted table k = {k}"), tol);
        for e in r.entries.iter_mut() {
            e.bracket = format!("shift k={k}: {}", e.bracket);
        }
        rep.extend(r);
    }
    let derived = derived_shifted_table(&p, -1.0)?;
    let table = k_minus_one_table(&p);
    let mut r = derived.compare(&table, "k = -1 table", tol);
    for e in r.entries.iter_mut() {
        e.bracket = format!("k=-1: {}", e.bracket);
    }
    rep.extend(r);
    rep.push("Jacobi(k=-1 table)", "0", format!("{:.3e}", table.jacobi_residual()), table.jacobi_residual());

    // gauge: G1, G2 commute with the basic pairs in the abstract table
    for g in ["G1", "G2"] {
        for b in ["X", "P", "Q", "Pi"] {
            let v = table.bracket(table.index(g), table.index(b));
            let dev = v.linear.iter().fold(v.central.abs(), |a, c| a.max(c.abs()));
            rep.push(format!("gauge [{g}, {b}]"), "0", table.format_value(&v), dev);
        }
    }

    // the concrete shift at k = 1 realizes the printed shifted table
    let k1 = cat.with_shift(1.0);
    let mut r = verify_realization(&shifted_table(&p, 1.0), &k1.shifted(), p.hbar, tol, "");
    for e in r.entries.iter_mut() {
        e.bracket = format!("concrete k=1 shift: {}", e.bracket);
    }
    rep.extend(r);
    // G1, G2 are functions of t only, so they commute with every spatial operator
    for (gn, g) in [("G1", &cat.g1), ("G2", &cat.g2)] {
        for (bn, b) in [("X", &cat.x), ("P", &cat.p), ("Q", &cat.q), ("Pi", &cat.pi)] {
            let c = g.commutator(b);
            rep.push(format!("concrete gauge [{gn}, {bn}]"), "0", c.to_string(), if c.is_zero() { 0.0 } else { 1.0 });
        }
    }

    // trivial gauge representation: quotient by span{G1, G2}
    let effective = table.quotient(&["G1", "G2"])?;
    let mut r = effective.compare(&five_plus_one_table(&p), "5+1", tol);
    for e in r.entries.iter_mut() {
        e.bracket = format!("5+1: {}", e.bracket);
    }
    rep.extend(r);

    // concrete k = -1 realization on the Bateman space
    let basic = bateman_basic_ops(&p)?;
    let h = h_b_operator(&p);
    let ops = [("X", &basic[0]), ("P", &basic[1]), ("Q", &basic[2]), ("Pi", &basic[3]), ("H", &h)];
    let mut r = verify_realization(&five_plus_one_table(&p), &ops, p.hbar, tol, "");
    for e in r.entries.iter_mut() {
        e.bracket = format!("Bateman realization: {}", e.bracket);
    }
    rep.extend(r);
    rep.note("G1 and G2 are represented by 0 (quotient by the gauge ideal); the t = 0 values (G1 = -1, G2 = 0) are inconsistent with the 5+1 table since [X, Pi] = i hbar G1 must vanish there");

    let catalog = cat.with_shift(-1.0);
    let rep = rep.into_result()?;
    Ok(KMinusOneReduction { catalog, table, effective, basic, h, report: rep })
}

/// `-(1/m) Pi P - (gamma/2)(Q Pi + Pi Q) - Pi^2/m + m omega^2 X Q - m omega^2 Q^2`.
pub fn reconstruct_hamiltonian(basic: &[WeylOp; 4], p: &PhysParams) -> WeylOp {
    let [x, pp, q, pi] = basic;
    let (m, g, w2) = (p.m, p.gamma, p.omega * p.omega);
    let a = (pi * pp).scale_real(-1.0 / m);
    let b = (&(q * pi) + &(pi * q)).scale_real(-g / 2.0);
    let c = (pi * pi).scale_real(-1.0 / m);
    let d = (x * q).scale_real(m * w2);
    let e = (q * q).scale_real(-m * w2);
    [a, b, c, d, e].iter().fold(WeylOp::zero(), |acc, t| &acc + t)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReconstructionReport {
    pub brackets: AlgebraReport,
    /// H' - H_B, a constant from operator ordering
    pub offset: Option<(f64, f64)>,
    pub classical_max_dev: f64,
}

pub fn verify_reconstruction(red: &KMinusOneReduction, p: &PhysParams, seed: u64) -> Result<ReconstructionReport> {
    let hp = reconstruct_hamiltonian(&red.basic, p);
    let mut rep = AlgebraReport::new("H reconstruction", 1e-12);
    let names = ["X", "P", "Q", "Pi"];
    for (n, a) in names.iter().zip(red.basic.iter()) {
        let got = hp.commutator(a);
        let want = red.h.commutator(a);
        rep.push(format!("[H', {n}] vs [H_B, {n}]"), want.to_string(), got.to_string(), got.deviation(&want));
    }
    let self_c = hp.commutator(&hp);
    rep.push("[H', H']", "0", self_c.to_string(), if self_c.is_zero() { 0.0 } else { 1.0 });
    let diff = &hp - &red.h;
    let offset = diff.as_scalar().map(|c| (c.re, c.im));
    rep.push_flag("H' - H_B is a constant", "scalar", diff.to_string(), 0.0, offset.is_some());

    let classical = classical_flow_check(p, seed, 20);
    rep.push("classical Poisson flow vs table", "0", format!("{classical:.3e}"), classical);
    rep.tol = 1e-12;
    for e in rep.entries.iter_mut() {
        if e.bracket.starts_with("classical") {
            e.pass = e.max_dev <= 1e-9;
        }
    }
    let brackets = rep.into_result()?;
    Ok(ReconstructionReport { brackets, offset, classical_max_dev: classical })
}

/// `{H, A}` from the classical Hamiltonian against the linear part of `[H, A]/(i hbar)`
/// in the 5+1 table, at random phase points.
pub fn classical_flow_check(p: &PhysParams, seed: u64, samples: usize) -> f64 {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let table = five_plus_one_table(p);
    let hidx = table.index("H");
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let z: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
        // quadratic, so central differences are exact up to rounding
        let h = 1e-3;
        let grad: [f64; 4] = std::array::from_fn(|i| {
            let mut a = z;
            let mut b = z;
            a[i] += h;
            b[i] -= h;
            (h_canonical(a, p) - h_canonical(b, p)) / (2.0 * h)
        });
        let [hx, hp, hq, hpi] = grad;
        // {H, A} with pairs (X, P), (Q, Pi)
        let flows = [-hp, hx, -hpi, hq];
        for (a, name) in ["X", "P", "Q", "Pi"].iter().enumerate() {
            let v = table.bracket(hidx, table.index(name));
            let expect: f64 = (0..4).map(|k| v.linear[k] * z[k]).sum();
            let scale = 1.0 + expect.abs();
            worst = worst.max((flows[a] - expect).abs() / scale);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_reduction() {
        let cat = build_catalog(PhysParams::default()).unwrap();
        let x0 = WeylOp::x();
        let at0 = |op: &WeylOp| {
            op.terms()
                .map(|(k, f)| (*k, f.eval(0.0)))
                .filter(|(_, v)| v.norm() > 1e-14)
                .collect::<Vec<_>>()
        };
        assert_eq!(at0(&cat.x), at0(&x0));
        let p0 = WeylOp::dx().scale(C64::new(0.0, -1.0));
        assert_eq!(at0(&cat.p), at0(&p0));
        assert!(cat.g2.coeffs_at(0.0).iter().all(|(_, v)| v.norm() < 1e-15));
        let g1 = cat.g1.coeffs_at(0.0);
        assert!((g1[0].1 - C64::new(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn two_closed_forms_agree() {
        let cat = build_catalog(PhysParams::default()).unwrap();
        assert!(cat.x.approx_eq(&cat.alt.x_alt, 1e-12));
        assert!(cat.p.approx_eq(&cat.alt.p_alt, 1e-12));
        assert!(!cat.p.approx_eq(&cat.pi, 1e-12));
    }

    #[test]
    fn conservation_in_engine() {
        let p = PhysParams::default();
        let cat = build_catalog(p).unwrap();
        for op in [&cat.x, &cat.p] {
            let d = conservation_defect(op, &p);
            assert!(d.max_amplitude() < 1e-12, "{d}");
        }
        for op in [&cat.pi, &cat.q_tilde] {
            assert!(conservation_defect(op, &p).max_amplitude() > 1e-3);
        }
        assert!(!conservation_defect(&h_dho(&p), &p).is_zero());
    }

    #[test]
    fn unextended_table_satisfies_jacobi() {
        let p = PhysParams::default();
        assert!(k_table(&p, 0.0).without_central().jacobi_residual() < 1e-14);
        for k in [-1.0, 0.0, 0.3, 1.0] {
            assert!(k_table(&p, k).jacobi_residual() < 1e-14);
        }
        // a charge off the family breaks Jacobi
        let mut bad = k_table(&p, 1.0);
        bad.set("H", "G2", &[("G1", -2.0), ("G2", p.gamma)], 0.5);
        assert!(bad.jacobi_residual() > 1e-3);
    }
}
