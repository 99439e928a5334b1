//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

use std::time::Instant;

use dampsym::arnold::{qat_transport_check, Gaussian};
use dampsym::bateman::{classical_consistency, verify_bateman_algebra};
use dampsym::bateman_group::verify_group_closure;
use dampsym::ck_evolve::{conservation_report, evolve_ck, EvolveConfig};
use dampsym::ck_ops::{
    build_catalog, extension_pattern_check, h_dho, reduce_k_minus_one, solve_ck_extensions, verify_reconstruction,
    verify_seven_algebra,
};
use dampsym::constraint_reduce::{
    classical_constraint_check, good_operator_check, verify_reduction_to_ck, ConstraintSet, ReductionMaps,
};
use dampsym::damped_particle::{build_dp, verify_dp_algebra, verify_finite_subalgebra};
use dampsym::error::{Error, Result};
use dampsym::mixedrep::scan_spectrum;
use dampsym::model_core::{build_basis, PhysParams};
use dampsym::report::AlgebraReport;

const SEED: u64 = 20240601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn report(r: Result<AlgebraReport>) -> Result<AlgebraReport> {
    match r {
        Err(Error::Mismatch(rep)) => Ok(*rep),
        other => other,
    }
}

fn exact(rep: &AlgebraReport, tol: f64) -> bool {
    rep.all_pass() && rep.max_dev() < tol
}

fn p() -> PhysParams {
    PhysParams::default()
}

fn c1() -> Result<Outcome> {
    let rep = report(verify_seven_algebra(&build_catalog(p())?))?;
    let n = rep.entries.len();
    ok(n == 21 && exact(&rep, 1e-12), format!("{n} brackets, max deviation {:.2e}", rep.max_dev()))
}

fn c2() -> Result<Outcome> {
    let fam = solve_ck_extensions(&p())?;
    let pattern = report(extension_pattern_check(&fam, &p(), &[1.0, -1.0]))?;
    ok(
        fam.dimension() == 1 && exact(&pattern, 1e-12),
        format!("dimension {}, k = +1/-1 pattern max deviation {:.2e}", fam.dimension(), pattern.max_dev()),
    )
}

fn c3() -> Result<Outcome> {
    let cat = build_catalog(p())?;
    let red = match reduce_k_minus_one(&cat) {
        Ok(r) => r,
        Err(Error::Mismatch(rep)) => return ok(false, format!("5+1 table failed: {:?}", rep.failures())),
        Err(e) => return Err(e),
    };
    match verify_reconstruction(&red, &p(), SEED) {
        Ok(rec) => ok(
            exact(&red.report, 1e-12) && exact(&rec.brackets, 1e-12),
            format!(
                "5+1 table max deviation {:.2e}, H brackets with basics max deviation {:.2e}",
                red.report.max_dev(),
                rec.brackets.max_dev()
            ),
        ),
        Err(Error::Mismatch(rep)) => ok(false, format!("reconstruction failed: {:?}", rep.failures())),
        Err(e) => Err(e),
    }
}

fn c4() -> Result<Outcome> {
    let alg = report(verify_bateman_algebra(&p()))?;
    let cc = classical_consistency(&p(), 100, 10.0, SEED)?;
    ok(
        exact(&alg, 1e-12) && cc.samples == 100 && cc.hamiltonian_max_dev < 1e-10 && cc.trajectory_max_err < 1e-6,
        format!(
            "table max deviation {:.2e}, H(map) - H_B {:.2e} on {} points, x(t) error {:.2e} on [0, 10]",
            alg.max_dev(),
            cc.hamiltonian_max_dev,
            cc.samples,
            cc.trajectory_max_err
        ),
    )
}

fn c5() -> Result<Outcome> {
    let params = p();
    let period = 2.0 * std::f64::consts::PI / params.big_omega()?;
    let n_steps = (period / 5e-4).ceil() as usize;
    let cfg = EvolveConfig { dt: period / n_steps as f64, n_steps, x_min: -15.95, x_max: 15.95, n: 4096, snapshot_every: 100 };
    let g = Gaussian::new(1.0, 0.5, 0.8);
    let init = cfg.state_from(params, |x| g.initial(params.hbar, x)).normalized();
    let snaps = evolve_ck(&init, &cfg)?;
    let cat = build_catalog(params)?;
    let h = h_dho(&params);
    let rep = conservation_report(&snaps, &[("X", &cat.x), ("P", &cat.p), ("H", &h)], cfg.dt)?;
    let drift = |n: &str| rep.entry(n).map_or(f64::INFINITY, |e| e.rel_drift);
    ok(
        cfg.dx() <= 1.0 / 128.0
            && cfg.dt <= 1e-3
            && rep.norm_drift_per_step < 1e-10
            && drift("X") < 1e-5
            && drift("P") < 1e-5
            && drift("H") > 1e-2,
        format!(
            "dx {:.5}, dt {:.2e}, norm drift/step {:.1e}, X {:.2e}, P {:.2e}, H_DHO {:.1}%",
            cfg.dx(),
            cfg.dt,
            rep.norm_drift_per_step,
            drift("X"),
            drift("P"),
            100.0 * drift("H")
        ),
    )
}

fn c6() -> Result<Outcome> {
    let basis = build_basis(p())?;
    let g = Gaussian::new(1.0, 0.5, 0.8);
    let (mut res, mut rt): (f64, f64) = (0.0, 0.0);
    for t in [-0.5, 0.5, 1.0] {
        let r = qat_transport_check(&g, &basis, t, 1e-3, -12.0, 12.0, 2048)?;
        res = res.max(r.residual);
        rt = rt.max(r.roundtrip_l2);
    }
    ok(res < 1e-5 && rt < 1e-12, format!("residual {res:.2e}, roundtrip L2 {rt:.2e}"))
}

fn c7() -> Result<Outcome> {
    let rep = verify_group_closure(&p(), SEED)?;
    ok(
        rep.associativity_max_err < 1e-10 && rep.closure.all_pass() && rep.closure.max_dev() < 1e-6,
        format!(
            "associativity {:.2e} on 1000 triples, right-invariant closure {:.2e}",
            rep.associativity_max_err,
            rep.closure.max_dev()
        ),
    )
}

fn c8() -> Result<Outcome> {
    let params = p();
    let hw = params.hbar * params.big_omega()?;
    let mut pass = true;
    let mut detail = Vec::new();
    for lambda in [0.0, 0.25, 0.5] {
        let r = scan_spectrum(lambda, -5.0 * hw, 5.0 * hw, 2001, &params, SEED)?;
        pass &= r.accepted.len() == r.expected.len() && r.max_rule_deviation < 1e-9 && r.max_residual < 1e-5;
        detail.push(format!(
            "lambda {lambda}: {}/{} levels, rule {:.1e}, residual {:.1e}",
            r.accepted.len(),
            r.expected.len(),
            r.max_rule_deviation,
            r.max_residual
        ));
    }
    ok(pass, detail.join("; "))
}

fn c9() -> Result<Outcome> {
    let params = p();
    let good = report(good_operator_check(&params))?;
    let cs = ConstraintSet::new(&params)?;
    let cl = classical_constraint_check(&cs.constrained_initial(1.0, 0.5), 5.0, &params)?;
    let commute = good.entries.iter().filter(|e| e.bracket.ends_with(", C1]") && e.expected == "0").all(|e| e.max_dev < 1e-12);
    let hb = good.entries.iter().find(|e| e.bracket == "[H_B, C1]").map_or(0.0, |e| e.max_dev);
    ok(
        commute && hb > 1e-6 && cl.max_y_violation < 1e-8 && cl.max_py_violation < 1e-8,
        format!(
            "good operators commute with C1 ({:.1e}), |[H_B, C1]| {hb:.2}, constraint drift y {:.1e}, p_y {:.1e}",
            good.entries.iter().take(2).map(|e| e.max_dev).fold(0.0, f64::max),
            cl.max_y_violation,
            cl.max_py_violation
        ),
    )
}

fn c10() -> Result<Outcome> {
    let maps = ReductionMaps::new(&p(), 1.0)?;
    let rep = verify_reduction_to_ck(&maps, &Gaussian::new(0.5, 0.3, 1.0), (0.3, 1.2), 10)?;
    let b = &rep.branch;
    ok(
        rep.max_rel_residual < 1e-5 && b.dtau_at_zero_ok && b.sign_ok,
        format!(
            "reduced residual {:.2e} (limit 1e-5), tau'(0) {:.1e}, sign {}",
            rep.max_rel_residual,
            b.dtau_near_zero,
            if b.sign_ok { "ok" } else { "wrong" }
        ),
    )
}

fn c11() -> Result<Outcome> {
    let alg = build_dp(&p(), 6)?;
    let table = report(verify_dp_algebra(&alg))?;
    let sub = report(verify_finite_subalgebra(&alg))?;
    ok(
        exact(&table, 1e-12) && sub.all_pass(),
        format!("{} brackets up to n = 6, max deviation {:.1e}, finite subalgebra closes: {}", table.entries.len(), table.max_dev(), sub.all_pass()),
    )
}

fn main() {
    let criteria: [(&str, f64, fn() -> Result<Outcome>); 11] = [
        ("seven-dimensional algebra", 1.0, c1),
        ("central-extension family", 1.0, c2),
        ("k = -1 reduction and Hamiltonian reconstruction", 1.0, c3),
        ("Bateman algebra and classical consistency", f64::INFINITY, c4),
        ("Crank-Nicolson conservation", 30.0, c5),
        ("QAT solution transport", f64::INFINITY, c6),
        ("group axioms and invariant fields", f64::INFINITY, c7),
        ("single-valued spectrum", f64::INFINITY, c8),
        ("constraints", f64::INFINITY, c9),
        ("reduction to Caldirola-Kanai", f64::INFINITY, c10),
        ("damped-particle algebra", 1.0, c11),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = f();
        let secs = start.elapsed().as_secs_f64();
        let (pass, detail) = match out {
            Ok(o) => (o.pass && secs < *limit, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let timing = if limit.is_finite() { format!("{secs:.2} s, limit {limit} s") } else { format!("{secs:.2} s") };
        println!("{} {:>2} {name}: {detail} [{timing}]", if pass { "PASS" } else { "FAIL" }, i + 1);
        failed += usize::from(!pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
