//! The Bateman group: law, inverse, invariant vector fields and their closure.
//!
//! Coordinates are ordered `(t, x, y, p_x, p_y)` with the central U(1) factor
//! stored as a phase `theta` (`zeta = e^{i theta}`), reduced mod 2 pi. Vector
//! field components use the same order with the vertical generator
//! `Xi = d/d theta` last.

use std::f64::consts::PI;

use nalgebra::{Matrix6, Vector6};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bateman::bateman_table;
use crate::error::Result;
use crate::model_core::PhysParams;
use crate::report::AlgebraReport;

pub const COORDS: [&str; 6] = ["t", "x", "y", "p_x", "p_y", "Xi"];

/// Wrap an angle into `[-pi, pi)`.
pub fn wrap(a: f64) -> f64 {
    (a + PI).rem_euclid(2.0 * PI) - PI
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub p_x: f64,
    pub p_y: f64,
    pub theta: f64,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement { t: 0.0, x: 0.0, y: 0.0, p_x: 0.0, p_y: 0.0, theta: 0.0 };

    pub fn new(t: f64, x: f64, y: f64, p_x: f64, p_y: f64, theta: f64) -> Self {
        GroupElement { t, x, y, p_x, p_y, theta: wrap(theta) }
    }

    pub fn time(t: f64) -> Self {
        GroupElement { t, ..Self::IDENTITY }
    }

    pub fn zeta(&self) -> C64 {
        C64::from_polar(1.0, self.theta)
    }

    pub fn coords(&self) -> [f64; 6] {
        [self.t, self.x, self.y, self.p_x, self.p_y, self.theta]
    }

    pub fn from_coords(c: [f64; 6]) -> Self {
        Self::new(c[0], c[1], c[2], c[3], c[4], c[5])
    }

    /// Largest coordinate difference, the phase compared mod 2 pi.
    pub fn distance(&self, other: &GroupElement) -> f64 {
        let (a, b) = (self.coords(), other.coords());
        let mut d: f64 = wrap(a[5] - b[5]).abs();
        for i in 0..5 {
            d = d.max((a[i] - b[i]).abs());
        }
        d
    }

    pub fn random(rng: &mut impl Rng, scale: f64) -> Self {
        let mut u = || rng.gen_range(-scale..scale);
        Self::new(u(), u(), u(), u(), u(), u() * PI / scale)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorFieldEval {
    pub base: GroupElement,
    pub components: [f64; 6],
}

#[derive(Clone, Copy, Debug)]
pub struct BatemanGroup {
    pub params: PhysParams,
    big: f64,
}

impl BatemanGroup {
    pub fn new(params: PhysParams) -> Result<Self> {
        params.validate()?;
        let big = params.big_omega()?;
        Ok(BatemanGroup { params, big })
    }

    /// The linear action on `(x, y, p_x, p_y)` entering the law.
    pub fn action(&self, t: f64, v: [f64; 4]) -> [f64; 4] {
        let (m, w) = (self.params.m, self.big);
        let em = (-0.5 * self.params.gamma * t).exp();
        let ep = 1.0 / em;
        let (s, c) = (w * t).sin_cos();
        let [x, y, px, py] = v;
        [
            em * (x * c + py * s / (m * w)),
            ep * (y * c + px * s / (m * w)),
            ep * (px * c - m * w * y * s),
            em * (py * c - m * w * x * s),
        ]
    }

    /// `g2 * g1` with `g2` the primed element of the displayed law.
    pub fn compose(&self, g2: &GroupElement, g1: &GroupElement) -> GroupElement {
        let w = self.action(g1.t, [g2.x, g2.y, g2.p_x, g2.p_y]);
        let cocycle = (g1.p_y * w[1] - g1.x * w[2]) / self.params.hbar;
        GroupElement::new(
            g1.t + g2.t,
            g1.x + w[0],
            g1.y + w[1],
            g1.p_x + w[2],
            g1.p_y + w[3],
            g1.theta + g2.theta + cocycle,
        )
    }

    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        let v = self.action(-g.t, [g.x, g.y, g.p_x, g.p_y]);
        let theta = -g.theta + (g.p_y * g.y - g.x * g.p_x) / self.params.hbar;
        GroupElement::new(-g.t, -v[0], -v[1], -v[2], -v[3], theta)
    }

    fn shifted(&self, g: &GroupElement, side: Side, dir: usize, s: f64) -> [f64; 6] {
        let mut e = [0.0; 6];
        e[dir] = s;
        let eps = GroupElement::from_coords(e);
        let r = match side {
            Side::Left => self.compose(g, &eps),
            Side::Right => self.compose(&eps, g),
        };
        let mut c = r.coords();
        c[5] = g.theta + wrap(r.theta - g.theta);
        c
    }

    /// Invariant field along coordinate direction `dir`, by a five-point
    /// derivative of the law at the identity.
    pub fn field(&self, g: &GroupElement, side: Side, dir: usize) -> VectorFieldEval {
        const H: f64 = 1e-3;
        let f = |s| self.shifted(g, side, dir, s);
        let (a, b, c, d) = (f(-2.0 * H), f(-H), f(H), f(2.0 * H));
        let mut comp = [0.0; 6];
        for k in 0..6 {
            comp[k] = (a[k] - 8.0 * b[k] + 8.0 * c[k] - d[k]) / (12.0 * H);
        }
        VectorFieldEval { base: *g, components: comp }
    }

    pub fn invariant_fields(&self, g: &GroupElement, side: Side) -> [VectorFieldEval; 6] {
        std::array::from_fn(|k| self.field(g, side, k))
    }

    /// Lie bracket `[X_i, X_j]` of invariant fields at `g`, with the
    /// derivatives of the components taken by five-point differences.
    pub fn field_bracket(&self, g: &GroupElement, side: Side, i: usize, j: usize) -> [f64; 6] {
        const H: f64 = 1e-3;
        let xi = self.field(g, side, i).components;
        let xj = self.field(g, side, j).components;
        let deriv = |dir: usize, f: usize| -> [f64; 6] {
            let at = |s: f64| {
                let mut c = g.coords();
                c[dir] += s;
                let mut gg = GroupElement::from_coords(c);
                gg.theta = c[5];
                self.field(&gg, side, f).components
            };
            let (a, b, c, d) = (at(-2.0 * H), at(-H), at(H), at(2.0 * H));
            std::array::from_fn(|k| (a[k] - 8.0 * b[k] + 8.0 * c[k] - d[k]) / (12.0 * H))
        };
        let mut out = [0.0; 6];
        for dir in 0..6 {
            if xi[dir] == 0.0 && xj[dir] == 0.0 {
                continue;
            }
            let dj = deriv(dir, j);
            let di = deriv(dir, i);
            for k in 0..6 {
                out[k] += xi[dir] * dj[k] - xj[dir] * di[k];
            }
        }
        out
    }

    /// Expand a tangent vector at `g` in the invariant frame.
    pub fn frame_coefficients(&self, g: &GroupElement, side: Side, v: [f64; 6]) -> [f64; 6] {
        let fields = self.invariant_fields(g, side);
        let m = Matrix6::from_fn(|r, c| fields[c].components[r]);
        let sol = m.lu().solve(&Vector6::from(v)).unwrap_or_else(Vector6::zeros);
        std::array::from_fn(|k| sol[k])
    }

    /// Structure constants expected from the Bateman operator algebra.
    ///
    /// Left fields map to operators as `t -> H_B, x -> p_y, y -> p_x,
    /// p_x -> y, p_y -> x, Xi -> -hbar I`; right fields carry the opposite
    /// sign, since they realize the algebra anti-homomorphically.
    pub fn expected_constants(&self, side: Side, i: usize, j: usize) -> [f64; 6] {
        let table = bateman_table(&self.params);
        // operator index in the table for each field direction
        let op_of = |k: usize| match k {
            0 => Some(table.index("H_B")),
            1 => Some(table.index("p_y")),
            2 => Some(table.index("p_x")),
            3 => Some(table.index("y")),
            4 => Some(table.index("x")),
            _ => None,
        };
        let field_of = |op: usize| (0..5).find(|&k| op_of(k) == Some(op)).expect("every operator has a field");
        let s = match side {
            Side::Left => 1.0,
            Side::Right => -1.0,
        };
        let mut out = [0.0; 6];
        let (Some(a), Some(b)) = (op_of(i), op_of(j)) else {
            return out;
        };
        let v = table.bracket(a, b);
        for (op, c) in v.linear.iter().enumerate() {
            out[field_of(op)] += s * c;
        }
        out[5] = -s * v.central / self.params.hbar;
        out
    }

    /// The displayed closed forms of the invariant fields.
    pub fn displayed_field(&self, g: &GroupElement, side: Side, dir: usize) -> [f64; 6] {
        let (m, w, gm, hb) = (self.params.m, self.big, self.params.gamma, self.params.hbar);
        let GroupElement { t, x, y, p_x, p_y, .. } = *g;
        let em = (-0.5 * gm * t).exp();
        let ep = 1.0 / em;
        let (s, c) = (w * t).sin_cos();
        match (side, dir) {
            (Side::Left, 0) => [
                1.0,
                -0.5 * gm * x + p_y / m,
                0.5 * gm * y + p_x / m,
                0.5 * gm * p_x - m * w * w * y,
                -0.5 * gm * p_y - m * w * w * x,
                0.0,
            ],
            (Side::Left, 1) => [0.0, 1.0, 0.0, 0.0, 0.0, -p_x / hb],
            (Side::Left, 2) => [0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
            (Side::Left, 3) => [0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
            // as printed, with d/dx
            (Side::Left, 4) => [0.0, 1.0, 0.0, 0.0, 0.0, y / hb],
            (Side::Right, 0) => [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            (Side::Right, 1) => [0.0, em * c, 0.0, 0.0, -m * w * em * s, 0.0],
            (Side::Right, 2) => [0.0, 0.0, ep * c, -m * w * ep * s, 0.0, (p_y * ep * c + m * w * x * ep * s) / hb],
            (Side::Right, 3) => [0.0, 0.0, ep * s / (m * w), ep * c, 0.0, -(x * ep * c - p_y * ep * s / (m * w)) / hb],
            (Side::Right, 4) => [0.0, em * s / (m * w), 0.0, 0.0, em * c, 0.0],
            (_, _) => [0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldDiscrepancy {
    pub side: Side,
    pub field: String,
    pub max_dev: f64,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupReport {
    pub associativity_max_err: f64,
    pub inverse_max_err: f64,
    pub closure: AlgebraReport,
    pub mixed_bracket_max: f64,
    pub display: Vec<FieldDiscrepancy>,
    pub adjoint_flow_max_err: f64,
}

impl GroupReport {
    /// Group axioms and closure; display discrepancies are informational.
    pub fn passed(&self) -> bool {
        self.associativity_max_err < 1e-10
            && self.inverse_max_err < 1e-12
            && self.closure.all_pass()
            && self.mixed_bracket_max < 1e-6
            && self.adjoint_flow_max_err < 1e-8
    }
}

pub fn associativity_error(grp: &BatemanGroup, triples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..triples {
        let a = GroupElement::random(&mut rng, 1.5);
        let b = GroupElement::random(&mut rng, 1.5);
        let c = GroupElement::random(&mut rng, 1.5);
        let l = grp.compose(&c, &grp.compose(&b, &a));
        let r = grp.compose(&grp.compose(&c, &b), &a);
        worst = worst.max(l.distance(&r));
    }
    worst
}

/// Closure of the right-invariant fields onto the Bateman algebra at random
/// base points, plus the axioms and the display comparison.
pub fn verify_group_closure(params: &PhysParams, seed: u64) -> Result<GroupReport> {
    let grp = BatemanGroup::new(*params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let associativity_max_err = associativity_error(&grp, 1000, seed ^ 0x5eed);

    let mut inverse_max_err: f64 = 0.0;
    for _ in 0..100 {
        let g = GroupElement::random(&mut rng, 1.5);
        let gi = grp.inverse(&g);
        inverse_max_err = inverse_max_err
            .max(grp.compose(&gi, &g).distance(&GroupElement::IDENTITY))
            .max(grp.compose(&g, &gi).distance(&GroupElement::IDENTITY))
            .max(grp.inverse(&gi).distance(&g));
    }

    let bases: Vec<GroupElement> = (0..20).map(|_| GroupElement::random(&mut rng, 1.0)).collect();
    let mut closure = AlgebraReport::new("right-invariant fields vs Bateman algebra", 1e-6);
    for i in 0..6 {
        for j in i + 1..6 {
            let want = grp.expected_constants(Side::Right, i, j);
            let mut dev: f64 = 0.0;
            let mut got = [0.0; 6];
            for g in &bases {
                let br = grp.field_bracket(g, Side::Right, i, j);
                got = grp.frame_coefficients(g, Side::Right, br);
                for k in 0..6 {
                    dev = dev.max((got[k] - want[k]).abs());
                }
            }
            closure.push(
                format!("[R_{}, R_{}]", COORDS[i], COORDS[j]),
                format_combo(&want),
                format_combo(&got),
                dev,
            );
        }
    }

    let mut mixed_bracket_max: f64 = 0.0;
    for g in bases.iter().take(5) {
        let l = grp.invariant_fields(g, Side::Left);
        let r = grp.invariant_fields(g, Side::Right);
        for i in 0..6 {
            for j in 0..6 {
                let b = mixed_bracket(&grp, g, i, j, &l[i].components, &r[j].components);
                mixed_bracket_max = mixed_bracket_max.max(b);
            }
        }
    }

    let mut display = Vec::new();
    for side in [Side::Left, Side::Right] {
        for dir in 0..5 {
            let mut dev: f64 = 0.0;
            for g in &bases {
                let num = grp.field(g, side, dir).components;
                let shown = grp.displayed_field(g, side, dir);
                for k in 0..6 {
                    dev = dev.max((num[k] - shown[k]).abs());
                }
            }
            display.push(FieldDiscrepancy {
                side,
                field: COORDS[dir].to_string(),
                max_dev: dev,
                consistent: dev < 1e-8,
            });
        }
    }

    let mut adjoint_flow_max_err: f64 = 0.0;
    for _ in 0..10 {
        let t = rng.gen_range(-2.0..2.0);
        let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let h = GroupElement::new(0.0, v[0], v[1], v[2], v[3], 0.0);
        let conj = grp.compose(&grp.inverse(&GroupElement::time(t)), &grp.compose(&h, &GroupElement::time(t)));
        let flow = crate::bateman::propagator(params, t) * nalgebra::Vector4::from(v);
        let got = [conj.x, conj.y, conj.p_x, conj.p_y];
        for k in 0..4 {
            adjoint_flow_max_err = adjoint_flow_max_err.max((got[k] - flow[k]).abs());
        }
    }

    Ok(GroupReport { associativity_max_err, inverse_max_err, closure, mixed_bracket_max, display, adjoint_flow_max_err })
}

fn mixed_bracket(grp: &BatemanGroup, g: &GroupElement, i: usize, j: usize, li: &[f64; 6], rj: &[f64; 6]) -> f64 {
    const H: f64 = 1e-3;
    let d = |side: Side, f: usize, dir: usize| -> [f64; 6] {
        let at = |s: f64| {
            let mut c = g.coords();
            c[dir] += s;
            let mut gg = GroupElement::from_coords(c);
            gg.theta = c[5];
            grp.field(&gg, side, f).components
        };
        let (a, b, c, e) = (at(-2.0 * H), at(-H), at(H), at(2.0 * H));
        std::array::from_fn(|k| (a[k] - 8.0 * b[k] + 8.0 * c[k] - e[k]) / (12.0 * H))
    };
    let mut out = [0.0; 6];
    for dir in 0..6 {
        if li[dir] != 0.0 {
            let dr = d(Side::Right, j, dir);
            for k in 0..6 {
                out[k] += li[dir] * dr[k];
            }
        }
        if rj[dir] != 0.0 {
            let dl = d(Side::Left, i, dir);
            for k in 0..6 {
                out[k] -= rj[dir] * dl[k];
            }
        }
    }
    out.iter().fold(0.0, |a, v| a.max(v.abs()))
}

fn format_combo(c: &[f64; 6]) -> String {
    let parts: Vec<String> = c
        .iter()
        .zip(COORDS)
        .filter(|(v, _)| v.abs() > 1e-9)
        .map(|(v, n)| format!("{v:+.6} {n}"))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_time_subgroup() {
        let grp = BatemanGroup::new(PhysParams::default()).unwrap();
        let g = GroupElement::new(0.3, 1.0, -0.4, 0.2, 0.9, 1.1);
        let e = GroupElement::IDENTITY;
        assert!(grp.compose(&e, &g).distance(&g) < 1e-15);
        assert!(grp.compose(&g, &e).distance(&g) < 1e-15);
        let tt = grp.compose(&GroupElement::time(0.4), &GroupElement::time(0.7));
        assert!(tt.distance(&GroupElement::time(1.1)) < 1e-15);
        assert!(grp.inverse(&GroupElement::time(0.4)).distance(&GroupElement::time(-0.4)) < 1e-15);
    }

    #[test]
    fn fixed_triple_is_associative() {
        let grp = BatemanGroup::new(PhysParams::default()).unwrap();
        let g1 = GroupElement::new(0.3, 1.0, 0.0, 0.0, 0.0, 0.0);
        let g2 = GroupElement::new(0.0, 0.0, 0.0, 0.0, 0.5, 0.0);
        let g3 = GroupElement::new(-0.1, 0.0, 2.0, 0.0, 0.0, 0.0);
        let a = grp.compose(&g3, &grp.compose(&g2, &g1));
        let b = grp.compose(&grp.compose(&g3, &g2), &g1);
        assert!(a.distance(&b) < 1e-12);
    }

    #[test]
    fn right_time_field_is_pure() {
        let grp = BatemanGroup::new(PhysParams::default()).unwrap();
        let g = GroupElement::new(0.8, 0.3, -1.0, 0.5, 0.2, 0.0);
        let f = grp.field(&g, Side::Right, 0).components;
        assert!((f[0] - 1.0).abs() < 1e-10);
        assert!(f[1..].iter().all(|c| c.abs() < 1e-10));
    }
}
