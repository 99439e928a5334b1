//! Abstract Lie algebras given by structure constants, with central charges.
//!
//! Brackets are stored in units of `i hbar`:
//! `[e_a, e_b] = i hbar (sum_k c^k_ab e_k + z_ab I)`, so every constant is real.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::AlgebraReport;
use crate::weylalg::WeylOp;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketValue {
    pub linear: Vec<f64>,
    pub central: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LieTable {
    names: Vec<String>,
    /// only i < j is stored
    brackets: BTreeMap<(usize, usize), BracketValue>,
}

/// Ordered pair index `i < j` with the sign needed to get there.
fn oriented(i: usize, j: usize) -> Option<((usize, usize), f64)> {
    match i.cmp(&j) {
        std::cmp::Ordering::Less => Some(((i, j), 1.0)),
        std::cmp::Ordering::Greater => Some(((j, i), -1.0)),
        std::cmp::Ordering::Equal => None,
    }
}

impl LieTable {
    pub fn new(names: &[&str]) -> Self {
        LieTable { names: names.iter().map(|s| s.to_string()).collect(), brackets: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> usize {
        self.names
            .iter()
            .position(|n| n == name)
            .unwrap_or_else(|| panic!("unknown generator {name}"))
    }

    /// Set `[a, b] = i hbar (sum coeff * gen + central I)`.
    pub fn set(&mut self, a: &str, b: &str, combo: &[(&str, f64)], central: f64) -> &mut Self {
        let (i, j) = (self.index(a), self.index(b));
        let mut linear = vec![0.0; self.dim()];
        for (g, c) in combo {
            linear[self.index(g)] += c;
        }
        self.set_idx(i, j, linear, central);
        self
    }

    pub fn set_idx(&mut self, i: usize, j: usize, linear: Vec<f64>, central: f64) {
        let ((a, b), s) = oriented(i, j).expect("bracket of a generator with itself is zero");
        let v = BracketValue { linear: linear.iter().map(|c| c * s).collect(), central: central * s };
        if v.linear.iter().all(|c| *c == 0.0) && v.central == 0.0 {
            self.brackets.remove(&(a, b));
        } else {
            self.brackets.insert((a, b), v);
        }
    }

    pub fn bracket(&self, i: usize, j: usize) -> BracketValue {
        let zero = BracketValue { linear: vec![0.0; self.dim()], central: 0.0 };
        match oriented(i, j) {
            None => zero,
            Some((key, s)) => match self.brackets.get(&key) {
                None => zero,
                Some(v) => BracketValue { linear: v.linear.iter().map(|c| c * s).collect(), central: v.central * s },
            },
        }
    }

    pub fn central(&self, a: &str, b: &str) -> f64 {
        self.bracket(self.index(a), self.index(b)).central
    }

    pub fn with_central(&self, charges: &[((usize, usize), f64)]) -> Self {
        let mut t = self.clone();
        for &((i, j), z) in charges {
            let v = t.bracket(i, j);
            t.set_idx(i, j, v.linear, z);
        }
        t
    }

    pub fn without_central(&self) -> Self {
        let mut t = self.clone();
        for v in t.brackets.values_mut() {
            v.central = 0.0;
        }
        t.brackets.retain(|_, v| v.linear.iter().any(|c| *c != 0.0));
        t
    }

    /// Largest component of the cyclic Jacobi sum over all triples, central part included.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let mut lin = vec![0.0; n];
                    let mut cen = 0.0;
                    for (p, q, r) in [(a, b, c), (b, c, a), (c, a, b)] {
                        let pq = self.bracket(p, q);
                        for (k, s) in pq.linear.iter().enumerate() {
                            if *s == 0.0 {
                                continue;
                            }
                            let kr = self.bracket(k, r);
                            for l in 0..n {
                                lin[l] += s * kr.linear[l];
                            }
                            cen += s * kr.central;
                        }
                    }
                    worst = lin.iter().fold(worst, |w, v| w.max(v.abs())).max(cen.abs());
                }
            }
        }
        worst
    }

    /// Same algebra in a new basis; `rows[i]` gives new generator i in the old basis.
    pub fn change_basis(&self, new_names: &[&str], rows: &[Vec<f64>]) -> Result<Self> {
        let n = self.dim();
        let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        let inv = m.clone().try_inverse().ok_or_else(|| Error::DegenerateParams("singular basis change".into()))?;
        let mut out = LieTable::new(new_names);
        for a in 0..n {
            for b in a + 1..n {
                let mut v = DVector::zeros(n);
                let mut cen = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        let w = m[(a, i)] * m[(b, j)];
                        if w == 0.0 {
                            continue;
                        }
                        let br = self.bracket(i, j);
                        for k in 0..n {
                            v[k] += w * br.linear[k];
                        }
                        cen += w * br.central;
                    }
                }
                let coeffs = inv.transpose() * v;
                let linear = coeffs.iter().map(|c| if c.abs() < 1e-14 { 0.0 } else { *c }).collect();
                out.set_idx(a, b, linear, cen);
            }
        }
        Ok(out)
    }

    /// Quotient by the span of `ideal`; fails if that span is not an ideal
    /// or carries central charge.
    pub fn quotient(&self, ideal: &[&str]) -> Result<Self> {
        let drop: Vec<usize> = ideal.iter().map(|g| self.index(g)).collect();
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for &g in &drop {
            for e in 0..n {
                let v = self.bracket(g, e);
                for k in 0..n {
                    if !drop.contains(&k) {
                        worst = worst.max(v.linear[k].abs());
                    }
                }
                worst = worst.max(v.central.abs());
            }
        }
        if worst > 1e-12 {
            return Err(Error::InconsistentTable { residual: worst });
        }
        let keep: Vec<usize> = (0..n).filter(|i| !drop.contains(i)).collect();
        let names: Vec<&str> = keep.iter().map(|&i| self.names[i].as_str()).collect();
        let mut out = LieTable::new(&names);
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate().skip(a + 1) {
                let v = self.bracket(i, j);
                out.set_idx(a, b, keep.iter().map(|&k| v.linear[k]).collect(), v.central);
            }
        }
        Ok(out)
    }

    pub fn format_value(&self, v: &BracketValue) -> String {
        let mut parts: Vec<String> = v
            .linear
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(k, c)| format!("{c:+.6} {}", self.names[k]))
            .collect();
        if v.central != 0.0 {
            parts.push(format!("{:+.6} I", v.central));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            format!("i hbar ({})", parts.join(" "))
        }
    }

    /// Entry-by-entry comparison against `other`, matched by generator name.
    pub fn compare(&self, other: &LieTable, title: &str, tol: f64) -> AlgebraReport {
        let mut rep = AlgebraReport::new(title, tol);
        let n = self.dim();
        let map: Vec<usize> = self.names.iter().map(|s| other.index(s)).collect();
        for a in 0..n {
            for b in a + 1..n {
                let mine = self.bracket(a, b);
                let theirs = other.bracket(map[a], map[b]);
                let theirs_here = BracketValue {
                    linear: (0..n).map(|k| theirs.linear[map[k]]).collect(),
                    central: theirs.central,
                };
                let dev = mine
                    .linear
                    .iter()
                    .zip(&theirs_here.linear)
                    .map(|(x, y)| (x - y).abs())
                    .fold((mine.central - theirs_here.central).abs(), f64::max);
                rep.push(
                    format!("[{}, {}]", self.names[a], self.names[b]),
                    other.format_value(&theirs_here),
                    self.format_value(&mine),
                    dev,
                );
            }
        }
        rep
    }
}

/// Check that concrete operators realize `table`: every `[A, B]` computed in the
/// Weyl engine must equal `i hbar (sum c^k op_k + z I)`.
pub fn verify_realization(table: &LieTable, ops: &[(&str, &WeylOp)], hbar: f64, tol: f64, title: &str) -> AlgebraReport {
    let mut rep = AlgebraReport::new(title, tol);
    let ih = num_complex::Complex64::new(0.0, hbar);
    let idx: Vec<usize> = ops.iter().map(|(n, _)| table.index(n)).collect();
    for a in 0..ops.len() {
        for b in a + 1..ops.len() {
            let got = ops[a].1.commutator(ops[b].1);
            let v = table.bracket(idx[a], idx[b]);
            let mut expected = WeylOp::scalar(num_complex::Complex64::new(v.central, 0.0));
            for (k, c) in v.linear.iter().enumerate() {
                if *c == 0.0 {
                    continue;
                }
                let op = ops
                    .iter()
                    .find(|(n, _)| table.index(n) == k)
                    .unwrap_or_else(|| panic!("no operator for generator {}", table.names()[k]))
                    .1;
                expected = &expected + &op.scale_real(*c);
            }
            let expected = expected.scale(ih);
            rep.push(format!("[{}, {}]", ops[a].0, ops[b].0), table.format_value(&v), got.to_string(), got.deviation(&expected));
        }
    }
    rep
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtensionFamily {
    /// brackets allowed to carry a charge
    pub pairs: Vec<(usize, usize)>,
    pub pair_names: Vec<String>,
    pub particular: Vec<f64>,
    /// null directions of the normalized system, one per free parameter
    pub directions: Vec<Vec<f64>>,
    /// dimension of the full 2-cocycle space (all brackets, unnormalized)
    pub cocycle_dim: usize,
    /// dimension of the coboundaries `z_ab = sum_k c^k_ab f_k`
    pub coboundary_dim: usize,
    pub residual: f64,
}

impl ExtensionFamily {
    pub fn dimension(&self) -> usize {
        self.directions.len()
    }

    pub fn cohomology_dim(&self) -> usize {
        self.cocycle_dim - self.coboundary_dim
    }

    /// Member of a one-parameter family with the given charge on `pair`.
    pub fn specialize(&self, pair: (usize, usize), value: f64) -> Result<Vec<((usize, usize), f64)>> {
        let idx = self
            .pairs
            .iter()
            .position(|p| *p == pair)
            .ok_or_else(|| Error::DegenerateParams(format!("pair {pair:?} is not in the support")))?;
        if self.dimension() != 1 {
            return Err(Error::DegenerateParams(format!("family has dimension {}, not 1", self.dimension())));
        }
        let d = &self.directions[0];
        if d[idx].abs() < 1e-12 {
            return Err(Error::DegenerateParams("charge on pair is fixed across the family".into()));
        }
        let s = (value - self.particular[idx]) / d[idx];
        Ok(self
            .pairs
            .iter()
            .enumerate()
            .map(|(u, p)| {
                let z = self.particular[u] + s * d[u];
                (*p, if z.abs() < 1e-13 { 0.0 } else { z })
            })
            .collect())
    }
}

fn nullspace(m: &DMatrix<f64>, tol: f64) -> (usize, Vec<DVector<f64>>) {
    let cols = m.ncols();
    // pad so the SVD returns a full right basis
    let rows = m.nrows().max(cols);
    let mut a = DMatrix::zeros(rows, cols);
    a.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.max().max(1.0);
    let mut rank = 0;
    let mut null = Vec::new();
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s > tol * smax {
            rank += 1;
        } else {
            null.push(vt.row(i).transpose());
        }
    }
    (rank, null)
}

/// Rows of the cocycle condition `sum_cyc sum_k c^k_ab z_kc = 0`, one per triple,
/// over the unknowns `pairs`.
fn cocycle_rows(table: &LieTable, pairs: &[(usize, usize)]) -> DMatrix<f64> {
    let n = table.dim();
    let col: BTreeMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(u, p)| (*p, u)).collect();
    let mut rows = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let mut r = vec![0.0; pairs.len()];
                for (p, q, s) in [(a, b, c), (b, c, a), (c, a, b)] {
                    let pq = table.bracket(p, q);
                    for (k, coef) in pq.linear.iter().enumerate() {
                        if *coef == 0.0 {
                            continue;
                        }
                        if let Some((key, sg)) = oriented(k, s) {
                            if let Some(&u) = col.get(&key) {
                                r[u] += coef * sg;
                            }
                        }
                    }
                }
                rows.push(r);
            }
        }
    }
    DMatrix::from_fn(rows.len(), pairs.len(), |i, j| rows[i][j])
}

/// Central charges allowed by Jacobi on the given support, with `[norm] = value`.
///
/// `support = None` means every bracket may carry a charge (then coboundaries
/// appear as extra free directions).
pub fn solve_central_extensions(
    table: &LieTable,
    norm: (&str, &str, f64),
    support: Option<&[(&str, &str)]>,
) -> Result<ExtensionFamily> {
    let linear = table.without_central();
    let n = linear.dim();
    let all: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let pairs: Vec<(usize, usize)> = match support {
        None => all.clone(),
        Some(s) => s
            .iter()
            .map(|(a, b)| oriented(linear.index(a), linear.index(b)).expect("distinct generators").0)
            .collect(),
    };
    // support given as (b, a) means the charge is read with that orientation
    let signs: Vec<f64> = match support {
        None => vec![1.0; pairs.len()],
        Some(s) => s
            .iter()
            .map(|(a, b)| oriented(linear.index(a), linear.index(b)).unwrap().1)
            .collect(),
    };

    let full = cocycle_rows(&linear, &all);
    let (rank_full, _) = nullspace(&full, 1e-10);
    let cocycle_dim = all.len() - rank_full;
    let cob = DMatrix::from_fn(all.len(), n, |u, k| linear.bracket(all[u].0, all[u].1).linear[k]);
    let (coboundary_dim, _) = nullspace(&cob, 1e-10);

    let mut m = cocycle_rows(&linear, &pairs);
    for (u, s) in signs.iter().enumerate() {
        m.column_mut(u).scale_mut(*s);
    }
    let (ni, nj) = (linear.index(norm.0), linear.index(norm.1));
    let (norm_key, norm_sign) = oriented(ni, nj).expect("distinct generators");
    let norm_col = pairs
        .iter()
        .position(|p| *p == norm_key)
        .ok_or_else(|| Error::DegenerateParams("normalization bracket is outside the support".into()))?;

    let mut aug = DMatrix::zeros(m.nrows() + 1, m.ncols());
    aug.view_mut((0, 0), (m.nrows(), m.ncols())).copy_from(&m);
    aug[(m.nrows(), norm_col)] = norm_sign * signs[norm_col];
    let mut rhs = DVector::zeros(m.nrows() + 1);
    rhs[m.nrows()] = norm.2;

    let svd = aug.clone().svd(true, true);
    let sol = svd
        .solve(&rhs, 1e-10 * svd.singular_values.max().max(1.0))
        .map_err(|e| Error::DegenerateParams(e.to_string()))?;
    let residual = (&aug * &sol - &rhs).amax();
    if residual > 1e-9 {
        return Err(Error::InconsistentTable { residual });
    }
    let (_, null) = nullspace(&aug, 1e-10);

    // unknowns already carry the caller's orientation
    let orient = |v: &DVector<f64>| v.iter().copied().collect::<Vec<f64>>();
    let pair_names = pairs
        .iter()
        .zip(&signs)
        .map(|(&(a, b), s)| {
            let (a, b) = if *s > 0.0 { (a, b) } else { (b, a) };
            format!("[{}, {}]", linear.names[a], linear.names[b])
        })
        .collect();
    let particular = orient(&sol);
    let directions = null.iter().map(orient).collect();
    // pairs keep the caller's orientation too
    let pairs = pairs
        .iter()
        .zip(&signs)
        .map(|(&(a, b), s)| if *s > 0.0 { (a, b) } else { (b, a) })
        .collect();
    Ok(ExtensionFamily { pairs, pair_names, particular, directions, cocycle_dim, coboundary_dim, residual })
}
