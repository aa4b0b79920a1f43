//! `Ext_{BP_*BP}(BP_*, M)` at p = 2 for `M = BP_*` and `M = BP_*/2` via the cobar complex.

pub mod complex;
pub mod poly;
pub mod presentation;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use complex::{CobarComplex, SparseMatrix};
pub use presentation::{build_presentation, generator_degree, BPPresentation};

use crate::group::{GroupPresentation, Order, Summand};
use crate::linalg::{self, F2Matrix, IntMatrix, PadicError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CobarError {
    #[error("degree cap {max_degree} is below |v_{n}|")]
    CapTooSmall { n: usize, max_degree: i64 },
    #[error("differential leaves the normalized complex at s = {s}, t = {t}")]
    NotNormalized { s: usize, t: i64 },
    #[error("d^2 != 0 at s = {s}, t = {t}")]
    NotAComplex { s: usize, t: i64 },
    #[error(transparent)]
    Precision(#[from] PadicError),
    #[error("requested degree lies outside the computed range: {0}")]
    OutOfRange(String),
    #[error("internal invariant failed: {0}")]
    Internal(&'static str),
}

/// Coefficient comodule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ExtCoeffs {
    /// `BP_*`, reported 2-adically.
    Z,
    /// `BP_*/2`.
    F2,
}

impl ExtCoeffs {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "Z" | "Z2" | "Z_(2)" => Some(ExtCoeffs::Z),
            "F2" | "Z/2" => Some(ExtCoeffs::F2),
            _ => None,
        }
    }
}

impl fmt::Display for ExtCoeffs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExtCoeffs::Z => "Z",
            ExtCoeffs::F2 => "F2",
        })
    }
}

/// Whether the truncation at `v_n, t_n` agrees with full `BP` through internal degree `max_degree`.
pub fn stable_range(n: usize, _s_max: usize, max_degree: i64) -> bool {
    generator_degree(n + 1) > max_degree
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtEntry {
    pub s: usize,
    pub t: i64,
    pub group: GroupPresentation,
}

/// `Ext^{s,t}` for `0 <= s <= s_max`, `0 <= t <= max_degree`; odd `t` vanish and are not stored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtTable {
    pub n: usize,
    pub s_max: usize,
    pub max_degree: i64,
    pub coeffs: ExtCoeffs,
    pub stable: bool,
    pub entries: Vec<ExtEntry>,
    /// Ranks of `C^s_t` for reference, keyed `"s,t"`.
    pub dimensions: BTreeMap<String, usize>,
}

impl ExtTable {
    pub fn get(&self, s: usize, t: i64) -> Result<GroupPresentation, CobarError> {
        if t < 0 || t % 2 != 0 {
            return Ok(GroupPresentation::zero());
        }
        // C^s_t = 0 once 2s > t.
        if 2 * s as i64 > t {
            return Ok(GroupPresentation::zero());
        }
        if s > self.s_max || t > self.max_degree {
            return Err(CobarError::OutOfRange(format!("Ext^({s},{t}) with s_max = {}, D = {}", self.s_max, self.max_degree)));
        }
        Ok(self.entries.iter().find(|e| e.s == s && e.t == t).map(|e| e.group.clone()).unwrap_or_default())
    }

    /// Whether every `Ext^{s,t}` with `t <= max_degree` is determined (all `s` with `2s <= t` computed).
    pub fn complete(&self) -> bool {
        2 * self.s_max as i64 >= self.max_degree
    }

    pub fn dimension(&self, s: usize, t: i64) -> usize {
        self.dimensions.get(&format!("{s},{t}")).copied().unwrap_or(0)
    }
}

fn label(s: usize, t: i64, k: usize) -> String {
    format!("x{s}_{t}.{k}")
}

fn f2_matrix(m: &SparseMatrix) -> F2Matrix {
    let mut out = F2Matrix::zeros(m.rows, m.cols);
    for (c, col) in m.columns.iter().enumerate() {
        for &(r, x) in col {
            if x.rem_euclid(2) == 1 {
                out.set(r, c, true);
            }
        }
    }
    out
}

struct DegreeResult {
    t: i64,
    groups: Vec<(usize, GroupPresentation)>,
    dims: Vec<(usize, usize)>,
}

fn ext_in_degree(cx: &CobarComplex, s_max: usize, t: i64, coeffs: ExtCoeffs, check_d2: bool) -> Result<DegreeResult, CobarError> {
    let top = s_max.min((t / 2) as usize);
    // d^s: C^s -> C^{s+1} for s <= top.
    let mut ds = Vec::with_capacity(top + 1);
    for s in 0..=top {
        ds.push(cx.differential(s, t)?);
    }
    if check_d2 {
        for s in 1..ds.len() {
            if !ds[s].compose(&ds[s - 1]).is_zero() {
                return Err(CobarError::NotAComplex { s: s - 1, t });
            }
        }
    }
    let dims: Vec<(usize, usize)> = (0..=top).map(|s| (s, ds[s].cols)).collect();
    let mut groups = Vec::new();
    match coeffs {
        ExtCoeffs::F2 => {
            let ranks: Vec<usize> = ds.iter().map(|d| linalg::f2_rank(&f2_matrix(d))).collect();
            for s in 0..=top {
                let rank_in = if s == 0 { 0 } else { ranks[s - 1] };
                let dim = ds[s].cols - ranks[s] - rank_in;
                let g = GroupPresentation::new((0..dim).map(|k| Summand::new(Order::Cyclic(2), label(s, t, k))).collect());
                groups.push((s, g));
            }
        }
        ExtCoeffs::Z => {
            let divisors: Vec<Vec<u32>> =
                ds.iter().map(|d| linalg::two_adic_divisors(d.rows, d.cols, &d.dense_row_major())).collect::<Result<_, _>>()?;
            for s in 0..=top {
                let rank_out = divisors[s].len();
                let incoming: &[u32] = if s == 0 { &[] } else { &divisors[s - 1] };
                let free = ds[s].cols - rank_out - incoming.len();
                let mut orders = vec![Order::Z2Adic; free];
                orders.extend(incoming.iter().filter(|&&v| v > 0).map(|&v| Order::two_power(v)));
                orders.sort();
                let g = GroupPresentation::new(orders.into_iter().enumerate().map(|(k, o)| Summand::new(o, label(s, t, k))).collect());
                groups.push((s, g));
            }
        }
    }
    Ok(DegreeResult { t, groups, dims })
}

/// Computes `Ext^{s,t}` for `s <= s_max`, `0 <= t <= max_degree` on the truncation at `v_n`.
pub fn compute_ext(n: usize, s_max: usize, max_degree: i64, coeffs: ExtCoeffs) -> Result<ExtTable, CobarError> {
    compute_ext_checked(n, s_max, max_degree, coeffs, false)
}

/// As [`compute_ext`], optionally verifying `d^2 = 0` in every degree.
pub fn compute_ext_checked(n: usize, s_max: usize, max_degree: i64, coeffs: ExtCoeffs, check_d2: bool) -> Result<ExtTable, CobarError> {
    let pres = build_presentation(n, max_degree)?;
    let cx = CobarComplex::new(pres, s_max + 1);
    let degrees: Vec<i64> = (0..=max_degree).step_by(2).collect();
    let results: Vec<DegreeResult> =
        degrees.par_iter().map(|&t| ext_in_degree(&cx, s_max, t, coeffs, check_d2)).collect::<Result<_, _>>()?;
    let mut entries = Vec::new();
    let mut dimensions = BTreeMap::new();
    for r in results {
        for (s, g) in r.groups {
            if !g.is_zero() {
                entries.push(ExtEntry { s, t: r.t, group: g });
            }
        }
        for (s, d) in r.dims {
            dimensions.insert(format!("{s},{}", r.t), d);
        }
    }
    entries.sort_by_key(|e| (e.s, e.t));
    Ok(ExtTable { n, s_max, max_degree, coeffs, stable: stable_range(n, s_max, max_degree), entries, dimensions })
}

/// A class of `Ext^{s,t}` with an explicit cocycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cocycle {
    pub order: Order,
    pub cocycle: String,
}

/// Cocycle representatives by exact lattice computations; intended for small degrees.
pub fn ext_cocycles(cx: &CobarComplex, s: usize, t: i64, coeffs: ExtCoeffs) -> Result<Vec<Cocycle>, CobarError> {
    if s + 1 > cx.max_s() {
        return Err(CobarError::OutOfRange(format!("cocycles in s = {s} need a larger complex")));
    }
    let basis = cx.basis(s, t);
    let d_out = cx.differential(s, t)?;
    let d_in = if s == 0 { SparseMatrix { rows: basis.len(), cols: 0, columns: vec![] } } else { cx.differential(s - 1, t)? };
    let render = |coeffs: &[(i64, usize)]| -> String {
        let parts: Vec<String> = coeffs
            .iter()
            .map(|&(c, k)| {
                let b = cx.display_basis(s, &basis[k]);
                if c == 1 {
                    b
                } else {
                    format!("{c} {b}")
                }
            })
            .collect();
        parts.join(" + ")
    };
    let mut out = Vec::new();
    match coeffs {
        ExtCoeffs::F2 => {
            let reps = linalg::f2_homology_basis(&f2_matrix(&d_in), &f2_matrix(&d_out));
            for r in 0..reps.rows() {
                let terms: Vec<(i64, usize)> = (0..reps.cols()).filter(|&c| reps.get(r, c)).map(|c| (1, c)).collect();
                out.push(Cocycle { order: Order::Cyclic(2), cocycle: render(&terms) });
            }
        }
        ExtCoeffs::Z => {
            let to_int = |m: &SparseMatrix| {
                let mut im = IntMatrix::zeros(m.rows, m.cols);
                for (c, col) in m.columns.iter().enumerate() {
                    for &(r, x) in col {
                        im[(r, c)] = BigInt::from(x);
                    }
                }
                im
            };
            let summands = linalg::homology_summands(&to_int(&d_in), &to_int(&d_out)).map_err(|_| CobarError::NotAComplex { s, t })?;
            for q in summands {
                let Some(order) = linalg::two_local_order(&q.order) else { continue };
                let mut terms: Vec<(i64, usize)> = q
                    .generator
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| x.sign() != num_bigint::Sign::NoSign)
                    .map(|(k, x)| (i64::try_from(x).unwrap_or(i64::MAX), k))
                    .collect();
                if terms.first().is_some_and(|(c, _)| *c < 0) {
                    terms.iter_mut().for_each(|(c, _)| *c = -*c);
                }
                out.push(Cocycle { order, cocycle: render(&terms) });
            }
        }
    }
    out.sort_by(|a, b| a.order.cmp(&b.order).then(a.cocycle.cmp(&b.cocycle)));
    Ok(out)
}

/// Checks `dim Ext^{s,t}(BP_*/2) = #Ext^{s,t}(BP_*) + #tors Ext^{s+1,t}(BP_*)` for `s < s_max`.
///
/// Returns the degrees where the balance fails.
pub fn les_balance(z: &ExtTable, f2: &ExtTable) -> Vec<(usize, i64)> {
    let mut bad = Vec::new();
    let s_top = z.s_max.min(f2.s_max);
    for s in 0..s_top {
        for t in (0..=z.max_degree.min(f2.max_degree)).step_by(2) {
            let lhs = f2.get(s, t).map(|g| g.len()).unwrap_or(0);
            let a = z.get(s, t).map(|g| g.len()).unwrap_or(0);
            let b = z.get(s + 1, t).map(|g| g.torsion_count()).unwrap_or(0);
            if lhs != a + b {
                bad.push((s, t));
            }
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degree_values() {
        let z = compute_ext_checked(2, 3, 10, ExtCoeffs::Z, true).unwrap();
        assert_eq!(z.get(0, 0).unwrap().shape(), vec![Order::Z2Adic]);
        assert_eq!(z.get(1, 2).unwrap().shape(), vec![Order::Cyclic(2)]);
        assert_eq!(z.get(1, 4).unwrap().shape(), vec![Order::Cyclic(4)]);
        assert_eq!(z.get(2, 4).unwrap().shape(), vec![Order::Cyclic(2)]);
        assert!(z.get(0, 2).unwrap().is_zero());
        let f = compute_ext(2, 3, 10, ExtCoeffs::F2).unwrap();
        for t in (0..=10).step_by(2) {
            assert_eq!(f.get(0, t).unwrap().len(), 1, "v1^(t/2) at t = {t}");
        }
        assert!(les_balance(&z, &f).is_empty());
    }

    #[test]
    fn cocycle_of_alpha_one() {
        let cx = CobarComplex::new(build_presentation(1, 4).unwrap(), 3);
        let c = ext_cocycles(&cx, 1, 2, ExtCoeffs::Z).unwrap();
        assert_eq!(c, vec![Cocycle { order: Order::Cyclic(2), cocycle: "[t1]".into() }]);
    }
}
