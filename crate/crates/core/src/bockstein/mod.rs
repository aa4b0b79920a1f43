//! A `ta`-Bockstein spectral sequence engine.
//!
//! Classes are `Cta`-level generators `x` of tri-degree `c`; `ta^k x` sits in total degree
//! `c - (0,0,k)` and filtration `k`. A differential `d_r(x) = y` contributes `ta^r y` to the total
//! differential `D`, so `deg y = deg x + (-1, 0, r)`. `F2` classes carry the relation `2x = 0`.
//! Pages are subquotients of the truncated total complex computed by exact lattice arithmetic.

pub mod input;

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cta::DegreeBox;
use crate::grading::TriDegree;
use crate::group::{GroupPresentation, Order, Summand};
use crate::linalg::{integer_kernel, lattice_quotient, two_local_order, IntMatrix, Lattice};
use crate::point::ta_label;

pub use input::{kq_dataset, BocksteinInput, DifferentialSpec, GeneratorSpec, KQ_DATASET_JSON, SCHEMA_JSON};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BocksteinError {
    #[error("d_{page}({source_label}) has a term `{term}` of degree {found}, expected {expected}")]
    InhomogeneousDifferential { page: u32, source_label: String, term: String, found: TriDegree, expected: TriDegree },
    #[error("Leibniz closure is inconsistent: {0}")]
    LeibnizContradiction(String),
    #[error("F2 class `{source_label}` maps nontrivially to the Z2 class `{target}`")]
    TorsionMismatch { source_label: String, target: String },
    #[error("Z2 generator `{0}` has odd p; graded signs on Z2 classes are unsupported")]
    UnsupportedSign(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("cannot parse `{0}`")]
    Parse(String),
    #[error("page index must be at least 1, got {0}")]
    BadPage(u32),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("box enumeration exceeds {0} monomials")]
    BoxTooLarge(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Torsion {
    F2,
    Z2,
}

/// A `Cta`-level basis class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Class {
    pub label: String,
    pub degree: TriDegree,
    pub torsion: Torsion,
}

/// One matrix entry of `d_r`: `d_r(source) ∋ coeff * target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialEntry {
    pub page: u32,
    pub source: usize,
    pub target: usize,
    pub coeff: i64,
}

/// Closed `Cta`-level data: a basis in a box and all differential entries between basis classes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClosedComplex {
    pub bounds: DegreeBox,
    pub classes: Vec<Class>,
    pub entries: Vec<DifferentialEntry>,
}

impl ClosedComplex {
    /// Validates the degree contract and the torsion compatibility of every entry.
    pub fn new(bounds: DegreeBox, classes: Vec<Class>, entries: Vec<DifferentialEntry>) -> Result<Self, BocksteinError> {
        let mut seen = HashMap::new();
        for c in &classes {
            if seen.insert(c.label.clone(), ()).is_some() {
                return Err(BocksteinError::DuplicateLabel(c.label.clone()));
            }
        }
        let mut entries: Vec<DifferentialEntry> = entries.into_iter().filter(|e| e.coeff != 0).collect();
        for e in &mut entries {
            if e.page == 0 {
                return Err(BocksteinError::BadPage(0));
            }
            let (s, t) = (&classes[e.source], &classes[e.target]);
            let expected = s.degree + TriDegree::new(-1, 0, e.page as i64);
            if t.degree != expected {
                return Err(BocksteinError::InhomogeneousDifferential {
                    page: e.page,
                    source_label: s.label.clone(),
                    term: t.label.clone(),
                    found: t.degree,
                    expected,
                });
            }
            if t.torsion == Torsion::F2 {
                e.coeff = e.coeff.rem_euclid(2);
            } else if s.torsion == Torsion::F2 && e.coeff != 0 {
                return Err(BocksteinError::TorsionMismatch { source_label: s.label.clone(), target: t.label.clone() });
            }
        }
        entries.retain(|e| e.coeff != 0);
        entries.sort_by_key(|e| (e.source, e.page, e.target));
        Ok(ClosedComplex { bounds, classes, entries })
    }

    /// The degree contract, re-checked from the stored entries.
    pub fn degree_contract_holds(&self) -> bool {
        self.entries.iter().all(|e| self.classes[e.target].degree == self.classes[e.source].degree + TriDegree::new(-1, 0, e.page as i64))
    }

    pub fn max_page(&self) -> u32 {
        self.entries.iter().map(|e| e.page).max().unwrap_or(0)
    }
}

/// `ta^k x` for a class index and filtration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct TotalBasis {
    class: usize,
    k: i64,
}

/// The truncated total complex with cached lattices.
pub struct TotalComplex<'a> {
    cx: &'a ClosedComplex,
    by_degree: HashMap<TriDegree, Vec<usize>>,
    bases: Mutex<HashMap<TriDegree, std::sync::Arc<Vec<TotalBasis>>>>,
    w_max: i64,
}

impl<'a> TotalComplex<'a> {
    pub fn new(cx: &'a ClosedComplex) -> Self {
        let mut by_degree: HashMap<TriDegree, Vec<usize>> = HashMap::new();
        for (i, c) in cx.classes.iter().enumerate() {
            by_degree.entry(c.degree).or_default().push(i);
        }
        TotalComplex { cx, by_degree, bases: Mutex::new(HashMap::new()), w_max: cx.bounds.w.1 }
    }

    fn basis(&self, t: TriDegree) -> std::sync::Arc<Vec<TotalBasis>> {
        if let Some(b) = self.bases.lock().unwrap().get(&t) {
            return b.clone();
        }
        let mut out = Vec::new();
        for k in 0..=(self.w_max - t.w).max(-1) {
            if let Some(cls) = self.by_degree.get(&(t + TriDegree::new(0, 0, k))) {
                out.extend(cls.iter().map(|&class| TotalBasis { class, k }));
            }
        }
        let out = std::sync::Arc::new(out);
        self.bases.lock().unwrap().insert(t, out.clone());
        out
    }

    fn is_torsion(&self, b: &TotalBasis) -> bool {
        self.cx.classes[b.class].torsion == Torsion::F2
    }

    /// `D: C_t -> C_{t - (1,0,0)}`.
    fn d_matrix(&self, t: TriDegree) -> IntMatrix {
        let src = self.basis(t);
        let dst = self.basis(t - TriDegree::new(1, 0, 0));
        let pos: HashMap<(usize, i64), usize> = dst.iter().enumerate().map(|(i, b)| ((b.class, b.k), i)).collect();
        let mut m = IntMatrix::zeros(dst.len(), src.len());
        for (j, b) in src.iter().enumerate() {
            for e in self.cx.entries.iter().filter(|e| e.source == b.class) {
                if let Some(&i) = pos.get(&(e.target, b.k + e.page as i64)) {
                    m[(i, j)] += BigInt::from(e.coeff);
                }
            }
        }
        m
    }

    /// `R ∩ F^k` in `C_t`: `2 ta^j x` for `F2` classes with `j >= k`.
    fn relations(&self, t: TriDegree, k: i64) -> Lattice {
        let b = self.basis(t);
        let gens: Vec<Vec<BigInt>> = b
            .iter()
            .enumerate()
            .filter(|(_, e)| e.k >= k && self.is_torsion(e))
            .map(|(i, _)| {
                let mut v = vec![BigInt::zero(); b.len()];
                v[i] = BigInt::from(2);
                v
            })
            .collect();
        Lattice::span_vectors(b.len(), &gens)
    }

    /// `{x in F^max(j,0) : D x in F^{j+r} + R}`.
    fn z_lattice(&self, t: TriDegree, r: i64, j: i64) -> Lattice {
        let src = self.basis(t);
        let dst = self.basis(t - TriDegree::new(1, 0, 0));
        let lo = j.max(0);
        let cols: Vec<usize> = (0..src.len()).filter(|&i| src[i].k >= lo).collect();
        if cols.is_empty() {
            return Lattice::zero(src.len());
        }
        let d = self.d_matrix(t).select_columns(&cols);
        let rows: Vec<usize> = (0..dst.len()).filter(|&i| dst[i].k < j + r).collect();
        let tors: Vec<usize> = rows.iter().copied().filter(|&i| self.is_torsion(&dst[i])).collect();
        // [D_rows | 2 e_i for torsion rows] (x, y) = 0.
        let a = IntMatrix::from_fn(rows.len(), cols.len() + tors.len(), |ri, c| {
            if c < cols.len() {
                d[(rows[ri], c)].clone()
            } else if rows[ri] == tors[c - cols.len()] {
                BigInt::from(2)
            } else {
                BigInt::zero()
            }
        });
        let ker = integer_kernel(&a);
        let gens: Vec<Vec<BigInt>> = (0..ker.cols())
            .map(|c| {
                let mut v = vec![BigInt::zero(); src.len()];
                for (ci, &col) in cols.iter().enumerate() {
                    v[col] = ker[(ci, c)].clone();
                }
                v
            })
            .collect();
        Lattice::span_vectors(src.len(), &gens).sum(&self.relations(t, lo))
    }

    /// `D` applied to a lattice of `C_{t + (1,0,0)}`, pushed into `F^k` of `C_t` along `R`.
    fn boundary_into(&self, t: TriDegree, source: &Lattice, k: i64) -> Lattice {
        let up = t + TriDegree::new(1, 0, 0);
        let dst = self.basis(t);
        let d = self.d_matrix(up);
        let img = d.mul(source.basis());
        let gens: Vec<Vec<BigInt>> = (0..img.cols())
            .map(|c| {
                (0..dst.len())
                    .map(|i| {
                        let x = img[(i, c)].clone();
                        if dst[i].k < k {
                            debug_assert!(x.is_zero() || (self.is_torsion(&dst[i]) && x.is_even()));
                            BigInt::zero()
                        } else {
                            x
                        }
                    })
                    .collect()
            })
            .collect();
        Lattice::span_vectors(dst.len(), &gens)
    }

    /// `E_r^k` at total degree `t`, `r >= 1`.
    pub fn page_cell(&self, t: TriDegree, r: i64, k: i64) -> Vec<(Order, Vec<BigInt>)> {
        let b = self.basis(t);
        if !b.iter().any(|e| e.k >= k) {
            return Vec::new();
        }
        let outer = self.z_lattice(t, r, k);
        let up = t + TriDegree::new(1, 0, 0);
        let src_z = self.z_lattice(up, r - 1, k - r + 1);
        let inner = self.z_lattice(t, r - 1, k + 1).sum(&self.boundary_into(t, &src_z, k)).sum(&self.relations(t, k));
        quotient_summands(&outer, &inner)
    }

    /// A page index past which `E_r^k` at total degree `t` no longer changes.
    fn infinite_page(&self, t: TriDegree, k: i64) -> i64 {
        (self.w_max - t.w).max(0) + k + 2
    }

    /// `E_r^k` at `t`, with `None` for `E_∞`.
    pub fn page_cell_at(&self, t: TriDegree, r: Option<i64>, k: i64) -> Vec<(Order, Vec<BigInt>)> {
        self.page_cell(t, r.unwrap_or_else(|| self.infinite_page(t, k)), k)
    }

    /// `gr^k H_t` of the total complex, computed directly.
    pub fn graded_homology(&self, t: TriDegree, k: i64) -> Vec<(Order, Vec<BigInt>)> {
        let n = self.basis(t).len();
        if n == 0 {
            return Vec::new();
        }
        // Past the top filtration of C_{t-1}, the condition reads D x in R.
        let beyond = (self.w_max - t.w).max(0) + 1;
        let cycles = |j: i64| self.z_lattice(t, beyond, j);
        let up = t + TriDegree::new(1, 0, 0);
        let all_up = Lattice::full(self.basis(up).len());
        let b = self.boundary_into(t, &all_up, i64::MIN).sum(&self.relations(t, 0));
        let outer = cycles(k).sum(&b);
        let inner = cycles(k + 1).sum(&b);
        quotient_summands(&outer, &inner)
    }

    /// Whether `D^2` lands in the relations at total degree `t`.
    pub fn d_squared_in_relations(&self, t: TriDegree) -> bool {
        let down = t - TriDegree::new(1, 0, 0);
        let dd = self.d_matrix(down).mul(&self.d_matrix(t));
        let tgt = self.basis(down - TriDegree::new(1, 0, 0));
        (0..dd.rows()).all(|i| (0..dd.cols()).all(|j| dd[(i, j)].is_zero() || (self.is_torsion(&tgt[i]) && dd[(i, j)].is_even())))
    }

    /// Label of a lifted generator at filtration `k`, in `Cta`-level terms.
    fn label(&self, t: TriDegree, k: i64, v: &[BigInt]) -> String {
        let b = self.basis(t);
        let parts: Vec<String> = b
            .iter()
            .zip(v)
            .filter(|(e, x)| e.k >= k && !x.is_zero() && !(self.is_torsion(e) && x.is_even()))
            .map(|(e, x)| {
                let l = ta_label(e.k - k, &self.cx.classes[e.class].label);
                let x = if self.is_torsion(e) { BigInt::one() } else { x.clone() };
                if x.is_one() {
                    l
                } else {
                    format!("{x}*{l}")
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn quotient_summands(outer: &Lattice, inner: &Lattice) -> Vec<(Order, Vec<BigInt>)> {
    lattice_quotient(outer, inner)
        .into_iter()
        .filter_map(|q| {
            let order = if q.order.is_zero() { Some(Order::Z2Adic) } else { two_local_order(&q.order) }?;
            Some((order, q.generator))
        })
        .collect()
}

/// One `Cta`-level cell `E_r^0(c)` with the `ta`-torsion orders seen on that page.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageCell {
    pub degree: TriDegree,
    pub group: GroupPresentation,
    /// Number of summands surviving multiplication by every power of `ta` available on this page.
    pub ta_free: usize,
    /// `order r -> count`: summands killed by `ta^r` but not `ta^{r-1}`.
    pub ta_torsion: BTreeMap<u32, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralSequencePage {
    pub r: u32,
    pub cells: Vec<PageCell>,
}

/// `gr^k` of the abutment at a total degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbutmentCell {
    pub total_degree: TriDegree,
    pub graded: Vec<(i64, GroupPresentation)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunChecks {
    pub degree_contract: bool,
    pub d_squared_zero: bool,
    pub ranks_monotone: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunOutput {
    pub pages: Vec<SpectralSequencePage>,
    pub e_infinity: SpectralSequencePage,
    pub abutment: Vec<AbutmentCell>,
    pub checks: RunChecks,
}

fn presentation(tc: &TotalComplex, t: TriDegree, k: i64, summands: Vec<(Order, Vec<BigInt>)>) -> GroupPresentation {
    GroupPresentation::new(
        summands
            .into_iter()
            .map(|(o, mut v)| {
                // Generators are defined up to sign; the first nonzero coefficient is made positive.
                if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                    v.iter_mut().for_each(|x| *x = -std::mem::take(x));
                }
                Summand::new(o, tc.label(t, k, &v))
            })
            .collect(),
    )
}

/// Page `r` cell at `c` with torsion tags from `E_r^k(c - (0,0,k))`.
fn page_cell(tc: &TotalComplex, c: TriDegree, r: Option<i64>, horizon: i64) -> (PageCell, Vec<usize>) {
    let g0 = tc.page_cell_at(c, r, 0);
    let mut sizes = vec![g0.len()];
    for k in 1..=horizon {
        sizes.push(tc.page_cell_at(c - TriDegree::new(0, 0, k), r, k).len());
    }
    let mut ta_torsion = BTreeMap::new();
    for k in 1..sizes.len() {
        let killed = sizes[k - 1].saturating_sub(sizes[k]);
        if killed > 0 {
            ta_torsion.insert(k as u32, killed);
        }
    }
    let cell = PageCell { degree: c, group: presentation(tc, c, 0, g0), ta_free: *sizes.last().unwrap(), ta_torsion };
    (cell, sizes)
}

/// The first page index past which nothing can change in the box.
pub fn stable_page(cx: &ClosedComplex) -> u32 {
    (cx.bounds.w.1 - cx.bounds.w.0 + 2).max(cx.max_page() as i64 + 1) as u32
}

/// Runs pages `1..=r_max` and `E_∞`, with the abutment and the internal consistency checks.
pub fn run(cx: &ClosedComplex, r_max: u32) -> Result<RunOutput, BocksteinError> {
    let tc = TotalComplex::new(cx);
    let bx = cx.bounds;
    let horizon = bx.w.1 - bx.w.0 + 1;
    let inf = stable_page(cx) as i64;
    let total_box = DegreeBox::new((bx.p.0 - 1, bx.p.1 + 1), bx.q, (bx.w.0 - horizon, bx.w.1));
    for t in total_box.degrees() {
        if !tc.d_squared_in_relations(t) {
            return Err(BocksteinError::LeibnizContradiction(format!("D^2 is nonzero at total degree {t}")));
        }
    }
    let mut pages = Vec::new();
    let mut previous: HashMap<TriDegree, Vec<usize>> = HashMap::new();
    let mut ranks_monotone = true;
    let mut rs: Vec<Option<i64>> = (1..=r_max as i64).map(Some).collect();
    rs.push(None);
    for &r in &rs {
        let mut cells = Vec::new();
        for c in bx.degrees() {
            let (cell, sizes) = page_cell(&tc, c, r, horizon);
            if let Some(prev) = previous.get(&c) {
                if prev.iter().zip(&sizes).any(|(a, b)| b > a) {
                    ranks_monotone = false;
                }
            }
            previous.insert(c, sizes);
            if !cell.group.is_zero() {
                cells.push(cell);
            }
        }
        pages.push(SpectralSequencePage { r: r.unwrap_or(inf.max(r_max as i64 + 1)) as u32, cells });
    }
    let e_infinity = pages.pop().unwrap();
    let mut abutment = Vec::new();
    for t in bx.degrees() {
        let graded: Vec<(i64, GroupPresentation)> = (0..=(bx.w.1 - t.w).max(-1))
            .map(|k| (k, presentation(&tc, t, k, tc.page_cell_at(t, None, k))))
            .filter(|(_, g)| !g.is_zero())
            .collect();
        if !graded.is_empty() {
            abutment.push(AbutmentCell { total_degree: t, graded });
        }
    }
    let checks = RunChecks { degree_contract: cx.degree_contract_holds(), d_squared_zero: true, ranks_monotone };
    Ok(RunOutput { pages, e_infinity, abutment, checks })
}

/// Compares `E_∞^k` with `gr^k` of the directly computed homology at every total degree of the box.
pub fn abutment_check(cx: &ClosedComplex) -> bool {
    let tc = TotalComplex::new(cx);
    let bx = cx.bounds;
    let horizon = bx.w.1 - bx.w.0 + 1;
    let total_box = DegreeBox::new(bx.p, bx.q, (bx.w.0 - horizon, bx.w.1));
    let ok = total_box.degrees().all(|t| {
        (0..=(bx.w.1 - t.w).max(-1)).all(|k| {
            let shape = |v: Vec<(Order, Vec<BigInt>)>| {
                let mut s: Vec<Order> = v.into_iter().map(|(o, _)| o).collect();
                s.sort();
                s
            };
            shape(tc.page_cell_at(t, None, k)) == shape(tc.graded_homology(t, k))
        })
    });
    ok
}

/// Every coefficient of a vector is divisible by 2 on torsion coordinates; used by tests.
pub fn is_negligible(v: &[BigInt]) -> bool {
    v.iter().all(|x| x.is_zero() || x.abs().is_even())
}
