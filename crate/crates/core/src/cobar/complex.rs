//! The normalized cobar complex `C^s = BP_* [t̄ | ... | t̄]` graded by internal degree.
//!
//! An element of `C^s` is a polynomial in `v_i` and `t(j)_i`, `1 <= j <= s`, with every term having a
//! nonzero exponent vector in each factor `j`. The coface maps are
//! `delta_0(x) = 1 | x`, `delta_i` = coproduct on factor `i`, `delta_{s+1}(x) = x | 1`, and
//! `d = sum (-1)^i delta_i`. Coefficients that end up to the right of a factor are moved to the far
//! left through `eta_R` of every factor they cross.

use std::collections::HashMap;
use std::sync::Mutex;

use super::poly::{Mono, Poly, VarLayout};
use super::presentation::BPPresentation;
use super::CobarError;

/// Sparse matrix stored by columns.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub columns: Vec<Vec<(usize, i128)>>,
}

impl SparseMatrix {
    pub fn dense_row_major(&self) -> Vec<i128> {
        let mut out = vec![0i128; self.rows * self.cols];
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, x) in col {
                out[r * self.cols + c] = x;
            }
        }
        out
    }

    pub fn nonzeros(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    /// `self * other`, both sparse.
    pub fn compose(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut columns = Vec::with_capacity(other.cols);
        for col in &other.columns {
            let mut acc: HashMap<usize, i128> = HashMap::new();
            for &(k, y) in col {
                for &(r, x) in &self.columns[k] {
                    *acc.entry(r).or_default() += x * y;
                }
            }
            let mut v: Vec<(usize, i128)> = acc.into_iter().filter(|(_, x)| *x != 0).collect();
            v.sort();
            columns.push(v);
        }
        SparseMatrix { rows: self.rows, cols: other.cols, columns }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }
}

pub struct CobarComplex {
    pres: BPPresentation,
    layout: VarLayout,
    /// `phi[j][i - 1]`: `v_i` written at position `j` and moved to the far left.
    phi: Vec<Vec<Poly<i128>>>,
    /// `coproduct_at[i][k - 1]`: `Delta(t_k)` on factors `i, i + 1`, coefficients moved left.
    coproduct_at: Vec<Vec<Poly<i128>>>,
    /// Monomials in `n` variables by internal degree.
    monos_by_degree: Vec<Vec<Vec<u8>>>,
    push_cache: Mutex<HashMap<Vec<u8>, Poly<i128>>>,
    split_cache: Mutex<HashMap<(usize, Vec<u8>), Poly<i128>>>,
}

fn monomials_of_degree(n: usize, max_degree: i64) -> Vec<Vec<Vec<u8>>> {
    let degs: Vec<i64> = (1..=n).map(super::presentation::generator_degree).collect();
    let mut out = vec![Vec::new(); max_degree.max(0) as usize + 1];
    fn rec(k: usize, degs: &[i64], cur: &mut Vec<u8>, d: i64, max: i64, out: &mut Vec<Vec<Vec<u8>>>) {
        if k == degs.len() {
            out[d as usize].push(cur.clone());
            return;
        }
        let mut e = 0u8;
        while d + e as i64 * degs[k] <= max {
            cur[k] = e;
            rec(k + 1, degs, cur, d + e as i64 * degs[k], max, out);
            e += 1;
        }
        cur[k] = 0;
    }
    let mut cur = vec![0u8; n];
    rec(0, &degs, &mut cur, 0, max_degree, &mut out);
    out
}

impl CobarComplex {
    /// Complex able to produce `C^s` for `s <= max_s` (so differentials out of `C^{max_s - 1}`).
    pub fn new(pres: BPPresentation, max_s: usize) -> Self {
        let n = pres.n;
        let factors = max_s.max(2);
        let layout = VarLayout::new(n, factors);

        // psi_j: v -> eta_R(v) with t(1) renamed t(j).
        let psi = |j: usize| -> Vec<Poly<i128>> {
            pres.eta_r
                .iter()
                .map(|p| p.relayout(&layout, |k| if k < n { k } else { layout.t(j, k - n + 1) }))
                .collect()
        };
        let substitute_v = |p: &Poly<i128>, images: &[Poly<i128>]| -> Poly<i128> {
            let mut imgs: Vec<Option<Poly<i128>>> = vec![None; layout.len()];
            for (i, img) in images.iter().enumerate() {
                imgs[i] = Some(img.clone());
            }
            p.substitute(&layout, &imgs)
        };

        let mut phi: Vec<Vec<Poly<i128>>> = vec![Vec::new(); factors + 2];
        phi[1] = (1..=n).map(|i| Poly::var(&layout, layout.v(i))).collect();
        for j in 2..=factors + 1 {
            let ps = psi(j - 1);
            let prev = phi[j - 1].clone();
            phi[j] = ps.iter().map(|p| substitute_v(p, &prev)).collect();
        }

        let mut coproduct_at: Vec<Vec<Poly<i128>>> = vec![Vec::new(); factors + 1];
        for i in 1..factors {
            coproduct_at[i] = pres
                .delta
                .iter()
                .map(|p| {
                    let moved = p.relayout(&layout, |k| {
                        if k < n {
                            k
                        } else if k < 2 * n {
                            layout.t(i, k - n + 1)
                        } else {
                            layout.t(i + 1, k - 2 * n + 1)
                        }
                    });
                    substitute_v(&moved, &phi[i])
                })
                .collect();
        }
        let monos_by_degree = monomials_of_degree(n, pres.max_degree);
        CobarComplex {
            pres,
            layout,
            phi,
            coproduct_at,
            monos_by_degree,
            push_cache: Mutex::new(HashMap::new()),
            split_cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn presentation(&self) -> &BPPresentation {
        &self.pres
    }

    pub fn layout(&self) -> &VarLayout {
        &self.layout
    }

    /// Largest `s` whose basis can be represented.
    pub fn max_s(&self) -> usize {
        self.layout.factors
    }

    /// Normalized basis of `C^s` in internal degree `t`, ordered by tensor factors then `v`.
    pub fn basis(&self, s: usize, t: i64) -> Vec<Mono> {
        assert!(s <= self.layout.factors, "cobar degree {s} exceeds the complex");
        let n = self.layout.n;
        if t < 0 || t > self.pres.max_degree {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut parts: Vec<&Vec<u8>> = Vec::with_capacity(s + 1);
        self.fill(s, 0, t, &mut parts, &mut out, n);
        out.sort_by(|a, b| {
            let key = |m: &Mono| -> Vec<u8> {
                let mut k = m[n..n * (s + 1)].to_vec();
                k.extend_from_slice(&m[..n]);
                k
            };
            key(a).cmp(&key(b))
        });
        out
    }

    fn fill<'a>(&'a self, s: usize, j: usize, remaining: i64, parts: &mut Vec<&'a Vec<u8>>, out: &mut Vec<Mono>, n: usize) {
        if j == s {
            // Remaining degree goes to the coefficient.
            for v in &self.monos_by_degree[remaining as usize] {
                let mut m = self.layout.one();
                m[..n].copy_from_slice(v);
                for (f, part) in parts.iter().enumerate() {
                    m[n * (f + 1)..n * (f + 2)].copy_from_slice(part);
                }
                out.push(m);
            }
            return;
        }
        let later = 2 * (s - j - 1) as i64;
        for d in 2..=remaining - later {
            for m in &self.monos_by_degree[d as usize] {
                parts.push(m);
                self.fill(s, j + 1, remaining - d, parts, out, n);
                parts.pop();
            }
        }
    }

    /// `phi_2(v^F)`: the coefficient `v^F` moved across one factor.
    fn pushed_coefficient(&self, f: &[u8]) -> Poly<i128> {
        if let Some(p) = self.push_cache.lock().unwrap().get(f) {
            return p.clone();
        }
        let mut acc = Poly::constant(&self.layout, 1);
        for (i, &e) in f.iter().enumerate() {
            if e > 0 {
                acc = acc.mul(&self.phi[2][i].pow(&self.layout, e as u32));
            }
        }
        self.push_cache.lock().unwrap().insert(f.to_vec(), acc.clone());
        acc
    }

    /// `prod_k Delta(t_k)^{E_k}` on factors `i, i + 1`.
    fn split_factor(&self, i: usize, e: &[u8]) -> Poly<i128> {
        let key = (i, e.to_vec());
        if let Some(p) = self.split_cache.lock().unwrap().get(&key) {
            return p.clone();
        }
        let mut acc = Poly::constant(&self.layout, 1);
        for (k, &x) in e.iter().enumerate() {
            if x > 0 {
                acc = acc.mul(&self.coproduct_at[i][k].pow(&self.layout, x as u32));
            }
        }
        self.split_cache.lock().unwrap().insert(key, acc.clone());
        acc
    }

    /// Coface `delta_i` on a basis monomial of `C^s`.
    pub fn coface(&self, s: usize, i: usize, m: &[u8]) -> Poly<i128> {
        let n = self.layout.n;
        assert!(s < self.layout.factors && i <= s + 1);
        let shifted = |from: usize| -> Mono {
            // Factors j >= from move to j + 1.
            let mut out = self.layout.one();
            out[..n].copy_from_slice(&m[..n]);
            for j in 1..=s {
                let dst = if j >= from { j + 1 } else { j };
                out[n * dst..n * (dst + 1)].copy_from_slice(&m[n * j..n * (j + 1)]);
            }
            out
        };
        if i == 0 {
            let mut rest = shifted(1);
            rest[..n].fill(0);
            self.pushed_coefficient(&m[..n]).mul_mono(&rest)
        } else if i == s + 1 {
            Poly::monomial(m.to_vec().into_boxed_slice(), 1)
        } else {
            let mut rest = shifted(i + 1);
            rest[n * i..n * (i + 1)].fill(0);
            self.split_factor(i, &m[n * i..n * (i + 1)]).mul_mono(&rest)
        }
    }

    /// `d(m)` for a basis monomial of `C^s`.
    pub fn differential_of(&self, s: usize, m: &[u8]) -> Poly<i128> {
        let mut acc = Poly::zero();
        for i in 0..=s + 1 {
            let c = self.coface(s, i, m);
            acc = if i % 2 == 0 { acc.add(&c) } else { acc.sub(&c) };
        }
        acc
    }

    /// Matrix of `d: C^s_t -> C^{s+1}_t` on the normalized bases.
    pub fn differential(&self, s: usize, t: i64) -> Result<SparseMatrix, CobarError> {
        let src = self.basis(s, t);
        let dst = self.basis(s + 1, t);
        let index: HashMap<&[u8], usize> = dst.iter().enumerate().map(|(k, m)| (&m[..], k)).collect();
        let mut columns = Vec::with_capacity(src.len());
        for m in &src {
            let img = self.differential_of(s, m);
            let mut col = Vec::with_capacity(img.len());
            for (mm, c) in img.terms() {
                let row = *index.get(&mm[..]).ok_or(CobarError::NotNormalized { s, t })?;
                col.push((row, *c));
            }
            col.sort();
            columns.push(col);
        }
        Ok(SparseMatrix { rows: dst.len(), cols: src.len(), columns })
    }

    /// Renders a basis monomial as `v1^2 [t1|t1 t2]`.
    pub fn display_basis(&self, s: usize, m: &[u8]) -> String {
        let n = self.layout.n;
        let fmt_part = |exps: &[u8], prefix: &str| -> String {
            let mut parts = Vec::new();
            for (i, &e) in exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(format!("{prefix}{}", i + 1)),
                    e => parts.push(format!("{prefix}{}^{e}", i + 1)),
                }
            }
            parts.join(" ")
        };
        let coef = fmt_part(&m[..n], "v");
        let bars: Vec<String> = (1..=s).map(|j| fmt_part(&m[n * j..n * (j + 1)], "t")).collect();
        match (coef.is_empty(), s) {
            (true, 0) => "1".into(),
            (false, 0) => coef,
            (true, _) => format!("[{}]", bars.join("|")),
            (false, _) => format!("{coef} [{}]", bars.join("|")),
        }
    }
}
