//! Dense integer matrices with arbitrary-precision entries and Smith normal form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        IntMatrix { rows, cols, data: entries.iter().map(|&x| BigInt::from(x)).collect() }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, x) in col.iter().enumerate() {
                m[(r, c)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn select_columns(&self, idx: &[usize]) -> IntMatrix {
        IntMatrix::from_fn(self.rows, idx.len(), |r, c| self[(r, idx[c])].clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        IntMatrix::from_fn(idx.len(), self.cols, |r, c| self[(idx[r], c)].clone())
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, o.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let x = &self[(r, k)];
                if x.is_zero() {
                    continue;
                }
                for c in 0..o.cols {
                    let y = &o[(k, c)];
                    if !y.is_zero() {
                        out[(r, c)] += x * y;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut s = BigInt::zero();
                for (c, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        s += &self[(r, c)] * x;
                    }
                }
                s
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Horizontal concatenation `[self | o]`.
    pub fn hcat(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, o.rows);
        IntMatrix::from_fn(self.rows, self.cols + o.cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                o[(r, c - self.cols)].clone()
            }
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// `row[dst] += k * row[src]`.
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for c in 0..self.cols {
            let s = &self.data[src * self.cols + c];
            if !s.is_zero() {
                let v = s * k;
                self.data[dst * self.cols + c] += v;
            }
        }
    }

    /// `col[dst] += k * col[src]`.
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for r in 0..self.rows {
            let s = &self.data[r * self.cols + src];
            if !s.is_zero() {
                let v = s * k;
                self.data[r * self.cols + dst] += v;
            }
        }
    }

    /// `(row_i, row_j) <- (k00 row_i + k01 row_j, k10 row_i + k11 row_j)`.
    fn mix_rows(&mut self, i: usize, j: usize, k: [&BigInt; 4]) {
        for c in 0..self.cols {
            let (a, b) = (&self.data[i * self.cols + c], &self.data[j * self.cols + c]);
            if a.is_zero() && b.is_zero() {
                continue;
            }
            let ni = k[0] * a + k[1] * b;
            let nj = k[2] * a + k[3] * b;
            self.data[i * self.cols + c] = ni;
            self.data[j * self.cols + c] = nj;
        }
    }

    /// `(col_i, col_j) <- (k00 col_i + k01 col_j, k10 col_i + k11 col_j)`.
    fn mix_cols(&mut self, i: usize, j: usize, k: [&BigInt; 4]) {
        for r in 0..self.rows {
            let (a, b) = (&self.data[r * self.cols + i], &self.data[r * self.cols + j]);
            if a.is_zero() && b.is_zero() {
                continue;
            }
            let ni = k[0] * a + k[1] * b;
            let nj = k[2] * a + k[3] * b;
            self.data[r * self.cols + i] = ni;
            self.data[r * self.cols + j] = nj;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let x = &mut self.data[r * self.cols + c];
            *x = -std::mem::take(x);
        }
    }

    fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let x = &mut self.data[r * self.cols + c];
            *x = -std::mem::take(x);
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// `left * m * right = diag(diagonal)` with unimodular `left`, `right`.
///
/// `diagonal` has length `min(rows, cols)`, entries are nonnegative, the nonzero ones come first and
/// each divides the next. The inverses of both transforms are kept as well.
#[derive(Clone, Debug)]
pub struct Snf {
    pub diagonal: Vec<BigInt>,
    pub left: IntMatrix,
    pub left_inv: IntMatrix,
    pub right: IntMatrix,
    pub right_inv: IntMatrix,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().take_while(|d| !d.is_zero()).count()
    }
}

struct Work {
    a: IntMatrix,
    left: IntMatrix,
    left_inv: IntMatrix,
    right: IntMatrix,
    right_inv: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.left.swap_rows(i, j);
        self.left_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.right.swap_cols(i, j);
        self.right_inv.swap_rows(i, j);
    }

    /// `row[dst] += k * row[src]`.
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_row(dst, src, k);
        self.left.add_row(dst, src, k);
        self.left_inv.add_col(src, dst, &-k);
    }

    /// Replaces rows `(t, r)` by `(x row_t + y row_r, -b' row_t + a' row_r)`, clearing `a[(r, t)]`.
    fn eliminate_row(&mut self, t: usize, r: usize) {
        let (x, y, a1, b1) = bezout(&self.a[(t, t)], &self.a[(r, t)]);
        let nb = -&b1;
        self.a.mix_rows(t, r, [&x, &y, &nb, &a1]);
        self.left.mix_rows(t, r, [&x, &y, &nb, &a1]);
        // Inverse of [[x, y], [-b', a']] is [[a', -y], [b', x]], applied on the right.
        let ny = -&y;
        self.left_inv.mix_cols(t, r, [&a1, &b1, &ny, &x]);
    }

    fn eliminate_col(&mut self, t: usize, c: usize) {
        let (x, y, a1, b1) = bezout(&self.a[(t, t)], &self.a[(t, c)]);
        let nb = -&b1;
        self.a.mix_cols(t, c, [&x, &y, &nb, &a1]);
        self.right.mix_cols(t, c, [&x, &y, &nb, &a1]);
        let ny = -&y;
        self.right_inv.mix_rows(t, c, [&a1, &b1, &ny, &x]);
    }

    fn negate_row(&mut self, r: usize) {
        self.a.negate_row(r);
        self.left.negate_row(r);
        self.left_inv.negate_col(r);
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let (rows, cols) = (m.rows, m.cols);
    let mut w = Work {
        a: m.clone(),
        left: IntMatrix::identity(rows),
        left_inv: IntMatrix::identity(rows),
        right: IntMatrix::identity(cols),
        right_inv: IntMatrix::identity(cols),
    };
    let n = rows.min(cols);
    for t in 0..n {
        // Minimal nonzero |entry| in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                let x = &w.a[(r, c)];
                if !x.is_zero() && best.is_none_or(|(br, bc)| x.abs() < w.a[(br, bc)].abs()) {
                    best = Some((r, c));
                }
            }
        }
        let Some((br, bc)) = best else { break };
        w.swap_rows(t, br);
        w.swap_cols(t, bc);
        loop {
            for r in t + 1..rows {
                if !w.a[(r, t)].is_zero() {
                    w.eliminate_row(t, r);
                }
            }
            let mut dirty = false;
            for c in t + 1..cols {
                if !w.a[(t, c)].is_zero() {
                    w.eliminate_col(t, c);
                    dirty = true;
                }
            }
            // Column steps can refill column t only when the pivot strictly shrank.
            if dirty && (t + 1..rows).any(|r| !w.a[(r, t)].is_zero()) {
                continue;
            }
            // Divisibility of the trailing block by the pivot.
            let piv = w.a[(t, t)].clone();
            let bad = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| !w.a[(r, c)].is_multiple_of(&piv)));
            match bad {
                Some(r) => w.add_row(t, r, &BigInt::one()),
                None => break,
            }
        }
        if w.a[(t, t)].is_negative() {
            w.negate_row(t);
        }
    }
    let diagonal = (0..n).map(|i| w.a[(i, i)].clone()).collect();
    Snf { diagonal, left: w.left, left_inv: w.left_inv, right: w.right, right_inv: w.right_inv }
}

/// Bezout step: `(x, y, a/g, b/g)` with `x a + y b = g = gcd(a, b)`, `g` of the sign of `a` when `b | a`.
fn bezout(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt, BigInt) {
    if b.is_multiple_of(a) {
        return (BigInt::one(), BigInt::zero(), BigInt::one(), b / a);
    }
    let e = a.extended_gcd(b);
    (e.x, e.y, a / &e.gcd, b / &e.gcd)
}

/// Rank over Q.
pub fn int_rank(m: &IntMatrix) -> usize {
    smith_normal_form(m).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn diag_matrix(rows: usize, cols: usize, d: &[BigInt]) -> IntMatrix {
        IntMatrix::from_fn(rows, cols, |r, c| if r == c && r < d.len() { d[r].clone() } else { BigInt::zero() })
    }

    proptest! {
        #[test]
        fn snf_is_a_factorization(rows in 1usize..6, cols in 1usize..6,
                                  entries in proptest::collection::vec(-6i64..7, 36)) {
            let m = IntMatrix::from_i64(rows, cols, &entries[..rows * cols]);
            let s = smith_normal_form(&m);
            let d = diag_matrix(rows, cols, &s.diagonal);
            prop_assert_eq!(s.left.mul(&m).mul(&s.right), d.clone());
            prop_assert_eq!(s.left.mul(&s.left_inv), IntMatrix::identity(rows));
            prop_assert_eq!(s.right.mul(&s.right_inv), IntMatrix::identity(cols));
            prop_assert_eq!(s.left_inv.mul(&d).mul(&s.right_inv), m);
            let r = s.rank();
            for i in 0..s.diagonal.len() {
                prop_assert!(!s.diagonal[i].is_negative());
                if i + 1 < r {
                    prop_assert!(s.diagonal[i + 1].is_multiple_of(&s.diagonal[i]));
                }
                if i >= r {
                    prop_assert!(s.diagonal[i].is_zero());
                }
            }
        }
    }

    #[test]
    fn known_invariants() {
        let m = IntMatrix::from_i64(2, 2, &[2, 0, 0, 3]);
        let s = smith_normal_form(&m);
        assert_eq!(s.diagonal, vec![BigInt::from(1), BigInt::from(6)]);
    }
}
