//! Dense bit-packed matrices over F2.

use std::fmt;

const W: usize = 64;

#[derive(Clone, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(W);
        F2Matrix { rows, cols, stride, data: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
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

    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / W] >> (c % W)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let word = &mut self.data[r * self.stride + c / W];
        let bit = 1u64 << (c % W);
        if v {
            *word |= bit;
        } else {
            *word &= !bit;
        }
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.data[r * self.stride + c / W] ^= 1u64 << (c % W);
    }

    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    /// `row[dst] ^= row[src]`.
    fn xor_row(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let s = self.stride;
        let (lo, hi) = self.data.split_at_mut(dst.max(src) * s);
        let (d, sr) = if dst < src {
            (&mut lo[dst * s..dst * s + s], &hi[..s])
        } else {
            (&mut hi[..s], &lo[src * s..src * s + s])
        };
        for (a, b) in d.iter_mut().zip(sr) {
            *a ^= *b;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.stride {
            self.data.swap(a * self.stride + k, b * self.stride + k);
        }
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c)) else { continue };
            self.swap_rows(r, pr);
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_row(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for (k, &w) in self.row_words(r).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let b = w.trailing_zeros() as usize;
                    t.set(k * W + b, r, true);
                    w &= w - 1;
                }
            }
        }
        t
    }

    pub fn mul(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = F2Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    let s = out.stride;
                    for k in 0..s {
                        out.data[r * s + k] ^= other.data[c * s + k];
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn row(&self, r: usize) -> Vec<bool> {
        (0..self.cols).map(|c| self.get(r, c)).collect()
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let s: String = (0..self.cols).map(|c| if self.get(r, c) { '1' } else { '0' }).collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

pub fn f2_rank(m: &F2Matrix) -> usize {
    let mut a = if m.rows <= m.cols { m.clone() } else { m.transpose() };
    a.rref().len()
}

/// Basis of the null space `{x : m x = 0}`, one vector per row of the result.
pub fn f2_kernel_basis(m: &F2Matrix) -> F2Matrix {
    let mut a = m.clone();
    let pivots = a.rref();
    let mut is_pivot = vec![false; m.cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let free: Vec<usize> = (0..m.cols).filter(|&c| !is_pivot[c]).collect();
    let mut k = F2Matrix::zeros(free.len(), m.cols);
    for (n, &f) in free.iter().enumerate() {
        k.set(n, f, true);
        for (r, &pc) in pivots.iter().enumerate() {
            if a.get(r, f) {
                k.set(n, pc, true);
            }
        }
    }
    k
}

/// Incrementally built echelon basis of a subspace of `F2^n`.
#[derive(Clone, Debug)]
pub struct F2Echelon {
    n: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

impl F2Echelon {
    pub fn new(n: usize) -> Self {
        F2Echelon { n, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [u64]) {
        for (p, row) in &self.rows {
            if (v[p / W] >> (p % W)) & 1 == 1 {
                for (a, b) in v.iter_mut().zip(row) {
                    *a ^= *b;
                }
            }
        }
    }

    /// Adds `v` to the span; returns false if it was already in the span.
    pub fn insert(&mut self, words: &[u64]) -> bool {
        debug_assert_eq!(words.len(), self.n.div_ceil(W));
        let mut v = words.to_vec();
        self.reduce(&mut v);
        match v.iter().enumerate().find(|(_, w)| **w != 0) {
            Some((k, w)) => {
                let p = k * W + w.trailing_zeros() as usize;
                self.rows.push((p, v));
                true
            }
            None => false,
        }
    }
}

/// Representatives of `ker(d_out) / im(d_in)` for `d_in: C_prev -> C`, `d_out: C -> C_next`.
///
/// Matrices act on column vectors. Returns one row of length `dim C` per class.
pub fn f2_homology_basis(d_in: &F2Matrix, d_out: &F2Matrix) -> F2Matrix {
    let n = d_out.cols();
    let ker = f2_kernel_basis(d_out);
    let im = d_in.transpose();
    let mut span = F2Echelon::new(n);
    for r in 0..im.rows() {
        span.insert(im.row_words(r));
    }
    let reps: Vec<usize> = (0..ker.rows()).filter(|&k| span.insert(ker.row_words(k))).collect();
    F2Matrix::from_fn(reps.len(), n, |r, c| ker.get(reps[r], c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_rank(rows: &[Vec<bool>]) -> usize {
        let mut rows: Vec<Vec<bool>> = rows.to_vec();
        let mut rank = 0;
        let ncols = rows.first().map_or(0, |r| r.len());
        for c in 0..ncols {
            if let Some(p) = (rank..rows.len()).find(|&i| rows[i][c]) {
                rows.swap(rank, p);
                let pivot = rows[rank].clone();
                for (i, row) in rows.iter_mut().enumerate() {
                    if i != rank && row[c] {
                        for (x, y) in row.iter_mut().zip(&pivot) {
                            *x ^= *y;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    proptest! {
        #[test]
        fn rank_matches_naive(rows in 1usize..20, cols in 1usize..140, seed in any::<u64>()) {
            let mut s = seed;
            let mut next = || { s ^= s << 13; s ^= s >> 7; s ^= s << 17; s };
            let dense: Vec<Vec<bool>> = (0..rows).map(|_| (0..cols).map(|_| next() % 3 == 0).collect()).collect();
            let m = F2Matrix::from_fn(rows, cols, |r, c| dense[r][c]);
            prop_assert_eq!(f2_rank(&m), naive_rank(&dense));
            let k = f2_kernel_basis(&m);
            prop_assert_eq!(k.rows() + f2_rank(&m), cols);
            prop_assert!(m.mul(&k.transpose()).is_zero());
            prop_assert_eq!(f2_rank(&k), k.rows());
        }
    }

    #[test]
    fn homology_of_short_complex() {
        // C0 = F2 -> C1 = F2^2 -> C2 = F2, d0 = (1,1)^T, d1 = (1,1).
        let d0 = F2Matrix::from_fn(2, 1, |_, _| true);
        let d1 = F2Matrix::from_fn(1, 2, |_, _| true);
        assert!(d1.mul(&d0).is_zero());
        assert_eq!(f2_homology_basis(&d0, &d1).rows(), 0);
        let zero_in = F2Matrix::zeros(2, 0);
        assert_eq!(f2_homology_basis(&zero_in, &d1).rows(), 1);
    }
}
