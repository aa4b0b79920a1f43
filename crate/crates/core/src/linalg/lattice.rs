//! Sublattices of `Z^n` given by generators, and their quotients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::int::{smith_normal_form, IntMatrix};

/// Basis of the integer kernel `{x in Z^cols : m x = 0}`, as columns.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(m);
    let r = s.rank();
    let idx: Vec<usize> = (r..m.cols()).collect();
    s.right.select_columns(&idx)
}

/// A sublattice of `Z^n` with a basis stored as columns.
#[derive(Clone, Debug)]
pub struct Lattice {
    ambient: usize,
    basis: IntMatrix,
}

impl Lattice {
    pub fn zero(n: usize) -> Self {
        Lattice { ambient: n, basis: IntMatrix::zeros(n, 0) }
    }

    pub fn full(n: usize) -> Self {
        Lattice { ambient: n, basis: IntMatrix::identity(n) }
    }

    /// Lattice spanned by the columns of `gens`.
    pub fn span(gens: &IntMatrix) -> Self {
        let n = gens.rows();
        if gens.cols() == 0 {
            return Lattice::zero(n);
        }
        let s = smith_normal_form(gens);
        let r = s.rank();
        let mut cols = Vec::with_capacity(r);
        for i in 0..r {
            let col: Vec<BigInt> = s.left_inv.column(i).into_iter().map(|x| x * &s.diagonal[i]).collect();
            cols.push(col);
        }
        Lattice { ambient: n, basis: IntMatrix::from_columns(n, &cols) }
    }

    pub fn span_vectors(n: usize, vectors: &[Vec<BigInt>]) -> Self {
        Lattice::span(&IntMatrix::from_columns(n, vectors))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn sum(&self, o: &Lattice) -> Lattice {
        assert_eq!(self.ambient, o.ambient);
        Lattice::span(&self.basis.hcat(&o.basis))
    }

    /// Coordinates of `v` in this basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        solve_in_columns(&self.basis, v)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, o: &Lattice) -> bool {
        o.basis.columns().iter().all(|c| self.contains(c))
    }

    /// Intersection with the coordinate subspace spanned by `coords`.
    pub fn intersect_coordinates(&self, coords: &[usize]) -> Lattice {
        let mut keep = vec![false; self.ambient];
        for &c in coords {
            keep[c] = true;
        }
        let off: Vec<usize> = (0..self.ambient).filter(|&i| !keep[i]).collect();
        if off.is_empty() {
            return self.clone();
        }
        let restricted = self.basis.select_rows(&off);
        let k = integer_kernel(&restricted);
        Lattice::span(&self.basis.mul(&k))
    }
}

/// Solves `a c = v` for integer `c` when `a` has independent columns.
fn solve_in_columns(a: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let k = a.cols();
    if k == 0 {
        return v.iter().all(|x| x.is_zero()).then(Vec::new);
    }
    let s = smith_normal_form(a);
    let uv = s.left.mul_vec(v);
    let mut y = Vec::with_capacity(k);
    for (i, x) in uv.iter().enumerate() {
        if i < k {
            let d = &s.diagonal[i];
            if d.is_zero() {
                if !x.is_zero() {
                    return None;
                }
                y.push(BigInt::zero());
            } else {
                let (q, r) = x.div_rem(d);
                if !r.is_zero() {
                    return None;
                }
                y.push(q);
            }
        } else if !x.is_zero() {
            return None;
        }
    }
    Some(s.right.mul_vec(&y))
}

/// A cyclic summand of a lattice quotient: its order (zero when free) and a lifted generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSummand {
    pub order: BigInt,
    pub generator: Vec<BigInt>,
}

/// `outer / inner` as a direct sum of nontrivial cyclic groups. Panics unless `inner` lies in `outer`.
pub fn lattice_quotient(outer: &Lattice, inner: &Lattice) -> Vec<QuotientSummand> {
    let k = outer.rank();
    let mut coords = Vec::with_capacity(inner.rank());
    for col in inner.basis.columns() {
        coords.push(outer.coordinates(&col).expect("inner lattice must lie in the outer lattice"));
    }
    let m = IntMatrix::from_columns(k, &coords);
    let s = smith_normal_form(&m);
    let gens = outer.basis.mul(&s.left_inv);
    let mut out = Vec::new();
    for i in 0..k {
        let d = s.diagonal.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_one() {
            continue;
        }
        out.push(QuotientSummand { order: d.abs(), generator: gens.column(i) });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn kernel_and_quotient() {
        let m = IntMatrix::from_i64(1, 3, &[2, 4, 6]);
        let k = integer_kernel(&m);
        assert_eq!(k.cols(), 2);
        assert!(m.mul(&k).is_zero());

        let outer = Lattice::full(2);
        let inner = Lattice::span_vectors(2, &[v(&[2, 0]), v(&[0, 4]), v(&[2, 4])]);
        let q = lattice_quotient(&outer, &inner);
        let orders: Vec<BigInt> = q.iter().map(|s| s.order.clone()).collect();
        assert_eq!(orders, v(&[2, 4]));
    }

    #[test]
    fn intersections() {
        let l = Lattice::span_vectors(3, &[v(&[1, 1, 0]), v(&[0, 2, 1])]);
        let i = l.intersect_coordinates(&[0, 1]);
        assert_eq!(i.rank(), 1);
        assert!(i.contains(&v(&[1, 1, 0])));
        assert!(!l.contains(&v(&[0, 1, 0])));
        assert_eq!(l.coordinates(&v(&[1, 3, 1])), Some(v(&[1, 1])));
    }
}
