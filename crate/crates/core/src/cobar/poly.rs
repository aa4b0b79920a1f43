//! Commutative polynomials over Z in the variables `v_i` and `t(j)_i`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

/// Exponent vector; its layout is fixed by a [`VarLayout`].
pub type Mono = Box<[u8]>;

/// Variable order: `v_1..v_n`, then `t(1)_1..t(1)_n`, ..., `t(f)_1..t(f)_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VarLayout {
    pub n: usize,
    pub factors: usize,
}

impl VarLayout {
    pub fn new(n: usize, factors: usize) -> Self {
        VarLayout { n, factors }
    }

    pub fn len(&self) -> usize {
        self.n * (1 + self.factors)
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Index of `v_i`, `1 <= i <= n`.
    pub fn v(&self, i: usize) -> usize {
        debug_assert!((1..=self.n).contains(&i));
        i - 1
    }

    /// Index of `t(j)_i`, `1 <= j <= factors`.
    pub fn t(&self, j: usize, i: usize) -> usize {
        debug_assert!((1..=self.factors).contains(&j) && (1..=self.n).contains(&i));
        self.n * j + i - 1
    }

    pub fn one(&self) -> Mono {
        vec![0u8; self.len()].into_boxed_slice()
    }

    /// Internal degree `|v_i| = |t_i| = 2(2^i - 1)`.
    pub fn var_degree(&self, idx: usize) -> i64 {
        let i = idx % self.n + 1;
        2 * ((1i64 << i) - 1)
    }

    pub fn degree(&self, m: &[u8]) -> i64 {
        m.iter().enumerate().map(|(k, &e)| e as i64 * self.var_degree(k)).sum()
    }

    /// Exponents of `t(j)_1..t(j)_n`.
    pub fn factor<'a>(&self, m: &'a [u8], j: usize) -> &'a [u8] {
        &m[self.n * j..self.n * (j + 1)]
    }

    pub fn v_part<'a>(&self, m: &'a [u8]) -> &'a [u8] {
        &m[..self.n]
    }

    pub fn name(&self, idx: usize) -> String {
        let j = idx / self.n;
        let i = idx % self.n + 1;
        if j == 0 {
            format!("v{i}")
        } else {
            format!("t({j}){i}")
        }
    }
}

/// Ring of coefficients used by [`Poly`].
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn from_i64(x: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl Coeff for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_i64(x: i64) -> Self {
        BigInt::from(x)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Coeff for i128 {
    fn zero() -> Self {
        0
    }
    fn from_i64(x: i64) -> Self {
        x as i128
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, o: &Self) -> Self {
        self.checked_add(*o).expect("cobar coefficient overflow")
    }
    fn mul(&self, o: &Self) -> Self {
        self.checked_mul(*o).expect("cobar coefficient overflow")
    }
    fn neg(&self) -> Self {
        -*self
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly<C> {
    terms: BTreeMap<Mono, C>,
}

impl<C: Coeff> Default for Poly<C> {
    fn default() -> Self {
        Poly { terms: BTreeMap::new() }
    }
}

impl<C: Coeff> Poly<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: Mono, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn constant(layout: &VarLayout, c: C) -> Self {
        Self::monomial(layout.one(), c)
    }

    pub fn var(layout: &VarLayout, idx: usize) -> Self {
        let mut m = layout.one();
        m[idx] = 1;
        Self::monomial(m, C::from_i64(1))
    }

    pub fn add_term(&mut self, m: Mono, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x = x.add(&c);
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &C)> {
        self.terms.iter()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.neg());
        }
        r
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut r = Self::zero();
        for (m, c) in &self.terms {
            r.add_term(m.clone(), c.mul(k));
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m: Mono = m1.iter().zip(m2.iter()).map(|(a, b)| a.checked_add(*b).expect("exponent overflow")).collect();
                r.add_term(m, c1.mul(c2));
            }
        }
        r
    }

    /// Product with a single monomial `x^m`.
    pub fn mul_mono(&self, m: &[u8]) -> Self {
        let mut r = Self::zero();
        for (m1, c1) in &self.terms {
            let mm: Mono = m1.iter().zip(m.iter()).map(|(a, b)| a + b).collect();
            r.terms.insert(mm, c1.clone());
        }
        r
    }

    pub fn pow(&self, layout: &VarLayout, e: u32) -> Self {
        let mut r = Self::constant(layout, C::from_i64(1));
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    /// Applies the ring map sending variable `k` to `images[k]` (`None` keeps it).
    pub fn substitute(&self, layout: &VarLayout, images: &[Option<Poly<C>>]) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut fixed = layout.one();
            let mut acc = Self::constant(layout, c.clone());
            for (k, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match &images[k] {
                    Some(p) => acc = acc.mul(&p.pow(layout, e as u32)),
                    None => fixed[k] = e,
                }
            }
            out = out.add(&acc.mul_mono(&fixed));
        }
        out
    }

    /// Moves exponents from one layout to another through an index map.
    pub fn relayout(&self, target: &VarLayout, map: impl Fn(usize) -> usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut nm = target.one();
            for (k, &e) in m.iter().enumerate() {
                if e > 0 {
                    nm[map(k)] += e;
                }
            }
            out.add_term(nm, c.clone());
        }
        out
    }

    /// Whether every term has internal degree `d`.
    pub fn is_homogeneous_of(&self, layout: &VarLayout, d: i64) -> bool {
        self.terms.keys().all(|m| layout.degree(m) == d)
    }

    pub fn display(&self, layout: &VarLayout) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in &self.terms {
            let mut s = Vec::new();
            for (k, &e) in m.iter().enumerate() {
                if e == 1 {
                    s.push(layout.name(k));
                } else if e > 1 {
                    s.push(format!("{}^{e}", layout.name(k)));
                }
            }
            let mono = s.join(" ");
            parts.push(match (c.to_string().as_str(), mono.is_empty()) {
                (c, true) => c.to_string(),
                ("1", false) => mono,
                (c, false) => format!("{c} {mono}"),
            });
        }
        parts.join(" + ")
    }
}

impl Poly<BigInt> {
    /// Exact division by an integer; `None` if some coefficient is not divisible.
    pub fn div_exact(&self, k: &BigInt) -> Option<Self> {
        let mut r = Self::zero();
        for (m, c) in &self.terms {
            let (q, rem) = c.div_rem(k);
            if !Zero::is_zero(&rem) {
                return None;
            }
            r.add_term(m.clone(), q);
        }
        Some(r)
    }

    pub fn to_i128(&self) -> Option<Poly<i128>> {
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            r.add_term(m.clone(), c.to_i128()?);
        }
        Some(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial() {
        let l = VarLayout::new(1, 1);
        let x = Poly::<i128>::var(&l, l.v(1)).add(&Poly::var(&l, l.t(1, 1)).scale(&2));
        let p = x.pow(&l, 3);
        assert_eq!(p.len(), 4);
        assert!(p.is_homogeneous_of(&l, 6));
        assert_eq!(p.display(&l), "8 t(1)1^3 + 12 v1 t(1)1^2 + 6 v1^2 t(1)1 + v1^3");
    }
}
