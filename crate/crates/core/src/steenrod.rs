//! The tri-graded dual Steenrod algebra over `MF2`.
//!
//! Monomials are `ta^e * x * tau_0^{e0} tau_1^{e1} ... * xi_1^{r1} xi_2^{r2} ...` with `x` a class of
//! `uF2`. The only relation is `tau_i^2 = ta a tau_{i+1} + ta u xi_{i+1} + ta a tau_0 xi_{i+1}`; in
//! normal form every `tau_i` exponent is 0 or 1.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grading::{tau_degree, xi_degree, TriDegree};
use crate::point::{point_basis, point_multiply, power, PointBasisElement, PointRing};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SteenrodError {
    #[error("cannot parse `{0}`")]
    Parse(String),
}

/// A monomial with an `MF2` coefficient `ta^ta * coeff`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SteenrodMonomial {
    pub ta: u32,
    pub coeff: PointBasisElement,
    /// `eps[i]` is the exponent of `tau_i`; no trailing zeros.
    pub eps: Vec<u8>,
    /// `xi[i - 1]` is the exponent of `xi_i`; no trailing zeros.
    pub xi: Vec<u32>,
}

fn trim<T: Default + PartialEq>(v: &mut Vec<T>) {
    while v.last().is_some_and(|x| *x == T::default()) {
        v.pop();
    }
}

impl SteenrodMonomial {
    pub fn one() -> Self {
        SteenrodMonomial { ta: 0, coeff: PointBasisElement::one(PointRing::UF2), eps: Vec::new(), xi: Vec::new() }
    }

    pub fn new(ta: u32, coeff: PointBasisElement, mut eps: Vec<u8>, mut xi: Vec<u32>) -> Self {
        assert_eq!(coeff.ring, PointRing::UF2, "coefficients live in uF2");
        trim(&mut eps);
        trim(&mut xi);
        SteenrodMonomial { ta, coeff, eps, xi }
    }

    pub fn tau(i: usize) -> Self {
        let mut eps = vec![0; i + 1];
        eps[i] = 1;
        Self::new(0, PointBasisElement::one(PointRing::UF2), eps, Vec::new())
    }

    pub fn xi(i: usize) -> Self {
        assert!(i >= 1);
        let mut xi = vec![0; i];
        xi[i - 1] = 1;
        Self::new(0, PointBasisElement::one(PointRing::UF2), Vec::new(), xi)
    }

    pub fn is_admissible(&self) -> bool {
        self.eps.iter().all(|&e| e <= 1)
    }

    /// Degree of the generator part, without the coefficient.
    pub fn generator_degree(&self) -> TriDegree {
        let mut d = TriDegree::ZERO;
        for (i, &e) in self.eps.iter().enumerate() {
            d = d + (e as i64) * tau_degree(i as u32);
        }
        for (i, &r) in self.xi.iter().enumerate() {
            d = d + (r as i64) * xi_degree(i as u32 + 1);
        }
        d
    }

    pub fn degree(&self) -> TriDegree {
        let c = self.coeff.degree();
        TriDegree::new(c.p, c.q, -(self.ta as i64)) + self.generator_degree()
    }

    /// Product of two monomials before normalization; `None` when the coefficient product vanishes.
    fn raw_product(&self, o: &SteenrodMonomial) -> Option<SteenrodMonomial> {
        let c = point_multiply(PointRing::UF2, &self.coeff, &o.coeff).expect("both in uF2");
        let (coeff, _) = c.single()?;
        let n = self.eps.len().max(o.eps.len());
        let eps = (0..n).map(|i| self.eps.get(i).unwrap_or(&0) + o.eps.get(i).unwrap_or(&0)).collect();
        let n = self.xi.len().max(o.xi.len());
        let xi = (0..n).map(|i| self.xi.get(i).unwrap_or(&0) + o.xi.get(i).unwrap_or(&0)).collect();
        Some(SteenrodMonomial::new(self.ta + o.ta, coeff, eps, xi))
    }

    fn times_coeff(&self, ta: u32, a: u32, u: u32) -> Option<SteenrodMonomial> {
        let m = SteenrodMonomial::new(ta, PointBasisElement::positive(PointRing::UF2, a, u), Vec::new(), Vec::new());
        self.raw_product(&m)
    }
}

impl fmt::Display for SteenrodMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.ta > 0 {
            parts.push(power("ta", self.ta));
        }
        let c = self.coeff.label();
        if c != "1" {
            parts.push(c);
        }
        for (i, &e) in self.eps.iter().enumerate() {
            if e > 0 {
                parts.push(power(&format!("t{i}"), e));
            }
        }
        for (i, &r) in self.xi.iter().enumerate() {
            if r > 0 {
                parts.push(power(&format!("x{}", i + 1), r));
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

/// An F2-linear combination of monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SteenrodElement {
    terms: BTreeSet<SteenrodMonomial>,
}

impl SteenrodElement {
    pub fn zero() -> Self {
        SteenrodElement::default()
    }

    pub fn from_monomial(m: SteenrodMonomial) -> Self {
        let mut e = Self::zero();
        e.toggle(m);
        e
    }

    /// Adds `m` with coefficient 1 mod 2.
    pub fn toggle(&mut self, m: SteenrodMonomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add(&mut self, o: &SteenrodElement) {
        for m in &o.terms {
            self.toggle(m.clone());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &SteenrodMonomial> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_normal(&self) -> bool {
        self.terms.iter().all(|m| m.is_admissible())
    }

    /// The common degree of all terms, if homogeneous and nonzero.
    pub fn degree(&self) -> Option<TriDegree> {
        let mut it = self.terms.iter().map(|m| m.degree());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn parse(s: &str) -> Result<SteenrodElement, SteenrodError> {
        parse_element(s)
    }
}

impl fmt::Display for SteenrodElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|m| m.to_string()).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// The three terms replacing `tau_i^2`, applied to `m` with `eps[i]` already lowered by 2.
fn square_rewrite(m: &SteenrodMonomial, i: usize) -> Vec<SteenrodMonomial> {
    let mut base = m.clone();
    base.eps[i] -= 2;
    let bump = |v: &SteenrodMonomial, tau: Option<usize>, xi: Option<usize>| {
        let mut v = v.clone();
        if let Some(t) = tau {
            if v.eps.len() <= t {
                v.eps.resize(t + 1, 0);
            }
            v.eps[t] += 1;
        }
        if let Some(x) = xi {
            if v.xi.len() < x {
                v.xi.resize(x, 0);
            }
            v.xi[x - 1] += 1;
        }
        SteenrodMonomial::new(v.ta, v.coeff, v.eps, v.xi)
    };
    let mut out = Vec::with_capacity(3);
    if let Some(v) = base.times_coeff(1, 1, 0) {
        out.push(bump(&v, Some(i + 1), None));
    }
    if let Some(v) = base.times_coeff(1, 0, 1) {
        out.push(bump(&v, None, Some(i + 1)));
    }
    if let Some(v) = base.times_coeff(1, 1, 0) {
        out.push(bump(&v, Some(0), Some(i + 1)));
    }
    out
}

/// Rewrites every `tau_i^2`, lowest index first, until all `tau` exponents are 0 or 1.
///
/// Each rewrite lowers the total `tau` exponent by one, so the process terminates.
pub fn normal_form(m: &SteenrodMonomial) -> SteenrodElement {
    let mut out = SteenrodElement::zero();
    let mut work = vec![m.clone()];
    while let Some(x) = work.pop() {
        match x.eps.iter().position(|&e| e >= 2) {
            None => out.toggle(x),
            Some(i) => work.extend(square_rewrite(&x, i)),
        }
    }
    out
}

pub fn normalize(x: &SteenrodElement) -> SteenrodElement {
    let mut out = SteenrodElement::zero();
    for m in x.terms() {
        out.add(&normal_form(m));
    }
    out
}

pub fn steenrod_multiply(x: &SteenrodElement, y: &SteenrodElement) -> SteenrodElement {
    let mut out = SteenrodElement::zero();
    for a in x.terms() {
        for b in y.terms() {
            if let Some(m) = a.raw_product(b) {
                out.add(&normal_form(&m));
            }
        }
    }
    out
}

/// Admissible generator monomials `m` with `p(m) <= max_p`, as `(eps, xi)`.
fn admissible_generators(max_p: i64) -> Vec<(Vec<u8>, Vec<u32>)> {
    let mut gens: Vec<(bool, usize, TriDegree)> = Vec::new();
    let mut i = 0usize;
    while (1i64 << i) <= max_p {
        gens.push((true, i, tau_degree(i as u32)));
        i += 1;
    }
    let mut i = 1usize;
    while (1i64 << i) - 1 <= max_p {
        gens.push((false, i, xi_degree(i as u32)));
        i += 1;
    }
    let mut out = Vec::new();
    let mut eps = Vec::new();
    let mut xi = Vec::new();
    fn rec(
        k: usize,
        budget: i64,
        gens: &[(bool, usize, TriDegree)],
        eps: &mut Vec<u8>,
        xi: &mut Vec<u32>,
        out: &mut Vec<(Vec<u8>, Vec<u32>)>,
    ) {
        if k == gens.len() {
            let (mut e, mut x) = (eps.clone(), xi.clone());
            trim(&mut e);
            trim(&mut x);
            out.push((e, x));
            return;
        }
        let (is_tau, idx, d) = gens[k];
        let max_exp = if is_tau { 1 } else { budget / d.p };
        for e in 0..=max_exp {
            if is_tau {
                if eps.len() <= idx {
                    eps.resize(idx + 1, 0);
                }
                eps[idx] = e as u8;
            } else {
                if xi.len() < idx {
                    xi.resize(idx, 0);
                }
                xi[idx - 1] = e as u32;
            }
            rec(k + 1, budget - e * d.p, gens, eps, xi, out);
        }
        if is_tau {
            eps[idx] = 0;
        } else {
            xi[idx - 1] = 0;
        }
    }
    if max_p >= 0 {
        rec(0, max_p, &gens, &mut eps, &mut xi, &mut out);
    }
    out
}

/// Admissible monomials spanning the degree-`d` part as an F2 vector space.
pub fn steenrod_basis(d: TriDegree) -> Vec<SteenrodMonomial> {
    let bound = d.p.max(d.p + d.q);
    let mut out = Vec::new();
    for (eps, xi) in admissible_generators(bound) {
        let g = SteenrodMonomial::new(0, PointBasisElement::one(PointRing::UF2), eps, xi);
        let gd = g.generator_degree();
        let e = gd.w - d.w;
        if e < 0 {
            continue;
        }
        let rest = crate::grading::RODegree::new(d.p - gd.p, d.q - gd.q);
        if let Some(c) = point_basis(PointRing::UF2, rest) {
            out.push(SteenrodMonomial { ta: e as u32, coeff: c, eps: g.eps, xi: g.xi });
        }
    }
    out.sort();
    out
}

/// Dimension over F2 of the degree-`d` part.
pub fn steenrod_rank(d: TriDegree) -> usize {
    steenrod_basis(d).len()
}

fn tokenize(s: &str) -> Vec<String> {
    let mut toks = Vec::new();
    let mut cur = String::new();
    let mut depth = 0;
    for ch in s.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                cur.push(ch);
            }
            c if depth == 0 && (c.is_whitespace() || c == '*' || c == '.') => {
                if !cur.is_empty() {
                    toks.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        toks.push(cur);
    }
    toks
}

fn parse_power(tok: &str) -> Option<(&str, u32)> {
    match tok.split_once('^') {
        Some((b, e)) => Some((b, e.parse().ok()?)),
        None => Some((tok, 1)),
    }
}

fn parse_divisor(s: &str) -> Option<(u32, u32)> {
    let inner = s.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(s);
    let (mut a, mut u) = (0, 0);
    for t in tokenize(inner) {
        match parse_power(&t)? {
            ("a", e) => a += e,
            ("u", e) => u += e,
            _ => return None,
        }
    }
    Some((a, u))
}

fn parse_monomial(term: &str) -> Result<Option<SteenrodMonomial>, SteenrodError> {
    let err = || SteenrodError::Parse(term.trim().to_string());
    let (mut ta, mut a, mut u) = (0u32, 0u32, 0u32);
    let mut theta: Option<(u32, u32)> = None;
    let mut thetas = 0;
    let mut eps: Vec<u8> = Vec::new();
    let mut xi: Vec<u32> = Vec::new();
    let toks = tokenize(term);
    if toks.is_empty() {
        return Err(err());
    }
    for t in toks {
        if let Some(rest) = t.strip_prefix("theta") {
            thetas += 1;
            theta = Some(match rest.strip_prefix('/') {
                Some(div) => parse_divisor(div).ok_or_else(err)?,
                None if rest.is_empty() => (0, 0),
                None => return Err(err()),
            });
            continue;
        }
        let (base, e) = parse_power(&t).ok_or_else(err)?;
        let index = |prefix: &str, long: &str| -> Option<usize> {
            base.strip_prefix(long).or_else(|| base.strip_prefix(prefix)).and_then(|d| d.parse().ok())
        };
        match base {
            "1" => {}
            "ta" => ta += e,
            "a" => a += e,
            "u" => u += e,
            _ => {
                if let Some(i) = index("t", "tau_") {
                    if eps.len() <= i {
                        eps.resize(i + 1, 0);
                    }
                    eps[i] = eps[i].checked_add(u8::try_from(e).map_err(|_| err())?).ok_or_else(err)?;
                } else if let Some(i) = index("x", "xi_").filter(|&i| i >= 1) {
                    if xi.len() < i {
                        xi.resize(i, 0);
                    }
                    xi[i - 1] += e;
                } else {
                    return Err(err());
                }
            }
        }
    }
    let coeff = match (thetas, theta) {
        (0, _) => Some(PointBasisElement::positive(PointRing::UF2, a, u)),
        (1, Some((k, n))) => (k >= a && n >= u).then(|| PointBasisElement::theta(PointRing::UF2, k - a, n - u)),
        _ => None,
    };
    Ok(coeff.map(|c| SteenrodMonomial::new(ta, c, eps, xi)))
}

/// Parses `ta^e a^i u^j t0 t1 x1^2 + ...`, also accepting `tau_i`, `xi_i`, `theta/(a^k u^n)` and `0`.
pub fn parse_element(s: &str) -> Result<SteenrodElement, SteenrodError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(SteenrodError::Parse(String::new()));
    }
    let mut out = SteenrodElement::zero();
    if s == "0" {
        return Ok(out);
    }
    for term in s.split('+') {
        if let Some(m) = parse_monomial(term)? {
            out.toggle(m);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn el(s: &str) -> SteenrodElement {
        parse_element(s).unwrap()
    }

    #[test]
    fn parse_and_display() {
        for s in ["1", "ta^2 a u^3 t0 t2 x1^2", "theta/(a u^2) t1", "x3"] {
            assert_eq!(el(s).to_string(), s);
        }
        assert_eq!(el("tau_1*xi_2"), el("t1 x2"));
        assert!(el("u theta/a").is_zero());
        assert!(parse_element("t0 bogus").is_err());
    }

    #[test]
    fn squaring_tau_zero() {
        let r = normal_form(&el("t0^2").terms().next().unwrap().clone());
        assert_eq!(r, el("ta a t1 + ta u x1 + ta a t0 x1"));
    }

    #[test]
    fn a_times_tau_zero_squared() {
        let t0 = el("t0");
        let r = steenrod_multiply(&steenrod_multiply(&el("a"), &t0), &t0);
        assert_eq!(r, el("ta a^2 t1 + ta a u x1 + ta a^2 t0 x1"));
    }

    #[test]
    fn relation_is_homogeneous() {
        for i in 0..5 {
            let lhs = 2 * tau_degree(i);
            let r = normal_form(&SteenrodMonomial::new(
                0,
                PointBasisElement::one(PointRing::UF2),
                {
                    let mut e = vec![0u8; i as usize + 1];
                    e[i as usize] = 2;
                    e
                },
                vec![],
            ));
            assert_eq!(r.degree(), Some(lhs), "i = {i}");
        }
    }

    #[test]
    fn small_ranks() {
        assert_eq!(steenrod_rank(TriDegree::new(0, 0, 0)), 1);
        // tau_0 and ta a xi_1.
        assert_eq!(steenrod_rank(TriDegree::new(1, 0, 0)), 2);
        assert_eq!(steenrod_rank(TriDegree::new(1, 1, 1)), 1);
        assert_eq!(steenrod_rank(TriDegree::new(0, 0, 1)), 0);
    }

    fn arb_monomial() -> impl Strategy<Value = SteenrodMonomial> {
        (0u32..3, 0u32..3, 0u32..3, proptest::collection::vec(0u8..2, 0..3), proptest::collection::vec(0u32..2, 0..3))
            .prop_map(|(ta, a, u, eps, xi)| SteenrodMonomial::new(ta, PointBasisElement::positive(PointRing::UF2, a, u), eps, xi))
    }

    proptest! {
        #[test]
        fn products_are_homogeneous_normal_and_commutative(x in arb_monomial(), y in arb_monomial(), z in arb_monomial()) {
            let (x, y, z) = (SteenrodElement::from_monomial(x), SteenrodElement::from_monomial(y), SteenrodElement::from_monomial(z));
            let xy = steenrod_multiply(&x, &y);
            prop_assert!(xy.is_normal());
            if let Some(d) = xy.degree() {
                prop_assert_eq!(d, x.degree().unwrap() + y.degree().unwrap());
            } else {
                prop_assert!(xy.is_zero());
            }
            prop_assert_eq!(&xy, &steenrod_multiply(&y, &x));
            prop_assert_eq!(steenrod_multiply(&xy, &z), steenrod_multiply(&x, &steenrod_multiply(&y, &z)));
        }
    }
}
