//! Homotopy of the equivariant points `uF2`, `uZ2` and their tri-graded forms.
//!
//! `uF2` has one `Z/2` per degree of the positive cone `a^i u^j` and of the
//! theta cone `theta/(a^k u^n)`. In `uZ2`, `u` denotes `u_{2 sigma}`; the cone
//! `a^i u^j` is `Z2` at `i = 0` and `Z/2` otherwise, `2/u^n` is `Z2`, and the
//! theta cone is `Z/2`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grading::{RODegree, TriDegree};
use crate::group::{GroupPresentation, Order};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PointRing {
    #[serde(rename = "uF2")]
    UF2,
    #[serde(rename = "uZ2")]
    UZ2,
}

impl PointRing {
    pub fn parse(s: &str) -> Option<PointRing> {
        match s {
            "uF2" | "uf2" | "F2" => Some(PointRing::UF2),
            "uZ2" | "uz2" | "Z2" => Some(PointRing::UZ2),
            _ => None,
        }
    }
}

impl fmt::Display for PointRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PointRing::UF2 => "uF2",
            PointRing::UZ2 => "uZ2",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Cone {
    /// `a^i u^j`.
    Positive,
    /// `2/u^j` with `j >= 1`; only in `uZ2`.
    TwoTower,
    /// `theta/(a^i u^j)`.
    Theta,
}

/// An additive generator of `uF2` or `uZ2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PointBasisElement {
    pub ring: PointRing,
    pub cone: Cone,
    /// Exponent of `a` (unused in the two-tower).
    pub i: u32,
    /// Exponent of `u`.
    pub j: u32,
}

impl PointBasisElement {
    pub fn one(ring: PointRing) -> Self {
        Self::positive(ring, 0, 0)
    }

    pub fn positive(ring: PointRing, i: u32, j: u32) -> Self {
        PointBasisElement { ring, cone: Cone::Positive, i, j }
    }

    pub fn theta(ring: PointRing, i: u32, j: u32) -> Self {
        PointBasisElement { ring, cone: Cone::Theta, i, j }
    }

    /// `2/u^j` in `uZ2`, `j >= 1`.
    pub fn two_tower(j: u32) -> Self {
        assert!(j >= 1, "two-tower exponent starts at 1");
        PointBasisElement { ring: PointRing::UZ2, cone: Cone::TwoTower, i: 0, j }
    }

    pub fn degree(&self) -> RODegree {
        let (i, j) = (self.i as i64, self.j as i64);
        match (self.ring, self.cone) {
            (PointRing::UF2, Cone::Positive) => RODegree::new(j, -i - j),
            (PointRing::UF2, Cone::Theta) => RODegree::new(-2 - j, 2 + i + j),
            (PointRing::UZ2, Cone::Positive) => RODegree::new(2 * j, -i - 2 * j),
            (PointRing::UZ2, Cone::TwoTower) => RODegree::new(-2 * j, 2 * j),
            (PointRing::UZ2, Cone::Theta) => RODegree::new(-3 - 2 * j, 3 + i + 2 * j),
            (PointRing::UF2, Cone::TwoTower) => unreachable!("no two-tower in uF2"),
        }
    }

    pub fn order(&self) -> Order {
        match (self.ring, self.cone) {
            (PointRing::UZ2, Cone::Positive) if self.i == 0 => Order::Z2Adic,
            (PointRing::UZ2, Cone::TwoTower) => Order::Z2Adic,
            _ => Order::Cyclic(2),
        }
    }

    pub fn is_torsion(&self) -> bool {
        !self.order().is_free()
    }

    pub fn label(&self) -> String {
        let mono = |i: u32, j: u32| -> String {
            let mut parts = Vec::new();
            if i > 0 {
                parts.push(power("a", i));
            }
            if j > 0 {
                parts.push(power("u", j));
            }
            parts.join(" ")
        };
        match self.cone {
            Cone::Positive => {
                let m = mono(self.i, self.j);
                if m.is_empty() {
                    "1".into()
                } else {
                    m
                }
            }
            Cone::TwoTower => format!("2/{}", power("u", self.j)),
            Cone::Theta => {
                let m = mono(self.i, self.j);
                if m.is_empty() {
                    "theta".into()
                } else if m.contains(' ') {
                    format!("theta/({m})")
                } else {
                    format!("theta/{m}")
                }
            }
        }
    }
}

impl fmt::Display for PointBasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

pub(crate) fn power(name: &str, e: impl Into<i64>) -> String {
    match e.into() {
        1 => name.to_string(),
        e => format!("{name}^{e}"),
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PointError {
    #[error("factors live in different point rings")]
    MixedRings,
    #[error("prime {0} is even")]
    EvenPrime(u64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
}

/// Integer combination of basis elements; coefficients of `Z/2` classes are reduced mod 2.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalSum {
    terms: BTreeMap<PointBasisElement, i64>,
}

impl FormalSum {
    pub fn zero() -> Self {
        FormalSum::default()
    }

    pub fn from_term(coeff: i64, b: PointBasisElement) -> Self {
        let mut s = FormalSum::zero();
        s.add_term(coeff, b);
        s
    }

    pub fn add_term(&mut self, coeff: i64, b: PointBasisElement) {
        let c = self.terms.get(&b).copied().unwrap_or(0) + coeff;
        let c = if b.is_torsion() { c.rem_euclid(2) } else { c };
        if c == 0 {
            self.terms.remove(&b);
        } else {
            self.terms.insert(b, c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PointBasisElement, i64)> {
        self.terms.iter().map(|(b, c)| (b, *c))
    }

    /// The unique term, if there is exactly one.
    pub fn single(&self) -> Option<(PointBasisElement, i64)> {
        (self.terms.len() == 1).then(|| self.terms.iter().map(|(b, c)| (*b, *c)).next().unwrap())
    }
}

impl fmt::Display for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| if *c == 1 { b.label() } else { format!("{c}*{}", b.label()) })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// The basis element of `ring` in degree `d`, if any.
pub fn point_basis(ring: PointRing, d: RODegree) -> Option<PointBasisElement> {
    let (p, q) = (d.p, d.q);
    match ring {
        PointRing::UF2 => {
            if p >= 0 && p + q <= 0 {
                Some(PointBasisElement::positive(ring, (-(p + q)) as u32, p as u32))
            } else if p <= -2 && p + q >= 0 {
                Some(PointBasisElement::theta(ring, (p + q) as u32, (-2 - p) as u32))
            } else {
                None
            }
        }
        PointRing::UZ2 => {
            if p >= 0 && p % 2 == 0 && p + q <= 0 {
                Some(PointBasisElement::positive(ring, (-(p + q)) as u32, (p / 2) as u32))
            } else if p <= -2 && p % 2 == 0 && p + q == 0 {
                Some(PointBasisElement::two_tower((-p / 2) as u32))
            } else if p <= -3 && p % 2 != 0 && p + q >= 0 {
                Some(PointBasisElement::theta(ring, (p + q) as u32, ((-3 - p) / 2) as u32))
            } else {
                None
            }
        }
    }
}

pub fn point_group(ring: PointRing, d: RODegree) -> GroupPresentation {
    match point_basis(ring, d) {
        Some(b) => GroupPresentation::single(b.order(), b.label()),
        None => GroupPresentation::zero(),
    }
}

pub fn uf2_group(p: i64, q: i64) -> GroupPresentation {
    point_group(PointRing::UF2, RODegree::new(p, q))
}

pub fn uz2_group(p: i64, q: i64) -> GroupPresentation {
    point_group(PointRing::UZ2, RODegree::new(p, q))
}

/// Product of two basis elements.
pub fn point_multiply(ring: PointRing, x: &PointBasisElement, y: &PointBasisElement) -> Result<FormalSum, PointError> {
    if x.ring != ring || y.ring != ring {
        return Err(PointError::MixedRings);
    }
    let (x, y) = if x.cone <= y.cone { (x, y) } else { (y, x) };
    let out = match (x.cone, y.cone) {
        (Cone::Positive, Cone::Positive) => {
            FormalSum::from_term(1, PointBasisElement::positive(ring, x.i + y.i, x.j + y.j))
        }
        (Cone::Positive, Cone::Theta) => {
            if y.i >= x.i && y.j >= x.j {
                FormalSum::from_term(1, PointBasisElement::theta(ring, y.i - x.i, y.j - x.j))
            } else {
                FormalSum::zero()
            }
        }
        (Cone::Positive, Cone::TwoTower) => {
            if x.i > 0 {
                FormalSum::zero()
            } else if x.j < y.j {
                FormalSum::from_term(1, PointBasisElement::two_tower(y.j - x.j))
            } else {
                FormalSum::from_term(2, PointBasisElement::positive(ring, 0, x.j - y.j))
            }
        }
        (Cone::TwoTower, Cone::TwoTower) => FormalSum::from_term(2, PointBasisElement::two_tower(x.j + y.j)),
        (Cone::TwoTower, Cone::Theta) | (Cone::Theta, Cone::Theta) => FormalSum::zero(),
        _ => unreachable!("cones are sorted"),
    };
    Ok(out)
}

/// Bilinear extension of [`point_multiply`].
pub fn multiply_sums(ring: PointRing, x: &FormalSum, y: &FormalSum) -> Result<FormalSum, PointError> {
    let mut out = FormalSum::zero();
    for (bx, cx) in x.terms() {
        for (by, cy) in y.terms() {
            for (b, c) in point_multiply(ring, bx, by)?.terms() {
                out.add_term(cx * cy * c, *b);
            }
        }
    }
    Ok(out)
}

/// Label of `ta^e` times a point label.
pub fn ta_label(e: i64, base: &str) -> String {
    match (e, base) {
        (0, b) => b.to_string(),
        (e, "1") => power("ta", e),
        (e, b) => format!("{} {b}", power("ta", e)),
    }
}

fn tag_with_ta(g: GroupPresentation, e: i64) -> GroupPresentation {
    g.relabel(|l| ta_label(e, l))
}

fn parse_power(tok: &str, name: &str) -> Option<u32> {
    let rest = tok.strip_prefix(name)?;
    if rest.is_empty() {
        return Some(1);
    }
    rest.strip_prefix('^')?.parse().ok().filter(|&e| e >= 1)
}

fn parse_mono(s: &str) -> Option<(u32, u32)> {
    let (mut i, mut j) = (0, 0);
    for tok in s.split(' ') {
        if i == 0 && j == 0 {
            if let Some(e) = parse_power(tok, "a") {
                i = e;
                continue;
            }
        }
        j = match (j, parse_power(tok, "u")) {
            (0, Some(e)) => e,
            _ => return None,
        };
    }
    Some((i, j))
}

/// Inverse of [`ta_label`] composed with [`PointBasisElement::label`]: `(ta exponent, basis element)`.
pub fn parse_label(ring: PointRing, s: &str) -> Option<(i64, PointBasisElement)> {
    let (head, rest) = s.split_once(' ').unwrap_or((s, ""));
    let (e, base) = match parse_power(head, "ta") {
        Some(e) if rest.is_empty() => (e as i64, "1"),
        Some(e) => (e as i64, rest),
        None => (0, s),
    };
    let b = if base == "1" {
        PointBasisElement::one(ring)
    } else if let Some(t) = base.strip_prefix("2/") {
        if ring != PointRing::UZ2 || t.contains(' ') {
            return None;
        }
        PointBasisElement::two_tower(parse_power(t, "u")?)
    } else if let Some(t) = base.strip_prefix("theta") {
        let (i, j) = match t.strip_prefix('/') {
            None if t.is_empty() => (0, 0),
            None => return None,
            Some(m) => match m.strip_prefix('(').and_then(|m| m.strip_suffix(')')) {
                Some(inner) if inner.contains(' ') => parse_mono(inner)?,
                Some(_) => return None,
                None if !m.contains(' ') => parse_mono(m)?,
                None => return None,
            },
        };
        PointBasisElement::theta(ring, i, j)
    } else {
        let (i, j) = parse_mono(base)?;
        PointBasisElement::positive(ring, i, j)
    };
    (ta_label(e, &b.label()) == s).then_some((e, b))
}

/// `pi_{p,q,w} MF2`: the `uF2` class in `(p, q)` times `ta^{-w}`, zero for `w > 0`.
pub fn mf2_group(d: TriDegree) -> GroupPresentation {
    if d.w > 0 {
        return GroupPresentation::zero();
    }
    tag_with_ta(uf2_group(d.p, d.q), -d.w)
}

/// `pi_{p,q,w} MZ2`: the `uZ2` class in `(p, q)` times `ta^{-w}`, zero for `w > 0`.
pub fn mz2_group(d: TriDegree) -> GroupPresentation {
    if d.w > 0 {
        return GroupPresentation::zero();
    }
    tag_with_ta(uz2_group(d.p, d.q), -d.w)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

/// `pi_{p,q,w} MF_p` for an odd prime: `F_p{u2^{p/2} ta^{-w}}` when `p` is even, `q = -p`, `w <= 0`.
pub fn mfp_group(prime: u64, d: TriDegree) -> Result<GroupPresentation, PointError> {
    if prime % 2 == 0 {
        return Err(PointError::EvenPrime(prime));
    }
    if !is_prime(prime) {
        return Err(PointError::NotPrime(prime));
    }
    if d.p % 2 != 0 || d.q != -d.p || d.w > 0 {
        return Ok(GroupPresentation::zero());
    }
    let k = d.p / 2;
    let base = if k == 0 { "1".to_string() } else { power("u2", k) };
    Ok(GroupPresentation::single(Order::Cyclic(prime), ta_label(-d.w, &base)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uf(i: u32, j: u32) -> PointBasisElement {
        PointBasisElement::positive(PointRing::UF2, i, j)
    }

    #[test]
    fn basis_round_trip() {
        for ring in [PointRing::UF2, PointRing::UZ2] {
            for p in -15..=15 {
                for q in -15..=15 {
                    let d = RODegree::new(p, q);
                    if let Some(b) = point_basis(ring, d) {
                        assert_eq!(b.degree(), d, "{ring} {d}");
                    }
                }
            }
        }
    }

    #[test]
    fn labels() {
        assert_eq!(uf(0, 0).label(), "1");
        assert_eq!(uf(2, 3).label(), "a^2 u^3");
        assert_eq!(PointBasisElement::theta(PointRing::UF2, 1, 2).label(), "theta/(a u^2)");
        assert_eq!(PointBasisElement::theta(PointRing::UF2, 0, 3).label(), "theta/u^3");
        assert_eq!(PointBasisElement::two_tower(4).label(), "2/u^4");
    }

    #[test]
    fn theta_products() {
        let th = PointBasisElement::theta(PointRing::UF2, 2, 1);
        let r = point_multiply(PointRing::UF2, &uf(1, 1), &th).unwrap();
        assert_eq!(r.single(), Some((PointBasisElement::theta(PointRing::UF2, 1, 0), 1)));
        let r = point_multiply(PointRing::UF2, &uf(0, 2), &th).unwrap();
        assert!(r.is_zero());
        assert!(point_multiply(PointRing::UF2, &th, &th).unwrap().is_zero());
    }

    #[test]
    fn two_tower_products() {
        let z = PointRing::UZ2;
        let u = PointBasisElement::positive(z, 0, 1);
        let t1 = PointBasisElement::two_tower(1);
        let t3 = PointBasisElement::two_tower(3);
        assert_eq!(point_multiply(z, &u, &t1).unwrap().single(), Some((PointBasisElement::one(z), 2)));
        assert_eq!(point_multiply(z, &u, &t3).unwrap().single(), Some((PointBasisElement::two_tower(2), 1)));
        assert_eq!(point_multiply(z, &t1, &t3).unwrap().single(), Some((PointBasisElement::two_tower(4), 2)));
        let a = PointBasisElement::positive(z, 1, 0);
        assert!(point_multiply(z, &a, &t1).unwrap().is_zero());
        // 2 times a Z/2 class vanishes.
        let au = PointBasisElement::positive(z, 1, 1);
        assert!(point_multiply(z, &au, &t1).unwrap().is_zero());
        assert!(multiply_sums(z, &FormalSum::from_term(2, PointBasisElement::one(z)), &FormalSum::from_term(1, a))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn mixed_rings() {
        let z = PointBasisElement::one(PointRing::UZ2);
        assert_eq!(point_multiply(PointRing::UF2, &uf(0, 0), &z), Err(PointError::MixedRings));
    }

    #[test]
    fn odd_primes() {
        let g = mfp_group(3, TriDegree::new(-4, 4, -2)).unwrap();
        assert_eq!(g.shape(), vec![Order::Cyclic(3)]);
        assert_eq!(g.summands()[0].label, "ta^2 u2^-2");
        assert!(mfp_group(3, TriDegree::new(-4, 3, 0)).unwrap().is_zero());
        assert_eq!(mfp_group(2, TriDegree::ZERO), Err(PointError::EvenPrime(2)));
        assert_eq!(mfp_group(9, TriDegree::ZERO), Err(PointError::NotPrime(9)));
    }

    #[test]
    fn tau_class() {
        let g = mf2_group(TriDegree::new(1, -1, -1));
        assert_eq!(g.summands()[0].label, "ta u");
        assert!(mf2_group(TriDegree::new(0, 0, 1)).is_zero());
    }

    #[test]
    fn labels_parse_back() {
        for ring in [PointRing::UF2, PointRing::UZ2] {
            for p in -12..=12 {
                for q in -12..=12 {
                    let Some(b) = point_basis(ring, RODegree::new(p, q)) else { continue };
                    for e in 0..3 {
                        assert_eq!(parse_label(ring, &ta_label(e, &b.label())), Some((e, b)));
                    }
                }
            }
        }
        for bad in ["", "ta^0", "u a", "theta/a u", "theta/(u)", "2/u", "x"] {
            assert_eq!(parse_label(PointRing::UF2, bad), None, "{bad}");
        }
    }
}
