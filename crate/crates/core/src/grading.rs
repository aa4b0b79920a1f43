//! Tri-degrees, RO(C2)-degrees and the registry of named elements.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A tri-degree `(p, q, w)`: stem-like `p`, coweight-like `q`, Chow/Tate weight `w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default)]
pub struct TriDegree {
    pub p: i64,
    pub q: i64,
    pub w: i64,
}

impl TriDegree {
    pub const ZERO: TriDegree = TriDegree { p: 0, q: 0, w: 0 };

    pub const fn new(p: i64, q: i64, w: i64) -> Self {
        TriDegree { p, q, w }
    }

    pub fn as_array(self) -> [i64; 3] {
        [self.p, self.q, self.w]
    }
}

impl fmt::Display for TriDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.p, self.q, self.w)
    }
}

impl Add for TriDegree {
    type Output = TriDegree;
    fn add(self, o: TriDegree) -> TriDegree {
        TriDegree::new(self.p + o.p, self.q + o.q, self.w + o.w)
    }
}

impl Sub for TriDegree {
    type Output = TriDegree;
    fn sub(self, o: TriDegree) -> TriDegree {
        TriDegree::new(self.p - o.p, self.q - o.q, self.w - o.w)
    }
}

impl Neg for TriDegree {
    type Output = TriDegree;
    fn neg(self) -> TriDegree {
        TriDegree::new(-self.p, -self.q, -self.w)
    }
}

impl Mul<TriDegree> for i64 {
    type Output = TriDegree;
    fn mul(self, d: TriDegree) -> TriDegree {
        TriDegree::new(self * d.p, self * d.q, self * d.w)
    }
}

/// An RO(C2)-degree `p + q·σ`, written `(p, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default)]
pub struct RODegree {
    pub p: i64,
    pub q: i64,
}

impl RODegree {
    pub const ZERO: RODegree = RODegree { p: 0, q: 0 };

    pub const fn new(p: i64, q: i64) -> Self {
        RODegree { p, q }
    }
}

impl fmt::Display for RODegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

impl Add for RODegree {
    type Output = RODegree;
    fn add(self, o: RODegree) -> RODegree {
        RODegree::new(self.p + o.p, self.q + o.q)
    }
}

impl Sub for RODegree {
    type Output = RODegree;
    fn sub(self, o: RODegree) -> RODegree {
        RODegree::new(self.p - o.p, self.q - o.q)
    }
}

impl Neg for RODegree {
    type Output = RODegree;
    fn neg(self) -> RODegree {
        RODegree::new(-self.p, -self.q)
    }
}

impl Mul<RODegree> for i64 {
    type Output = RODegree;
    fn mul(self, d: RODegree) -> RODegree {
        RODegree::new(self * d.p, self * d.q)
    }
}

/// Betti realization forgets the weight.
pub fn betti_degree(d: TriDegree) -> RODegree {
    RODegree::new(d.p, d.q)
}

/// Degree after base change to C: `(p + q, w)`.
pub fn base_change_degree(d: TriDegree) -> (i64, i64) {
    (d.p + d.q, d.w)
}

/// Artin embedding of C2-equivariant degrees at weight 0.
pub fn artin_embed(d: RODegree) -> TriDegree {
    TriDegree::new(d.p, d.q, 0)
}

/// Where a named element lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Home {
    Sphere2,
    MF2,
    MZ2,
    #[serde(rename = "uF2")]
    UF2,
    #[serde(rename = "uZ2")]
    UZ2,
    Steenrod,
}

impl fmt::Display for Home {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Home::Sphere2 => "Sphere2",
            Home::MF2 => "MF2",
            Home::MZ2 => "MZ2",
            Home::UF2 => "uF2",
            Home::UZ2 => "uZ2",
            Home::Steenrod => "Steenrod",
        };
        f.write_str(s)
    }
}

/// The grading an element is recorded in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementDegree {
    Tri(TriDegree),
    RO(RODegree),
}

impl ElementDegree {
    /// Tri-degree, embedding RO-degrees at weight 0.
    pub fn to_tri(self) -> TriDegree {
        match self {
            ElementDegree::Tri(d) => d,
            ElementDegree::RO(d) => artin_embed(d),
        }
    }
}

impl fmt::Display for ElementDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementDegree::Tri(d) => d.fmt(f),
            ElementDegree::RO(d) => d.fmt(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedElement {
    pub name: String,
    pub degree: ElementDegree,
    pub home: Home,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GradingError {
    #[error("unknown element name `{0}`")]
    UnknownName(String),
}

/// Largest index registered for the families `tau_i` and `xi_i`.
pub const MAX_STEENROD_INDEX: u32 = 20;

const FIXED: &[(&str, ElementDegree, Home)] = &[
    ("ta", ElementDegree::Tri(TriDegree::new(0, 0, -1)), Home::Sphere2),
    ("a", ElementDegree::Tri(TriDegree::new(0, -1, 0)), Home::Sphere2),
    ("u", ElementDegree::Tri(TriDegree::new(1, -1, 0)), Home::MF2),
    ("rho", ElementDegree::Tri(TriDegree::new(0, -1, -1)), Home::Sphere2),
    ("tau", ElementDegree::Tri(TriDegree::new(1, -1, -1)), Home::MF2),
    ("eta", ElementDegree::Tri(TriDegree::new(0, 1, 1)), Home::Sphere2),
    ("a_sigma", ElementDegree::RO(RODegree::new(0, -1)), Home::UF2),
    ("u_sigma", ElementDegree::RO(RODegree::new(1, -1)), Home::UF2),
    ("u_2sigma", ElementDegree::RO(RODegree::new(2, -2)), Home::UZ2),
    ("theta", ElementDegree::RO(RODegree::new(-2, 2)), Home::UF2),
    ("theta_z", ElementDegree::RO(RODegree::new(-3, 3)), Home::UZ2),
];

/// Degree of `tau_i`.
pub fn tau_degree(i: u32) -> TriDegree {
    let e = 1i64 << i;
    TriDegree::new(e, e - 1, e - 1)
}

/// Degree of `xi_i`.
pub fn xi_degree(i: u32) -> TriDegree {
    let e = 1i64 << i;
    TriDegree::new(e - 1, e - 1, e - 1)
}

fn family(name: &str) -> Option<NamedElement> {
    let (head, idx) = name.split_once('_')?;
    if idx.is_empty() || !idx.bytes().all(|b| b.is_ascii_digit()) || (idx.len() > 1 && idx.starts_with('0')) {
        return None;
    }
    let i: u32 = idx.parse().ok()?;
    if i > MAX_STEENROD_INDEX {
        return None;
    }
    let degree = match head {
        "tau" => tau_degree(i),
        "xi" if i >= 1 => xi_degree(i),
        _ => return None,
    };
    Some(NamedElement { name: name.to_string(), degree: ElementDegree::Tri(degree), home: Home::Steenrod })
}

/// Looks up a registered element by name.
pub fn named_element(name: &str) -> Result<NamedElement, GradingError> {
    if let Some((n, d, h)) = FIXED.iter().find(|(n, _, _)| *n == name) {
        return Ok(NamedElement { name: n.to_string(), degree: *d, home: *h });
    }
    family(name).ok_or_else(|| GradingError::UnknownName(name.to_string()))
}

/// Every registered element, fixed names first, then `tau_i` and `xi_i`.
pub fn registry() -> Vec<NamedElement> {
    let mut out: Vec<NamedElement> = FIXED
        .iter()
        .map(|(n, d, h)| NamedElement { name: n.to_string(), degree: *d, home: *h })
        .collect();
    for i in 0..=MAX_STEENROD_INDEX {
        out.push(NamedElement { name: format!("tau_{i}"), degree: ElementDegree::Tri(tau_degree(i)), home: Home::Steenrod });
    }
    for i in 1..=MAX_STEENROD_INDEX {
        out.push(NamedElement { name: format!("xi_{i}"), degree: ElementDegree::Tri(xi_degree(i)), home: Home::Steenrod });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn registry_names_are_unique() {
        let reg = registry();
        let names: HashSet<_> = reg.iter().map(|e| e.name.clone()).collect();
        assert_eq!(names.len(), reg.len());
        for e in &reg {
            assert_eq!(named_element(&e.name).unwrap(), *e);
        }
    }

    #[test]
    fn composite_degrees() {
        let d = |n: &str| named_element(n).unwrap().degree.to_tri();
        assert_eq!(d("rho"), d("ta") + d("a"));
        assert_eq!(d("tau"), d("ta") + d("u"));
        assert_eq!(d("tau_0"), TriDegree::new(1, 0, 0));
        assert_eq!(d("xi_1"), TriDegree::new(1, 1, 1));
    }

    #[test]
    fn unknown_names() {
        for n in ["", "tau_", "xi_0", "tau_01", "tau_99", "beta", "xi_x"] {
            assert!(matches!(named_element(n), Err(GradingError::UnknownName(_))), "{n}");
        }
    }

    #[test]
    fn functors() {
        let d = TriDegree::new(3, -2, 5);
        assert_eq!(betti_degree(d), RODegree::new(3, -2));
        assert_eq!(base_change_degree(d), (1, 5));
        assert_eq!(artin_embed(RODegree::new(4, 1)), TriDegree::new(4, 1, 0));
    }
}
