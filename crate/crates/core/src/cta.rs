//! Tri-graded homotopy of `Cta`, `Ca ⊗ Cta` and `Cta[a^{-1}]` assembled from Ext tables.
//!
//! `pi_{p,q,w} Cta` is the sum over `a` of `Ext^{s,2w}(BP_*, BP_* ⊗ pi_{a+(q-w)sigma} uZ2)` with
//! `s = w + a - p`. A `Z2` coefficient contributes integral Ext, a `Z/2` coefficient contributes
//! Ext with `BP_*/2` coefficients.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cobar::{compute_ext, generator_degree, CobarError, ExtCoeffs, ExtTable};
use crate::grading::{RODegree, TriDegree};
use crate::group::{GroupPresentation, GroupTable, Summand};
use crate::point::{point_basis, PointRing};

#[derive(Debug, Error)]
pub enum CtaError {
    #[error("degree {degree} needs Ext^({s},{t}) beyond the supplied tables")]
    BoxExceeded { degree: TriDegree, s: i64, t: i64 },
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error(transparent)]
    Cobar(#[from] CobarError),
}

/// Integral and mod 2 Ext tables over a common internal-degree bound.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtTables {
    pub z: ExtTable,
    pub f2: ExtTable,
}

impl ExtTables {
    /// Complete tables through internal degree `max_degree`, using every `v_i` of degree `<= max_degree`.
    pub fn compute(max_degree: i64) -> Result<Self, CtaError> {
        let n = generators_for(max_degree);
        let s_max = (max_degree.max(0) / 2) as usize;
        Ok(ExtTables { z: compute_ext(n, s_max, max_degree, ExtCoeffs::Z)?, f2: compute_ext(n, s_max, max_degree, ExtCoeffs::F2)? })
    }

    pub fn max_degree(&self) -> i64 {
        self.z.max_degree.min(self.f2.max_degree)
    }

    fn table(&self, kind: CoefficientKind) -> &ExtTable {
        match kind {
            CoefficientKind::F2 => &self.f2,
            _ => &self.z,
        }
    }

    fn lookup(&self, kind: CoefficientKind, degree: TriDegree, s: i64, t: i64) -> Result<GroupPresentation, CtaError> {
        if s < 0 || t < 0 {
            return Ok(GroupPresentation::zero());
        }
        let exceeded = CtaError::BoxExceeded { degree, s, t };
        if t > self.max_degree() {
            return Err(exceeded);
        }
        self.table(kind).get(s as usize, t).map_err(|_| exceeded)
    }
}

/// Number of generators `v_1..v_n` with `|v_n| <= max_degree`, at least one.
pub fn generators_for(max_degree: i64) -> usize {
    (1..).take_while(|&i| i == 1 || generator_degree(i) <= max_degree).last().unwrap_or(1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CoefficientKind {
    Z2adic,
    F2,
    Zero,
}

/// The contribution of one index `a` to `pi_{p,q,w} Cta`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CtaSummand {
    pub a: i64,
    pub s: i64,
    pub coefficient_kind: CoefficientKind,
    pub group: GroupPresentation,
}

fn tensor_label(coeff: &str, ext: &str) -> String {
    if coeff == "1" {
        ext.to_string()
    } else {
        format!("{coeff}*{ext}")
    }
}

fn tagged(g: GroupPresentation, coeff: &str) -> GroupPresentation {
    g.relabel(|l| tensor_label(coeff, l))
}

fn check_weight(d: TriDegree, tables: &ExtTables) -> Result<(), CtaError> {
    if 2 * d.w > tables.max_degree() {
        return Err(CtaError::BoxExceeded { degree: d, s: 0, t: 2 * d.w });
    }
    Ok(())
}

/// The summands indexed by `a` with nonzero coefficient and `0 <= s <= 2w`.
pub fn cta_summands(d: TriDegree, tables: &ExtTables) -> Result<Vec<CtaSummand>, CtaError> {
    if d.w < 0 {
        return Ok(Vec::new());
    }
    check_weight(d, tables)?;
    let mut out = Vec::new();
    for a in (d.p - d.w)..=(d.p + d.w) {
        let s = d.w + a - d.p;
        let Some(coeff) = point_basis(PointRing::UZ2, RODegree::new(a, d.q - d.w)) else { continue };
        let kind = if coeff.is_torsion() { CoefficientKind::F2 } else { CoefficientKind::Z2adic };
        let group = tagged(tables.lookup(kind, d, s, 2 * d.w)?, &coeff.label());
        out.push(CtaSummand { a, s, coefficient_kind: kind, group });
    }
    Ok(out)
}

/// `pi_{p,q,w} Cta`.
pub fn cta_group(d: TriDegree, tables: &ExtTables) -> Result<GroupPresentation, CtaError> {
    Ok(cta_summands(d, tables)?.into_iter().fold(GroupPresentation::zero(), |acc, s| acc.direct_sum(s.group)))
}

/// `pi_{p,q,w} (Ca ⊗ Cta) = Ext^{2w-p-q, 2w}(BP_*, BP_*)`.
pub fn ca_cta_group(d: TriDegree, tables: &ExtTables) -> Result<GroupPresentation, CtaError> {
    if d.w < 0 {
        return Ok(GroupPresentation::zero());
    }
    check_weight(d, tables)?;
    tables.lookup(CoefficientKind::Z2adic, d, 2 * d.w - d.p - d.q, 2 * d.w)
}

/// `pi_{p,q,w} Cta[a^{-1}] = ⊕_{a >= 0} F2{u^{2a}} ⊗ Ext^{w+2a-p, 2w}(BP_*, BP_*/2)`.
pub fn cta_a_inverted_group(d: TriDegree, tables: &ExtTables) -> Result<GroupPresentation, CtaError> {
    if d.w < 0 {
        return Ok(GroupPresentation::zero());
    }
    check_weight(d, tables)?;
    let mut out = GroupPresentation::zero();
    // s = w + 2a - p lies in [0, 2w].
    let lo = (d.p - d.w).div_euclid(2).max(0);
    for a in lo..=((d.p + d.w).div_euclid(2)) {
        let s = d.w + 2 * a - d.p;
        if s < 0 || s > 2 * d.w {
            continue;
        }
        let coeff = if a == 0 { "1".to_string() } else { format!("u^{}", 2 * a) };
        let g = tables.lookup(CoefficientKind::F2, d, s, 2 * d.w)?;
        out = out.direct_sum(tagged(g, &coeff));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CtaObject {
    Cta,
    CaCta,
    CtaAinv,
}

impl CtaObject {
    pub fn parse(s: &str) -> Result<Self, CtaError> {
        match s {
            "Cta" => Ok(CtaObject::Cta),
            "CaCta" => Ok(CtaObject::CaCta),
            "CtaAinv" => Ok(CtaObject::CtaAinv),
            _ => Err(CtaError::UnknownObject(s.to_string())),
        }
    }

    pub fn group(self, d: TriDegree, tables: &ExtTables) -> Result<GroupPresentation, CtaError> {
        match self {
            CtaObject::Cta => cta_group(d, tables),
            CtaObject::CaCta => ca_cta_group(d, tables),
            CtaObject::CtaAinv => cta_a_inverted_group(d, tables),
        }
    }
}

impl fmt::Display for CtaObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CtaObject::Cta => "Cta",
            CtaObject::CaCta => "CaCta",
            CtaObject::CtaAinv => "CtaAinv",
        })
    }
}

/// An inclusive box of tri-degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeBox {
    pub p: (i64, i64),
    pub q: (i64, i64),
    pub w: (i64, i64),
}

impl DegreeBox {
    pub fn new(p: (i64, i64), q: (i64, i64), w: (i64, i64)) -> Self {
        DegreeBox { p, q, w }
    }

    pub fn degrees(&self) -> impl Iterator<Item = TriDegree> + '_ {
        (self.p.0..=self.p.1).flat_map(move |p| {
            (self.q.0..=self.q.1).flat_map(move |q| (self.w.0..=self.w.1).map(move |w| TriDegree::new(p, q, w)))
        })
    }

    pub fn contains(&self, d: TriDegree) -> bool {
        (self.p.0..=self.p.1).contains(&d.p) && (self.q.0..=self.q.1).contains(&d.q) && (self.w.0..=self.w.1).contains(&d.w)
    }
}

/// Nonzero groups of `object` over `bx`.
pub fn object_table(object: CtaObject, bx: &DegreeBox, tables: &ExtTables) -> Result<GroupTable, CtaError> {
    let mut out = GroupTable::new();
    for d in bx.degrees() {
        let g = object.group(d, tables)?;
        if !g.is_zero() {
            out.insert(d, g);
        }
    }
    Ok(out)
}

/// Summands of every degree must add up to the assembled group.
pub fn tensoring_consistent(d: TriDegree, tables: &ExtTables) -> Result<bool, CtaError> {
    let parts = cta_summands(d, tables)?;
    let total: usize = parts.iter().map(|s| s.group.len()).sum();
    let direct = cta_group(d, tables)?;
    let summands: Vec<&Summand> = parts.iter().flat_map(|s| s.group.summands()).collect();
    Ok(total == direct.len() && summands.iter().all(|s| direct.summands().contains(s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Order;
    use std::sync::OnceLock;

    fn tables() -> &'static ExtTables {
        static T: OnceLock<ExtTables> = OnceLock::new();
        T.get_or_init(|| ExtTables::compute(8).unwrap())
    }

    #[test]
    fn generator_count() {
        assert_eq!(generators_for(0), 1);
        assert_eq!(generators_for(6), 2);
        assert_eq!(generators_for(16), 3);
    }

    #[test]
    fn small_values() {
        let t = tables();
        assert_eq!(cta_group(TriDegree::new(0, 0, 0), t).unwrap().shape(), vec![Order::Z2Adic]);
        let g = cta_group(TriDegree::new(1, 0, 1), t).unwrap();
        assert_eq!(g.shape(), vec![Order::Cyclic(2)]);
        assert_eq!(g.summands()[0].label, "a*x0_2.0");
        assert!(cta_group(TriDegree::new(0, 0, -1), t).unwrap().is_zero());
        assert_eq!(ca_cta_group(TriDegree::new(0, 1, 1), t).unwrap().shape(), vec![Order::Cyclic(2)]);
        assert!(ca_cta_group(TriDegree::new(1, 1, 1), t).unwrap().is_zero());
        assert_eq!(cta_a_inverted_group(TriDegree::new(0, 0, 0), t).unwrap().shape(), vec![Order::Cyclic(2)]);
    }

    #[test]
    fn box_exceeded() {
        assert!(matches!(cta_group(TriDegree::new(0, 0, 5), tables()), Err(CtaError::BoxExceeded { .. })));
    }

    #[test]
    fn inside_regions() {
        use crate::regions::{nonzero_possible, RegionObject};
        let t = tables();
        let bx = DegreeBox::new((-6, 10), (-8, 8), (-4, 4));
        for d in bx.degrees() {
            if !cta_group(d, t).unwrap().is_zero() {
                assert!(nonzero_possible(RegionObject::Cta, d), "Cta at {d}");
            }
            if !ca_cta_group(d, t).unwrap().is_zero() {
                assert!(nonzero_possible(RegionObject::CtaModA, d), "CaCta at {d}");
            }
            if !cta_a_inverted_group(d, t).unwrap().is_zero() {
                assert!(nonzero_possible(RegionObject::AInvertedCta, d), "CtaAinv at {d}");
            }
            assert!(tensoring_consistent(d, t).unwrap());
        }
    }
}
