//! Regions of possibly nonzero homotopy for the nine basic objects, with periodicities.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grading::TriDegree;
use crate::group::GroupTable;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RegionError {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
}

/// The nine objects with known vanishing regions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RegionObject {
    /// The 2-complete sphere.
    Sphere,
    /// `Cta`.
    Cta,
    /// `S[ta^{-1}]`.
    TaInvertedSphere,
    /// `S/a`.
    SphereModA,
    /// `Cta/a`.
    CtaModA,
    /// `S[ta^{-1}]/a`.
    TaInvertedSphereModA,
    /// `S[a^{-1}]`.
    AInvertedSphere,
    /// `Cta[a^{-1}]`.
    AInvertedCta,
    /// `S[ta^{-1}, a^{-1}]`.
    DoublyInvertedSphere,
}

impl RegionObject {
    pub const ALL: [RegionObject; 9] = [
        RegionObject::Sphere,
        RegionObject::Cta,
        RegionObject::TaInvertedSphere,
        RegionObject::SphereModA,
        RegionObject::CtaModA,
        RegionObject::TaInvertedSphereModA,
        RegionObject::AInvertedSphere,
        RegionObject::AInvertedCta,
        RegionObject::DoublyInvertedSphere,
    ];

    /// Position 1..=9 in the standard list.
    pub fn index(self) -> usize {
        RegionObject::ALL.iter().position(|&o| o == self).unwrap() + 1
    }

    pub fn from_index(i: usize) -> Option<Self> {
        (1..=9).contains(&i).then(|| RegionObject::ALL[i - 1])
    }

    pub fn parse(s: &str) -> Result<Self, RegionError> {
        if let Ok(i) = s.parse::<usize>() {
            return Self::from_index(i).ok_or_else(|| RegionError::UnknownObject(s.to_string()));
        }
        let o = match s {
            "S" | "sphere" => RegionObject::Sphere,
            "Cta" => RegionObject::Cta,
            "S[ta^-1]" => RegionObject::TaInvertedSphere,
            "S/a" => RegionObject::SphereModA,
            "Cta/a" => RegionObject::CtaModA,
            "S[ta^-1]/a" => RegionObject::TaInvertedSphereModA,
            "S[a^-1]" => RegionObject::AInvertedSphere,
            "Cta[a^-1]" => RegionObject::AInvertedCta,
            "S[ta^-1,a^-1]" => RegionObject::DoublyInvertedSphere,
            _ => return Err(RegionError::UnknownObject(s.to_string())),
        };
        Ok(o)
    }

    /// Periodicity vectors: groups are invariant under translation by these.
    pub fn periods(self) -> Vec<TriDegree> {
        let w = TriDegree::new(0, 0, 1);
        let u = TriDegree::new(1, -1, 0);
        let q = TriDegree::new(0, 1, 0);
        match self {
            RegionObject::TaInvertedSphere => vec![w],
            RegionObject::SphereModA | RegionObject::CtaModA => vec![u],
            RegionObject::TaInvertedSphereModA => vec![w, u],
            RegionObject::AInvertedSphere | RegionObject::AInvertedCta => vec![q],
            RegionObject::DoublyInvertedSphere => vec![q, w],
            RegionObject::Sphere | RegionObject::Cta => vec![],
        }
    }

    /// Moves `d` to a canonical representative of its period class.
    pub fn canonicalize(self, d: TriDegree) -> TriDegree {
        match self {
            RegionObject::TaInvertedSphere => TriDegree::new(d.p, d.q, 0),
            RegionObject::SphereModA | RegionObject::CtaModA => TriDegree::new(d.p + d.q, 0, d.w),
            RegionObject::TaInvertedSphereModA => TriDegree::new(d.p + d.q, 0, 0),
            RegionObject::AInvertedSphere | RegionObject::AInvertedCta => TriDegree::new(d.p, 0, d.w),
            RegionObject::DoublyInvertedSphere => TriDegree::new(d.p, 0, 0),
            RegionObject::Sphere | RegionObject::Cta => d,
        }
    }

    fn clauses(self, d: TriDegree) -> bool {
        let (p, q, w) = (d.p, d.q, d.w);
        match self {
            RegionObject::Sphere => (p + q >= w && w >= 0) || (p + q >= 0 && w <= 0) || p >= 0,
            RegionObject::Cta => (0 <= p && p <= 2 * w - q && w >= 0) || (w - q <= p && p <= w - 2 && w >= 0),
            RegionObject::TaInvertedSphere => p >= 0 || p + q >= 0,
            RegionObject::SphereModA => (0 <= w && w <= p + q) || (0 <= p + q && w <= 0),
            RegionObject::CtaModA => w <= p + q && p + q <= 2 * w,
            RegionObject::TaInvertedSphereModA => p + q >= 0,
            RegionObject::AInvertedSphere => p >= 0,
            RegionObject::AInvertedCta => p >= 0 && w >= 0,
            RegionObject::DoublyInvertedSphere => p >= 0,
        }
    }
}

impl fmt::Display for RegionObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegionObject::Sphere => "S",
            RegionObject::Cta => "Cta",
            RegionObject::TaInvertedSphere => "S[ta^-1]",
            RegionObject::SphereModA => "S/a",
            RegionObject::CtaModA => "Cta/a",
            RegionObject::TaInvertedSphereModA => "S[ta^-1]/a",
            RegionObject::AInvertedSphere => "S[a^-1]",
            RegionObject::AInvertedCta => "Cta[a^-1]",
            RegionObject::DoublyInvertedSphere => "S[ta^-1,a^-1]",
        })
    }
}

/// Whether `pi_d(object)` may be nonzero.
pub fn nonzero_possible(object: RegionObject, d: TriDegree) -> bool {
    object.clauses(object.canonicalize(d))
}

/// String-keyed form of [`nonzero_possible`].
pub fn nonzero_possible_named(object: &str, d: TriDegree) -> Result<bool, RegionError> {
    Ok(nonzero_possible(RegionObject::parse(object)?, d))
}

/// Degrees carrying a nonzero group outside the region; empty means the table is consistent.
pub fn validate(table: &GroupTable, object: RegionObject) -> Vec<TriDegree> {
    table.iter().filter(|(d, g)| !g.is_zero() && !nonzero_possible(object, **d)).map(|(d, _)| *d).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn names_round_trip() {
        for o in RegionObject::ALL {
            assert_eq!(RegionObject::parse(&o.to_string()).unwrap(), o);
            assert_eq!(RegionObject::from_index(o.index()), Some(o));
        }
        assert!(matches!(RegionObject::parse("kq"), Err(RegionError::UnknownObject(_))));
        assert!(matches!(RegionObject::parse("10"), Err(RegionError::UnknownObject(_))));
    }

    #[test]
    fn spot_checks() {
        assert!(nonzero_possible(RegionObject::Cta, TriDegree::new(0, 0, 0)));
        assert!(!nonzero_possible(RegionObject::Cta, TriDegree::new(0, 0, -1)));
        assert!(nonzero_possible(RegionObject::Sphere, TriDegree::new(-1, 1, -3)));
        assert!(!nonzero_possible(RegionObject::Sphere, TriDegree::new(-1, 0, 0)));
        assert!(!nonzero_possible(RegionObject::AInvertedCta, TriDegree::new(0, 5, -1)));
    }

    proptest! {
        #[test]
        fn periodic_objects_are_invariant(o in 0usize..9, p in -20i64..20, q in -20i64..20, w in -20i64..20, k in -5i64..5) {
            let o = RegionObject::ALL[o];
            let d = TriDegree::new(p, q, w);
            for v in o.periods() {
                prop_assert_eq!(nonzero_possible(o, d), nonzero_possible(o, d + k * v));
            }
        }
    }
}
