use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use super::GroupoidError;

/// A point of the compactified naturals `{0, 1, 2, ...} ∪ {∞}`.
///
/// The derived ordering puts every finite value below `Inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Unit {
    Fin(u64),
    Inf,
}

impl Unit {
    /// Translate by `n`; `Inf` is fixed. `None` when the result leaves the
    /// naturals.
    pub fn translate(self, n: i64) -> Option<Unit> {
        match self {
            Unit::Inf => Some(Unit::Inf),
            Unit::Fin(m) => {
                let t = m as i128 + n as i128;
                if (0..=u64::MAX as i128).contains(&t) {
                    Some(Unit::Fin(t as u64))
                } else {
                    None
                }
            }
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Unit::Fin(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Unit::Fin(m) => Some(m),
            Unit::Inf => None,
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unit::Fin(m) => write!(f, "{m}"),
            Unit::Inf => f.write_str("inf"),
        }
    }
}

impl Serialize for Unit {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Unit::Fin(m) => s.serialize_u64(*m),
            Unit::Inf => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Unit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct UnitVisitor;

        impl Visitor<'_> for UnitVisitor {
            type Value = Unit;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a nonnegative integer or the string \"inf\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Unit, E> {
                Ok(Unit::Fin(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Unit, E> {
                u64::try_from(v)
                    .map(Unit::Fin)
                    .map_err(|_| E::custom(format!("negative unit {v}")))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Unit, E> {
                if v == "inf" {
                    Ok(Unit::Inf)
                } else {
                    Err(E::custom(format!("unknown unit {v:?}")))
                }
            }
        }

        d.deserialize_any(UnitVisitor)
    }
}

/// Which discrete groupoid an element lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupoidKind {
    /// The Cuntz groupoid: integer translations restricted to the
    /// compactified naturals.
    #[serde(rename = "O1")]
    Cuntz,
    /// Sheu's subgroupoid: only the zero translation survives at `∞`.
    #[serde(rename = "GS")]
    Sheu,
}

/// The arrow `(m, n)` from `m` to `m + n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrow {
    m: Unit,
    n: i64,
}

impl Arrow {
    pub fn new(m: Unit, n: i64) -> Result<Self, GroupoidError> {
        if m.translate(n).is_none() {
            return Err(GroupoidError::InvalidArrow { m, n });
        }
        Ok(Self { m, n })
    }

    /// Finite arrow `(m, n)`.
    ///
    /// # Panics
    ///
    /// If `m + n < 0`.
    pub fn fin(m: u64, n: i64) -> Self {
        Self::new(Unit::Fin(m), n).expect("finite arrow must satisfy m + n >= 0")
    }

    /// Arrow `(∞, n)` in the fibre over infinity.
    pub fn inf(n: i64) -> Self {
        Self { m: Unit::Inf, n }
    }

    /// Unit arrow `(u, 0)`.
    pub fn unit(u: Unit) -> Self {
        Self { m: u, n: 0 }
    }

    /// Smallest arrow with source `u` in the derived order; used for range
    /// scans over a source fibre.
    pub(crate) fn fibre_start(u: Unit) -> Self {
        Self { m: u, n: i64::MIN }
    }

    pub fn source(self) -> Unit {
        self.m
    }

    pub fn target(self) -> Unit {
        self.m
            .translate(self.n)
            .expect("arrow invariant: m + n >= 0")
    }

    pub fn translation(self) -> i64 {
        self.n
    }

    pub fn inverse(self) -> Self {
        Self {
            m: self.target(),
            n: -self.n,
        }
    }

    pub fn is_unit(self) -> bool {
        self.n == 0
    }

    /// The cocycle `c1(m, n) = n`.
    pub fn c1(self) -> f64 {
        self.n as f64
    }

    pub fn is_admissible(self, kind: GroupoidKind) -> bool {
        match kind {
            GroupoidKind::Cuntz => true,
            GroupoidKind::Sheu => self.m.is_finite() || self.n == 0,
        }
    }
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.m, self.n)
    }
}

/// `(m, n)·(m + n, q) = (m, n + q)`; `None` when the target of `a` is not the
/// source of `b`.
pub fn compose(a: Arrow, b: Arrow) -> Option<Arrow> {
    if a.target() == b.source() {
        Some(Arrow {
            m: a.m,
            n: a.n + b.n,
        })
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composes_when_target_meets_source() {
        assert_eq!(compose(Arrow::fin(1, 2), Arrow::fin(3, 4)), Some(Arrow::fin(1, 6)));
        assert_eq!(compose(Arrow::fin(1, 2), Arrow::fin(2, 4)), None);
    }

    #[test]
    fn unit_arrows_are_local_identities() {
        for m in 0..10 {
            for q in -(m as i64)..10 {
                let g = Arrow::fin(m, q);
                assert_eq!(compose(Arrow::fin(m, 0), g), Some(g));
                assert_eq!(compose(g, Arrow::unit(g.target())), Some(g));
            }
        }
    }

    #[test]
    fn infinity_is_fixed_and_maximal() {
        assert_eq!(Unit::Inf.translate(-7), Some(Unit::Inf));
        assert!(Unit::Fin(u64::MAX) < Unit::Inf);
        assert_eq!(compose(Arrow::inf(3), Arrow::inf(-5)), Some(Arrow::inf(-2)));
        assert_eq!(compose(Arrow::inf(3), Arrow::fin(3, 1)), None);
    }

    #[test]
    fn rejects_arrows_leaving_the_naturals() {
        assert!(Arrow::new(Unit::Fin(2), -3).is_err());
        assert!(Arrow::new(Unit::Fin(2), -2).is_ok());
    }

    #[test]
    fn inverse_composes_to_units() {
        let g = Arrow::fin(4, -3);
        assert_eq!(g.inverse(), Arrow::fin(1, 3));
        assert_eq!(compose(g, g.inverse()), Some(Arrow::fin(4, 0)));
        assert_eq!(compose(g.inverse(), g), Some(Arrow::fin(1, 0)));
    }

    #[test]
    fn sheu_admissibility() {
        assert!(Arrow::inf(0).is_admissible(GroupoidKind::Sheu));
        assert!(!Arrow::inf(1).is_admissible(GroupoidKind::Sheu));
        assert!(Arrow::inf(1).is_admissible(GroupoidKind::Cuntz));
        assert!(Arrow::fin(5, -5).is_admissible(GroupoidKind::Sheu));
    }

    #[test]
    fn unit_serializes_as_integer_or_inf() {
        assert_eq!(serde_json::to_string(&Unit::Fin(3)).unwrap(), "3");
        assert_eq!(serde_json::to_string(&Unit::Inf).unwrap(), "\"inf\"");
        let u: Unit = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(u, Unit::Inf);
        assert!(serde_json::from_str::<Unit>("-1").is_err());
    }
}
