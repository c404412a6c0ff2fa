use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{AlgebraElement, GroupoidError, Unit};

/// Which KMS state of `c1` to build.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KmsTag {
    /// Inverse temperature `-hbar`: the geometric measure
    /// `mu(n) = e^{-n hbar}(1 - e^{-hbar})`.
    Geometric(f64),
    /// Ground state, the point mass at `0`.
    DiracZero,
    /// Point mass at `∞`.
    DiracInf,
}

/// A measure on the units `N̄`.
#[derive(Debug, Clone, PartialEq)]
pub enum UnitMeasure {
    Geometric { hbar: f64 },
    DiracZero,
    DiracInf,
    Custom { weights: BTreeMap<Unit, f64> },
}

impl UnitMeasure {
    /// A finitely supported measure; weights must be finite and nonnegative.
    pub fn custom<I: IntoIterator<Item = (Unit, f64)>>(weights: I) -> Result<Self, GroupoidError> {
        let mut map = BTreeMap::new();
        for (u, w) in weights {
            if !(w.is_finite() && w >= 0.0) {
                return Err(GroupoidError::InvalidMeasure(format!("weight {w} at {u}")));
            }
            *map.entry(u).or_insert(0.0) += w;
        }
        Ok(Self::Custom { weights: map })
    }

    pub fn weight(&self, u: Unit) -> f64 {
        match (self, u) {
            (Self::Geometric { hbar }, Unit::Fin(m)) => {
                (-(m as f64) * hbar).exp() * -(-hbar).exp_m1()
            }
            (Self::Geometric { .. }, Unit::Inf) => 0.0,
            (Self::DiracZero, u) => f64::from(u == Unit::Fin(0)),
            (Self::DiracInf, u) => f64::from(u == Unit::Inf),
            (Self::Custom { weights }, u) => weights.get(&u).copied().unwrap_or(0.0),
        }
    }

    pub fn total_mass(&self) -> f64 {
        match self {
            Self::Geometric { .. } | Self::DiracZero | Self::DiracInf => 1.0,
            Self::Custom { weights } => weights.values().sum(),
        }
    }

    /// Partial mass on `{0, ..., cutoff - 1}`.
    pub fn partial_mass(&self, cutoff: u64) -> f64 {
        (0..cutoff).map(|m| self.weight(Unit::Fin(m))).sum()
    }

    /// Rescale a custom measure to total mass one.
    pub fn normalized(&self) -> Result<Self, GroupoidError> {
        match self {
            Self::Custom { weights } => {
                let total: f64 = weights.values().sum();
                if total <= 0.0 {
                    return Err(GroupoidError::InvalidMeasure("zero total mass".into()));
                }
                Ok(Self::Custom {
                    weights: weights.iter().map(|(u, w)| (*u, w / total)).collect(),
                })
            }
            other => Ok(other.clone()),
        }
    }
}

pub fn kms_measure(tag: KmsTag) -> Result<UnitMeasure, GroupoidError> {
    match tag {
        KmsTag::Geometric(hbar) => {
            if !(hbar.is_finite() && hbar > 0.0) {
                return Err(GroupoidError::InvalidHbar(hbar));
            }
            Ok(UnitMeasure::Geometric { hbar })
        }
        KmsTag::DiracZero => Ok(UnitMeasure::DiracZero),
        KmsTag::DiracInf => Ok(UnitMeasure::DiracInf),
    }
}

/// `phi_mu(f) = sum_u f(u, 0) mu(u)`.
pub fn state(f: &AlgebraElement, mu: &UnitMeasure) -> Complex64 {
    f.terms()
        .filter(|(a, _)| a.is_unit())
        .map(|(a, c)| c * mu.weight(a.source()))
        .sum()
}

/// `<f, g> = phi_mu(f* * g)`.
pub fn gns_inner(
    f: &AlgebraElement,
    g: &AlgebraElement,
    mu: &UnitMeasure,
) -> Result<Complex64, GroupoidError> {
    Ok(state(&f.involute().convolve(g)?, mu))
}

fn check_hbar(hbar: f64) -> Result<(), GroupoidError> {
    if hbar.is_finite() && hbar > 0.0 {
        Ok(())
    } else {
        Err(GroupoidError::InvalidHbar(hbar))
    }
}

/// `D e_{m,k} = e^{hbar k} e_{m,k}`; on `|m, n> = e_{m, n-m}` this is
/// `e^{-hbar (m - n)}`.
pub fn modular_operator(f: &AlgebraElement, hbar: f64) -> Result<AlgebraElement, GroupoidError> {
    check_hbar(hbar)?;
    Ok(f.map_coefficients(|a, c| c * (hbar * a.c1()).exp()))
}

/// `J = D^{1/2} ∘ *`, so that `J D^{1/2}` is the involution.
///
/// On `|m, n>` this gives `J|m, n> = e^{hbar (m - n)/2} |n, m>`.
pub fn modular_conjugation(
    f: &AlgebraElement,
    hbar: f64,
) -> Result<AlgebraElement, GroupoidError> {
    check_hbar(hbar)?;
    Ok(f
        .involute()
        .map_coefficients(|a, c| c * (0.5 * hbar * a.c1()).exp()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{Arrow, GroupoidKind};

    fn e(m: u64, n: i64) -> AlgebraElement {
        AlgebraElement::basis(GroupoidKind::Cuntz, Arrow::fin(m, n)).unwrap()
    }

    #[test]
    fn geometric_weights() {
        let hbar = 0.5;
        let mu = kms_measure(KmsTag::Geometric(hbar)).unwrap();
        assert!((mu.weight(Unit::Fin(0)) - (1.0 - (-hbar).exp())).abs() < 1e-16);
        assert!((mu.partial_mass(200) - 1.0).abs() < 1e-14);
        assert_eq!(mu.weight(Unit::Inf), 0.0);
        assert!(kms_measure(KmsTag::Geometric(0.0)).is_err());
        assert!(kms_measure(KmsTag::Geometric(-1.0)).is_err());
    }

    #[test]
    fn dirac_measures() {
        let inf = kms_measure(KmsTag::DiracInf).unwrap();
        assert_eq!(inf.weight(Unit::Inf), 1.0);
        assert_eq!(inf.weight(Unit::Fin(0)), 0.0);
        let zero = kms_measure(KmsTag::DiracZero).unwrap();
        assert_eq!(zero.weight(Unit::Fin(0)), 1.0);
        assert_eq!(zero.weight(Unit::Fin(1)), 0.0);
    }

    #[test]
    fn custom_measure_validation() {
        assert!(UnitMeasure::custom([(Unit::Fin(0), -1.0)]).is_err());
        let mu = UnitMeasure::custom([(Unit::Fin(0), 1.0), (Unit::Fin(3), 3.0)]).unwrap();
        assert_eq!(mu.total_mass(), 4.0);
        assert_eq!(mu.normalized().unwrap().weight(Unit::Fin(3)), 0.75);
    }

    #[test]
    fn basis_inner_products() {
        let hbar = 0.5;
        let mu = kms_measure(KmsTag::Geometric(hbar)).unwrap();
        let v = gns_inner(&e(2, 1), &e(2, 1), &mu).unwrap();
        let expected = (-3.0 * hbar).exp() * (1.0 - (-hbar).exp());
        assert!((v.re - expected).abs() < 1e-16 && v.im == 0.0);
        assert_eq!(gns_inner(&e(2, 1), &e(0, 1), &mu).unwrap(), Complex64::default());
    }

    #[test]
    fn modular_operator_on_paper_basis() {
        let hbar = 0.5;
        for m in 0..6u64 {
            for n in 0..6u64 {
                let k = n as i64 - m as i64;
                let d = modular_operator(&e(m, k), hbar).unwrap();
                let expected = (-hbar * (m as f64 - n as f64)).exp();
                assert!((d.coefficient(Arrow::fin(m, k)).re - expected).abs() < 1e-13 * expected);
            }
        }
        assert_eq!(modular_operator(&e(4, 0), hbar).unwrap(), e(4, 0));
    }

    #[test]
    fn conjugation_swaps_with_half_weight() {
        let hbar = 0.5;
        let j = modular_conjugation(&e(1, 3), hbar).unwrap();
        // |1, 4> maps to e^{hbar(1 - 4)/2} |4, 1>
        let c = j.coefficient(Arrow::fin(4, -3)).re;
        assert!((c - (-1.5 * hbar).exp()).abs() < 1e-15);
    }

    #[test]
    fn s_equals_j_d_half() {
        let hbar = 0.7;
        let f = AlgebraElement::from_terms(
            GroupoidKind::Cuntz,
            [
                (Arrow::fin(0, 2), Complex64::new(1.0, 2.0)),
                (Arrow::fin(3, -1), Complex64::new(-0.5, 0.25)),
                (Arrow::inf(2), Complex64::new(0.0, 1.0)),
            ],
        )
        .unwrap();
        let d_half = f.map_coefficients(|a, c| c * (0.5 * hbar * a.c1()).exp());
        let s = modular_conjugation(&d_half, hbar).unwrap();
        assert!(s.max_abs_diff(&f.involute()).unwrap() < 1e-14);
    }
}
