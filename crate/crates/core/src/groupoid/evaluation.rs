use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{AlgebraElement, Unit, ZERO_THRESHOLD};

/// A trigonometric polynomial `sum_k c_k x^k` on the unit circle.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Complex64>,
}

impl LaurentPoly {
    pub fn from_coeffs<I: IntoIterator<Item = (i64, Complex64)>>(coeffs: I) -> Self {
        let mut p = Self::default();
        for (k, c) in coeffs {
            *p.coeffs.entry(k).or_default() += c;
        }
        p.coeffs.retain(|_, c| c.norm() >= ZERO_THRESHOLD);
        p
    }

    pub fn coefficient(&self, k: i64) -> Complex64 {
        self.coeffs.get(&k).copied().unwrap_or_default()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(k, c)| (*k, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_coeffs(
            self.coeffs()
                .flat_map(|(j, a)| other.coeffs().map(move |(k, b)| (j + k, a * b))),
        )
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let neg = other.coeffs().map(|(k, c)| (k, -c));
        Self::from_coeffs(self.coeffs().chain(neg)).max_abs()
    }

    /// Value at a point `x` of the unit circle.
    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs().map(|(k, c)| c * x.powi(k as i32)).sum()
    }
}

/// `sigma(f)(x) = sum_n f(∞, n) x^n`.
pub fn evaluation_map(f: &AlgebraElement) -> LaurentPoly {
    LaurentPoly::from_coeffs(
        f.terms()
            .filter(|(a, _)| a.source() == Unit::Inf)
            .map(|(a, c)| (a.translation(), c)),
    )
}
