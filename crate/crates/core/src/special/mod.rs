//! Dilogarithm, dilogarithm-weighted quadrature on `[0, inf)` and the
//! saddle-point leading terms of the resulting moment integrals.

mod dilog;
mod quadrature;

use std::f64::consts::PI;

use thiserror::Error;

pub use dilog::{dilog, dilog_neg_exp, inversion_residual, ZETA2};
pub use quadrature::{
    doubling_residual, gauss_legendre, ln_weighted_integral, weighted_integral, Integrand,
    QuadratureSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SpecialError {
    #[error("dilogarithm argument {0} is outside the implemented branch t <= 0")]
    Domain(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(&'static str),
    #[error("hbar must be positive and finite, got {0}")]
    InvalidHbar(f64),
    #[error(
        "no convergence after {panels} panels (partial sum {partial_sum:e}, last panel {last_panel:e})"
    )]
    NotConverged {
        partial_sum: f64,
        last_panel: f64,
        panels: usize,
    },
    #[error("integral is not representable as a finite f64")]
    NonFinite,
}

/// Leading term of `r_n / l_n` for large `n`:
/// `exp(-hbar (n + 1/2)) * sqrt(rho_inf / lambda_inf)`.
pub fn asymptotic_ratio(n: u32, hbar: f64, lambda_inf: f64, rho_inf: f64) -> f64 {
    (-hbar * (n as f64 + 0.5)).exp() * (rho_inf / lambda_inf).sqrt()
}

/// Log of the saddle-point value of `2 pi int_0^inf t^n exp(Li2(-t)/hbar) dt`,
/// `ln(2 pi sqrt(2 pi hbar)) - pi^2/(6 hbar) + hbar (n+1)^2 / 2`.
///
/// `l_n` is this with the `sqrt(lambda_inf)` factor; `r_n` uses `n - 1` in
/// place of `n` and `sqrt(rho_inf)`.
pub fn ln_saddle_moment(n: u32, hbar: f64) -> f64 {
    let n1 = n as f64 + 1.0;
    (2.0 * PI * (2.0 * PI * hbar).sqrt()).ln() - ZETA2 / hbar + 0.5 * hbar * n1 * n1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn asymptotic_ratio_reference_point() {
        let v = asymptotic_ratio(10, 0.5, 1.0, 1.0);
        assert!((v - (-5.25f64).exp()).abs() < 1e-17);
    }

    #[test]
    fn asymptotic_ratio_depends_only_on_weight_ratio() {
        let a = asymptotic_ratio(7, 0.3, 2.0, 2.0);
        let b = asymptotic_ratio(7, 0.3, 11.0, 11.0);
        assert_eq!(a, b);
        let c = asymptotic_ratio(7, 0.3, 1.0, 4.0);
        assert!((c - 2.0 * a).abs() < 1e-16);
    }

    #[test]
    fn asymptotic_ratio_step_is_exp_minus_hbar() {
        for n in 1..30 {
            let r = asymptotic_ratio(n + 1, 0.5, 1.0, 1.0) / asymptotic_ratio(n, 0.5, 1.0, 1.0);
            assert!((r - (-0.5f64).exp()).abs() < 1e-14);
        }
    }

    #[test]
    fn saddle_moment_tracks_quadrature() {
        let spec = QuadratureSpec::default();
        for n in [30u32, 40] {
            let ln_q = ln_weighted_integral(&Integrand::monomial(n), 0.5, &spec).unwrap()
                + (2.0 * PI).ln();
            let d = ln_q - ln_saddle_moment(n, 0.5);
            assert!(d.abs() < 1e-6, "n={n}: {d}");
        }
    }
}
