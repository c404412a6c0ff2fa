//! Real dilogarithm on the negative half-line.
//!
//! Three routes are combined:
//!
//! | range            | route                                                   |
//! |------------------|---------------------------------------------------------|
//! | `-1/2 <= t <= 0` | power series `sum t^k / k^2`                            |
//! | `-1 <= t < -1/2` | Landen: `Li2(t) = -Li2(t/(t-1)) - ln^2(1-t)/2`          |
//! | `t < -1`         | inversion: `Li2(t) = -Li2(1/t) - pi^2/6 - ln^2(-t)/2`   |
//!
//! The Landen argument `t/(t-1)` lies in `(1/3, 1/2]`, so every route ends in a
//! series with ratio at most one half.

use std::f64::consts::PI;

use super::SpecialError;

/// `pi^2 / 6`, the value of `Li2(1)`.
pub const ZETA2: f64 = PI * PI / 6.0;

const SERIES_MAX_TERMS: usize = 400;

/// Power series `sum_{k>=1} x^k / k^2`, valid for `|x| < 1`.
///
/// Converges geometrically with ratio `|x|`; callers keep `|x| <= 1/2` except
/// for the overlap consistency checks.
pub(crate) fn dilog_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut power = 1.0;
    for k in 1..=SERIES_MAX_TERMS {
        power *= x;
        let kf = k as f64;
        let term = power / (kf * kf);
        sum += term;
        if term.abs() <= f64::EPSILON * 0.25 * sum.abs() {
            break;
        }
    }
    sum
}

/// Landen route for `t < 0`; maps the argument into `(0, 1)`.
pub(crate) fn dilog_landen(t: f64) -> f64 {
    let u = t / (t - 1.0);
    let l = (-t).ln_1p();
    -dilog_series(u) - 0.5 * l * l
}

/// `Li2(t)` for `t <= 0`.
///
/// Relative accuracy is close to machine precision over the whole half-line.
///
/// ```
/// use podles_core::special::dilog;
/// let v = dilog(-1.0).unwrap();
/// assert!((v + std::f64::consts::PI.powi(2) / 12.0).abs() < 1e-15);
/// assert!(dilog(0.5).is_err());
/// ```
pub fn dilog(t: f64) -> Result<f64, SpecialError> {
    if t.is_nan() || t > 0.0 {
        return Err(SpecialError::Domain(t));
    }
    if t == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(dilog_nonpositive(t))
}

/// Same as [`dilog`] without the domain check. `t` must be `<= 0`.
pub(crate) fn dilog_nonpositive(t: f64) -> f64 {
    if t >= -0.5 {
        dilog_series(t)
    } else if t >= -1.0 {
        dilog_landen(t)
    } else {
        let l = (-t).ln();
        -dilog_nonpositive(1.0 / t) - ZETA2 - 0.5 * l * l
    }
}

/// `Li2(-e^s)` evaluated without forming `e^s`.
///
/// For `s > 0` the inversion relation gives
/// `Li2(-e^s) = -Li2(-e^{-s}) - pi^2/6 - s^2/2`, which stays finite for any
/// finite `s`; this is what makes the log-substituted tail of the weighted
/// integrals well behaved.
pub fn dilog_neg_exp(s: f64) -> f64 {
    if s <= 0.0 {
        dilog_nonpositive(-s.exp())
    } else {
        -dilog_nonpositive(-(-s).exp()) - ZETA2 - 0.5 * s * s
    }
}

/// Residual of the inversion relation
/// `Li2(-t) + Li2(-1/t) + pi^2/6 + ln^2(t)/2` for `t > 0`.
pub fn inversion_residual(t: f64) -> Result<f64, SpecialError> {
    if t.is_nan() || t <= 0.0 {
        return Err(SpecialError::Domain(t));
    }
    let l = t.ln();
    Ok(dilog(-t)? + dilog(-1.0 / t)? + ZETA2 + 0.5 * l * l)
}
