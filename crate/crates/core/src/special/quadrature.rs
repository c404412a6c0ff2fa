//! Integrals of the form `int_0^inf f(t) exp(Li2(-t)/hbar) dt`.
//!
//! The domain is split at `split_point`. The head `[0, split]` is covered by a
//! fixed composite Gauss-Legendre rule. On the tail the substitution `t = e^s`
//! turns the weight into `exp(-(s^2/2 + pi^2/6 + Li2(-e^{-s}))/hbar)`, a
//! Gaussian in `s`, so panels of width `min(sqrt(hbar), 1)` are marched outward
//! until two consecutive panels each add less than `rel_tol` of the running
//! total while decreasing.
//!
//! Everything is accumulated relative to a log-scale estimate of the peak,
//! which keeps `t^40 exp(Li2(-t)/hbar)` representable even when `t^40` alone
//! is not.

use std::f64::consts::PI;

use super::dilog::{dilog_neg_exp, ZETA2};
use super::QuadratureError;

/// Domain-splitting and accuracy policy for [`weighted_integral`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    /// Head/tail split in `t`.
    pub split_point: f64,
    /// Gauss-Legendre nodes on every panel.
    pub nodes_per_panel: usize,
    /// Relative tolerance of accepted results.
    pub rel_tol: f64,
    /// Upper bound on tail panels before giving up.
    pub max_panels: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            split_point: 1.0,
            nodes_per_panel: 20,
            rel_tol: 1e-10,
            max_panels: 4000,
        }
    }
}

impl QuadratureSpec {
    pub fn new(
        split_point: f64,
        nodes_per_panel: usize,
        rel_tol: f64,
        max_panels: usize,
    ) -> Result<Self, QuadratureError> {
        let spec = Self {
            split_point,
            nodes_per_panel,
            rel_tol,
            max_panels,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), QuadratureError> {
        if !(self.split_point > 0.0 && self.split_point.is_finite()) {
            return Err(QuadratureError::InvalidSpec("split_point must be positive"));
        }
        if self.nodes_per_panel < 2 {
            return Err(QuadratureError::InvalidSpec("nodes_per_panel must be at least 2"));
        }
        if self.rel_tol.is_nan() || self.rel_tol <= 0.0 {
            return Err(QuadratureError::InvalidSpec("rel_tol must be positive"));
        }
        if self.max_panels == 0 {
            return Err(QuadratureError::InvalidSpec("max_panels must be positive"));
        }
        Ok(())
    }

    /// Same policy with twice the nodes per panel.
    pub fn doubled(&self) -> Self {
        Self {
            nodes_per_panel: 2 * self.nodes_per_panel,
            ..*self
        }
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            // P_n(x) and P_n'(x) by the three-term recurrence.
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pnm1 = if n <= 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pnm1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

type Factor<'a> = Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>;

/// Integrand `t^power * factor(t)`, multiplied by the dilogarithm weight inside
/// [`weighted_integral`].
///
/// The monomial part is kept separate so it can be folded into the exponent.
pub struct Integrand<'a> {
    power: u32,
    factor: Option<Factor<'a>>,
}

impl<'a> Integrand<'a> {
    pub fn new(factor: impl Fn(f64) -> f64 + Send + Sync + 'a) -> Self {
        Self {
            power: 0,
            factor: Some(Box::new(factor)),
        }
    }

    /// `f(t) = t^power`.
    pub fn monomial(power: u32) -> Self {
        Self { power, factor: None }
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    pub fn with_power(mut self, power: u32) -> Self {
        self.power = power;
        self
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mono = if self.power == 0 { 1.0 } else { t.powi(self.power as i32) };
        mono * self.factor_at(t)
    }

    fn factor_at(&self, t: f64) -> f64 {
        self.factor.as_ref().map_or(1.0, |f| f(t))
    }
}

/// A sum held as `value * exp(ln_scale)`.
#[derive(Clone, Copy, Debug)]
struct Scaled {
    value: f64,
    ln_scale: f64,
}

impl Scaled {
    fn finish(self) -> Result<f64, QuadratureError> {
        let v = self.value * self.ln_scale.exp();
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadratureError::NonFinite)
        }
    }

    fn ln_abs(self) -> f64 {
        self.value.abs().ln() + self.ln_scale
    }
}

fn check_hbar(hbar: f64) -> Result<(), QuadratureError> {
    if hbar > 0.0 && hbar.is_finite() {
        Ok(())
    } else {
        Err(QuadratureError::InvalidHbar(hbar))
    }
}

/// Peak of `(p+1) s - (s^2/2 + pi^2/6)/hbar`, used as the accumulation scale.
fn ln_scale_estimate(power: u32, hbar: f64) -> f64 {
    let p1 = power as f64 + 1.0;
    (0.5 * hbar * p1 * p1 - ZETA2 / hbar).max(0.0)
}

fn integrate_scaled(
    f: &Integrand<'_>,
    hbar: f64,
    spec: &QuadratureSpec,
) -> Result<Scaled, QuadratureError> {
    check_hbar(hbar)?;
    spec.validate()?;
    let ln_scale = ln_scale_estimate(f.power, hbar);
    let (nodes, weights) = gauss_legendre(spec.nodes_per_panel);
    let power = f.power as f64;

    // Head: t in [0, split], roughly quarter-unit panels.
    let split = spec.split_point;
    let head_panels = ((split * 4.0).ceil() as usize).max(1);
    let head_width = split / head_panels as f64;
    let mut head = 0.0;
    for p in 0..head_panels {
        let a = p as f64 * head_width;
        let half = 0.5 * head_width;
        let mid = a + half;
        let mut acc = 0.0;
        for (x, w) in nodes.iter().zip(&weights) {
            let t = mid + half * x;
            let ln_t = t.ln();
            let expo = power * ln_t + dilog_neg_exp(ln_t) / hbar - ln_scale;
            acc += w * expo.exp() * f.factor_at(t);
        }
        head += half * acc;
    }

    // Tail: t = e^s, s in [ln split, inf).
    let width = hbar.sqrt().min(1.0);
    let mut s0 = split.ln();
    let mut total = head;
    let mut prev = f64::INFINITY;
    let mut quiet = 0;
    for _ in 0..spec.max_panels {
        let half = 0.5 * width;
        let mid = s0 + half;
        let mut acc = 0.0;
        for (x, w) in nodes.iter().zip(&weights) {
            let s = mid + half * x;
            let expo = (power + 1.0) * s + dilog_neg_exp(s) / hbar - ln_scale;
            let e = expo.exp();
            if e != 0.0 {
                acc += w * e * f.factor_at(s.exp());
            }
        }
        let panel = half * acc;
        if !panel.is_finite() {
            return Err(QuadratureError::NonFinite);
        }
        total += panel;
        if panel.abs() <= spec.rel_tol * total.abs() && panel.abs() <= prev.abs() {
            quiet += 1;
            if quiet >= 2 {
                return Ok(Scaled {
                    value: total,
                    ln_scale,
                });
            }
        } else {
            quiet = 0;
        }
        prev = panel;
        s0 += width;
    }
    Err(QuadratureError::NotConverged {
        partial_sum: total * ln_scale.exp(),
        last_panel: prev * ln_scale.exp(),
        panels: spec.max_panels,
    })
}

/// `int_0^inf f(t) exp(Li2(-t)/hbar) dt`.
///
/// ```
/// use podles_core::special::{weighted_integral, Integrand, QuadratureSpec};
/// let spec = QuadratureSpec::default();
/// let one = weighted_integral(&Integrand::one(), 0.5, &spec).unwrap();
/// let damped = weighted_integral(&Integrand::new(|t| 1.0 / (1.0 + t)), 0.5, &spec).unwrap();
/// assert!(damped < one);
/// ```
pub fn weighted_integral(
    f: &Integrand<'_>,
    hbar: f64,
    spec: &QuadratureSpec,
) -> Result<f64, QuadratureError> {
    integrate_scaled(f, hbar, spec)?.finish()
}

/// Natural log of `|weighted_integral(f, hbar, spec)|`, usable when the value
/// itself would overflow.
pub fn ln_weighted_integral(
    f: &Integrand<'_>,
    hbar: f64,
    spec: &QuadratureSpec,
) -> Result<f64, QuadratureError> {
    let s = integrate_scaled(f, hbar, spec)?;
    if s.value == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(s.ln_abs())
}

/// Relative change of the result when the nodes per panel are doubled.
pub fn doubling_residual(
    f: &Integrand<'_>,
    hbar: f64,
    spec: &QuadratureSpec,
) -> Result<f64, QuadratureError> {
    let coarse = integrate_scaled(f, hbar, spec)?;
    let fine = integrate_scaled(f, hbar, &spec.doubled())?;
    // Both runs use the same scale, so values compare directly.
    let diff = (fine.value - coarse.value).abs();
    Ok(if fine.value == 0.0 {
        diff
    } else {
        diff / fine.value.abs()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::dilog::dilog;

    // Independent route: substitute t = e^u over the whole line and apply the
    // plain trapezoid rule, which converges geometrically for this analytic,
    // rapidly decaying integrand.
    fn trapezoid_oracle(f: impl Fn(f64) -> f64, hbar: f64) -> f64 {
        let (lo, hi, h) = (-60.0, 40.0, 0.01);
        let n = ((hi - lo) / h) as usize;
        let mut acc = 0.0;
        for i in 0..=n {
            let u = lo + i as f64 * h;
            let t = u.exp();
            let li = dilog(-t).unwrap();
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            acc += w * f(t) * (li / hbar).exp() * t;
        }
        acc * h
    }

    #[test]
    fn legendre_rule_is_exact_on_polynomials() {
        for n in [2usize, 5, 20, 40] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            let deg = 2 * n - 2;
            let exact = 2.0 / (deg as f64 + 1.0);
            let approx: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            assert!((approx - exact).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn constant_integrand_matches_trapezoid_oracle() {
        let spec = QuadratureSpec::default();
        let v = weighted_integral(&Integrand::one(), 0.5, &spec).unwrap();
        let oracle = trapezoid_oracle(|_| 1.0, 0.5);
        assert!(v > 0.0);
        assert!((v - oracle).abs() < 1e-10 * oracle, "{v} vs {oracle}");
        // mpmath, 30 digits
        assert!((v - 0.637_384_240_589_580_9).abs() < 1e-11);
        assert!(doubling_residual(&Integrand::one(), 0.5, &spec).unwrap() < spec.rel_tol);
    }

    #[test]
    fn damped_integrand_is_smaller() {
        let spec = QuadratureSpec::default();
        let one = weighted_integral(&Integrand::one(), 0.5, &spec).unwrap();
        let damped = weighted_integral(&Integrand::new(|t| 1.0 / (1.0 + t)), 0.5, &spec).unwrap();
        assert!(damped < one);
    }

    #[test]
    fn monomials_increase_with_degree() {
        let spec = QuadratureSpec::default();
        let vals: Vec<f64> = (0..=20)
            .map(|m| weighted_integral(&Integrand::monomial(m), 1.0, &spec).unwrap())
            .collect();
        assert!(vals.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn node_doubling_is_stable_up_to_degree_thirty() {
        let spec = QuadratureSpec::default();
        for m in 0..=30 {
            let r = doubling_residual(&Integrand::monomial(m), 0.5, &spec).unwrap();
            assert!(r < spec.rel_tol, "m={m}: {r}");
        }
    }

    #[test]
    fn large_powers_do_not_overflow() {
        let spec = QuadratureSpec::default();
        let v = weighted_integral(&Integrand::monomial(40), 0.5, &spec).unwrap();
        assert!(v.is_finite() && v > 0.0);
        let ln = ln_weighted_integral(&Integrand::monomial(40), 0.5, &spec).unwrap();
        assert!((ln - v.ln()).abs() < 1e-12 * ln);
        // Saddle estimate for ln int t^40 e^{Li2(-t)/hbar}: (hbar/2)(41)^2.
        assert!((ln - 0.25 * 41.0 * 41.0).abs() < 5.0);
    }

    #[test]
    fn reports_non_convergence_with_partial_sum() {
        let spec = QuadratureSpec {
            max_panels: 3,
            ..Default::default()
        };
        match weighted_integral(&Integrand::monomial(30), 0.5, &spec) {
            Err(QuadratureError::NotConverged {
                partial_sum,
                last_panel,
                panels,
            }) => {
                assert_eq!(panels, 3);
                assert!(partial_sum > 0.0 && last_panel > 0.0);
            }
            other => panic!("expected NotConverged, got {other:?}"),
        }
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(QuadratureSpec::new(0.0, 20, 1e-10, 10).is_err());
        assert!(QuadratureSpec::new(1.0, 1, 1e-10, 10).is_err());
        assert!(QuadratureSpec::new(1.0, 20, 0.0, 10).is_err());
        assert!(QuadratureSpec::new(1.0, 20, 1e-10, 0).is_err());
        let spec = QuadratureSpec::default();
        assert!(matches!(
            weighted_integral(&Integrand::one(), -1.0, &spec),
            Err(QuadratureError::InvalidHbar(_))
        ));
    }

    #[test]
    fn split_point_does_not_matter() {
        let f = Integrand::new(|t| (1.0 + t).sqrt().recip()).with_power(3);
        let a = weighted_integral(&f, 0.5, &QuadratureSpec::default()).unwrap();
        let spec = QuadratureSpec {
            split_point: 2.5,
            ..Default::default()
        };
        let b = weighted_integral(&f, 0.5, &spec).unwrap();
        assert!((a - b).abs() < 1e-10 * a);
    }
}
