use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::{check_hbar, PolarizationError, WeightPair};
use crate::geometry::{modular_function, ChartPoint};
use crate::special::{dilog_neg_exp, ln_weighted_integral, Integrand, QuadratureSpec};

/// Label `(m, n)` of the section `σ_{m,n} = x̄^m y^n e^{(Li2(-|x|^2) + Li2(-|y|^2))/2hbar}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SectionIndex {
    pub m: u32,
    pub n: u32,
}

impl SectionIndex {
    pub fn new(m: u32, n: u32) -> Self {
        Self { m, n }
    }

    pub fn swapped(self) -> Self {
        Self { m: self.n, n: self.m }
    }
}

/// Radial integrals attached to one monomial degree `m`, stored as logs.
///
/// `A_m = 2π ∫ t^m / sqrt(1+t) w`, `l_m = 2π ∫ t^m sqrt(Λ) w`,
/// `r_m = 2π ∫ t^m sqrt(ρ) / (1+t) w`, with `w = e^{Li2(-t)/hbar}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionNorms {
    pub m: u32,
    pub ln_a: f64,
    pub ln_l: f64,
    pub ln_r: f64,
}

impl SectionNorms {
    pub fn a(&self) -> f64 {
        self.ln_a.exp()
    }

    pub fn l(&self) -> f64 {
        self.ln_l.exp()
    }

    pub fn r(&self) -> f64 {
        self.ln_r.exp()
    }

    /// `r_m / l_m`, formed in log space.
    pub fn ratio(&self) -> f64 {
        (self.ln_r - self.ln_l).exp()
    }

    /// Largest relative difference of the three integrals.
    pub fn max_rel_diff(&self, other: &SectionNorms) -> f64 {
        [
            self.ln_a - other.ln_a,
            self.ln_l - other.ln_l,
            self.ln_r - other.ln_r,
        ]
        .iter()
        .map(|d| d.exp_m1().abs())
        .fold(0.0, f64::max)
    }
}

pub fn section_norms(
    m: u32,
    hbar: f64,
    weights: &WeightPair,
    spec: &QuadratureSpec,
) -> Result<SectionNorms, PolarizationError> {
    check_hbar(hbar)?;
    let ln_2pi = (2.0 * PI).ln();
    let lambda = &weights.lambda;
    let rho = &weights.rho;
    let a = Integrand::new(|t| 1.0 / (1.0 + t).sqrt()).with_power(m);
    let l = Integrand::new(|t| lambda.at(t).sqrt()).with_power(m);
    let r = Integrand::new(|t| rho.at(t).sqrt() / (1.0 + t)).with_power(m);
    let out = SectionNorms {
        m,
        ln_a: ln_2pi + ln_weighted_integral(&a, hbar, spec)?,
        ln_l: ln_2pi + ln_weighted_integral(&l, hbar, spec)?,
        ln_r: ln_2pi + ln_weighted_integral(&r, hbar, spec)?,
    };
    if [out.ln_a, out.ln_l, out.ln_r].iter().all(|v| v.is_finite()) {
        Ok(out)
    } else {
        Err(PolarizationError::NonFinite("section norm"))
    }
}

/// Write-once cache of [`SectionNorms`] for `m < size`.
///
/// Entries are computed on first access; [`NormTable::prefetch`] fills the
/// whole table from scoped worker threads.
#[derive(Debug)]
pub struct NormTable {
    hbar: f64,
    weights: WeightPair,
    spec: QuadratureSpec,
    cells: Vec<OnceLock<Result<SectionNorms, PolarizationError>>>,
}

impl NormTable {
    pub fn new(
        hbar: f64,
        weights: WeightPair,
        spec: QuadratureSpec,
        size: u32,
    ) -> Result<Self, PolarizationError> {
        check_hbar(hbar)?;
        spec.validate()?;
        Ok(Self {
            hbar,
            weights,
            spec,
            cells: (0..size).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn weights(&self) -> &WeightPair {
        &self.weights
    }

    pub fn spec(&self) -> &QuadratureSpec {
        &self.spec
    }

    pub fn size(&self) -> u32 {
        self.cells.len() as u32
    }

    pub fn get(&self, m: u32) -> Result<SectionNorms, PolarizationError> {
        let cell = self.cells.get(m as usize).ok_or(PolarizationError::OutOfTable {
            index: m,
            size: self.size(),
        })?;
        cell.get_or_init(|| section_norms(m, self.hbar, &self.weights, &self.spec))
            .clone()
    }

    pub fn prefetch(&self) -> Result<(), PolarizationError> {
        let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(8);
        std::thread::scope(|s| {
            for w in 0..workers {
                s.spawn(move || {
                    for m in (w..self.cells.len()).step_by(workers) {
                        let _ = self.get(m as u32);
                    }
                });
            }
        });
        (0..self.size()).try_for_each(|m| self.get(m).map(|_| ()))
    }

    /// Relative change of the entry for `m` under doubled nodes per panel.
    pub fn doubling_residual(&self, m: u32) -> Result<f64, PolarizationError> {
        let base = self.get(m)?;
        let fine = section_norms(m, self.hbar, &self.weights, &self.spec.doubled())?;
        Ok(base.max_rel_diff(&fine))
    }
}

/// `(1/2π) ∑_j e^{i k θ_j}` over `samples` equispaced angles: the trapezoid
/// rule for the normalized angular integral, exact for `|k| < samples`.
pub fn angular_factor(k: i64, samples: usize) -> Complex64 {
    let h = 2.0 * PI / samples as f64;
    let sum: Complex64 = (0..samples)
        .map(|j| Complex64::from_polar(1.0, k as f64 * j as f64 * h))
        .sum();
    sum / samples as f64
}

/// `∫ d²x d²y e^{(Li2(-|x|^2) + Li2(-|y|^2))/hbar} ψ̄1 ψ2 / sqrt((1+|x|^2)(1+|y|^2))`
/// reduced by angular orthogonality: `A_m A_n` on the diagonal, else 0.
pub fn scalar_product_symplectic(
    a: SectionIndex,
    b: SectionIndex,
    table: &NormTable,
) -> Result<Complex64, PolarizationError> {
    if a != b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (x, y) = (table.get(a.m)?, table.get(a.n)?);
    Ok(Complex64::new((x.ln_a + y.ln_a).exp(), 0.0))
}

/// The `(ρ, Λ)` product with density `sqrt(ρ(y) Λ(x) / D(x, y))`,
/// `D = (1+|y|^2)/(1+|x|^2)`: `l_m r_n` on the diagonal, else 0.
pub fn scalar_product_groupoid(
    a: SectionIndex,
    b: SectionIndex,
    table: &NormTable,
) -> Result<Complex64, PolarizationError> {
    if a != b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (x, y) = (table.get(a.m)?, table.get(a.n)?);
    Ok(Complex64::new((x.ln_l + y.ln_r).exp(), 0.0))
}

/// Which scalar product the 2-D oracle integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarProduct {
    Symplectic,
    Groupoid,
}

/// Tensor grid in `(log|x|^2, arg x, log|y|^2, arg y)` for the oracle.
///
/// The radial trapezoid rule converges geometrically because every factor is
/// analytic in a strip around the real `s` axis; the angular rule is exact for
/// frequencies below `angular_points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleGrid {
    pub s_min: f64,
    pub s_max: f64,
    pub radial_points: usize,
    pub angular_points: usize,
}

impl Default for OracleGrid {
    fn default() -> Self {
        Self {
            s_min: -34.0,
            s_max: 14.0,
            radial_points: 121,
            angular_points: 8,
        }
    }
}

struct RadialNode {
    t: f64,
    /// Trapezoid weight times the Jacobian `t` of `d²x = t ds dθ`.
    jac: f64,
    /// `e^{Li2(-t)/2hbar}`, the section weight at this radius.
    half_w: f64,
    sqrt_lambda: f64,
    sqrt_rho: f64,
}

/// Direct tensor-grid quadrature of either scalar product over
/// `C × C`, with every factor evaluated pointwise at complex `x, y` and the
/// modular function `D` taken from the groupoid geometry.
pub fn groupoid_norm_oracle(
    a: SectionIndex,
    b: SectionIndex,
    hbar: f64,
    weights: &WeightPair,
    product: ScalarProduct,
    grid: &OracleGrid,
) -> Result<Complex64, PolarizationError> {
    check_hbar(hbar)?;
    let ns = grid.radial_points.max(2);
    let ds = (grid.s_max - grid.s_min) / (ns - 1) as f64;
    let radial: Vec<RadialNode> = (0..ns)
        .map(|i| {
            let s = grid.s_min + i as f64 * ds;
            let t = s.exp();
            let end = if i == 0 || i == ns - 1 { 0.5 } else { 1.0 };
            RadialNode {
                t,
                jac: end * ds * t,
                half_w: (dilog_neg_exp(s) / (2.0 * hbar)).exp(),
                sqrt_lambda: weights.lambda.at(t).sqrt(),
                sqrt_rho: weights.rho.at(t).sqrt(),
            }
        })
        .collect();
    let na = grid.angular_points.max(1);
    let dth = 2.0 * PI / na as f64;
    let phases: Vec<Complex64> = (0..na).map(|j| Complex64::from_polar(1.0, j as f64 * dth)).collect();

    let mut total = Complex64::new(0.0, 0.0);
    for rx in &radial {
        let ax = rx.t.sqrt();
        for ry in &radial {
            let ay = ry.t.sqrt();
            let w = rx.half_w * rx.half_w * ry.half_w * ry.half_w;
            if w == 0.0 {
                continue;
            }
            let mut inner = Complex64::new(0.0, 0.0);
            for ex in &phases {
                let x = ex * ax;
                for ey in &phases {
                    let y = ey * ay;
                    let density = match product {
                        ScalarProduct::Symplectic => {
                            1.0 / ((1.0 + x.norm_sqr()) * (1.0 + y.norm_sqr())).sqrt()
                        }
                        ScalarProduct::Groupoid => {
                            let k = 1.0 + x.norm_sqr();
                            let g = ChartPoint::symplectic(x, ((y - x) / k).conj());
                            let d = modular_function(&g)?.exp();
                            rx.sqrt_lambda * ry.sqrt_rho
                                / (d * (1.0 + x.norm_sqr()) * (1.0 + y.norm_sqr())).sqrt()
                        }
                    };
                    // ψ̄_a ψ_b with ψ = x̄^m y^n
                    let psi_a = x.conj().powu(a.m) * y.powu(a.n);
                    let psi_b = x.conj().powu(b.m) * y.powu(b.n);
                    inner += psi_a.conj() * psi_b * density;
                }
            }
            total += inner * (w * rx.jac * ry.jac * dth * dth);
        }
    }
    if total.is_finite() {
        Ok(total)
    } else {
        Err(PolarizationError::NonFinite("oracle"))
    }
}

/// Largest relative asymmetry `|G(m,n) - G(n,m)| / G(m,n)` of the symplectic
/// Gram diagonal over the window `m, n < window`.
pub fn gram_symmetry_defect(table: &NormTable, window: u32) -> Result<f64, PolarizationError> {
    let mut worst = 0.0f64;
    for m in 0..window {
        for n in 0..window {
            let g = scalar_product_symplectic(SectionIndex::new(m, n), SectionIndex::new(m, n), table)?;
            let h = scalar_product_symplectic(SectionIndex::new(n, m), SectionIndex::new(n, m), table)?;
            worst = worst.max((g - h).norm() / g.norm());
        }
    }
    Ok(worst)
}

/// `max/min` of `A_m A_n / (l_m r_n)` over the window; a single weight pair
/// reproducing the symplectic product would need this to be 1.
pub fn proportionality_spread(table: &NormTable, window: u32) -> Result<f64, PolarizationError> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for m in 0..window {
        for n in 0..window {
            let (x, y) = (table.get(m)?, table.get(n)?);
            let q = x.ln_a + y.ln_a - x.ln_l - y.ln_r;
            lo = lo.min(q);
            hi = hi.max(q);
        }
    }
    Ok((hi - lo).exp())
}
