use std::f64::consts::PI;

use num_complex::Complex64;

use super::norms::{scalar_product_groupoid, NormTable, OracleGrid, SectionIndex};
use super::{check_hbar, PolarizationError, WeightPair};
use crate::groupoid::{AlgebraElement, Arrow, GroupoidKind, Unit, UnitMeasure};
use crate::special::dilog;

/// `σ_{m,k} *_Λ σ_{j,n}`: the `z`-integral is `l_k` when `k = j` and vanishes
/// otherwise, leaving `l_k σ_{m,n}`.
pub fn convolve_sections(
    a: SectionIndex,
    b: SectionIndex,
    table: &NormTable,
) -> Result<Option<(f64, SectionIndex)>, PolarizationError> {
    if a.n != b.m {
        return Ok(None);
    }
    Ok(Some((table.get(a.n)?.l(), SectionIndex::new(a.m, b.n))))
}

/// `σ_{m,n}(x, y) = x̄^m y^n e^{(Li2(-|x|^2) + Li2(-|y|^2))/2hbar}`.
pub fn section_value(
    idx: SectionIndex,
    x: Complex64,
    y: Complex64,
    hbar: f64,
) -> Result<Complex64, PolarizationError> {
    check_hbar(hbar)?;
    let lx = dilog(-x.norm_sqr()).map_err(|_| PolarizationError::NonFinite("dilog"))?;
    let ly = dilog(-y.norm_sqr()).map_err(|_| PolarizationError::NonFinite("dilog"))?;
    Ok(x.conj().powu(idx.m) * y.powu(idx.n) * ((lx + ly) / (2.0 * hbar)).exp())
}

/// `∫ d²z sqrt(Λ(z)) σ_a(x, z) σ_b(z, y)` by a polar tensor grid in
/// `(log|z|^2, arg z)`, evaluating the sections pointwise.
pub fn convolution_oracle(
    a: SectionIndex,
    b: SectionIndex,
    x: Complex64,
    y: Complex64,
    hbar: f64,
    weights: &WeightPair,
    grid: &OracleGrid,
) -> Result<Complex64, PolarizationError> {
    check_hbar(hbar)?;
    let ns = grid.radial_points.max(2);
    let ds = (grid.s_max - grid.s_min) / (ns - 1) as f64;
    let na = grid.angular_points.max(1);
    let dth = 2.0 * PI / na as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..ns {
        let s = grid.s_min + i as f64 * ds;
        let t = s.exp();
        let end = if i == 0 || i == ns - 1 { 0.5 } else { 1.0 };
        let jac = end * ds * t * dth * weights.lambda.at(t).sqrt();
        for j in 0..na {
            let z = Complex64::from_polar(t.sqrt(), j as f64 * dth);
            total += section_value(a, x, z, hbar)? * section_value(b, z, y, hbar)? * jac;
        }
    }
    Ok(total)
}

/// `e(σ_{m,n}) = sqrt(l_m l_n) e_{m, n-m}` in the Sheu algebra.
pub fn hilbert_bridge(
    idx: SectionIndex,
    table: &NormTable,
) -> Result<AlgebraElement, PolarizationError> {
    let (l_m, l_n) = (table.get(idx.m)?, table.get(idx.n)?);
    let c = (0.5 * (l_m.ln_l + l_n.ln_l)).exp();
    let arrow = Arrow::new(Unit::Fin(idx.m as u64), idx.n as i64 - idx.m as i64)?;
    Ok(AlgebraElement::from_terms(
        GroupoidKind::Sheu,
        [(arrow, Complex64::new(c, 0.0))],
    )?)
}

/// `μ(m) = r_m / l_m` for `m < table.size()`.
pub fn bridge_measure(table: &NormTable) -> Result<UnitMeasure, PolarizationError> {
    let weights = (0..table.size())
        .map(|m| Ok((Unit::Fin(m as u64), table.get(m)?.ratio())))
        .collect::<Result<Vec<_>, PolarizationError>>()?;
    Ok(UnitMeasure::custom(weights)?)
}

/// Eigenvalue of the modular operator of the `(ρ, Λ)` product on `σ_{m,n}`:
/// `‖σ_{n,m}‖^2 / ‖σ_{m,n}‖^2 = l_n r_m / (l_m r_n)`.
pub fn groupoid_modular_eigenvalue(
    idx: SectionIndex,
    table: &NormTable,
) -> Result<f64, PolarizationError> {
    let fwd = scalar_product_groupoid(idx, idx, table)?.re;
    let back = scalar_product_groupoid(idx.swapped(), idx.swapped(), table)?.re;
    Ok(back / fwd)
}

/// `c(m, k) = (1/hbar) log` of the modular eigenvalue on `σ_{m, m+k}`, the
/// cocycle induced on the arrow `(m, k)` by the `(ρ, Λ)` product.
pub fn cocycle_from_norms(m: u32, k: i64, table: &NormTable) -> Result<f64, PolarizationError> {
    let n = m as i64 + k;
    if n < 0 {
        return Err(PolarizationError::Groupoid(
            crate::groupoid::GroupoidError::InvalidArrow { m: Unit::Fin(m as u64), n: k },
        ));
    }
    let e = groupoid_modular_eigenvalue(SectionIndex::new(m, n as u32), table)?;
    Ok(e.ln() / table.hbar())
}

/// `φ(∞) = -1/2 + log(ρ(∞)/Λ(∞)) / (2 hbar)`.
pub fn phi_limit(hbar: f64, weights: &WeightPair) -> f64 {
    -0.5 + (weights.rho.at_infinity() / weights.lambda.at_infinity()).ln() / (2.0 * hbar)
}

/// `e^{-hbar (m - n)} e^{hbar (φ(m) - φ(n))}`; `φ(m) - φ(n)` is `∂*φ` on the
/// arrow `(m, n - m)`.
pub fn modular_reconstruction(m: u32, n: u32, phi: &[f64], hbar: f64) -> Option<f64> {
    let (pm, pn) = (phi.get(m as usize)?, phi.get(n as usize)?);
    Some((-hbar * (m as f64 - n as f64) + hbar * (pm - pn)).exp())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhiReport {
    /// `φ(m) = (1/hbar) log(r_m / l_m) + m`, `m = 0..=m_max`.
    pub phi: Vec<f64>,
    pub limit: f64,
    /// `|φ(m_max) - φ(∞)|`.
    pub final_deviation: f64,
    /// Largest increase of `|φ(m) - φ(∞)|` between consecutive `m` in the
    /// upper half of the range; zero for a monotone tail.
    pub tail_increase: f64,
    /// `max |c(m, k) - k - (φ(m) - φ(m+k))|` over `m, m+k <= m_max`.
    pub coboundary_residual: f64,
}

impl PhiReport {
    pub fn tail_is_monotone(&self, slack: f64) -> bool {
        self.tail_increase <= slack
    }
}

pub fn modular_cocycle_phi(m_max: u32, table: &NormTable) -> Result<PhiReport, PolarizationError> {
    if m_max < 5 || m_max >= table.size() {
        return Err(PolarizationError::OutOfTable {
            index: m_max,
            size: table.size(),
        });
    }
    let hbar = table.hbar();
    let phi = (0..=m_max)
        .map(|m| {
            let s = table.get(m)?;
            Ok((s.ln_r - s.ln_l) / hbar + m as f64)
        })
        .collect::<Result<Vec<f64>, PolarizationError>>()?;
    let limit = phi_limit(hbar, table.weights());
    let dev: Vec<f64> = phi.iter().map(|p| (p - limit).abs()).collect();
    let tail_increase = dev[(m_max / 2) as usize..]
        .windows(2)
        .map(|w| (w[1] - w[0]).max(0.0))
        .fold(0.0, f64::max);
    let mut coboundary_residual = 0.0f64;
    for m in 0..=m_max {
        for n in 0..=m_max {
            let k = n as i64 - m as i64;
            let c = cocycle_from_norms(m, k, table)?;
            let d = phi[m as usize] - phi[n as usize];
            coboundary_residual = coboundary_residual.max((c - k as f64 - d).abs());
        }
    }
    Ok(PhiReport {
        final_deviation: dev[m_max as usize],
        phi,
        limit,
        tail_increase,
        coboundary_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{gns_inner, modular_operator};
    use crate::special::QuadratureSpec;

    fn table(weights: WeightPair, size: u32) -> NormTable {
        NormTable::new(0.5, weights, QuadratureSpec::default(), size).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn selection_rule() {
        let t = table(WeightPair::default(), 4);
        assert_eq!(convolve_sections(SectionIndex::new(0, 1), SectionIndex::new(2, 3), &t).unwrap(), None);
        let (c, idx) = convolve_sections(SectionIndex::new(0, 1), SectionIndex::new(1, 3), &t)
            .unwrap()
            .unwrap();
        assert_eq!(idx, SectionIndex::new(0, 3));
        assert_eq!(c, t.get(1).unwrap().l());
    }

    #[test]
    fn convolution_matches_direct_z_integral() {
        let hbar = 0.5;
        for weights in [WeightPair::default(), WeightPair::sample_custom()] {
            let t = table(weights.clone(), 3);
            let grid = OracleGrid {
                radial_points: 241,
                angular_points: 8,
                ..OracleGrid::default()
            };
            let (x, y) = (Complex64::new(0.3, -0.7), Complex64::new(-1.1, 0.4));
            let (a, b) = (SectionIndex::new(0, 1), SectionIndex::new(1, 2));
            let direct = convolution_oracle(a, b, x, y, hbar, &weights, &grid).unwrap();
            let (c, idx) = convolve_sections(a, b, &t).unwrap().unwrap();
            let closed = section_value(idx, x, y, hbar).unwrap() * c;
            assert!((direct - closed).norm() < 1e-9 * closed.norm(), "{direct} vs {closed}");
            let off = convolution_oracle(a, SectionIndex::new(2, 2), x, y, hbar, &weights, &grid).unwrap();
            assert!(off.norm() < 1e-12);
        }
    }

    #[test]
    fn bridge_is_homomorphic_and_isometric() {
        let t = table(WeightPair::sample_custom(), 8);
        let mu = bridge_measure(&t).unwrap();
        for m in 0..8 {
            for k in 0..8 {
                for n in 0..8 {
                    let (a, b) = (SectionIndex::new(m, k), SectionIndex::new(k, n));
                    let (c, idx) = convolve_sections(a, b, &t).unwrap().unwrap();
                    let lhs = hilbert_bridge(idx, &t).unwrap().scale(Complex64::new(c, 0.0));
                    let rhs = hilbert_bridge(a, &t)
                        .unwrap()
                        .convolve(&hilbert_bridge(b, &t).unwrap())
                        .unwrap();
                    assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12 * lhs.max_abs());
                }
                let s = SectionIndex::new(m, k);
                let e = hilbert_bridge(s, &t).unwrap();
                let norm = gns_inner(&e, &e, &mu).unwrap();
                let exact = scalar_product_groupoid(s, s, &t).unwrap();
                assert!((norm - exact).norm() < 1e-12 * exact.norm());
                let star = e.involute();
                let swapped = hilbert_bridge(s.swapped(), &t).unwrap();
                assert!(star.max_abs_diff(&swapped).unwrap() < 1e-12 * e.max_abs());
            }
        }
    }

    #[test]
    fn modular_eigenvalues_reconstruct() {
        let hbar = 0.5;
        let unit = table(WeightPair::default(), 12);
        for weights in [WeightPair::default(), WeightPair::sample_custom()] {
            let t = table(weights, 12);
            let rep = modular_cocycle_phi(11, &t).unwrap();
            assert!(rep.coboundary_residual < 1e-9);
            for m in 0..12 {
                for n in 0..12 {
                    let e = groupoid_modular_eigenvalue(SectionIndex::new(m, n), &t).unwrap();
                    let r = modular_reconstruction(m, n, &rep.phi, hbar).unwrap();
                    assert!(rel(e, r) < 1e-12);
                }
            }
        }
        // the algebra's modular operator sees e^{-hbar(m-n)} on the bridged basis
        let e = hilbert_bridge(SectionIndex::new(3, 5), &unit).unwrap();
        let d = modular_operator(&e, hbar).unwrap();
        let factor = d.max_abs() / e.max_abs();
        assert!(rel(factor, (-hbar * (3.0 - 5.0)).exp()) < 1e-14);
    }

    #[test]
    fn phi_tends_to_its_limit() {
        let t = table(WeightPair::default(), 41);
        t.prefetch().unwrap();
        let rep = modular_cocycle_phi(40, &t).unwrap();
        assert_eq!(rep.limit, -0.5);
        // independent mpmath value at n = 40, hbar = 0.5
        assert!((rep.phi[40] + 0.500000001127765).abs() < 1e-8);
        assert!(rep.tail_is_monotone(1e-9), "{}", rep.tail_increase);

        let c = table(WeightPair::sample_custom(), 41);
        c.prefetch().unwrap();
        let rep = modular_cocycle_phi(40, &c).unwrap();
        assert!((rep.limit - (-0.5 + 4f64.ln())).abs() < 1e-15);
        assert!((rep.phi[40] - 0.886294356402).abs() < 1e-8);
        assert!(rep.tail_is_monotone(1e-9));
        assert!(modular_cocycle_phi(4, &c).is_err());
    }
}
