use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{evaluation_map, AlgebraElement, Arrow, GroupoidError, GroupoidKind, Unit};

/// True when every finite arrow of `f` has both endpoints below `dim`.
pub fn fits_guard_band(f: &AlgebraElement, dim: usize) -> bool {
    f.finite_extent().is_none_or(|e| (e as usize) < dim)
}

/// Matrix of `f` acting on `span{|0>, ..., |dim-1>}` through
/// `e_{m,n}|p> = delta_{m+n,p} |m>`.
///
/// Arrows over `∞` act as zero on this space. A finite arrow reaching
/// `dim` or beyond is a truncation violation.
pub fn shift_realization(
    f: &AlgebraElement,
    dim: usize,
) -> Result<DMatrix<Complex64>, GroupoidError> {
    let mut mat = DMatrix::zeros(dim, dim);
    for (a, c) in f.terms() {
        let (Unit::Fin(m), Unit::Fin(t)) = (a.source(), a.target()) else {
            continue;
        };
        let (m, t) = (m as usize, t as usize);
        if m >= dim || t >= dim {
            return Err(GroupoidError::TruncationViolation { arrow: a, dim });
        }
        mat[(m, t)] += c;
    }
    Ok(mat)
}

/// `S = sum_{m < dim-1} e_{1+m,-1} + e_{∞,-1}`, the shift cut to fit `dim`.
pub fn shift_element(dim: usize) -> AlgebraElement {
    let one = Complex64::new(1.0, 0.0);
    let terms = (0..dim.saturating_sub(1) as u64)
        .map(|m| (Arrow::fin(1 + m, -1), one))
        .chain(std::iter::once((Arrow::inf(-1), one)));
    AlgebraElement::from_terms(GroupoidKind::Cuntz, terms).expect("O1 admits every arrow")
}

/// Truncated check of `0 -> K -> C*(O1) -> C(S^1) -> 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequenceLeakage {
    /// Largest coefficient of `sigma(S*S - SS*)`; the commutator is compact
    /// so this should vanish.
    pub sigma_of_commutator: f64,
    /// Largest entry of `(S*S - SS*) - E_00` on indices `< dim - 1`, away from
    /// the truncation edge.
    pub interior_defect: f64,
    /// Largest entry of `S*S - 1` on indices `< dim - 1`: the isometry
    /// property of the shift.
    pub isometry_defect: f64,
}

pub fn exact_sequence_leakage(dim: usize) -> Result<SequenceLeakage, GroupoidError> {
    let s = shift_element(dim);
    let s_star = s.involute();
    let commutator = s_star.convolve(&s)?.sub(&s.convolve(&s_star)?)?;
    let sigma_of_commutator = evaluation_map(&commutator).max_abs();

    let mat = shift_realization(&commutator, dim)?;
    let ss = shift_realization(&s_star.convolve(&s)?, dim)?;
    let inner = dim.saturating_sub(1);
    let mut interior_defect: f64 = 0.0;
    let mut isometry_defect: f64 = 0.0;
    for i in 0..inner {
        for j in 0..inner {
            let delta = if i == j { 1.0 } else { 0.0 };
            let e00 = if i == 0 && j == 0 { 1.0 } else { 0.0 };
            interior_defect = interior_defect.max((mat[(i, j)] - e00).norm());
            isometry_defect = isometry_defect.max((ss[(i, j)] - delta).norm());
        }
    }
    Ok(SequenceLeakage {
        sigma_of_commutator,
        interior_defect,
        isometry_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(m: u64, n: i64) -> AlgebraElement {
        AlgebraElement::basis(GroupoidKind::Cuntz, Arrow::fin(m, n)).unwrap()
    }

    #[test]
    fn basis_maps_to_matrix_units() {
        let dim = 6;
        for m in 0..dim as u64 {
            for t in 0..dim as u64 {
                let mat = shift_realization(&e(m, t as i64 - m as i64), dim).unwrap();
                for i in 0..dim {
                    for j in 0..dim {
                        let want = f64::from(i as u64 == m && j as u64 == t);
                        assert_eq!(mat[(i, j)].re, want);
                    }
                }
            }
        }
    }

    #[test]
    fn violation_is_reported() {
        let err = shift_realization(&e(3, 2), 5).unwrap_err();
        assert_eq!(
            err,
            GroupoidError::TruncationViolation {
                arrow: Arrow::fin(3, 2),
                dim: 5
            }
        );
        assert!(!fits_guard_band(&e(3, 2), 5));
        assert!(fits_guard_band(&e(3, 1), 5));
    }

    #[test]
    fn truncated_shift_products() {
        let dim = 8;
        let s = shift_realization(&shift_element(dim), dim).unwrap();
        let s_adj = s.adjoint();
        let ss_adj = &s * &s_adj;
        let s_adj_s = &s_adj * &s;
        for i in 0..dim {
            for j in 0..dim {
                let id = f64::from(i == j);
                let want_a = id - f64::from(i == 0 && j == 0);
                let want_b = id - f64::from(i == dim - 1 && j == dim - 1);
                assert_eq!(ss_adj[(i, j)].re, want_a, "S S* at ({i},{j})");
                assert_eq!(s_adj_s[(i, j)].re, want_b, "S* S at ({i},{j})");
            }
        }
        assert_eq!(
            shift_realization(&shift_element(dim).involute(), dim).unwrap(),
            s_adj
        );
    }

    #[test]
    fn leakage_vanishes() {
        let leak = exact_sequence_leakage(16).unwrap();
        assert_eq!(leak.sigma_of_commutator, 0.0);
        assert_eq!(leak.interior_defect, 0.0);
        assert_eq!(leak.isometry_defect, 0.0);
    }
}
