use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::{check_hbar, PolarizationError};
use crate::groupoid::{compose, Arrow, GroupoidKind, Unit};

/// A Bohr-Sommerfeld leaf `|x|^2 = F_+`, `|y|^2 = F_+ + ...` labelled by
/// `(n_+, n_-)`, or the leaf over the point where the Poisson structure
/// vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BsLeaf {
    Finite {
        n_plus: u64,
        n_minus: i64,
        /// `F_+ = e^{hbar n_+} - 1`, the source level `|x|^2`.
        f_source: f64,
        /// `e^{hbar (n_+ + n_-)} - 1`, the target level `|y|^2`.
        f_target: f64,
    },
    Inf,
}

/// A unit leaf, reported through `tau = e^{-hbar n}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaseLeaf {
    pub n: u64,
    /// `F = e^{hbar n} - 1`.
    pub level: f64,
    pub tau: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BsLeaves {
    /// Unit leaves `n = 0..=n_max`.
    pub base: Vec<BaseLeaf>,
    /// Every leaf with `n_+, n_+ + n_- <= n_max`, then the leaf at infinity.
    pub leaves: Vec<BsLeaf>,
}

/// Level `F = e^{hbar n} - 1`.
fn level(hbar: f64, n: f64) -> f64 {
    (hbar * n).exp_m1()
}

pub fn bs_leaves(hbar: f64, n_max: u64) -> Result<BsLeaves, PolarizationError> {
    check_hbar(hbar)?;
    let base = (0..=n_max)
        .map(|n| BaseLeaf {
            n,
            level: level(hbar, n as f64),
            tau: (-hbar * n as f64).exp(),
        })
        .collect();
    let mut leaves = Vec::new();
    for m in 0..=n_max {
        for t in 0..=n_max {
            leaves.push(BsLeaf::Finite {
                n_plus: m,
                n_minus: t as i64 - m as i64,
                f_source: level(hbar, m as f64),
                f_target: level(hbar, t as f64),
            });
        }
    }
    leaves.push(BsLeaf::Inf);
    Ok(BsLeaves { base, leaves })
}

/// `∮ Θ` around the circle `|x|^2 = f`, with the primitive
/// `Θ = -log(1 + |x|^2) dθ` of `dx ∧ dx̄ / (i (1 + |x|^2))`, by the
/// trapezoid rule on `steps` points. The exact value is `-2π log(1 + f)`;
/// the Bohr-Sommerfeld condition asks for it to lie in `2π hbar Z`.
pub fn holonomy(f: f64, steps: usize) -> f64 {
    let r = f.max(0.0).sqrt();
    if r == 0.0 {
        return 0.0;
    }
    let h = 2.0 * PI / steps as f64;
    let mut acc = 0.0;
    for k in 0..steps {
        let x = Complex64::from_polar(r, k as f64 * h);
        let dx = Complex64::new(0.0, 1.0) * x * h;
        // dθ = Im(dx / x)
        let dtheta = (dx / x).im;
        acc += -(1.0 + x.norm_sqr()).ln() * dtheta;
    }
    acc
}

/// An arrow of the leaf groupoid in real coordinates `(hbar m, hbar n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LeafArrow {
    Real { a: f64, b: f64 },
    Inf,
}

impl LeafArrow {
    /// Composition inherited from the action groupoid: `(a, b)(c, d) =
    /// (a, b + d)` when `a + b = c`, matched to within `tol`.
    pub fn compose(self, other: LeafArrow, tol: f64) -> Option<LeafArrow> {
        match (self, other) {
            (LeafArrow::Inf, LeafArrow::Inf) => Some(LeafArrow::Inf),
            (LeafArrow::Real { a, b }, LeafArrow::Real { a: c, b: d }) if (a + b - c).abs() < tol => {
                Some(LeafArrow::Real { a, b: b + d })
            }
            _ => None,
        }
    }

    /// `(hbar m, hbar n) -> (m, n)`.
    pub fn to_sheu(self, hbar: f64) -> Option<Arrow> {
        match self {
            LeafArrow::Inf => Some(Arrow::inf(0)),
            LeafArrow::Real { a, b } => {
                let m = (a / hbar).round();
                let n = (b / hbar).round();
                if m < 0.0 {
                    return None;
                }
                Arrow::new(Unit::Fin(m as u64), n as i64).ok()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeafGroupoidReport {
    pub arrows: usize,
    pub pairs_checked: usize,
    /// Pairs where the real composition and the Sheu composition disagree.
    pub mismatches: usize,
    /// Arrow map is injective and hits every Sheu arrow of the window.
    pub bijective: bool,
    pub units_to_units: bool,
}

impl LeafGroupoidReport {
    pub fn is_isomorphism(&self) -> bool {
        self.mismatches == 0 && self.bijective && self.units_to_units
    }
}

/// Build the leaf groupoid on the window `m, m + n <= n_max` together with
/// the unit at infinity, and compare its composition table with that of
/// Sheu's groupoid under `(hbar m, hbar n) -> (m, n)`.
pub fn leaf_groupoid(hbar: f64, n_max: u64) -> Result<LeafGroupoidReport, PolarizationError> {
    check_hbar(hbar)?;
    let mut arrows = Vec::new();
    for m in 0..=n_max {
        for t in 0..=n_max {
            let n = t as i64 - m as i64;
            arrows.push(LeafArrow::Real {
                a: hbar * m as f64,
                b: hbar * n as f64,
            });
        }
    }
    arrows.push(LeafArrow::Inf);

    let images: Vec<Option<Arrow>> = arrows.iter().map(|a| a.to_sheu(hbar)).collect();
    let image_set: BTreeSet<Arrow> = images.iter().flatten().copied().collect();
    let mut sheu_window: BTreeSet<Arrow> = BTreeSet::new();
    for m in 0..=n_max {
        for t in 0..=n_max {
            sheu_window.insert(Arrow::fin(m, t as i64 - m as i64));
        }
    }
    sheu_window.insert(Arrow::inf(0));
    let bijective = images.iter().all(Option::is_some)
        && image_set.len() == arrows.len()
        && image_set == sheu_window
        && image_set.iter().all(|a| a.is_admissible(GroupoidKind::Sheu));

    let units_to_units = arrows.iter().zip(&images).all(|(a, img)| {
        let is_unit = matches!(a, LeafArrow::Inf) || matches!(a, LeafArrow::Real { b, .. } if *b == 0.0);
        img.is_some_and(|i| i.is_unit() == is_unit)
    });

    let tol = 0.5 * hbar;
    let mut mismatches = 0;
    let mut pairs = 0;
    for (a, ia) in arrows.iter().zip(&images) {
        for (b, ib) in arrows.iter().zip(&images) {
            pairs += 1;
            let real = a.compose(*b, tol).and_then(|c| c.to_sheu(hbar));
            let sheu = match (ia, ib) {
                (Some(x), Some(y)) => compose(*x, *y),
                _ => None,
            };
            if real != sheu {
                mismatches += 1;
            }
        }
    }
    Ok(LeafGroupoidReport {
        arrows: arrows.len(),
        pairs_checked: pairs,
        mismatches,
        bijective,
        units_to_units,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        let l = bs_leaves(0.5, 5).unwrap();
        assert_eq!(l.base.len(), 6);
        assert_eq!(l.leaves.len(), 36 + 1);
        assert_eq!(*l.leaves.last().unwrap(), BsLeaf::Inf);
        assert_eq!(l.base[0].level, 0.0);
        assert_eq!(l.base[0].tau, 1.0);
        assert!(bs_leaves(0.0, 3).is_err());
    }

    #[test]
    fn levels_satisfy_bohr_sommerfeld() {
        let hbar = 0.5;
        for leaf in bs_leaves(hbar, 10).unwrap().base {
            let hol = holonomy(leaf.level, 64);
            let exact = -2.0 * PI * (1.0 + leaf.level).ln();
            assert!((hol - exact).abs() < 1e-12);
            let winding = hol / (2.0 * PI * hbar);
            assert!((winding + leaf.n as f64).abs() < 1e-12);
        }
        // an intermediate level is not quantized
        let w = holonomy(level(hbar, 2.5), 64) / (2.0 * PI * hbar);
        assert!((w - w.round()).abs() > 0.4);
    }

    #[test]
    fn sample_composition() {
        let hbar = 0.5;
        let a = LeafArrow::Real { a: hbar, b: 2.0 * hbar };
        let b = LeafArrow::Real { a: 3.0 * hbar, b: 4.0 * hbar };
        let c = a.compose(b, 0.25).unwrap();
        assert_eq!(c.to_sheu(hbar), Some(Arrow::fin(1, 6)));
        let b2 = LeafArrow::Real { a: 2.0 * hbar, b: 4.0 * hbar };
        assert_eq!(a.compose(b2, 0.25), None);
        assert_eq!(LeafArrow::Inf.to_sheu(hbar), Some(Arrow::inf(0)));
    }

    #[test]
    fn isomorphic_to_sheu_window() {
        let r = leaf_groupoid(0.5, 12).unwrap();
        assert!(r.is_isomorphism(), "{r:?}");
        assert_eq!(r.arrows, 13 * 13 + 1);
    }
}
