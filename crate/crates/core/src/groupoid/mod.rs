//! The Cuntz groupoid `O1 = Z ⋉ N̄` and Sheu's subgroupoid, their
//! finitely supported convolution algebras, KMS measures and the GNS data
//! built from them.

mod arrow;
mod element;
mod evaluation;
mod measure;
mod shift;

use thiserror::Error;

pub use arrow::{compose, Arrow, GroupoidKind, Unit};
pub use element::{AlgebraElement, Coboundary, TermRecord, TwoCocycle, ZERO_THRESHOLD};
pub use evaluation::{evaluation_map, LaurentPoly};
pub use measure::{
    gns_inner, kms_measure, modular_conjugation, modular_operator, state, KmsTag, UnitMeasure,
};
pub use shift::{
    exact_sequence_leakage, fits_guard_band, shift_element, shift_realization, SequenceLeakage,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GroupoidError {
    #[error("arrow ({m}, {n}) leaves the compactified naturals")]
    InvalidArrow { m: Unit, n: i64 },
    #[error("arrow {0} is not in Sheu's groupoid")]
    NotInSheu(Arrow),
    #[error("cannot combine elements of different groupoids")]
    MixedKinds,
    #[error("arrow {arrow} does not fit in dimension {dim}")]
    TruncationViolation { arrow: Arrow, dim: usize },
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("hbar must be positive and finite, got {0}")]
    InvalidHbar(f64),
    #[error("malformed element: {0}")]
    Malformed(String),
}

/// A real 1-cocycle on the groupoid.
pub trait Cocycle1 {
    fn value(&self, a: Arrow) -> f64;
}

/// `c1(m, n) = n`.
#[derive(Debug, Clone, Copy, Default)]
pub struct TranslationCocycle;

impl Cocycle1 for TranslationCocycle {
    fn value(&self, a: Arrow) -> f64 {
        a.c1()
    }
}

impl<F: Fn(Arrow) -> f64> Cocycle1 for F {
    fn value(&self, a: Arrow) -> f64 {
        self(a)
    }
}

/// Largest `|c(a) + c(b) - c(ab)|` over composable finite pairs with all
/// endpoints `<= window`, plus the `∞` fibre for translations up to `window`.
pub fn cocycle_defect<C: Cocycle1 + ?Sized>(c: &C, window: u64) -> f64 {
    let w = window as i64;
    let mut worst: f64 = 0.0;
    for m in 0..=window {
        for n in -(m as i64)..=(w - m as i64) {
            let a = Arrow::fin(m, n);
            let t = (m as i64 + n) as u64;
            for q in -(t as i64)..=(w - t as i64) {
                let b = Arrow::fin(t, q);
                let ab = compose(a, b).expect("composable by construction");
                worst = worst.max((c.value(a) + c.value(b) - c.value(ab)).abs());
            }
        }
    }
    for n in -w..=w {
        for q in -w..=w {
            let (a, b) = (Arrow::inf(n), Arrow::inf(q));
            let ab = compose(a, b).expect("infinity fibre is a group");
            worst = worst.max((c.value(a) + c.value(b) - c.value(ab)).abs());
        }
    }
    worst
}
