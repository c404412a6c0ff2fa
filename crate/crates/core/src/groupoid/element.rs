use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{compose, Arrow, GroupoidError, GroupoidKind, Unit};

/// Coefficients with modulus below this are dropped from canonical forms.
pub const ZERO_THRESHOLD: f64 = 1e-14;

/// A `U(1)`-valued 2-cocycle on composable pairs.
pub trait TwoCocycle {
    fn value(&self, a: Arrow, b: Arrow) -> Complex64;
}

impl<F: Fn(Arrow, Arrow) -> Complex64> TwoCocycle for F {
    fn value(&self, a: Arrow, b: Arrow) -> Complex64 {
        self(a, b)
    }
}

/// The coboundary `zeta(a, b) = beta(a) beta(b) / beta(ab)` of a phase
/// function `beta`.
pub struct Coboundary<B>(pub B);

impl<B: Fn(Arrow) -> Complex64> TwoCocycle for Coboundary<B> {
    fn value(&self, a: Arrow, b: Arrow) -> Complex64 {
        let ab = compose(a, b).expect("cocycle evaluated on a composable pair");
        (self.0)(a) * (self.0)(b) / (self.0)(ab)
    }
}

/// A finitely supported function on `O1` or on Sheu's groupoid.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    kind: GroupoidKind,
    terms: BTreeMap<Arrow, Complex64>,
}

/// One entry of the JSON form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub m: Unit,
    pub n: i64,
    pub re: f64,
    pub im: f64,
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    groupoid: GroupoidKind,
    terms: Vec<TermRecord>,
}

impl AlgebraElement {
    pub fn zero(kind: GroupoidKind) -> Self {
        Self {
            kind,
            terms: BTreeMap::new(),
        }
    }

    /// The basis function `e_γ`.
    pub fn basis(kind: GroupoidKind, arrow: Arrow) -> Result<Self, GroupoidError> {
        Self::from_terms(kind, [(arrow, Complex64::new(1.0, 0.0))])
    }

    /// Sum of `c e_γ` over the given pairs; repeated arrows accumulate.
    pub fn from_terms<I>(kind: GroupoidKind, terms: I) -> Result<Self, GroupoidError>
    where
        I: IntoIterator<Item = (Arrow, Complex64)>,
    {
        let mut out = Self::zero(kind);
        for (a, c) in terms {
            if !a.is_admissible(kind) {
                return Err(GroupoidError::NotInSheu(a));
            }
            *out.terms.entry(a).or_default() += c;
        }
        out.canonicalize();
        Ok(out)
    }

    /// `sum_{m < cutoff} e_{m,0} + e_{∞,0}`, the unit truncated to a window.
    pub fn truncated_unit(kind: GroupoidKind, cutoff: u64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let terms = (0..cutoff)
            .map(|m| (Arrow::fin(m, 0), one))
            .chain(std::iter::once((Arrow::inf(0), one)));
        Self::from_terms(kind, terms).expect("unit arrows are admissible everywhere")
    }

    fn canonicalize(&mut self) {
        self.terms.retain(|_, c| c.norm() >= ZERO_THRESHOLD);
    }

    pub fn kind(&self) -> GroupoidKind {
        self.kind
    }

    /// Re-tag as the other groupoid, checking admissibility.
    pub fn with_kind(&self, kind: GroupoidKind) -> Result<Self, GroupoidError> {
        Self::from_terms(kind, self.terms())
    }

    pub fn coefficient(&self, arrow: Arrow) -> Complex64 {
        self.terms.get(&arrow).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Arrow, Complex64)> + '_ {
        self.terms.iter().map(|(a, c)| (*a, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_kind(&self, other: &Self) -> Result<(), GroupoidError> {
        if self.kind == other.kind {
            Ok(())
        } else {
            Err(GroupoidError::MixedKinds)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, GroupoidError> {
        self.same_kind(other)?;
        let mut out = self.clone();
        for (a, c) in other.terms() {
            *out.terms.entry(a).or_default() += c;
        }
        out.canonicalize();
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, GroupoidError> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self {
            kind: self.kind,
            terms: self.terms.iter().map(|(a, c)| (*a, c * s)).collect(),
        };
        out.canonicalize();
        out
    }

    /// Multiply each coefficient by `w(γ)`.
    pub fn map_coefficients<W: Fn(Arrow, Complex64) -> Complex64>(&self, w: W) -> Self {
        let mut out = Self {
            kind: self.kind,
            terms: self.terms.iter().map(|(a, c)| (*a, w(*a, *c))).collect(),
        };
        out.canonicalize();
        out
    }

    /// Keep only arrows satisfying `keep`.
    pub fn restrict<P: Fn(Arrow) -> bool>(&self, keep: P) -> Self {
        Self {
            kind: self.kind,
            terms: self
                .terms
                .iter()
                .filter(|(a, _)| keep(**a))
                .map(|(a, c)| (*a, *c))
                .collect(),
        }
    }

    /// Largest coefficient modulus, 0 for the zero element.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64, GroupoidError> {
        Ok(self.sub(other)?.max_abs())
    }

    /// Largest finite endpoint `max(m, m + n)` over the support.
    pub fn finite_extent(&self) -> Option<u64> {
        self.terms
            .keys()
            .filter_map(|a| Some(a.source().finite()?.max(a.target().finite()?)))
            .max()
    }

    /// Untwisted convolution.
    pub fn convolve(&self, other: &Self) -> Result<Self, GroupoidError> {
        self.convolve_twisted(other, None)
    }

    /// `(f * g)(γ) = sum_{γ = γ1 γ2} f(γ1) g(γ2) zeta(γ1, γ2)`.
    pub fn convolve_twisted(
        &self,
        other: &Self,
        zeta: Option<&dyn TwoCocycle>,
    ) -> Result<Self, GroupoidError> {
        self.same_kind(other)?;
        let mut out = Self::zero(self.kind);
        for (&a, &ca) in &self.terms {
            let t = a.target();
            let lo = Arrow::fibre_start(t);
            for (&b, &cb) in other.terms.range(lo..).take_while(|(b, _)| b.source() == t) {
                let ab = compose(a, b).expect("source matches target");
                let phase = zeta.map_or(Complex64::new(1.0, 0.0), |z| z.value(a, b));
                *out.terms.entry(ab).or_default() += ca * cb * phase;
            }
        }
        out.canonicalize();
        Ok(out)
    }

    /// `f*(γ) = conj f(γ^-1)`.
    pub fn involute(&self) -> Self {
        self.involute_twisted(None)
    }

    /// `f*(γ) = conj(f(γ^-1) zeta(γ, γ^-1))`.
    pub fn involute_twisted(&self, zeta: Option<&dyn TwoCocycle>) -> Self {
        let mut out = Self::zero(self.kind);
        for (&a, &c) in &self.terms {
            let inv = a.inverse();
            let phase = zeta.map_or(Complex64::new(1.0, 0.0), |z| z.value(inv, a));
            out.terms.insert(inv, (c * phase).conj());
        }
        out.canonicalize();
        out
    }

    /// `A_{c1}(t) e_{m,n} = e^{itn} e_{m,n}`; complex `t` gives the analytic
    /// continuation, e.g. `t = -i hbar` rescales by `e^{hbar n}`.
    pub fn automorphism_c1(&self, t: Complex64) -> Self {
        let i = Complex64::new(0.0, 1.0);
        self.map_coefficients(|a, c| c * (i * t * a.c1()).exp())
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms()
            .map(|(a, c)| TermRecord {
                m: a.source(),
                n: a.translation(),
                re: c.re,
                im: c.im,
            })
            .collect()
    }

    pub fn from_records(kind: GroupoidKind, records: &[TermRecord]) -> Result<Self, GroupoidError> {
        let mut terms = Vec::with_capacity(records.len());
        for r in records {
            terms.push((Arrow::new(r.m, r.n)?, Complex64::new(r.re, r.im)));
        }
        Self::from_terms(kind, terms)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ElementJson {
            groupoid: self.kind,
            terms: self.to_records(),
        })
        .expect("records serialize")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, GroupoidError> {
        let parsed: ElementJson = serde_json::from_value(value.clone())
            .map_err(|e| GroupoidError::Malformed(e.to_string()))?;
        Self::from_records(parsed.groupoid, &parsed.terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use GroupoidKind::{Cuntz, Sheu};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn e(m: u64, n: i64) -> AlgebraElement {
        AlgebraElement::basis(Cuntz, Arrow::fin(m, n)).unwrap()
    }

    #[test]
    fn basis_product_follows_composition() {
        assert_eq!(e(1, 2).convolve(&e(3, 4)).unwrap(), e(1, 6));
        assert!(e(1, 2).convolve(&e(2, 4)).unwrap().is_empty());
    }

    #[test]
    fn bilinear_expansion_keeps_composable_pairs() {
        let f = e(0, 1).add(&e(1, 1)).unwrap();
        let g = e(1, -1).add(&e(2, -1)).unwrap();
        let expected = e(0, 0).add(&e(1, 0)).unwrap();
        assert_eq!(f.convolve(&g).unwrap(), expected);
    }

    #[test]
    fn units_restrict_to_source() {
        let f = AlgebraElement::from_terms(
            Cuntz,
            [
                (Arrow::fin(2, 1), c(1.0, 0.5)),
                (Arrow::fin(2, -2), c(-3.0, 0.0)),
                (Arrow::fin(3, 0), c(0.25, 0.0)),
                (Arrow::inf(4), c(0.0, 1.0)),
            ],
        )
        .unwrap();
        let restricted = f.restrict(|a| a.source() == Unit::Fin(2));
        assert_eq!(e(2, 0).convolve(&f).unwrap(), restricted);
    }

    #[test]
    fn involution_on_basis() {
        assert_eq!(e(1, 2).involute(), e(3, -2));
        assert_eq!(e(4, 0).involute(), e(4, 0));
        let f = e(0, 1).scale(c(0.0, 1.0));
        assert_eq!(f.involute(), e(1, -1).scale(c(0.0, -1.0)));
    }

    #[test]
    fn automorphism_rescales_by_translation() {
        let t = 0.7;
        let f = e(3, -1).automorphism_c1(c(t, 0.0));
        assert!((f.coefficient(Arrow::fin(3, -1)) - c(0.0, -t).exp()).norm() < 1e-15);
        let hbar = 0.5;
        let g = e(2, 3).automorphism_c1(c(0.0, -hbar));
        assert!((g.coefficient(Arrow::fin(2, 3)).re - (3.0 * hbar).exp()).abs() < 1e-14);
        assert_eq!(e(2, 3).automorphism_c1(c(0.0, 0.0)), e(2, 3));
    }

    #[test]
    fn mixed_kinds_rejected() {
        let a = AlgebraElement::basis(Sheu, Arrow::fin(0, 0)).unwrap();
        assert_eq!(a.convolve(&e(0, 0)), Err(GroupoidError::MixedKinds));
        assert!(AlgebraElement::basis(Sheu, Arrow::inf(1)).is_err());
    }

    #[test]
    fn twisted_product_picks_up_phase() {
        let zeta = |a: Arrow, b: Arrow| c(0.0, (a.translation() * b.translation()) as f64).exp();
        let p = e(0, 2).convolve_twisted(&e(2, 3), Some(&zeta)).unwrap();
        assert!((p.coefficient(Arrow::fin(0, 5)) - c(0.0, 6.0).exp()).norm() < 1e-15);
    }

    #[test]
    fn tiny_coefficients_are_dropped() {
        let f = e(0, 0).scale(c(1e-15, 0.0));
        assert!(f.is_empty());
    }

    #[test]
    fn json_round_trip() {
        let f = AlgebraElement::from_terms(
            Cuntz,
            [(Arrow::fin(1, -1), c(0.5, -2.0)), (Arrow::inf(-3), c(1.0, 0.0))],
        )
        .unwrap();
        let v = f.to_json();
        assert_eq!(v["groupoid"], "O1");
        assert_eq!(v["terms"][1]["m"], "inf");
        assert_eq!(AlgebraElement::from_json(&v).unwrap(), f);
        let bad = serde_json::json!({"groupoid": "GS", "terms": [{"m": "inf", "n": 2, "re": 1.0, "im": 0.0}]});
        assert!(AlgebraElement::from_json(&bad).is_err());
    }
}
