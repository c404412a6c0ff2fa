//! The standard Podleś sphere `S^2_{q,0}` inside the Cuntz algebra:
//! generators as convolution series, their relations, the two irreducible
//! representations and the Haar state.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::groupoid::{
    fits_guard_band, kms_measure, shift_realization, state, AlgebraElement, Arrow, GroupoidError,
    GroupoidKind, KmsTag, Unit,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PodlesError {
    #[error("hbar must be positive and finite, got {0}")]
    InvalidHbar(f64),
    #[error("series cutoff must be at least 1")]
    EmptyCutoff,
    #[error("representation dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
}

/// `q = e^{-hbar/2}`; the deformation parameter `c` is fixed to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumSphereParams {
    hbar: f64,
    q: f64,
}

impl QuantumSphereParams {
    pub fn new(hbar: f64) -> Result<Self, PodlesError> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(PodlesError::InvalidHbar(hbar));
        }
        Ok(Self {
            hbar,
            q: (-0.5 * hbar).exp(),
        })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    fn tau_coeff(&self, m: u64) -> f64 {
        (-self.hbar * m as f64).exp()
    }

    fn alpha_coeff(&self, m: u64) -> f64 {
        let mf = m as f64;
        (-0.5 * self.hbar * mf).exp() * (-(-self.hbar * (mf + 1.0)).exp_m1()).sqrt()
    }
}

/// `tau = sum q^{2m} e_{m,0}` and `alpha = sum q^m (1 - q^{2m+2})^{1/2} e_{m,1}`
/// cut at `m < cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorPair {
    pub tau: AlgebraElement,
    pub alpha: AlgebraElement,
    pub cutoff: u64,
}

pub fn build_generators(
    params: &QuantumSphereParams,
    cutoff: u64,
) -> Result<GeneratorPair, PodlesError> {
    if cutoff == 0 {
        return Err(PodlesError::EmptyCutoff);
    }
    let re = |x: f64| Complex64::new(x, 0.0);
    let tau = AlgebraElement::from_terms(
        GroupoidKind::Cuntz,
        (0..cutoff).map(|m| (Arrow::fin(m, 0), re(params.tau_coeff(m)))),
    )?;
    let alpha = AlgebraElement::from_terms(
        GroupoidKind::Cuntz,
        (0..cutoff).map(|m| (Arrow::fin(m, 1), re(params.alpha_coeff(m)))),
    )?;
    Ok(GeneratorPair { tau, alpha, cutoff })
}

/// Residuals of the three defining relations on the window `m < cutoff - 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelationReport {
    /// Exclusive upper bound on finite sources inspected; zero means the
    /// window is empty and the residuals carry no information.
    pub window: u64,
    /// `q^2 alpha* alpha - tau (1 - tau)`.
    pub alpha_star_alpha: f64,
    /// `q^2 alpha alpha* - q^2 tau (1 - q^2 tau)`.
    pub alpha_alpha_star: f64,
    /// `alpha tau - q^2 tau alpha`.
    pub commutation: f64,
}

impl RelationReport {
    pub fn window_is_empty(&self) -> bool {
        self.window == 0
    }

    pub fn max_residual(&self) -> f64 {
        self.alpha_star_alpha
            .max(self.alpha_alpha_star)
            .max(self.commutation)
    }
}

pub fn check_relations(
    gen: &GeneratorPair,
    params: &QuantumSphereParams,
) -> Result<RelationReport, PodlesError> {
    let window = gen.cutoff.saturating_sub(2);
    let q2 = Complex64::new(params.q * params.q, 0.0);
    let one = AlgebraElement::truncated_unit(GroupoidKind::Cuntz, gen.cutoff + 2);
    let (tau, alpha) = (&gen.tau, &gen.alpha);
    let alpha_star = alpha.involute();

    let lhs1 = alpha_star.convolve(alpha)?.scale(q2);
    let rhs1 = tau.convolve(&one.sub(tau)?)?;
    let lhs2 = alpha.convolve(&alpha_star)?.scale(q2);
    let rhs2 = tau
        .convolve(&one.sub(&tau.scale(q2))?)?
        .scale(q2);
    let lhs3 = alpha.convolve(tau)?;
    let rhs3 = tau.convolve(alpha)?.scale(q2);

    let in_window = |a: Arrow| matches!(a.source(), Unit::Fin(m) if m < window);
    let residual = |l: &AlgebraElement, r: &AlgebraElement| -> Result<f64, PodlesError> {
        Ok(l.sub(r)?.restrict(in_window).max_abs())
    };
    Ok(RelationReport {
        window,
        alpha_star_alpha: residual(&lhs1, &rhs1)?,
        alpha_alpha_star: residual(&lhs2, &rhs2)?,
        commutation: residual(&lhs3, &rhs3)?,
    })
}

/// `rho(tau) psi_n = q^{2n} psi_n` on `span{psi_0, ..., psi_{dim-1}}`.
pub fn rho_tau_direct(params: &QuantumSphereParams, dim: usize) -> Result<DMatrix<Complex64>, PodlesError> {
    check_dim(dim)?;
    Ok(DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            Complex64::new(params.q.powi(2 * i as i32), 0.0)
        } else {
            Complex64::default()
        }
    }))
}

/// `rho(alpha) psi_n = q^{n-1} (1 - q^{2n})^{1/2} psi_{n-1}`.
pub fn rho_alpha_direct(
    params: &QuantumSphereParams,
    dim: usize,
) -> Result<DMatrix<Complex64>, PodlesError> {
    check_dim(dim)?;
    let q = params.q;
    Ok(DMatrix::from_fn(dim, dim, |i, j| {
        if j == i + 1 {
            let n = j as i32;
            Complex64::new(q.powi(n - 1) * (1.0 - q.powi(2 * n)).sqrt(), 0.0)
        } else {
            Complex64::default()
        }
    }))
}

fn check_dim(dim: usize) -> Result<(), PodlesError> {
    if dim < 2 {
        Err(PodlesError::DimensionTooSmall(dim))
    } else {
        Ok(())
    }
}

/// `rho(f)` through the shift realization; `f` must fit in `dim`.
pub fn rep_rho(f: &AlgebraElement, dim: usize) -> Result<DMatrix<Complex64>, PodlesError> {
    check_dim(dim)?;
    Ok(shift_realization(f, dim)?)
}

/// Largest entry difference between the direct and shift-realized
/// representations of `tau` and `alpha`, on the block of indices below
/// `min(cutoff, dim)` where the cut series is exact.
pub fn rho_agreement(
    gen: &GeneratorPair,
    params: &QuantumSphereParams,
    dim: usize,
) -> Result<f64, PodlesError> {
    let block = (gen.cutoff as usize).min(dim);
    let fit = |f: &AlgebraElement| {
        f.restrict(|a| {
            matches!((a.source(), a.target()), (Unit::Fin(m), Unit::Fin(t)) if (m.max(t) as usize) < dim)
        })
    };
    let pairs = [
        (rep_rho(&fit(&gen.tau), dim)?, rho_tau_direct(params, dim)?),
        (rep_rho(&fit(&gen.alpha), dim)?, rho_alpha_direct(params, dim)?),
    ];
    let mut worst: f64 = 0.0;
    for (via_shift, direct) in &pairs {
        for i in 0..block {
            for j in 0..block {
                worst = worst.max((via_shift[(i, j)] - direct[(i, j)]).norm());
            }
        }
    }
    debug_assert!(fits_guard_band(&fit(&gen.alpha), dim));
    Ok(worst)
}

/// A generator of the sphere algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    Tau,
    Alpha,
    AlphaStar,
}

/// A product of generators, read left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    /// Every word of length `1..=max_len`.
    pub fn all_up_to(max_len: usize) -> Vec<Word> {
        let letters = [Letter::Tau, Letter::Alpha, Letter::AlphaStar];
        let mut out = Vec::new();
        let mut layer = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for l in letters {
                    let mut v: Vec<Letter> = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned().map(Word));
            layer = next;
        }
        out
    }

    /// The product as a convolution series. The empty word is the
    /// truncated unit.
    pub fn element(&self, gen: &GeneratorPair) -> Result<AlgebraElement, PodlesError> {
        let alpha_star = gen.alpha.involute();
        let mut acc = AlgebraElement::truncated_unit(GroupoidKind::Cuntz, gen.cutoff + 1);
        for l in &self.0 {
            let g = match l {
                Letter::Tau => &gen.tau,
                Letter::Alpha => &gen.alpha,
                Letter::AlphaStar => &alpha_star,
            };
            acc = acc.convolve(g)?;
        }
        Ok(acc)
    }

    /// The counit `epsilon(tau) = 1`, `epsilon(alpha) = epsilon(alpha*) = 0`,
    /// extended multiplicatively.
    pub fn counit(&self) -> Complex64 {
        if self.0.iter().all(|l| *l == Letter::Tau) {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::default()
        }
    }
}

/// `phi(f) = sum_m f(m, 0) e^{-m hbar} (1 - e^{-hbar})`.
pub fn haar_state(f: &AlgebraElement, params: &QuantumSphereParams) -> Result<Complex64, PodlesError> {
    let mu = kms_measure(KmsTag::Geometric(params.hbar))?;
    Ok(state(f, &mu))
}

/// Largest `|phi(f * A(-i hbar) g) - phi(g * f)|` over all pairs of words of
/// length `<= max_len`.
pub fn kms_residual(
    gen: &GeneratorPair,
    params: &QuantumSphereParams,
    max_len: usize,
) -> Result<f64, PodlesError> {
    let words = Word::all_up_to(max_len);
    let elements: Vec<_> = words
        .iter()
        .map(|w| w.element(gen))
        .collect::<Result<_, _>>()?;
    let shift = Complex64::new(0.0, -params.hbar);
    let mut worst: f64 = 0.0;
    for f in &elements {
        for g in &elements {
            let lhs = haar_state(&f.convolve(&g.automorphism_c1(shift))?, params)?;
            let rhs = haar_state(&g.convolve(f)?, params)?;
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Ok(worst)
}
