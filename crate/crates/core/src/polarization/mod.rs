//! Quantization of the symplectic groupoid: Bohr-Sommerfeld leaves of the
//! real polarization, norms of the complex-polarized monomial sections, and
//! the bridge from sections to the Sheu convolution algebra.
//!
//! Plane measures are `d^2x = i dx ∧ dx̄`, twice Lebesgue measure, so that
//! after angular reduction `∫ d^2x F(|x|^2) = 2π ∫_0^∞ F(t) dt`.

mod bridge;
mod leaves;
mod norms;
mod quantize;

use thiserror::Error;

use crate::geometry::{GeometryError, HaarDensity};
use crate::groupoid::GroupoidError;
use crate::special::QuadratureError;

pub use bridge::{
    bridge_measure, cocycle_from_norms, convolution_oracle, convolve_sections,
    groupoid_modular_eigenvalue, hilbert_bridge, modular_cocycle_phi, modular_reconstruction,
    phi_limit, section_value, PhiReport,
};
pub use leaves::{
    bs_leaves, holonomy, leaf_groupoid, BaseLeaf, BsLeaf, BsLeaves, LeafArrow, LeafGroupoidReport,
};
pub use norms::{
    angular_factor, gram_symmetry_defect, groupoid_norm_oracle, proportionality_spread,
    scalar_product_groupoid, scalar_product_symplectic, section_norms, NormTable, OracleGrid,
    ScalarProduct, SectionIndex, SectionNorms,
};
pub use quantize::{apply_f_rule, quantized_d, quantized_f, quantized_tau, Monomial};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolarizationError {
    #[error("hbar must be positive and finite, got {0}")]
    InvalidHbar(f64),
    #[error("index {index} exceeds the table size {size}")]
    OutOfTable { index: u32, size: u32 },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("non-finite value: {0}")]
    NonFinite(&'static str),
}

fn check_hbar(hbar: f64) -> Result<(), PolarizationError> {
    if hbar.is_finite() && hbar > 0.0 {
        Ok(())
    } else {
        Err(PolarizationError::InvalidHbar(hbar))
    }
}

/// The densities `(Λ, ρ)` entering the groupoid scalar product; both radial.
#[derive(Debug, Clone)]
pub struct WeightPair {
    pub lambda: HaarDensity,
    pub rho: HaarDensity,
}

impl Default for WeightPair {
    fn default() -> Self {
        Self {
            lambda: HaarDensity::unit(),
            rho: HaarDensity::unit(),
        }
    }
}

impl WeightPair {
    pub fn new(lambda: HaarDensity, rho: HaarDensity) -> Self {
        Self { lambda, rho }
    }

    /// `Λ = (2 + t)/(1 + t)`, `ρ = (1 + 4t)/(1 + t)` with limits 1 and 4:
    /// a non-trivial pair with `ρ(∞)/Λ(∞) = 4`.
    pub fn sample_custom() -> Self {
        let lambda = HaarDensity::radial(|t| (2.0 + t) / (1.0 + t), 1.0)
            .expect("positive on [0, inf)");
        let rho = HaarDensity::radial(|t| (1.0 + 4.0 * t) / (1.0 + t), 4.0)
            .expect("positive on [0, inf)");
        Self { lambda, rho }
    }
}
