use super::norms::SectionIndex;

/// `c x̄^m y^n`, the holomorphic part `ψ(x̄, y)` of a polarized section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monomial {
    pub coeff: f64,
    pub xbar_power: u32,
    pub y_power: u32,
}

impl Monomial {
    pub fn of(idx: SectionIndex) -> Self {
        Self {
            coeff: 1.0,
            xbar_power: idx.m,
            y_power: idx.n,
        }
    }

    /// `x̄ ∂_x̄`, exact on monomials.
    pub fn euler_xbar(self) -> Self {
        Self {
            coeff: self.coeff * self.xbar_power as f64,
            ..self
        }
    }
}

/// `ψ -> hbar x̄ ∂_x̄ ψ + (hbar/2) ψ`, the quantization of `f = log(1 + |x|^2)`
/// on polarized sections.
pub fn apply_f_rule(psi: Monomial, hbar: f64) -> Monomial {
    let d = psi.euler_xbar();
    Monomial {
        coeff: hbar * d.coeff + 0.5 * hbar * psi.coeff,
        ..psi
    }
}

/// `hbar (m + 1/2)`.
pub fn quantized_f(idx: SectionIndex, hbar: f64) -> f64 {
    hbar * (idx.m as f64 + 0.5)
}

/// `e^{-hbar (m + 1/2)}`.
pub fn quantized_tau(idx: SectionIndex, hbar: f64) -> f64 {
    (-quantized_f(idx, hbar)).exp()
}

/// `e^{-hbar (m - n)}`.
pub fn quantized_d(idx: SectionIndex, hbar: f64) -> f64 {
    (-hbar * (idx.m as f64 - idx.n as f64)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_rule_reproduces_eigenvalue() {
        let hbar = 0.5;
        for m in 0..20 {
            for n in 0..5 {
                let idx = SectionIndex::new(m, n);
                let psi = Monomial::of(idx);
                let out = apply_f_rule(psi, hbar);
                assert_eq!((out.xbar_power, out.y_power), (m, n));
                assert_eq!(out.coeff, quantized_f(idx, hbar));
            }
        }
        assert_eq!(quantized_f(SectionIndex::new(0, 3), 0.5), 0.25);
    }

    #[test]
    fn d_eigenvalues() {
        let hbar = 0.5;
        for m in 0..10 {
            assert_eq!(quantized_d(SectionIndex::new(m, m), hbar), 1.0);
            for n in 0..10 {
                let idx = SectionIndex::new(m, n);
                let p = quantized_d(idx, hbar) * quantized_d(idx.swapped(), hbar);
                assert!((p - 1.0).abs() < 1e-14);
            }
        }
        let t = quantized_tau(SectionIndex::new(2, 0), hbar);
        assert!((t - (-1.25f64).exp()).abs() < 1e-16);
    }
}
