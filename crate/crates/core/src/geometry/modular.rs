use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::{source, target, Chart, ChartPoint, GeometryError, SpherePoint};

/// `χ = i(z ∂_z - z̄ ∂_z̄)`, i.e. `δz = i z`.
pub fn modular_vector_field(z: Complex64) -> Complex64 {
    Complex64::new(0.0, 1.0) * z
}

/// Flow of the modular field for time `t`, by classical RK4 with `steps`
/// steps.
pub fn flow_modular_field(z0: Complex64, t: f64, steps: usize) -> Complex64 {
    let h = t / steps.max(1) as f64;
    let mut z = z0;
    for _ in 0..steps.max(1) {
        let k1 = modular_vector_field(z);
        let k2 = modular_vector_field(z + k1 * (h / 2.0));
        let k3 = modular_vector_field(z + k2 * (h / 2.0));
        let k4 = modular_vector_field(z + k3 * h);
        z += (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (h / 6.0);
    }
    z
}

/// `log((1 + |y|^2) / (1 + |x|^2))` with `x = l(g)`, `y = r(g)`.
///
/// The singular chart uses `log((|w|^2 + |1 + σ_S w̄|^2) / (1 + |w|^2))`,
/// which stays finite at `w = 0`.
pub fn modular_function(g: &ChartPoint) -> Result<f64, GeometryError> {
    match g.chart {
        Chart::Symplectic => {
            let y = target(g)?.coord;
            Ok(((1.0 + y.norm_sqr()) / (1.0 + g.base.norm_sqr())).ln())
        }
        Chart::Singular => {
            let w = g.base;
            let e = 1.0 + g.sigma() * w.conj();
            Ok(((w.norm_sqr() + e.norm_sqr()) / (1.0 + w.norm_sqr())).ln())
        }
    }
}

/// `∫_0^1 <χ(γ(t)), c(t)> dt` along a base path in the symplectic leaf, with
/// the cotangent lift fixed by `π^♯(c) = γ'`.
///
/// With `π^♯ ξ = P ξ`, `P = [[0, k], [-k, 0]]`, `k = (1 + |z|^2)/2` in real
/// coordinates `z = a + i b`, the lift is `ξ = (-ḃ/k, ȧ/k)` and
/// `χ = (-b, a)`. Uses the midpoint rule on `steps` chords, so the error is
/// `O(steps^-2)`.
pub fn integrate_cocycle<P>(path: P, steps: usize) -> Result<f64, GeometryError>
where
    P: Fn(f64) -> Complex64,
{
    if steps == 0 {
        return Err(GeometryError::NoSteps);
    }
    let h = 1.0 / steps as f64;
    let mut prev = path(0.0);
    if !(prev.re.is_finite() && prev.im.is_finite()) {
        return Err(GeometryError::DegeneratePath(0.0));
    }
    let mut acc = 0.0;
    for i in 0..steps {
        let t1 = (i + 1) as f64 * h;
        let next = path(t1);
        let mid = path((i as f64 + 0.5) * h);
        if !(next.is_finite() && mid.is_finite()) {
            return Err(GeometryError::DegeneratePath(t1));
        }
        let d = next - prev;
        let k = 0.5 * (1.0 + mid.norm_sqr());
        let xi = (-d.im / k, d.re / k);
        let chi = modular_vector_field(mid);
        acc += chi.re * xi.0 + chi.im * xi.1;
        prev = next;
    }
    Ok(acc)
}

/// A rotation-invariant positive density `Λ(|z|^2)` on the sphere, with its
/// value at `z = ∞`.
#[derive(Clone)]
pub struct HaarDensity {
    lambda: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    at_infinity: f64,
}

impl fmt::Debug for HaarDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HaarDensity")
            .field("at_infinity", &self.at_infinity)
            .finish_non_exhaustive()
    }
}

impl HaarDensity {
    /// `Λ ≡ 1`.
    pub fn unit() -> Self {
        Self {
            lambda: Arc::new(|_| 1.0),
            at_infinity: 1.0,
        }
    }

    /// `Λ(t)` for `t = |z|^2`; sampled on a log grid to reject
    /// non-positive or non-finite values.
    pub fn radial<F>(lambda: F, at_infinity: f64) -> Result<Self, GeometryError>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(at_infinity.is_finite() && at_infinity > 0.0) {
            return Err(GeometryError::InvalidDensity(format!(
                "limit at infinity {at_infinity}"
            )));
        }
        let probe = std::iter::once(0.0).chain((-40..=40).map(|k| 10f64.powf(k as f64 / 4.0)));
        for t in probe {
            let v = lambda(t);
            if !(v.is_finite() && v > 0.0) {
                return Err(GeometryError::InvalidDensity(format!("Λ({t}) = {v}")));
            }
        }
        Ok(Self {
            lambda: Arc::new(lambda),
            at_infinity,
        })
    }

    /// `Λ(t)`, with `t = ∞` mapped to the declared limit.
    pub fn at(&self, t: f64) -> f64 {
        if t.is_infinite() {
            self.at_infinity
        } else {
            (self.lambda)(t)
        }
    }

    pub fn value(&self, p: &SpherePoint) -> f64 {
        self.at(p.norm_sqr())
    }

    pub fn at_infinity(&self) -> f64 {
        self.at_infinity
    }
}

/// `2 c(g) - (log Λ(r(g)) - log Λ(l(g)))`.
pub fn haar_volume_ratio(g: &ChartPoint, lambda: &HaarDensity) -> Result<f64, GeometryError> {
    let c = modular_function(g)?;
    let l = lambda.value(&source(g)).ln();
    let r = lambda.value(&target(g)?).ln();
    Ok(2.0 * c - (r - l))
}
