//! The symplectic groupoid of the Podleś sphere, modelled on `T*S^2` in two
//! charts.
//!
//! The symplectic chart uses the base coordinate `z` (the symplectic leaf,
//! `z = ∞` excluded) with fibre `p_N`; the singular chart uses `w = 1/z` with
//! fibre `p_S`, and contains the degenerate point `w = 0` of the Poisson
//! structure. On the overlap `p_N = -w^2 p_S`.

mod form;
mod modular;
mod structure;

use num_complex::Complex64;
use thiserror::Error;

pub use form::{closedness_residual, multiplicativity_residual, symplectic_form};
pub use modular::{
    flow_modular_field, haar_volume_ratio, integrate_cocycle, modular_function,
    modular_vector_field, HaarDensity,
};
pub use structure::{inverse, multiply, source, target, to_pair, PairCoords};

/// Default chordal tolerance for composability.
pub const COMPOSE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("point is outside the chart overlap")]
    OffOverlap,
    #[error("target undefined: 1 + sigma_S conj(w) vanishes")]
    Pole,
    #[error("pair is not composable: chordal mismatch {0:e}")]
    NotComposable(f64),
    #[error("path leaves the symplectic leaf or is not finite at t = {0}")]
    DegeneratePath(f64),
    #[error("step count must be positive")]
    NoSteps,
    #[error("Haar density must be positive and finite: {0}")]
    InvalidDensity(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chart {
    Symplectic,
    Singular,
}

/// A point of `S^2` in one of the two base coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    pub chart: Chart,
    pub coord: Complex64,
}

impl SpherePoint {
    pub fn z(z: Complex64) -> Self {
        Self {
            chart: Chart::Symplectic,
            coord: z,
        }
    }

    pub fn w(w: Complex64) -> Self {
        Self {
            chart: Chart::Singular,
            coord: w,
        }
    }

    /// Coordinate in the symplectic chart, `None` at `z = ∞`.
    pub fn z_coord(&self) -> Option<Complex64> {
        match self.chart {
            Chart::Symplectic => Some(self.coord),
            Chart::Singular if self.coord == Complex64::default() => None,
            Chart::Singular => Some(self.coord.inv()),
        }
    }

    /// Coordinate in the singular chart, `None` at `z = 0`.
    pub fn w_coord(&self) -> Option<Complex64> {
        match self.chart {
            Chart::Singular => Some(self.coord),
            Chart::Symplectic if self.coord == Complex64::default() => None,
            Chart::Symplectic => Some(self.coord.inv()),
        }
    }

    /// `|z|^2`, infinite at the pole `w = 0`.
    pub fn norm_sqr(&self) -> f64 {
        match self.z_coord() {
            Some(z) => z.norm_sqr(),
            None => f64::INFINITY,
        }
    }

    /// Chordal distance, invariant under `z -> 1/z`.
    pub fn chordal_distance(&self, other: &SpherePoint) -> f64 {
        let pair = match (self.z_coord(), other.z_coord()) {
            (Some(a), Some(b)) => Some((a, b)),
            _ => self.w_coord().zip(other.w_coord()),
        };
        match pair {
            Some((a, b)) => {
                2.0 * (a - b).norm() / ((1.0 + a.norm_sqr()) * (1.0 + b.norm_sqr())).sqrt()
            }
            // one point is z = 0 and the other z = ∞
            None => 2.0,
        }
    }
}

/// A point of the groupoid: base coordinate and cotangent fibre coordinate
/// in one chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartPoint {
    pub chart: Chart,
    pub base: Complex64,
    pub fiber: Complex64,
}

/// Tangent vector `(δ base, δ fibre)` in chart coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Tangent {
    pub base: Complex64,
    pub fiber: Complex64,
}

impl Tangent {
    pub fn new(base: Complex64, fiber: Complex64) -> Self {
        Self { base, fiber }
    }

    /// From four real components `(Re δb, Im δb, Re δf, Im δf)`.
    pub fn from_reals(r: [f64; 4]) -> Self {
        Self {
            base: Complex64::new(r[0], r[1]),
            fiber: Complex64::new(r[2], r[3]),
        }
    }

    pub fn scaled(self, s: f64) -> Self {
        Self {
            base: self.base * s,
            fiber: self.fiber * s,
        }
    }
}

impl ChartPoint {
    pub fn symplectic(z: Complex64, p_n: Complex64) -> Self {
        Self {
            chart: Chart::Symplectic,
            base: z,
            fiber: p_n,
        }
    }

    pub fn singular(w: Complex64, p_s: Complex64) -> Self {
        Self {
            chart: Chart::Singular,
            base: w,
            fiber: p_s,
        }
    }

    /// The unit over a sphere point, expressed in that point's chart.
    pub fn unit(at: SpherePoint) -> Self {
        Self {
            chart: at.chart,
            base: at.coord,
            fiber: Complex64::default(),
        }
    }

    /// `sigma_N = (1 + |z|^2) conj(p_N)` or `sigma_S = -(1 + |w|^2) conj(p_S)`.
    pub fn sigma(&self) -> Complex64 {
        let s = (1.0 + self.base.norm_sqr()) * self.fiber.conj();
        match self.chart {
            Chart::Symplectic => s,
            Chart::Singular => -s,
        }
    }

    /// Re-express in the other chart; fails off the overlap `base != 0`.
    pub fn to_chart(&self, chart: Chart) -> Result<Self, GeometryError> {
        if chart == self.chart {
            return Ok(*self);
        }
        if self.base == Complex64::default() {
            return Err(GeometryError::OffOverlap);
        }
        // the transition is its own inverse: w = 1/z, p_N = -w^2 p_S and
        // p_S = -z^2 p_N
        let b = self.base.inv();
        Ok(Self {
            chart,
            base: b,
            fiber: -self.base * self.base * self.fiber,
        })
    }

    /// Push a tangent vector at `self` into the other chart.
    pub fn tangent_to_chart(&self, v: Tangent) -> Result<Tangent, GeometryError> {
        if self.base == Complex64::default() {
            return Err(GeometryError::OffOverlap);
        }
        // b' = 1/b, f' = -b^2 f
        let b = self.base;
        Ok(Tangent {
            base: -v.base / (b * b),
            fiber: -2.0 * b * v.base * self.fiber - b * b * v.fiber,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn transition_round_trip() {
        let g = ChartPoint::symplectic(c(1.0, 1.0), c(0.1, -0.3));
        let back = g
            .to_chart(Chart::Singular)
            .unwrap()
            .to_chart(Chart::Symplectic)
            .unwrap();
        assert!((back.base - g.base).norm() < 1e-12);
        assert!((back.fiber - g.fiber).norm() < 1e-12);
        let s = g.to_chart(Chart::Singular).unwrap();
        assert!((g.fiber + s.base * s.base * s.fiber).norm() < 1e-15);
        assert_eq!(
            ChartPoint::singular(c(0.0, 0.0), c(1.0, 0.0)).to_chart(Chart::Symplectic),
            Err(GeometryError::OffOverlap)
        );
    }

    #[test]
    fn tangent_transition_matches_difference_quotient() {
        let g = ChartPoint::symplectic(c(0.7, -0.4), c(0.2, 0.5));
        let v = Tangent::new(c(0.3, 0.1), c(-0.2, 0.6));
        let h = 1e-6;
        let plus = ChartPoint::symplectic(g.base + v.base * h, g.fiber + v.fiber * h)
            .to_chart(Chart::Singular)
            .unwrap();
        let minus = ChartPoint::symplectic(g.base - v.base * h, g.fiber - v.fiber * h)
            .to_chart(Chart::Singular)
            .unwrap();
        let fd = Tangent::new(
            (plus.base - minus.base) / (2.0 * h),
            (plus.fiber - minus.fiber) / (2.0 * h),
        );
        let an = g.tangent_to_chart(v).unwrap();
        assert!((fd.base - an.base).norm() < 1e-8);
        assert!((fd.fiber - an.fiber).norm() < 1e-8);
    }

    #[test]
    fn chordal_distance_is_chart_invariant() {
        let a = SpherePoint::z(c(0.5, 2.0));
        let b = SpherePoint::z(c(-1.0, 0.3));
        let aw = SpherePoint::w(a.w_coord().unwrap());
        let d = a.chordal_distance(&b);
        assert!((aw.chordal_distance(&b) - d).abs() < 1e-14);
        let pole = SpherePoint::w(c(0.0, 0.0));
        let origin = SpherePoint::z(c(0.0, 0.0));
        assert_eq!(pole.chordal_distance(&origin), 2.0);
        assert_eq!(pole.norm_sqr(), f64::INFINITY);
    }
}
