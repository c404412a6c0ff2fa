//! Seeded random instances. All draws come from ChaCha8, so a seed fixes
//! every instance on every platform.

use num_complex::Complex64;
use podles_core::geometry::{target, ChartPoint, Tangent};
use podles_core::groupoid::{AlgebraElement, Arrow, GroupoidKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Multiples of 1/16 in `[-4, 4]`: sums and products of these stay exact.
pub fn dyadic(rng: &mut ChaCha8Rng) -> Complex64 {
    let re = rng.random_range(-64i32..=64) as f64 / 16.0;
    let im = rng.random_range(-64i32..=64) as f64 / 16.0;
    Complex64::new(re, im)
}

pub fn uniform(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    Complex64::new(rng.random_range(-r..r), rng.random_range(-r..r))
}

/// Arrows with `m, m + n <= window`, plus arrows over infinity allowed by
/// `kind`.
pub fn arrow(rng: &mut ChaCha8Rng, kind: GroupoidKind, window: u64) -> Arrow {
    if rng.random_bool(0.1) {
        return match kind {
            GroupoidKind::Cuntz => Arrow::inf(rng.random_range(-3i64..=3)),
            GroupoidKind::Sheu => Arrow::inf(0),
        };
    }
    let m = rng.random_range(0..=window);
    // stay near the diagonal half the time so products hit composable pairs
    let t = if rng.random_bool(0.5) {
        rng.random_range(m.saturating_sub(2)..=(m + 2).min(window))
    } else {
        rng.random_range(0..=window)
    };
    Arrow::fin(m, t as i64 - m as i64)
}

pub fn element<F>(rng: &mut ChaCha8Rng, kind: GroupoidKind, window: u64, coeff: F) -> AlgebraElement
where
    F: Fn(&mut ChaCha8Rng) -> Complex64,
{
    let len = rng.random_range(1..12);
    let terms: Vec<_> = (0..len)
        .map(|_| {
            let a = arrow(rng, kind, window);
            (a, coeff(rng))
        })
        .collect();
    AlgebraElement::from_terms(kind, terms).expect("arrows are admissible for kind")
}

pub fn chart_point(rng: &mut ChaCha8Rng, singular: bool) -> ChartPoint {
    if singular {
        ChartPoint::singular(uniform(rng, 0.8), uniform(rng, 0.3))
    } else {
        ChartPoint::symplectic(uniform(rng, 1.5), uniform(rng, 0.6))
    }
}

/// A point composable after `g` in the symplectic chart.
pub fn after(rng: &mut ChaCha8Rng, g: &ChartPoint) -> ChartPoint {
    let base = target(g)
        .ok()
        .and_then(|r| r.z_coord())
        .expect("sample points stay off the pole");
    ChartPoint::symplectic(base, uniform(rng, 0.6))
}

pub fn tangent(rng: &mut ChaCha8Rng) -> Tangent {
    Tangent::new(uniform(rng, 1.0), uniform(rng, 1.0))
}

pub fn unit_tangent(rng: &mut ChaCha8Rng) -> Tangent {
    let t = tangent(rng);
    let n = (t.base.norm_sqr() + t.fiber.norm_sqr()).sqrt();
    t.scaled(1.0 / n)
}
