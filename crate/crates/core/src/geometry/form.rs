use num_complex::Complex64;

use super::{multiply, target, Chart, ChartPoint, GeometryError, Tangent};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `(a ∧ b)(u, v) = a(u) b(v) - a(v) b(u)` for complex 1-form values.
fn wedge(au: Complex64, bu: Complex64, av: Complex64, bv: Complex64) -> Complex64 {
    au * bv - av * bu
}

/// `Ω(u, v)` at `g`.
///
/// In the symplectic chart this is `ω(x) - ω(y)` with
/// `ω(x) = dx ∧ dx̄ / (i (1 + |x|^2))` pulled back along
/// `(z, p_N) -> (z, z + (1 + |z|^2) p̄_N)`. In the singular chart the same
/// difference is regrouped so that every coefficient stays bounded at `w = 0`.
pub fn symplectic_form(g: &ChartPoint, u: Tangent, v: Tangent) -> Result<f64, GeometryError> {
    match g.chart {
        Chart::Symplectic => Ok(form_symplectic_chart(g, u, v)),
        Chart::Singular => form_singular_chart(g, u, v),
    }
}

fn form_symplectic_chart(g: &ChartPoint, u: Tangent, v: Tangent) -> f64 {
    let (z, p) = (g.base, g.fiber);
    let k = 1.0 + z.norm_sqr();
    let y = z + k * p.conj();
    let dy = |t: Tangent| {
        let dk = 2.0 * (z.conj() * t.base).re;
        t.base + dk * p.conj() + k * t.fiber.conj()
    };
    let omega = |a: Complex64, b: Complex64, x: Complex64| 2.0 * (a * b.conj()).im / (1.0 + x.norm_sqr());
    omega(u.base, v.base, z) - omega(dy(u), dy(v), y)
}

fn form_singular_chart(g: &ChartPoint, u: Tangent, v: Tangent) -> Result<f64, GeometryError> {
    let (w, p) = (g.base, g.fiber);
    let k = 1.0 + w.norm_sqr();
    let sigma = -k * p.conj();
    let e = 1.0 + sigma * w.conj();
    if e.norm() < 1e-300 {
        return Err(GeometryError::Pole);
    }
    let tv = target(g)?.coord;
    let kv = 1.0 + tv.norm_sqr();
    let d_sigma = |t: Tangent| {
        let dk = 2.0 * (w.conj() * t.base).re;
        -dk * p.conj() - k * t.fiber.conj()
    };
    let d_l = |t: Tangent, ds: Complex64| (w.conj() * ds + sigma * t.base.conj()) / e;
    let (su, sv) = (d_sigma(u), d_sigma(v));
    let (lu, lv) = (d_l(u, su), d_l(v, sv));
    let c0 = (1.0 / e.norm_sqr() - 1.0) / (k * kv);
    let total = c0 * wedge(u.base, u.base.conj(), v.base, v.base.conj())
        + wedge(u.base, su.conj(), v.base, sv.conj()) / (e.conj() * kv)
        + wedge(su, u.base.conj(), sv, v.base.conj()) / (e * kv)
        - wedge(lu, lu.conj(), lv, lv.conj()) / kv;
    Ok((total / I).re)
}

fn shifted(g: &ChartPoint, t: Tangent, h: f64) -> ChartPoint {
    ChartPoint {
        chart: g.chart,
        base: g.base + t.base * h,
        fiber: g.fiber + t.fiber * h,
    }
}

/// `dΩ(a, b, c)` by central differences with step `h`, using constant
/// coordinate vector fields (whose brackets vanish).
pub fn closedness_residual(
    g: &ChartPoint,
    frame: [Tangent; 3],
    h: f64,
) -> Result<f64, GeometryError> {
    let [a, b, c] = frame;
    let deriv = |dir: Tangent, x: Tangent, y: Tangent| -> Result<f64, GeometryError> {
        let plus = symplectic_form(&shifted(g, dir, h), x, y)?;
        let minus = symplectic_form(&shifted(g, dir, -h), x, y)?;
        Ok((plus - minus) / (2.0 * h))
    };
    Ok(deriv(a, b, c)? - deriv(b, a, c)? + deriv(c, a, b)?)
}

/// `(d0* Ω - d1* Ω + d2* Ω)(u, v)` on the composable pair `(g1, g2)` with
/// face maps `d0 = pr2`, `d1 = multiply`, `d2 = pr1`.
///
/// Composable pairs are parametrized by `g1` and the fibre of `g2`, whose
/// base is pinned to `r(g1)`; tangent vectors are `(δg1, δp2)` and are pushed
/// through the face maps by a five-point difference stencil with step `h`.
pub fn multiplicativity_residual(
    g1: &ChartPoint,
    p2: Complex64,
    u: (Tangent, Complex64),
    v: (Tangent, Complex64),
    h: f64,
) -> Result<f64, GeometryError> {
    let chart = g1.chart;
    let second = |g: &ChartPoint, p: Complex64| -> Result<ChartPoint, GeometryError> {
        let r = target(g)?;
        let base = match chart {
            Chart::Symplectic => r.z_coord(),
            Chart::Singular => r.w_coord(),
        }
        .ok_or(GeometryError::OffOverlap)?;
        Ok(ChartPoint {
            chart,
            base,
            fiber: p,
        })
    };
    let g2 = second(g1, p2)?;
    let g12 = multiply(g1, &g2, super::COMPOSE_TOL)?;

    let push = |t: (Tangent, Complex64)| -> Result<(Tangent, Tangent), GeometryError> {
        let at = |s: f64| -> Result<(ChartPoint, ChartPoint), GeometryError> {
            let a = shifted(g1, t.0, s);
            let b = second(&a, p2 + t.1 * s)?;
            let ab = multiply(&a, &b, super::COMPOSE_TOL)?;
            Ok((b, ab))
        };
        let (b1, ab1) = at(h)?;
        let (bm1, abm1) = at(-h)?;
        let (b2, ab2) = at(2.0 * h)?;
        let (bm2, abm2) = at(-2.0 * h)?;
        // five-point stencil, error O(h^4)
        let stencil = |p1: Complex64, m1: Complex64, p2: Complex64, m2: Complex64| {
            (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * h)
        };
        let diff = |p1: &ChartPoint, m1: &ChartPoint, p2: &ChartPoint, m2: &ChartPoint| {
            Tangent::new(
                stencil(p1.base, m1.base, p2.base, m2.base),
                stencil(p1.fiber, m1.fiber, p2.fiber, m2.fiber),
            )
        };
        Ok((diff(&b1, &bm1, &b2, &bm2), diff(&ab1, &abm1, &ab2, &abm2)))
    };
    let (u2, u12) = push(u)?;
    let (v2, v12) = push(v)?;
    Ok(symplectic_form(&g2, u2, v2)? - symplectic_form(&g12, u12, v12)?
        + symplectic_form(g1, u.0, v.0)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn antisymmetric() {
        let g = ChartPoint::symplectic(c(0.4, -0.3), c(0.2, 0.1));
        let u = Tangent::new(c(0.1, 0.7), c(-0.4, 0.2));
        let v = Tangent::new(c(-0.5, 0.3), c(0.6, 0.9));
        assert_eq!(symplectic_form(&g, u, u).unwrap(), 0.0);
        let a = symplectic_form(&g, u, v).unwrap();
        let b = symplectic_form(&g, v, u).unwrap();
        assert!((a + b).abs() < 1e-15);
    }

    #[test]
    fn vanishes_on_units_along_the_base() {
        let g = ChartPoint::symplectic(c(0.4, -0.3), c(0.0, 0.0));
        let u = Tangent::new(c(0.1, 0.7), c(0.0, 0.0));
        let v = Tangent::new(c(-0.5, 0.3), c(0.0, 0.0));
        assert!(symplectic_form(&g, u, v).unwrap().abs() < 1e-15);
    }

    #[test]
    fn charts_agree_on_overlap() {
        let g = ChartPoint::symplectic(c(0.8, 0.6), c(0.3, -0.2));
        let s = g.to_chart(Chart::Singular).unwrap();
        let u = Tangent::new(c(0.1, 0.7), c(-0.4, 0.2));
        let v = Tangent::new(c(-0.5, 0.3), c(0.6, 0.9));
        let a = symplectic_form(&g, u, v).unwrap();
        let b = symplectic_form(
            &s,
            g.tangent_to_chart(u).unwrap(),
            g.tangent_to_chart(v).unwrap(),
        )
        .unwrap();
        assert!((a - b).abs() < 1e-12 * a.abs().max(1.0), "{a} vs {b}");
    }

    #[test]
    fn nondegenerate_at_the_pole() {
        let g = ChartPoint::singular(c(0.0, 0.0), c(0.2, 0.3));
        let u = Tangent::new(c(1.0, 0.0), c(0.0, 0.0));
        let v = Tangent::new(c(0.0, 0.0), c(0.0, 1.0));
        let val = symplectic_form(&g, u, v).unwrap();
        // at w = 0 only the δw ∧ δσ̄ cross terms survive
        assert!((val + 2.0).abs() < 1e-15, "{val}");
    }

    #[test]
    fn closed_in_both_charts() {
        let frame = [
            Tangent::new(c(0.3, -0.1), c(0.2, 0.5)),
            Tangent::new(c(-0.4, 0.6), c(0.1, -0.3)),
            Tangent::new(c(0.2, 0.2), c(-0.7, 0.1)),
        ];
        for g in [
            ChartPoint::symplectic(c(0.4, -0.3), c(0.2, 0.1)),
            ChartPoint::singular(c(0.0, 0.0), c(0.3, -0.2)),
            ChartPoint::singular(c(0.5, 0.1), c(-0.1, 0.2)),
        ] {
            assert!(closedness_residual(&g, frame, 1e-4).unwrap().abs() < 1e-6);
        }
    }

    #[test]
    fn multiplicative_in_both_charts() {
        let u = (Tangent::new(c(0.3, -0.1), c(0.2, 0.5)), c(0.4, -0.2));
        let v = (Tangent::new(c(-0.4, 0.6), c(0.1, -0.3)), c(-0.1, 0.3));
        for g1 in [
            ChartPoint::symplectic(c(0.4, -0.3), c(0.2, 0.1)),
            ChartPoint::singular(c(0.0, 0.0), c(0.3, -0.2)),
            ChartPoint::singular(c(0.5, 0.1), c(-0.1, 0.2)),
        ] {
            let r = multiplicativity_residual(&g1, c(0.15, 0.05), u, v, 1e-5).unwrap();
            assert!(r.abs() < 1e-8, "{g1:?}: {r}");
        }
    }
}
