use num_complex::Complex64;

use super::{Chart, ChartPoint, GeometryError, SpherePoint};

/// Below this `|1 + sigma_S conj(w)|` the singular-chart target is treated
/// as a pole.
const POLE_EPS: f64 = 1e-300;

pub fn source(g: &ChartPoint) -> SpherePoint {
    SpherePoint {
        chart: g.chart,
        coord: g.base,
    }
}

/// `r = z + sigma_N` in the symplectic chart, `r = w / (1 + sigma_S conj(w))`
/// in the singular chart.
pub fn target(g: &ChartPoint) -> Result<SpherePoint, GeometryError> {
    match g.chart {
        Chart::Symplectic => Ok(SpherePoint::z(g.base + g.sigma())),
        Chart::Singular => {
            let e = 1.0 + g.sigma() * g.base.conj();
            if e.norm() < POLE_EPS {
                return Err(GeometryError::Pole);
            }
            Ok(SpherePoint::w(g.base / e))
        }
    }
}

/// Image under the map to the pair groupoid `S^2 x S^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairCoords {
    pub x: SpherePoint,
    pub y: SpherePoint,
}

pub fn to_pair(g: &ChartPoint) -> Result<PairCoords, GeometryError> {
    Ok(PairCoords {
        x: source(g),
        y: target(g)?,
    })
}

/// Coordinate of `p` in `chart`, or `OffOverlap`.
fn coord_in(p: &SpherePoint, chart: Chart) -> Result<Complex64, GeometryError> {
    match chart {
        Chart::Symplectic => p.z_coord(),
        Chart::Singular => p.w_coord(),
    }
    .ok_or(GeometryError::OffOverlap)
}

/// `g1 g2`, returned in the chart of `g1`.
///
/// The pair is accepted when the chordal distance between `r(g1)` and
/// `l(g2)` is below `tol`; the source of `g2` is then replaced by `r(g1)`.
pub fn multiply(g1: &ChartPoint, g2: &ChartPoint, tol: f64) -> Result<ChartPoint, GeometryError> {
    let r1 = target(g1)?;
    let mismatch = r1.chordal_distance(&source(g2));
    if mismatch.is_nan() || mismatch >= tol {
        return Err(GeometryError::NotComposable(mismatch));
    }
    let g2 = g2.to_chart(g1.chart)?;
    let b2 = coord_in(&r1, g1.chart)?;
    let ratio = (1.0 + b2.norm_sqr()) / (1.0 + g1.base.norm_sqr());
    let fiber = match g1.chart {
        Chart::Symplectic => g1.fiber + ratio * g2.fiber,
        Chart::Singular => {
            let e = 1.0 + g1.sigma() * g1.base.conj();
            g1.fiber + ratio * (e.conj() / e) * g2.fiber
        }
    };
    Ok(ChartPoint {
        chart: g1.chart,
        base: g1.base,
        fiber,
    })
}

/// The inverse, obtained by swapping the pair-groupoid image.
///
/// Returned in the chart of `g`; in the singular chart this needs the target
/// to lie in that chart too.
pub fn inverse(g: &ChartPoint) -> Result<ChartPoint, GeometryError> {
    let y = target(g)?;
    match g.chart {
        Chart::Symplectic => {
            let yz = y.coord;
            let p = (g.base - yz).conj() / (1.0 + yz.norm_sqr());
            Ok(ChartPoint::symplectic(yz, p))
        }
        Chart::Singular => {
            // sigma' = -sigma conj(E)/E solves v / (1 + sigma' conj(v)) = w
            let e = 1.0 + g.sigma() * g.base.conj();
            let v = y.coord;
            let sigma_inv = -g.sigma() * e.conj() / e;
            let p = -sigma_inv.conj() / (1.0 + v.norm_sqr());
            Ok(ChartPoint::singular(v, p))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::COMPOSE_TOL;
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &ChartPoint, b: &ChartPoint, tol: f64) -> bool {
        a.chart == b.chart && (a.base - b.base).norm() < tol && (a.fiber - b.fiber).norm() < tol
    }

    #[test]
    fn units_have_equal_ends() {
        let z = c(0.3, -1.2);
        let g = ChartPoint::symplectic(z, c(0.0, 0.0));
        assert_eq!(target(&g).unwrap().coord, z);
    }

    #[test]
    fn target_at_origin_is_conjugate_fibre() {
        let p = c(0.4, 0.9);
        let g = ChartPoint::symplectic(c(0.0, 0.0), p);
        assert_eq!(target(&g).unwrap().coord, p.conj());
    }

    #[test]
    fn overlap_targets_agree() {
        let g = ChartPoint::symplectic(c(1.0, 1.0), c(0.1, 0.0));
        let s = g.to_chart(Chart::Singular).unwrap();
        let rn = target(&g).unwrap();
        let rs = target(&s).unwrap();
        assert!(rn.chordal_distance(&rs) < 1e-12);
        assert!((rn.coord - rs.z_coord().unwrap()).norm() < 1e-12);
    }

    #[test]
    fn pole_is_reported() {
        // 1 + sigma_S conj(w) = 0 with w = 1, sigma_S = -1, i.e. p_S = 1/2
        let g = ChartPoint::singular(c(1.0, 0.0), c(0.5, 0.0));
        assert_eq!(target(&g), Err(GeometryError::Pole));
    }

    #[test]
    fn unit_laws() {
        let g = ChartPoint::symplectic(c(0.2, 0.7), c(-0.3, 0.25));
        let right = ChartPoint::unit(target(&g).unwrap());
        let left = ChartPoint::unit(source(&g));
        assert!(close(&multiply(&g, &right, COMPOSE_TOL).unwrap(), &g, 1e-12));
        assert!(close(&multiply(&left, &g, COMPOSE_TOL).unwrap(), &g, 1e-12));
    }

    #[test]
    fn inverse_laws_in_both_charts() {
        for g in [
            ChartPoint::symplectic(c(0.2, 0.7), c(-0.3, 0.25)),
            ChartPoint::singular(c(0.5, -0.2), c(0.1, 0.3)),
            ChartPoint::singular(c(0.0, 0.0), c(0.6, -0.4)),
        ] {
            let inv = inverse(&g).unwrap();
            let left = multiply(&g, &inv, COMPOSE_TOL).unwrap();
            assert!(close(&left, &ChartPoint::unit(source(&g)), 1e-12), "{left:?}");
            let right = multiply(&inv, &g, COMPOSE_TOL).unwrap();
            assert!(close(&right, &ChartPoint::unit(target(&g).unwrap()), 1e-12));
        }
    }

    #[test]
    fn non_composable_pair_carries_mismatch() {
        let g1 = ChartPoint::symplectic(c(0.0, 0.0), c(1.0, 0.0));
        let g2 = ChartPoint::symplectic(c(2.0, 0.0), c(0.0, 0.0));
        match multiply(&g1, &g2, COMPOSE_TOL) {
            Err(GeometryError::NotComposable(d)) => assert!(d > 0.1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn product_matches_pair_groupoid() {
        let g1 = ChartPoint::symplectic(c(0.3, 0.1), c(0.5, -0.2));
        let r = target(&g1).unwrap();
        let g2 = ChartPoint::symplectic(r.coord, c(-0.1, 0.4));
        let p = multiply(&g1, &g2, COMPOSE_TOL).unwrap();
        assert!((source(&p).coord - g1.base).norm() < 1e-15);
        let y2 = target(&g2).unwrap();
        assert!(target(&p).unwrap().chordal_distance(&y2) < 1e-13);
    }

    #[test]
    fn singular_chart_product_at_the_pole() {
        // w = 0 lies only in the singular chart; compare against the
        // pair-groupoid prediction.
        let g1 = ChartPoint::singular(c(0.0, 0.0), c(0.3, 0.2));
        let r = target(&g1).unwrap();
        assert_eq!(r.coord, c(0.0, 0.0));
        let g2 = ChartPoint::singular(r.coord, c(-0.1, 0.5));
        let p = multiply(&g1, &g2, COMPOSE_TOL).unwrap();
        assert!((p.fiber - c(0.2, 0.7)).norm() < 1e-15);
    }
}
