use podles_core::geometry::{
    closedness_residual, haar_volume_ratio, integrate_cocycle, inverse, modular_function,
    multiplicativity_residual, multiply, source, target, to_pair, ChartPoint, GeometryError,
    HaarDensity, COMPOSE_TOL,
};
use rand::Rng;

use crate::config::RunConfig;
use crate::random;
use crate::report::Check;

const PAIRS: usize = 100;
const PATH_STEPS: usize = 10_000;

fn dist(a: &ChartPoint, b: &ChartPoint) -> Result<f64, GeometryError> {
    let b = b.to_chart(a.chart)?;
    Ok((a.base - b.base).norm().max((a.fiber - b.fiber).norm()))
}

pub fn geometry(c: &RunConfig) -> Vec<Check> {
    let mut rng = random::rng(c.seed, 3);
    let mut checks = Vec::new();

    let mult = (|| -> Result<f64, GeometryError> {
        let mut worst = 0.0f64;
        for i in 0..PAIRS {
            let g1 = random::chart_point(&mut rng, i % 2 == 1);
            let p2 = random::uniform(&mut rng, 0.3);
            let u = (random::tangent(&mut rng), random::uniform(&mut rng, 1.0));
            let v = (random::tangent(&mut rng), random::uniform(&mut rng, 1.0));
            worst = worst.max(multiplicativity_residual(&g1, p2, u, v, 1e-5)?.abs());
        }
        Ok(worst)
    })();
    checks.push(Check::from_result(
        "form_multiplicative",
        "d0* Omega - d1* Omega + d2* Omega = 0",
        1e-8,
        mult,
    ));

    let closed = (|| -> Result<f64, GeometryError> {
        let mut worst = 0.0f64;
        for i in 0..PAIRS {
            let g = random::chart_point(&mut rng, i % 2 == 1);
            let frame = [
                random::unit_tangent(&mut rng),
                random::unit_tangent(&mut rng),
                random::unit_tangent(&mut rng),
            ];
            worst = worst.max(closedness_residual(&g, frame, 1e-4)?.abs());
        }
        Ok(worst)
    })();
    checks.push(Check::from_result("form_closed", "d Omega = 0", 1e-6, closed));

    let lambda = HaarDensity::radial(|t| (2.0 + t) / (1.0 + t), 1.0);
    let cocycles = (|| -> Result<(f64, f64), GeometryError> {
        let lambda = lambda.clone()?;
        let (mut modular, mut haar) = (0.0f64, 0.0f64);
        for _ in 0..PAIRS {
            let g1 = random::chart_point(&mut rng, false);
            let g2 = random::after(&mut rng, &g1);
            let g12 = multiply(&g1, &g2, COMPOSE_TOL)?;
            let d = modular_function(&g1)? + modular_function(&g2)? - modular_function(&g12)?;
            modular = modular.max(d.abs());
            let h = haar_volume_ratio(&g1, &lambda)? + haar_volume_ratio(&g2, &lambda)?
                - haar_volume_ratio(&g12, &lambda)?;
            haar = haar.max(h.abs());
        }
        Ok((modular, haar))
    })();
    checks.push(Check::from_result(
        "modular_function_cocycle",
        "c(g1) + c(g2) = c(g1 g2)",
        1e-12,
        cocycles.as_ref().map(|r| r.0).map_err(Clone::clone),
    ));
    checks.push(Check::from_result(
        "haar_ratio_cocycle",
        "volume ratio is a cocycle",
        1e-12,
        cocycles.map(|r| r.1),
    ));

    let path = (|| -> Result<f64, GeometryError> {
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let g = random::chart_point(&mut rng, false);
            let x = g.base;
            let y = target(&g)?.z_coord().ok_or(GeometryError::OffOverlap)?;
            let bend = random::uniform(&mut rng, 1.0);
            let amp = rng.random_range(0.0..1.0);
            let curved = integrate_cocycle(
                |t| x + (y - x) * t + bend * amp * (std::f64::consts::PI * t).sin(),
                PATH_STEPS,
            )?;
            let exact = modular_function(&g)?;
            worst = worst.max((curved - exact).abs());
        }
        Ok(worst)
    })();
    checks.push(Check::from_result(
        "cotangent_path_integral",
        "int <chi, c> = log (1+|y|^2)/(1+|x|^2)",
        1e-6,
        path,
    ));

    let laws = (|| -> Result<(f64, f64, f64), GeometryError> {
        let (mut assoc, mut unit, mut compat) = (0.0f64, 0.0f64, 0.0f64);
        for _ in 0..PAIRS {
            let g1 = random::chart_point(&mut rng, false);
            let g2 = random::after(&mut rng, &g1);
            let g3 = random::after(&mut rng, &g2);
            let left = multiply(&multiply(&g1, &g2, COMPOSE_TOL)?, &g3, COMPOSE_TOL)?;
            let right = multiply(&g1, &multiply(&g2, &g3, COMPOSE_TOL)?, COMPOSE_TOL)?;
            assoc = assoc.max(dist(&left, &right)?);

            let l = ChartPoint::unit(source(&g1));
            let r = ChartPoint::unit(target(&g1)?);
            let inv = inverse(&g1)?;
            unit = unit
                .max(dist(&multiply(&l, &g1, COMPOSE_TOL)?, &g1)?)
                .max(dist(&multiply(&g1, &r, COMPOSE_TOL)?, &g1)?)
                .max(dist(&multiply(&g1, &inv, COMPOSE_TOL)?, &l)?)
                .max(dist(&multiply(&inv, &g1, COMPOSE_TOL)?, &r)?);

            let p = to_pair(&multiply(&g1, &g2, COMPOSE_TOL)?)?;
            compat = compat
                .max(p.x.chordal_distance(&source(&g1)))
                .max(p.y.chordal_distance(&target(&g2)?));
        }
        Ok((assoc, unit, compat))
    })();
    checks.push(Check::from_result(
        "groupoid_associativity",
        "(g1 g2) g3 = g1 (g2 g3)",
        1e-10,
        laws.as_ref().map(|r| r.0).map_err(Clone::clone),
    ));
    checks.push(Check::from_result(
        "groupoid_unit_inverse",
        "unit and inverse laws",
        1e-12,
        laws.as_ref().map(|r| r.1).map_err(Clone::clone),
    ));
    checks.push(Check::from_result(
        "groupoid_pair_map",
        "(l, r) is a morphism to S^2 x S^2",
        1e-12,
        laws.map(|r| r.2),
    ));
    checks
}
