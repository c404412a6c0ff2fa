use std::f64::consts::PI;

use num_complex::Complex64;
use podles_core::groupoid::{gns_inner, modular_operator};
use podles_core::podles::{build_generators, rep_rho, QuantumSphereParams};
use podles_core::polarization::{
    apply_f_rule, bridge_measure, bs_leaves as enumerate_leaves, convolution_oracle,
    convolve_sections, gram_symmetry_defect, groupoid_modular_eigenvalue, groupoid_norm_oracle,
    hilbert_bridge, holonomy, leaf_groupoid, modular_cocycle_phi, modular_reconstruction,
    proportionality_spread, quantized_d, quantized_f, scalar_product_groupoid,
    scalar_product_symplectic, section_value, Monomial, NormTable, OracleGrid, PolarizationError,
    ScalarProduct, SectionIndex, WeightPair,
};
use podles_core::special::{asymptotic_ratio, dilog, gauss_legendre, inversion_residual};

use crate::config::RunConfig;
use crate::report::{Check, Table};

/// Window `m, n, k <= BRIDGE_WINDOW` for the Hilbert-algebra identities.
const BRIDGE_WINDOW: u32 = 10;

fn pairs() -> [(&'static str, WeightPair); 2] {
    [("unit", WeightPair::default()), ("custom", WeightPair::sample_custom())]
}

fn norm_table(c: &RunConfig, weights: WeightPair, size: u32) -> Result<NormTable, PolarizationError> {
    let t = NormTable::new(c.hbar, weights, c.quad, size)?;
    t.prefetch()?;
    Ok(t)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

pub fn bs_leaves(c: &RunConfig) -> (Vec<Check>, Option<Table>) {
    let hbar = c.hbar;
    let mut checks = Vec::new();

    let report = leaf_groupoid(hbar, c.window);
    checks.push(Check::from_result(
        "leaf_groupoid_mismatches",
        "BS leaves form G_S",
        0.0,
        report.as_ref().map(|r| r.mismatches as f64).map_err(Clone::clone),
    ));
    checks.push(Check::from_result(
        "leaf_groupoid_bijective",
        "(hbar m, hbar n) -> (m, n) is bijective",
        0.0,
        report.as_ref().map(|r| f64::from(!r.bijective)).map_err(Clone::clone),
    ));
    checks.push(Check::from_result(
        "leaf_groupoid_units",
        "units map to units",
        0.0,
        report.map(|r| f64::from(!r.units_to_units)),
    ));

    let leaves = enumerate_leaves(hbar, c.window);
    let mut table = Table {
        columns: vec!["n", "F", "tau", "winding"],
        rows: Vec::new(),
    };
    let winding = leaves.as_ref().map_err(Clone::clone).map(|l| {
        let mut worst = 0.0f64;
        for leaf in &l.base {
            let w = holonomy(leaf.level, 64) / (2.0 * PI * hbar);
            worst = worst.max((w + leaf.n as f64).abs());
            table.rows.push(vec![leaf.n as f64, leaf.level, leaf.tau, w]);
        }
        worst
    });
    checks.push(Check::from_result(
        "bohr_sommerfeld_holonomy",
        "holonomy of Theta on |x|^2 = e^{hbar n} - 1 is in 2 pi hbar Z",
        1e-12,
        winding,
    ));

    let spectrum = (|| -> Result<f64, String> {
        let l = leaves.clone().map_err(|e| e.to_string())?;
        let dim = l.base.len();
        let params = QuantumSphereParams::new(hbar).map_err(|e| e.to_string())?;
        let gen = build_generators(&params, dim as u64).map_err(|e| e.to_string())?;
        let mat = rep_rho(&gen.tau, dim).map_err(|e| e.to_string())?;
        let mut eig: Vec<f64> = mat.symmetric_eigen().eigenvalues.iter().copied().collect();
        eig.sort_by(|a, b| b.total_cmp(a));
        Ok(eig
            .iter()
            .zip(&l.base)
            .map(|(e, leaf)| (e - leaf.tau).abs())
            .fold(0.0, f64::max))
    })();
    checks.push(Check::from_result(
        "tau_levels_match_rho_spectrum",
        "spectrum of rho(tau) with q = e^{-hbar/2}",
        1e-12,
        spectrum,
    ));
    (checks, Some(table))
}

/// `-∫_0^t log(1+u)/u du` in `v = log u`, by Gauss-Legendre panels of width
/// 1/2 from `v = -40`; the neglected head is below `e^{-40}`.
fn dilog_by_integral(t: f64) -> f64 {
    let (nodes, weights) = gauss_legendre(20);
    let f = |v: f64| {
        if v < 0.0 {
            v.exp().ln_1p()
        } else {
            v + (-v).exp().ln_1p()
        }
    };
    let (lo, hi) = (-40.0, t.ln());
    let panels = ((hi - lo) / 0.5).ceil() as usize;
    let h = (hi - lo) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * h;
        acc += 0.5 * h * nodes.iter().zip(&weights).map(|(x, w)| w * f(mid + 0.5 * h * x)).sum::<f64>();
    }
    -acc
}

pub fn norms(c: &RunConfig) -> (Vec<Check>, Option<Table>) {
    let hbar = c.hbar;
    let mut checks = Vec::new();

    let inversion = (0..500)
        .map(|k| 10f64.powf(-6.0 + 12.0 * k as f64 / 499.0))
        .map(inversion_residual)
        .try_fold(0.0f64, |w, r| r.map(|r| w.max(r.abs())));
    checks.push(Check::from_result(
        "dilog_inversion_relation",
        "Li2(-t) = -Li2(-1/t) - pi^2/6 - log^2(t)/2",
        1e-12,
        inversion,
    ));
    checks.push(Check::from_result(
        "dilog_at_minus_one",
        "Li2(-1) = -pi^2/12",
        1e-13,
        dilog(-1.0).map(|v| (v + PI * PI / 12.0).abs()),
    ));
    let integral = (0..100)
        .map(|k| 10f64.powf(-4.0 + 8.0 * k as f64 / 99.0))
        .map(|t| dilog(-t).map(|v| rel(v, dilog_by_integral(t))))
        .try_fold(0.0f64, |w, r| r.map(|r| w.max(r)));
    checks.push(Check::from_result(
        "dilog_integral_definition",
        "Li2(-t) = -int_0^t log(1+u)/u du",
        1e-12,
        integral,
    ));

    let grid = OracleGrid::default();
    let oracle = (|| -> Result<(f64, f64, f64), PolarizationError> {
        let (mut grp, mut sym, mut off) = (0.0f64, 0.0f64, 0.0f64);
        for (_, weights) in pairs() {
            let t = norm_table(c, weights.clone(), 6)?;
            for m in 0..6 {
                for n in 0..6 {
                    let s = SectionIndex::new(m, n);
                    let g = groupoid_norm_oracle(s, s, hbar, &weights, ScalarProduct::Groupoid, &grid)?;
                    let exact = scalar_product_groupoid(s, s, &t)?;
                    grp = grp.max((g - exact).norm() / exact.norm());
                    let p = groupoid_norm_oracle(s, s, hbar, &weights, ScalarProduct::Symplectic, &grid)?;
                    let exact = scalar_product_symplectic(s, s, &t)?;
                    sym = sym.max((p - exact).norm() / exact.norm());
                }
            }
            for (a, b) in [((1, 2), (2, 1)), ((0, 1), (1, 0)), ((3, 3), (3, 4)), ((5, 0), (0, 5))] {
                let (a, b) = (SectionIndex::new(a.0, a.1), SectionIndex::new(b.0, b.1));
                for product in [ScalarProduct::Groupoid, ScalarProduct::Symplectic] {
                    let v = groupoid_norm_oracle(a, b, hbar, &weights, product, &grid)?;
                    let na = groupoid_norm_oracle(a, a, hbar, &weights, product, &grid)?;
                    let nb = groupoid_norm_oracle(b, b, hbar, &weights, product, &grid)?;
                    off = off.max(v.norm() / (na.norm() * nb.norm()).sqrt());
                }
            }
        }
        Ok((grp, sym, off))
    })();
    checks.push(Check::from_result(
        "groupoid_norm_factorization",
        "||sigma_{m,n}||^2 = l_m r_n (direct quadrature over the groupoid)",
        1e-8,
        oracle.as_ref().map(|r| r.0).map_err(Clone::clone),
    ));
    checks.push(Check::from_result(
        "symplectic_norm_factorization",
        "||sigma_{m,n}||^2 = A_m A_n (direct quadrature over the groupoid)",
        1e-8,
        oracle.as_ref().map(|r| r.1).map_err(Clone::clone),
    ));
    checks.push(Check::from_result(
        "section_orthogonality",
        "distinct sections are orthogonal",
        1e-10,
        oracle.map(|r| r.2),
    ));

    let size = c.nmax + 1;
    let unit = norm_table(c, WeightPair::default(), size);
    let finite = (|| -> Result<f64, PolarizationError> {
        let mut bad = 0usize;
        for (_, weights) in pairs() {
            let t = norm_table(c, weights, size)?;
            for m in 0..size {
                let s = t.get(m)?;
                bad += [s.a(), s.l(), s.r()]
                    .iter()
                    .filter(|v| !(v.is_finite() && **v > 0.0))
                    .count();
            }
        }
        Ok(bad as f64)
    })();
    checks.push(Check::from_result(
        "norms_finite_positive",
        "sections are normalizable",
        0.0,
        finite,
    ));

    let unit_ref = unit.as_ref().map_err(Clone::clone);
    checks.push(Check::from_result(
        "quadrature_doubling",
        "recomputation with doubled nodes",
        10.0 * c.quad.rel_tol,
        unit_ref.clone().and_then(|t| {
            [0, c.nmax / 2, c.nmax]
                .into_iter()
                .try_fold(0.0f64, |w, m| t.doubling_residual(m).map(|r| w.max(r)))
        }),
    ));
    checks.push(Check::from_result(
        "unit_weights_r_below_l",
        "r_m < l_m when rho = Lambda = 1",
        0.0,
        unit_ref.clone().and_then(|t| {
            (0..size).try_fold(0.0, |bad, m| t.get(m).map(|s| bad + f64::from(s.r() >= s.l())))
        }),
    ));
    checks.push(Check::from_result(
        "symplectic_gram_symmetry",
        "symmetric under x <-> y, so D = 1",
        1e-10,
        unit_ref.clone().and_then(|t| gram_symmetry_defect(t, size)),
    ));
    checks.push(Check::from_result(
        "no_weight_pair_reproduces_symplectic",
        "A_m A_n / (l_m r_n) is not constant on the window",
        0.99,
        unit_ref.clone().and_then(|t| proportionality_spread(t, 6.min(size)).map(|s| 1.0 / s)),
    ));

    let mut f_rule = 0.0f64;
    let mut d_anti = 0.0f64;
    for m in 0..size {
        for n in 0..size {
            let idx = SectionIndex::new(m, n);
            let out = apply_f_rule(Monomial::of(idx), hbar);
            f_rule = f_rule.max((out.coeff - quantized_f(idx, hbar)).abs());
            d_anti = d_anti.max((quantized_d(idx, hbar) * quantized_d(idx.swapped(), hbar) - 1.0).abs());
        }
    }
    checks.push(Check::new(
        "quantized_f_rule",
        "hbar xbar d/dxbar + hbar/2 gives hbar(m + 1/2)",
        1e-14,
        f_rule,
    ));
    checks.push(Check::new("quantized_d_antisymmetry", "D(m,n) D(n,m) = 1", 1e-14, d_anti));

    let table = unit.ok().and_then(|t| {
        let phi = modular_cocycle_phi(c.nmax, &t).ok()?.phi;
        let rows = (0..size)
            .filter_map(|m| t.get(m).ok())
            .map(|s| {
                vec![
                    s.m as f64,
                    s.m as f64,
                    s.a(),
                    s.l(),
                    s.r(),
                    s.ratio(),
                    asymptotic_ratio(s.m, hbar, 1.0, 1.0),
                    phi[s.m as usize],
                ]
            })
            .collect();
        Some(Table {
            columns: vec!["m", "n", "A_m", "l_m", "r_m", "ratio", "asymptotic_ref", "phi_m"],
            rows,
        })
    });
    (checks, table)
}

pub fn asymptotics(c: &RunConfig) -> (Vec<Check>, Option<Table>) {
    let hbar = c.hbar;
    let nmax = c.nmax;
    let lo = 20.min(nmax / 2);
    let mut checks = Vec::new();
    let mut table = None;
    for (label, weights) in pairs() {
        let (linf, rinf) = (weights.lambda.at_infinity(), weights.rho.at_infinity());
        let devs = norm_table(c, weights, nmax + 1).and_then(|t| {
            (0..=nmax)
                .map(|n| {
                    let s = t.get(n)?;
                    let reference = asymptotic_ratio(n, hbar, linf, rinf);
                    Ok((s.ratio(), reference, s.ratio() / reference - 1.0))
                })
                .collect::<Result<Vec<_>, PolarizationError>>()
        });
        checks.push(Check::from_result(
            &format!("asymptotic_deviation_{label}"),
            "r_n / l_n ~ e^{-hbar(n+1/2)} sqrt(rho(inf)/Lambda(inf))",
            0.05,
            devs.as_ref().map(|d| d[nmax as usize].2.abs()).map_err(Clone::clone),
        ));
        checks.push(Check::from_result(
            &format!("asymptotic_monotone_{label}"),
            "relative deviation decreases on the tail",
            0.0,
            devs.as_ref()
                .map(|d| {
                    d[lo as usize..]
                        .windows(2)
                        .map(|w| (w[1].2.abs() - w[0].2.abs()).max(0.0))
                        .fold(0.0, f64::max)
                })
                .map_err(Clone::clone),
        ));
        if label == "unit" {
            table = devs.ok().map(|d| Table {
                columns: vec!["n", "ratio", "asymptotic_ref", "rel_deviation"],
                rows: d
                    .iter()
                    .enumerate()
                    .map(|(n, (r, a, e))| vec![n as f64, *r, *a, *e])
                    .collect(),
            });
        }
    }
    (checks, table)
}

struct BridgeResiduals {
    homomorphism: f64,
    isometry: f64,
    involution: f64,
    reconstruction: f64,
}

fn bridge_residuals(t: &NormTable, window: u32) -> Result<BridgeResiduals, PolarizationError> {
    let mu = bridge_measure(t)?;
    let hbar = t.hbar();
    let phi = modular_cocycle_phi(t.size() - 1, t)?.phi;
    let mut r = BridgeResiduals {
        homomorphism: 0.0,
        isometry: 0.0,
        involution: 0.0,
        reconstruction: 0.0,
    };
    for m in 0..=window {
        for n in 0..=window {
            let s = SectionIndex::new(m, n);
            let e = hilbert_bridge(s, t)?;
            for k in 0..=window {
                let (a, b) = (SectionIndex::new(m, k), SectionIndex::new(k, n));
                let Some((coef, idx)) = convolve_sections(a, b, t)? else {
                    continue;
                };
                let lhs = hilbert_bridge(idx, t)?.scale(Complex64::new(coef, 0.0));
                let rhs = hilbert_bridge(a, t)?.convolve(&hilbert_bridge(b, t)?)?;
                r.homomorphism = r.homomorphism.max(lhs.max_abs_diff(&rhs)? / lhs.max_abs());
            }
            let norm = gns_inner(&e, &e, &mu)?;
            let exact = scalar_product_groupoid(s, s, t)?;
            r.isometry = r.isometry.max((norm - exact).norm() / exact.norm());
            let swapped = hilbert_bridge(s.swapped(), t)?;
            r.involution = r.involution.max(e.involute().max_abs_diff(&swapped)? / e.max_abs());
            let eig = groupoid_modular_eigenvalue(s, t)?;
            let rec = modular_reconstruction(m, n, &phi, hbar)
                .ok_or(PolarizationError::OutOfTable { index: m.max(n), size: t.size() })?;
            r.reconstruction = r.reconstruction.max(rel(eig, rec));
        }
    }
    Ok(r)
}

pub fn bridge(c: &RunConfig) -> Vec<Check> {
    let hbar = c.hbar;
    let size = c.nmax + 1;
    let window = BRIDGE_WINDOW.min(c.nmax);
    let mut checks = Vec::new();
    for (label, weights) in pairs() {
        let table = norm_table(c, weights.clone(), size);
        let res = table
            .as_ref()
            .map_err(Clone::clone)
            .and_then(|t| bridge_residuals(t, window));
        let pick = |f: fn(&BridgeResiduals) -> f64| res.as_ref().map(f).map_err(Clone::clone);
        checks.push(Check::from_result(
            &format!("bridge_homomorphism_{label}"),
            "e(sigma_{m,k} * sigma_{k,n}) = e(sigma_{m,k}) e(sigma_{k,n})",
            1e-8,
            pick(|r| r.homomorphism),
        ));
        checks.push(Check::from_result(
            &format!("bridge_isometry_{label}"),
            "mu(n) l_m l_n = ||sigma_{m,n}||^2",
            1e-8,
            pick(|r| r.isometry),
        ));
        checks.push(Check::from_result(
            &format!("bridge_involution_{label}"),
            "e(sigma_{m,n})^* = e(sigma_{n,m})",
            1e-12,
            pick(|r| r.involution),
        ));
        checks.push(Check::from_result(
            &format!("modular_reconstruction_{label}"),
            "l_n r_m / (l_m r_n) = e^{-hbar(m-n)} e^{hbar d*phi}",
            1e-8,
            pick(|r| r.reconstruction),
        ));

        let phi = table
            .as_ref()
            .map_err(Clone::clone)
            .and_then(|t| modular_cocycle_phi(c.nmax, t));
        checks.push(Check::from_result(
            &format!("phi_limit_{label}"),
            "phi(m) -> -1/2 + log(rho(inf)/Lambda(inf)) / (2 hbar)",
            0.05,
            phi.as_ref().map(|p| p.final_deviation).map_err(Clone::clone),
        ));
        checks.push(Check::from_result(
            &format!("phi_tail_monotone_{label}"),
            "|phi(m) - phi(inf)| decreases on the tail",
            1e-9,
            phi.as_ref().map(|p| p.tail_increase).map_err(Clone::clone),
        ));
        checks.push(Check::from_result(
            &format!("phi_coboundary_{label}"),
            "c_(rho,Lambda) = c1 + d*phi",
            1e-9,
            phi.map(|p| p.coboundary_residual),
        ));

        let conv = (|| -> Result<f64, PolarizationError> {
            let t = table.as_ref().map_err(Clone::clone)?;
            let (x, y) = (Complex64::new(0.3, -0.7), Complex64::new(-1.1, 0.4));
            let (a, b) = (SectionIndex::new(0, 1), SectionIndex::new(1, 2));
            let direct = convolution_oracle(a, b, x, y, hbar, &weights, &OracleGrid::default())?;
            let (coef, idx) = convolve_sections(a, b, t)?.ok_or(PolarizationError::NonFinite("selection"))?;
            let closed = section_value(idx, x, y, hbar)? * coef;
            Ok((direct - closed).norm() / closed.norm())
        })();
        checks.push(Check::from_result(
            &format!("section_convolution_{label}"),
            "sigma_{m,k} *_Lambda sigma_{k,n} = l_k sigma_{m,n} (direct z-integral)",
            1e-8,
            conv,
        ));
    }

    let dmatch = (|| -> Result<f64, PolarizationError> {
        let t = norm_table(c, WeightPair::default(), window + 1)?;
        let mut worst = 0.0f64;
        for m in 0..=window {
            for n in 0..=window {
                let s = SectionIndex::new(m, n);
                let e = hilbert_bridge(s, &t)?;
                let d = modular_operator(&e, hbar)?;
                worst = worst.max(rel(d.max_abs() / e.max_abs(), quantized_d(s, hbar)));
            }
        }
        Ok(worst)
    })();
    checks.push(Check::from_result(
        "quantized_d_matches_modular_operator",
        "D sigma_{m,n} = e^{-hbar(m-n)} sigma_{m,n} under n -> n - m",
        1e-13,
        dmatch,
    ));
    checks
}
