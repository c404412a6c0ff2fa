use num_complex::Complex64;
use podles_core::groupoid::{
    cocycle_defect, evaluation_map, exact_sequence_leakage, gns_inner, kms_measure,
    modular_conjugation, modular_operator, shift_realization, state, AlgebraElement, Arrow,
    GroupoidError, GroupoidKind, KmsTag, TranslationCocycle,
};
use podles_core::podles::{
    build_generators, check_relations, kms_residual, rep_rho, rho_agreement, PodlesError,
    QuantumSphereParams,
};
use podles_core::polarization::bs_leaves;
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;
use crate::random;
use crate::report::Check;

const TRIALS: usize = 200;

fn kind_for(i: usize) -> GroupoidKind {
    if i.is_multiple_of(2) {
        GroupoidKind::Cuntz
    } else {
        GroupoidKind::Sheu
    }
}

fn exact_element(rng: &mut ChaCha8Rng, kind: GroupoidKind, window: u64) -> AlgebraElement {
    random::element(rng, kind, window, random::dyadic)
}

fn abs_coefficients(f: &AlgebraElement) -> AlgebraElement {
    f.map_coefficients(|_, c| Complex64::new(c.norm(), 0.0))
}

pub fn algebra(c: &RunConfig) -> Vec<Check> {
    let w = c.window;
    let dim = c.truncation;
    let mut rng = random::rng(c.seed, 1);
    let mut checks = Vec::new();

    let assoc = (|| -> Result<f64, GroupoidError> {
        let mut worst = 0.0f64;
        for i in 0..TRIALS {
            let k = kind_for(i);
            let (f, g, h) = (
                exact_element(&mut rng, k, w),
                exact_element(&mut rng, k, w),
                exact_element(&mut rng, k, w),
            );
            let left = f.convolve(&g)?.convolve(&h)?;
            let right = f.convolve(&g.convolve(&h)?)?;
            worst = worst.max(left.max_abs_diff(&right)?);
        }
        Ok(worst)
    })();
    checks.push(Check::from_result("associativity", "convolution on O1 and G_S", 1e-14, assoc));

    let invol = (|| -> Result<(f64, f64), GroupoidError> {
        let (mut anti, mut twice) = (0.0f64, 0.0f64);
        for i in 0..TRIALS {
            let k = kind_for(i);
            let (f, g) = (exact_element(&mut rng, k, w), exact_element(&mut rng, k, w));
            let lhs = f.convolve(&g)?.involute();
            let rhs = g.involute().convolve(&f.involute())?;
            anti = anti.max(lhs.max_abs_diff(&rhs)?);
            twice = twice.max(f.involute().involute().max_abs_diff(&f)?);
        }
        Ok((anti, twice))
    })();
    checks.push(Check::from_result(
        "involution_antihomomorphism",
        "(f*g)^* = g^* * f^*",
        1e-14,
        invol.as_ref().map(|r| r.0).map_err(Clone::clone),
    ));
    checks.push(Check::from_result(
        "involution_involutive",
        "f^** = f",
        1e-14,
        invol.map(|r| r.1),
    ));

    let units = (|| -> Result<f64, GroupoidError> {
        let mut worst = 0.0f64;
        for i in 0..TRIALS {
            let k = kind_for(i);
            let f = exact_element(&mut rng, k, w);
            let one = AlgebraElement::truncated_unit(k, w + 1);
            worst = worst
                .max(one.convolve(&f)?.max_abs_diff(&f)?)
                .max(f.convolve(&one)?.max_abs_diff(&f)?);
        }
        Ok(worst)
    })();
    checks.push(Check::from_result("unit_laws", "sum of unit arrows", 1e-14, units));

    let closure = (|| -> Result<f64, GroupoidError> {
        let mut bad = 0usize;
        for _ in 0..TRIALS {
            let f = exact_element(&mut rng, GroupoidKind::Sheu, w);
            let g = exact_element(&mut rng, GroupoidKind::Sheu, w);
            bad += f
                .convolve(&g)?
                .terms()
                .filter(|(a, _)| !a.is_admissible(GroupoidKind::Sheu))
                .count();
        }
        Ok(bad as f64)
    })();
    checks.push(Check::from_result("sheu_closure", "G_S is a subgroupoid", 0.0, closure));

    checks.push(Check::from_result(
        "c1_cocycle_identity",
        "c1(m,n) = n",
        0.0,
        Ok::<f64, GroupoidError>(cocycle_defect(&TranslationCocycle, w)),
    ));

    let shift = (|| -> Result<f64, GroupoidError> {
        let mut worst = 0.0f64;
        for i in 0..100 {
            let k = kind_for(i);
            let f = exact_element(&mut rng, k, dim as u64 - 1);
            let g = exact_element(&mut rng, k, dim as u64 - 1);
            let (rf, rg) = (shift_realization(&f, dim)?, shift_realization(&g, dim)?);
            let prod = shift_realization(&f.convolve(&g)?, dim)?;
            let adj = shift_realization(&f.involute(), dim)?;
            let d1 = (prod - &rf * &rg).iter().map(|z| z.norm()).fold(0.0, f64::max);
            let d2 = (adj - rf.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
            worst = worst.max(d1).max(d2);
        }
        Ok(worst)
    })();
    checks.push(Check::from_result(
        "shift_realization_homomorphism",
        "Toeplitz representation on l2(N)",
        1e-12,
        shift,
    ));

    let leak = exact_sequence_leakage(dim);
    let leak_field = |pick: fn(&podles_core::groupoid::SequenceLeakage) -> f64| {
        leak.as_ref().map(pick).map_err(Clone::clone)
    };
    checks.push(Check::from_result(
        "exact_sequence_symbol",
        "sigma(S*S - SS*) = 0",
        1e-14,
        leak_field(|l| l.sigma_of_commutator),
    ));
    checks.push(Check::from_result(
        "exact_sequence_interior",
        "S*S - SS* = E_00 away from the edge",
        1e-14,
        leak_field(|l| l.interior_defect),
    ));
    checks.push(Check::from_result(
        "shift_isometry",
        "S*S = 1",
        1e-14,
        leak_field(|l| l.isometry_defect),
    ));

    let eval = (|| -> Result<f64, GroupoidError> {
        let mut worst = 0.0f64;
        for _ in 0..TRIALS {
            let f = exact_element(&mut rng, GroupoidKind::Cuntz, w);
            let g = exact_element(&mut rng, GroupoidKind::Cuntz, w);
            let lhs = evaluation_map(&f.convolve(&g)?);
            let rhs = evaluation_map(&f).mul(&evaluation_map(&g));
            worst = worst.max(lhs.max_abs_diff(&rhs));
        }
        Ok(worst)
    })();
    checks.push(Check::from_result(
        "evaluation_homomorphism",
        "C*(O1) -> C(S^1) at infinity",
        1e-12,
        eval,
    ));
    checks
}

pub fn kms(c: &RunConfig) -> Vec<Check> {
    let hbar = c.hbar;
    let w = c.window;
    let mut rng = random::rng(c.seed, 2);
    let mut checks = Vec::new();

    let geometric = (|| -> Result<f64, GroupoidError> {
        let mu = kms_measure(KmsTag::Geometric(hbar))?;
        let shift = Complex64::new(0.0, -hbar);
        let mut worst = 0.0f64;
        for i in 0..TRIALS {
            let k = kind_for(i);
            let f = random::element(&mut rng, k, w, |r| random::uniform(r, 1.0));
            let g = random::element(&mut rng, k, w, |r| random::uniform(r, 1.0));
            let twisted = g.automorphism_c1(shift);
            let lhs = state(&f.convolve(&twisted)?, &mu);
            let rhs = state(&g.convolve(&f)?, &mu);
            let scale = state(&abs_coefficients(&g).convolve(&abs_coefficients(&f))?, &mu)
                .re
                .max(state(&abs_coefficients(&f).convolve(&abs_coefficients(&twisted))?, &mu).re);
            if scale > 0.0 {
                worst = worst.max((lhs - rhs).norm() / scale);
            }
        }
        Ok(worst)
    })();
    checks.push(Check::from_result(
        "kms_geometric_measure",
        "phi(f * A(-i hbar) g) = phi(g * f)",
        1e-12,
        geometric,
    ));

    let ground = (|| -> Result<f64, GroupoidError> {
        let mu = kms_measure(KmsTag::DiracZero)?;
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let f = random::element(&mut rng, GroupoidKind::Cuntz, w, |r| random::uniform(r, 1.0));
            let v = state(&f.involute().convolve(&f)?, &mu);
            worst = worst.max((-v.re).max(0.0)).max(v.im.abs());
        }
        Ok(worst)
    })();
    checks.push(Check::from_result("ground_state_positive", "KMS_inf at 0", 1e-15, ground));

    let gns = (|| -> Result<f64, GroupoidError> {
        let mu = kms_measure(KmsTag::Geometric(hbar))?;
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let f = random::element(&mut rng, GroupoidKind::Cuntz, w, |r| random::uniform(r, 1.0));
            let g = random::element(&mut rng, GroupoidKind::Cuntz, w, |r| random::uniform(r, 1.0));
            // weighted l2 pairing, summed arrow by arrow
            let oracle: Complex64 = f
                .terms()
                .map(|(a, c)| c.conj() * g.coefficient(a) * mu.weight(a.target()))
                .sum();
            let scale: f64 = f
                .terms()
                .map(|(a, c)| c.norm() * g.coefficient(a).norm() * mu.weight(a.target()))
                .sum();
            let v = gns_inner(&f, &g, &mu)?;
            if scale > 0.0 {
                worst = worst.max((v - oracle).norm() / scale);
            }
        }
        Ok(worst)
    })();
    checks.push(Check::from_result("gns_inner_product", "L2(G, mu)", 1e-12, gns));

    let modular = (|| -> Result<f64, GroupoidError> {
        let mut worst = 0.0f64;
        for m in 0..=w {
            for n in 0..=w {
                let e = AlgebraElement::basis(GroupoidKind::Sheu, Arrow::fin(m, n as i64 - m as i64))?;
                let d = modular_operator(&e, hbar)?;
                let want = (-hbar * (m as f64 - n as f64)).exp();
                let got = d.max_abs();
                worst = worst.max((got - want).abs() / want);
            }
        }
        Ok(worst)
    })();
    checks.push(Check::from_result(
        "modular_operator_spectrum",
        "D|m,n> = e^{-hbar(m-n)}|m,n>",
        1e-14,
        modular,
    ));

    let conj = (|| -> Result<(f64, f64), GroupoidError> {
        let mu = kms_measure(KmsTag::Geometric(hbar))?;
        let (mut inv, mut anti) = (0.0f64, 0.0f64);
        for _ in 0..50 {
            let f = random::element(&mut rng, GroupoidKind::Cuntz, 15, |r| random::uniform(r, 1.0));
            let g = random::element(&mut rng, GroupoidKind::Cuntz, 15, |r| random::uniform(r, 1.0));
            let jf = modular_conjugation(&f, hbar)?;
            let jg = modular_conjugation(&g, hbar)?;
            inv = inv.max(modular_conjugation(&jf, hbar)?.max_abs_diff(&f)? / f.max_abs());
            let lhs = gns_inner(&jf, &jg, &mu)?;
            let rhs = gns_inner(&f, &g, &mu)?.conj();
            let scale = (gns_inner(&f, &f, &mu)?.re * gns_inner(&g, &g, &mu)?.re).sqrt();
            if scale > 0.0 {
                anti = anti.max((lhs - rhs).norm() / scale);
            }
        }
        Ok((inv, anti))
    })();
    checks.push(Check::from_result(
        "modular_conjugation_involutive",
        "J^2 = 1",
        1e-12,
        conj.as_ref().map(|r| r.0).map_err(Clone::clone),
    ));
    checks.push(Check::from_result(
        "modular_conjugation_antiunitary",
        "<Jf, Jg> = conj <f, g>",
        1e-12,
        conj.map(|r| r.1),
    ));
    checks
}

pub fn podles(c: &RunConfig) -> Vec<Check> {
    let mut checks = Vec::new();
    let params = match QuantumSphereParams::new(c.hbar) {
        Ok(p) => p,
        Err(e) => {
            checks.push(Check::from_result::<PodlesError>("params", "q = e^{-hbar/2}", 0.0, Err(e)));
            return checks;
        }
    };
    let rel = build_generators(&params, c.cutoff).and_then(|g| check_relations(&g, &params));
    let rel_field = |name: &str, anchor: &str, pick: fn(&podles_core::podles::RelationReport) -> f64| {
        Check::from_result(name, anchor, 1e-12, rel.as_ref().map(pick).map_err(Clone::clone))
    };
    checks.push(rel_field(
        "relation_alpha_star_alpha",
        "q^2 alpha* alpha = tau(1 - tau)",
        |r| r.alpha_star_alpha,
    ));
    checks.push(rel_field(
        "relation_alpha_alpha_star",
        "q^2 alpha alpha* = q^2 tau(1 - q^2 tau)",
        |r| r.alpha_alpha_star,
    ));
    checks.push(rel_field("relation_commutation", "alpha tau = q^2 tau alpha", |r| r.commutation));
    checks.push(Check::new(
        "relation_window_nonempty",
        "window m < M - 2",
        0.0,
        match &rel {
            Ok(r) if !r.window_is_empty() => 0.0,
            _ => 1.0,
        },
    ));

    let dim = c.truncation;
    let full = build_generators(&params, dim as u64);
    checks.push(Check::from_result(
        "representation_agreement",
        "rho(tau), rho(alpha) on l2(N)",
        1e-14,
        full.as_ref()
            .map_err(Clone::clone)
            .and_then(|g| rho_agreement(g, &params, dim)),
    ));

    let spectrum = (|| -> Result<f64, String> {
        let g = full.clone().map_err(|e| e.to_string())?;
        let tau = g
            .tau
            .restrict(|a| matches!(a.source(), podles_core::groupoid::Unit::Fin(m) if (m as usize) < dim));
        let mat = rep_rho(&tau, dim).map_err(|e| e.to_string())?;
        let mut eig: Vec<f64> = mat.symmetric_eigen().eigenvalues.iter().copied().collect();
        eig.sort_by(|a, b| b.total_cmp(a));
        let leaves = bs_leaves(c.hbar, dim as u64 - 1).map_err(|e| e.to_string())?;
        Ok(eig
            .iter()
            .zip(&leaves.base)
            .map(|(e, l)| (e - l.tau).abs())
            .fold(0.0, f64::max))
    })();
    checks.push(Check::from_result(
        "tau_spectrum_bohr_sommerfeld",
        "spec rho(tau) = {e^{-hbar n}}",
        1e-12,
        spectrum,
    ));

    let words = build_generators(&params, c.cutoff).and_then(|g| kms_residual(&g, &params, 3));
    checks.push(Check::from_result(
        "haar_state_kms_words",
        "Haar state is KMS for c1",
        1e-12,
        words,
    ));
    checks
}
