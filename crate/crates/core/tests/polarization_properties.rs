use num_complex::Complex64;
use podles_core::groupoid::{modular_operator, GroupoidKind};
use podles_core::podles::{build_generators, rep_rho, QuantumSphereParams};
use podles_core::polarization::{
    bs_leaves, convolution_oracle, convolve_sections, groupoid_norm_oracle, hilbert_bridge,
    leaf_groupoid, quantized_d, scalar_product_groupoid, scalar_product_symplectic, section_value,
    NormTable, OracleGrid, ScalarProduct, SectionIndex, WeightPair,
};
use podles_core::special::QuadratureSpec;

const HBAR: f64 = 0.5;

fn table(weights: WeightPair, size: u32) -> NormTable {
    NormTable::new(HBAR, weights, QuadratureSpec::default(), size).unwrap()
}

#[test]
fn tau_spectrum_is_the_bohr_sommerfeld_set() {
    let params = QuantumSphereParams::new(HBAR).unwrap();
    let dim = 64;
    let gen = build_generators(&params, dim as u64).unwrap();
    let tau = gen.tau.restrict(|a| a.source() < podles_core::groupoid::Unit::Fin(dim as u64));
    let mat = rep_rho(&tau, dim).unwrap();
    let mut eig: Vec<f64> = mat.symmetric_eigen().eigenvalues.iter().copied().collect();
    eig.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let leaves = bs_leaves(HBAR, dim as u64 - 1).unwrap();
    for (e, leaf) in eig.iter().zip(&leaves.base) {
        assert!((e - leaf.tau).abs() < 1e-12, "{e} vs {}", leaf.tau);
    }
}

#[test]
fn leaf_groupoid_is_sheu_on_window_30() {
    let r = leaf_groupoid(HBAR, 30).unwrap();
    assert_eq!(r.mismatches, 0);
    assert!(r.is_isomorphism());
}

#[test]
fn factorized_norms_match_direct_quadrature() {
    let grid = OracleGrid::default();
    for weights in [WeightPair::default(), WeightPair::sample_custom()] {
        let t = table(weights.clone(), 6);
        for m in 0..6 {
            for n in 0..6 {
                let s = SectionIndex::new(m, n);
                let direct =
                    groupoid_norm_oracle(s, s, HBAR, &weights, ScalarProduct::Groupoid, &grid).unwrap();
                let exact = scalar_product_groupoid(s, s, &t).unwrap();
                assert!((direct - exact).norm() < 1e-8 * exact.norm(), "({m},{n})");
            }
        }
        for (a, b) in [((1, 2), (2, 1)), ((0, 1), (1, 0)), ((3, 3), (3, 4))] {
            let (a, b) = (SectionIndex::new(a.0, a.1), SectionIndex::new(b.0, b.1));
            for product in [ScalarProduct::Groupoid, ScalarProduct::Symplectic] {
                let off = groupoid_norm_oracle(a, b, HBAR, &weights, product, &grid).unwrap();
                assert!(off.norm() < 1e-10, "{off}");
            }
            assert_eq!(scalar_product_symplectic(a, b, &t).unwrap(), Complex64::new(0.0, 0.0));
        }
    }
}

#[test]
fn associativity_of_section_convolution() {
    let t = table(WeightPair::sample_custom(), 6);
    let s = SectionIndex::new;
    let (c1, i1) = convolve_sections(s(0, 2), s(2, 4), &t).unwrap().unwrap();
    let (c2, left) = convolve_sections(i1, s(4, 5), &t).unwrap().unwrap();
    let (c3, i3) = convolve_sections(s(2, 4), s(4, 5), &t).unwrap().unwrap();
    let (c4, right) = convolve_sections(s(0, 2), i3, &t).unwrap().unwrap();
    assert_eq!(left, right);
    assert!(((c1 * c2) - (c3 * c4)).abs() < 1e-13 * c1 * c2);
}

#[test]
fn direct_convolution_off_the_reference_points() {
    let weights = WeightPair::sample_custom();
    let t = table(weights.clone(), 4);
    let grid = OracleGrid::default();
    let (x, y) = (Complex64::new(-0.2, 0.9), Complex64::new(0.6, 0.1));
    for (m, k, n) in [(0, 0, 0), (2, 3, 1), (1, 1, 3)] {
        let (a, b) = (SectionIndex::new(m, k), SectionIndex::new(k, n));
        let direct = convolution_oracle(a, b, x, y, HBAR, &weights, &grid).unwrap();
        let (c, idx) = convolve_sections(a, b, &t).unwrap().unwrap();
        let closed = section_value(idx, x, y, HBAR).unwrap() * c;
        assert!((direct - closed).norm() < 1e-9 * closed.norm());
    }
}

#[test]
fn quantized_d_matches_algebra_modular_operator() {
    let t = table(WeightPair::default(), 10);
    for m in 0..10 {
        for n in 0..10 {
            let s = SectionIndex::new(m, n);
            let e = hilbert_bridge(s, &t).unwrap();
            assert_eq!(e.kind(), GroupoidKind::Sheu);
            let d = modular_operator(&e, HBAR).unwrap();
            let ratio = d.max_abs() / e.max_abs();
            let expect = quantized_d(s, HBAR);
            assert!((ratio - expect).abs() < 1e-13 * expect);
        }
    }
}
