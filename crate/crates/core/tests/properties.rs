use altxxz::analysis::{
    catalyst_verdict, default_orders, dlc_column, majorization_column, purity_w, renyi_entropy,
    RenyiGrid, RenyiOrder, Verdict,
};
use altxxz::free_fermion::{
    correlation_matrix, renyi_from_occupations, spectrum_from_occupations, ChainLength,
};
use altxxz::scaling::{energy_curvature, SweepCurve};
use altxxz::{Backend, ChainSpec, Evaluator, ModelPoint};
use proptest::prelude::*;

fn spectrum(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1e-6f64..1.0, 1..=len).prop_map(|raw| {
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|x| x / total).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn renyi_non_increasing_in_order(w in spectrum(40)) {
        let grid = RenyiGrid::from_weights(&w, &default_orders(), Backend::ExactDiag).unwrap();
        prop_assert!(grid.max_increase() <= 1e-12);
        let rank = (w.len() as f64).ln();
        prop_assert!(grid.values[0] <= rank + 1e-12);
        let top = w.iter().copied().fold(0.0, f64::max);
        prop_assert!((grid.values.last().unwrap() + top.ln()).abs() < 1e-12);
    }

    #[test]
    fn purity_is_four_exp_minus_s2(w in spectrum(40)) {
        let s2 = renyi_entropy(&w, RenyiOrder::Finite(2.0)).unwrap();
        prop_assert!((purity_w(&w).unwrap() - 4.0 * (-s2).exp()).abs() < 1e-12);
    }

    #[test]
    fn majorization_is_antisymmetric(a in spectrum(12), b in spectrum(12)) {
        let ab = majorization_column(&a, &b, 1e-13);
        let ba = majorization_column(&b, &a, 1e-13);
        for (x, y) in ab.differences.iter().zip(&ba.differences) {
            prop_assert!((x + y).abs() < 1e-15);
        }
        prop_assert_eq!(*ab.signs.last().unwrap(), 0);
    }

    #[test]
    fn majorized_pairs_have_sign_uniform_entropy_change(a in spectrum(12), b in spectrum(12)) {
        // b majorizes a  =>  every Schur-concave S_α(b) <= S_α(a)
        let col = majorization_column(&a, &b, 1e-13);
        prop_assume!(col.signs.iter().all(|&s| s >= 0) && col.signs.iter().any(|&s| s > 0));
        let orders = default_orders();
        let ga = RenyiGrid::from_weights(&a, &orders, Backend::ExactDiag).unwrap();
        let gb = RenyiGrid::from_weights(&b, &orders, Backend::ExactDiag).unwrap();
        let signs = dlc_column(&ga, &gb, 1e-12).unwrap();
        prop_assert!(signs.iter().all(|&s| s <= 0));
        let v = catalyst_verdict(&signs, &col.signs);
        prop_assert!(!v.verdict.needs_catalyst());
    }

    #[test]
    fn mixed_signs_are_never_convertible(n in 2usize..20, split in 1usize..19) {
        let split = split.min(n - 1);
        let dlc: Vec<i8> = (0..n).map(|i| if i < split { 1 } else { -1 }).collect();
        prop_assert_eq!(catalyst_verdict(&dlc, &[1, 0]).verdict, Verdict::NotLocallyConvertible);
    }

    #[test]
    fn occupations_are_particle_hole_paired(m in 4usize..40, delta in -0.95f64..0.95, half in 1usize..8) {
        let la = (2 * half).min(2 * m);
        let block = correlation_matrix(ChainLength::Finite(m), delta, la).unwrap();
        let q = &block.occupations;
        for i in 0..la {
            prop_assert!((q[i] + q[la - 1 - i] - 1.0).abs() < 1e-10);
        }
        let s = spectrum_from_occupations(&block, None);
        prop_assert!((s.total_weight() - 1.0).abs() < 1e-12);
        prop_assert!(s.len() <= 1usize << la);
    }

    #[test]
    fn occupation_entropies_match_product_spectrum(m in 6usize..30, delta in 0.2f64..0.95, half in 1usize..4) {
        let block = correlation_matrix(ChainLength::Finite(m), delta, 2 * half).unwrap();
        let w = spectrum_from_occupations(&block, None).weights();
        prop_assume!(w.iter().all(|&x| x > 1e-12 || x == 0.0));
        for alpha in [0.5, 2.0, 7.0] {
            let direct = renyi_from_occupations(&block.occupations, RenyiOrder::Finite(alpha)).unwrap();
            let product = renyi_entropy(&w, RenyiOrder::Finite(alpha)).unwrap();
            prop_assert!((direct - product).abs() < 1e-9);
        }
    }

    #[test]
    fn bonds_alternate(half in 2usize..16, delta in -1.0f64..1.0) {
        let spec = ChainSpec::new(2 * half, delta, 1.0, 2).unwrap();
        for (i, &b) in spec.bond_strengths().iter().enumerate() {
            let expect = if i % 2 == 0 { 1.0 - delta } else { 1.0 + delta };
            prop_assert_eq!(b, expect);
        }
    }

    #[test]
    fn central_difference_exact_on_quadratics(a in -3.0f64..3.0, b in -3.0f64..3.0, g in -2.0f64..2.0, eps in 1e-3f64..0.1) {
        let e = |x: f64| a * x * x + b * x;
        let chi = energy_curvature(e(g - eps), e(g), e(g + eps), eps);
        prop_assert!((chi + 2.0 * a).abs() < 1e-6 / eps);
    }

    #[test]
    fn sweep_curve_rejects_unsorted(mut g in prop::collection::vec(-5.0f64..5.0, 2..10)) {
        g.sort_by(f64::total_cmp);
        g.reverse();
        prop_assume!(g.windows(2).any(|w| w[0] > w[1]) || g.windows(2).any(|w| w[0] == w[1]));
        prop_assert!(SweepCurve::new(g.clone(), vec![0.0; g.len()]).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn exact_spectra_are_normalized_and_bounded(delta in -0.9f64..0.9, anisotropy in 0.0f64..5.0) {
        let ev = Evaluator::<f64>::new(default_orders());
        let p = ModelPoint { backend: Backend::ExactDiag, n_sites: 8, delta, anisotropy };
        let (r, _) = ev.evaluate(&p, &[2, 4], None).unwrap();
        for b in &r.blocks {
            prop_assert!((b.spectrum.total_weight() - 1.0).abs() < 1e-10);
            prop_assert!(b.renyi.max_increase() <= 1e-10);
            prop_assert!(b.renyi.values[0] <= (b.spectrum.len() as f64).ln() + 1e-10);
        }
        // the fully dimerized product state bounds the energy from above
        let strong = 1.0 + delta.abs();
        prop_assert!(r.energy_per_site <= -strong * (2.0 + anisotropy) / 2.0 + 1e-10);
    }
}
