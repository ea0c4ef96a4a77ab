//! Independent cross-checks: exact diagonalization against free fermions,
//! closed forms against direct quadrature.

use std::f64::consts::{FRAC_PI_2, PI};

use altxxz::analysis::default_orders;
use altxxz::free_fermion::{
    berry_phase, correlation_matrix, edge_mode_report, ground_energy_per_site,
    ground_energy_thermo, winding_number, ChainLength,
};
use altxxz::{Backend, Evaluator, ModelPoint, SweepAxis};

/// Composite Simpson rule on `[a, b]` with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        acc += f(a + h * i as f64) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

fn point(backend: Backend, n: usize, delta: f64, anisotropy: f64) -> ModelPoint<f64> {
    ModelPoint {
        backend,
        n_sites: n,
        delta,
        anisotropy,
    }
}

#[test]
fn exact_diag_matches_free_fermions_at_zero_anisotropy() {
    let ev = Evaluator::<f64>::new(default_orders());
    for n in [8usize, 12] {
        for delta in [-0.5, 0.3, 0.9] {
            let blocks = [4, n / 2];
            let (ed, _) = ev
                .evaluate(&point(Backend::ExactDiag, n, delta, 0.0), &blocks, None)
                .unwrap();
            let (ff, _) = ev
                .evaluate(&point(Backend::FreeFermion, n, delta, 0.0), &blocks, None)
                .unwrap();
            assert!(
                (ed.energy_per_site - ff.energy_per_site).abs() < 1e-9,
                "N={n} δ={delta}"
            );
            for (a, b) in ed.blocks.iter().zip(&ff.blocks) {
                let (wa, wb) = (a.spectrum.weights(), b.spectrum.weights());
                assert_eq!(wa.len(), wb.len());
                let worst = wa
                    .iter()
                    .zip(&wb)
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max);
                assert!(
                    worst < 1e-8,
                    "N={n} δ={delta} L_A={}: {worst:e}",
                    a.block_len
                );
                for (x, y) in a.renyi.values.iter().zip(&b.renyi.values) {
                    assert!((x - y).abs() < 1e-8, "N={n} δ={delta}: {x} vs {y}");
                }
            }
        }
    }
}

#[test]
fn thermodynamic_energy_against_quadrature() {
    for delta in [0.0, 0.1, 0.5, 0.9, 1.0] {
        let direct = -(1.0 / PI)
            * simpson(
                |k| (2.0 + 2.0 * delta * delta + 2.0 * (1.0 - delta * delta) * k.cos()).sqrt(),
                0.0,
                PI,
                20_000,
            );
        let thermo: f64 = ground_energy_thermo(delta);
        assert!(
            (thermo - direct).abs() < 1e-10,
            "δ={delta}: {thermo} vs {direct}"
        );
    }
    assert!((ground_energy_thermo(0.0f64) + 4.0 / PI).abs() < 1e-14);
}

#[test]
fn finite_rings_approach_the_thermodynamic_energy() {
    for delta in [0.0, 0.1, 0.5, 0.9] {
        let e: f64 = ground_energy_per_site(1_000_000, delta);
        assert!((e - ground_energy_thermo(delta)).abs() < 1e-6);
    }
}

#[test]
fn curvature_matches_analytic_second_derivative() {
    // -e''(δ) = (4/π) ∫ sin²cos² / (cos² + δ² sin²)^{3/2}
    let oracle = |d: f64| {
        (4.0 / PI)
            * simpson(
                |t| {
                    let (s, c) = t.sin_cos();
                    s * s * c * c / (c * c + d * d * s * s).powf(1.5)
                },
                0.0,
                FRAC_PI_2,
                20_000,
            )
    };
    let ev = Evaluator::<f64>::new(default_orders());
    let curvature = |d: f64| {
        let p = point(Backend::FreeFermionThermo, 0, d, 0.0);
        ev.evaluate_stencil(&p, SweepAxis::Dimerization, 5e-3, &[4], None)
            .unwrap()
            .0
            .curvature()
    };
    let chi = curvature(0.5);
    assert!((chi - oracle(0.5)).abs() < 1e-4, "{chi} vs {}", oracle(0.5));

    let series: Vec<f64> = [0.1, 0.03, 0.01].iter().map(|&d| curvature(d)).collect();
    assert!(series.windows(2).all(|w| w[1] > w[0]), "{series:?}");
    assert!(series[2] > series[0] + 1.0, "{series:?}");
}

#[test]
fn berry_phase_tracks_winding() {
    for delta in [0.1, -0.1, 0.5, -0.5, 0.9, -0.9] {
        let nw = winding_number(delta).unwrap() as f64;
        let coarse: f64 = berry_phase(delta, 1024).unwrap();
        let fine: f64 = berry_phase(delta, 8192).unwrap();
        let diff = (coarse - nw * PI).rem_euclid(2.0 * PI);
        assert!(diff.min(2.0 * PI - diff) < 1e-6, "δ={delta}: γ={coarse}");
        assert!((coarse - fine).abs() < 1e-8);
    }
    assert!(winding_number(0.0f64).is_err());
}

#[test]
fn edge_modes_sharpen_with_block_length() {
    let mut lambdas = Vec::new();
    for la in [8usize, 16, 32, 64] {
        let block = correlation_matrix(ChainLength::Finite(512), 0.3f64, la).unwrap();
        let report = edge_mode_report(&block).unwrap();
        lambdas.push(report.lambda.abs());
        if la == 64 {
            let near = block
                .occupations
                .iter()
                .filter(|&&q| (q - 0.5).abs() < 1e-6)
                .count();
            assert_eq!(near, 2);
            assert!(report.quartet_splitting < 1e-5);
            assert!(report.factorization_error < 1e-12);
        }
    }
    assert!(lambdas.windows(2).all(|w| w[1] < w[0]), "{lambdas:?}");
    // exponential localization: each doubling squares the ratio
    let r1 = lambdas[2] / lambdas[1];
    let r2 = lambdas[3] / lambdas[2];
    assert!((r2.ln() / r1.ln() - 2.0).abs() < 0.1, "{lambdas:?}");
}

#[test]
fn weak_bond_cut_has_no_edge_modes() {
    // δ < 0 makes the cut bonds weak
    let block = correlation_matrix(ChainLength::Finite(256), -0.3f64, 32).unwrap();
    assert!(edge_mode_report(&block).is_err());
}
