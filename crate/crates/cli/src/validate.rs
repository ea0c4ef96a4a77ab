//! The acceptance criteria as runnable checks.
//!
//! Each check returns a [`CriterionReport`] with a one-line summary of the
//! measured quantities. Two criteria cannot hold as stated and are reported
//! faithfully, listed in [`EXPECTED_FAILURES`]: criterion 6 asks for a
//! positive column deep in the Neel phase, where every `S_α` falls towards
//! `ln 2`; criterion 10 asks for limit identities that finite orders
//! `1 ± 10⁻⁴` and `10³` do not reach on generic spectra.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use altxxz::analysis::{
    default_orders, dlc_column, purity_w, renyi_entropy, schmidt_gap, RenyiGrid, RenyiOrder,
    DLC_DEAD_ZONE, MAJORIZATION_DEAD_ZONE,
};
use altxxz::free_fermion::{
    berry_phase, correlation_matrix, edge_mode_report, ground_energy_per_site,
    ground_energy_thermo, winding_number, ChainLength,
};
use altxxz::scaling::{extrapolate, pseudo_critical_max, SweepCurve};
use altxxz::{Backend, Evaluator, ModelPoint, SweepAxis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::config::{Range, SweepConfig};
use crate::emit::sweep_tables;
use crate::error::Result;
use crate::sweep::{run_sweep, RunOptions};
use crate::table::Format;

/// Criteria expected to fail, with the reason recorded in the project notes.
pub const EXPECTED_FAILURES: &[u8] = &[6, 10];

pub const CRITERIA: [u8; 11] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11];

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "criterion {:>2} [{mark}] {}: {}",
            self.id, self.title, self.detail
        )
    }
}

type Check = std::result::Result<(bool, String), String>;

fn title(id: u8) -> &'static str {
    match id {
        1 => "singlet-product fixed point",
        2 => "free fermions against exact diagonalization",
        3 => "thermodynamic energy",
        4 => "winding number and Berry phase",
        5 => "edge-mode factorization",
        6 => "DLC columns at N = 16, L_A = 4",
        7 => "derivative sign flip at the SU(2) point",
        8 => "catalyst-free conversion in the Neel phase",
        9 => "curvature peak growth and extrapolation",
        10 => "entropy limits on random spectra",
        11 => "orchestration determinism and cache replay",
        _ => "unknown",
    }
}

pub fn run_criterion(id: u8) -> CriterionReport {
    let outcome = match id {
        1 => singlet_fixed_point(),
        2 => oracle_equivalence(),
        3 => thermodynamic_energy(),
        4 => topology(),
        5 => edge_modes(),
        6 => dlc_columns(),
        7 => su2_sign_flip(),
        8 => neel_majorization(),
        9 => curvature_trend(),
        10 => entropy_limits(),
        11 => determinism(),
        _ => Err(format!("no criterion {id}")),
    };
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionReport {
        id,
        title: title(id),
        passed,
        detail,
    }
}

pub fn run_all() -> Vec<CriterionReport> {
    CRITERIA.iter().map(|&id| run_criterion(id)).collect()
}

fn err(e: impl fmt::Display) -> String {
    e.to_string()
}

fn ed(n: usize, delta: f64, anisotropy: f64) -> ModelPoint<f64> {
    ModelPoint {
        backend: Backend::ExactDiag,
        n_sites: n,
        delta,
        anisotropy,
    }
}

fn evaluator() -> Evaluator<f64> {
    Evaluator::new(default_orders())
}

fn singlet_fixed_point() -> Check {
    let ev = evaluator();
    let ln4 = 4f64.ln();
    let mut worst = 0f64;
    for n in [8usize, 12, 16] {
        let blocks: Vec<usize> = (1..=n / 4).map(|h| 2 * h).collect();
        for anisotropy in [0.0, 1.0, 4.0] {
            let (r, _) = ev
                .evaluate(&ed(n, 1.0, anisotropy), &blocks, None)
                .map_err(err)?;
            worst = worst.max((r.energy_per_site + 2.0 + anisotropy).abs());
            for b in &r.blocks {
                let w = b.spectrum.weights();
                for (j, &x) in w.iter().enumerate() {
                    worst = worst.max((x - if j < 4 { 0.25 } else { 0.0 }).abs());
                }
                if w.len() < 4 {
                    return Ok((
                        false,
                        format!("N={n} L_A={}: only {} levels", b.block_len, w.len()),
                    ));
                }
                for s in &b.renyi.values {
                    worst = worst.max((s - ln4).abs());
                }
                worst = worst.max((purity_w(&w).map_err(err)? - 1.0).abs());
                worst = worst.max(schmidt_gap(&w).map_err(err)?.abs());
            }
        }
    }
    Ok((
        worst < 1e-10,
        format!("max deviation {worst:.2e} (tol 1e-10)"),
    ))
}

fn oracle_equivalence() -> Check {
    let ev = evaluator();
    let (mut spec, mut renyi, mut energy) = (0f64, 0f64, 0f64);
    for n in [8usize, 12, 16] {
        for delta in [-0.5, 0.3, 0.9] {
            let blocks = if n / 2 == 4 { vec![4] } else { vec![4, n / 2] };
            let (a, _) = ev
                .evaluate(&ed(n, delta, 0.0), &blocks, None)
                .map_err(err)?;
            let ff = ModelPoint {
                backend: Backend::FreeFermion,
                ..ed(n, delta, 0.0)
            };
            let (b, _) = ev.evaluate(&ff, &blocks, None).map_err(err)?;
            energy = energy.max((a.energy_per_site - b.energy_per_site).abs());
            for (x, y) in a.blocks.iter().zip(&b.blocks) {
                let (wx, wy) = (x.spectrum.weights(), y.spectrum.weights());
                let len = wx.len().max(wy.len());
                for j in 0..len {
                    let d = wx.get(j).copied().unwrap_or(0.0) - wy.get(j).copied().unwrap_or(0.0);
                    spec = spec.max(d.abs());
                }
                for (s, t) in x.renyi.values.iter().zip(&y.renyi.values) {
                    renyi = renyi.max((s - t).abs());
                }
            }
        }
    }
    let ok = spec < 1e-8 && renyi < 1e-8 && energy < 1e-9;
    Ok((
        ok,
        format!(
            "spectrum {spec:.2e}, S_alpha {renyi:.2e} (tol 1e-8), energy {energy:.2e} (tol 1e-9)"
        ),
    ))
}

fn thermodynamic_energy() -> Check {
    let mut worst = 0f64;
    for delta in [0.0, 0.1, 0.5, 0.9] {
        let e: f64 = ground_energy_per_site(1_000_000, delta);
        worst = worst.max((e - ground_energy_thermo(delta)).abs());
    }
    let at_zero = (ground_energy_thermo(0.0f64) + 4.0 / PI).abs();
    Ok((
        worst < 1e-6 && at_zero < 1e-12,
        format!("finite vs infinite {worst:.2e} (tol 1e-6), e0(0) + 4/pi = {at_zero:.1e}"),
    ))
}

fn topology() -> Check {
    let (mut phase, mut refine) = (0f64, 0f64);
    for delta in [0.1, -0.1, 0.5, -0.5, 0.9, -0.9] {
        let nw = winding_number(delta).map_err(err)? as f64;
        let coarse: f64 = berry_phase(delta, 1024).map_err(err)?;
        let fine: f64 = berry_phase(delta, 8192).map_err(err)?;
        let d = (coarse - nw * PI).rem_euclid(2.0 * PI);
        phase = phase.max(d.min(2.0 * PI - d));
        refine = refine.max((coarse - fine).abs());
    }
    Ok((
        phase < 1e-6 && refine < 1e-8,
        format!("|gamma - n_w pi| {phase:.2e} (tol 1e-6), refinement {refine:.2e} (tol 1e-8)"),
    ))
}

fn edge_modes() -> Check {
    let mut lambdas = Vec::new();
    let (mut near, mut quartet) = (0, f64::NAN);
    for la in [8usize, 16, 32, 64] {
        let block = correlation_matrix(ChainLength::Finite(512), 0.3f64, la).map_err(err)?;
        let report = edge_mode_report(&block).map_err(err)?;
        lambdas.push(report.lambda.abs());
        if la == 64 {
            near = block
                .occupations
                .iter()
                .filter(|&&q| (q - 0.5).abs() < 1e-6)
                .count();
            quartet = report.quartet_splitting;
        }
    }
    let decreasing = lambdas.windows(2).all(|w| w[1] < w[0]);
    let ok = near == 2 && quartet < 1e-5 && decreasing;
    let lambdas: Vec<String> = lambdas.iter().map(|l| format!("{l:.3e}")).collect();
    Ok((
        ok,
        format!(
            "{near} modes near 1/2, quartet splitting {quartet:.2e}, lambda [{}]",
            lambdas.join(", ")
        ),
    ))
}

fn signs_summary(col: &[i8]) -> (usize, usize, usize) {
    let p = col.iter().filter(|&&s| s > 0).count();
    let m = col.iter().filter(|&&s| s < 0).count();
    (p, m, col.len() - p - m)
}

fn dlc_columns() -> Check {
    let ev = evaluator();
    let eps = altxxz::chain::DEFAULT_EPSILON;
    let column = |anisotropy: f64| -> std::result::Result<Vec<i8>, String> {
        let (s, _) = ev
            .evaluate_stencil(
                &ed(16, 0.3, anisotropy),
                SweepAxis::Anisotropy,
                eps,
                &[4],
                None,
            )
            .map_err(err)?;
        s.dlc(0, DLC_DEAD_ZONE).map_err(err)
    };
    let low = signs_summary(&column(0.5)?);
    let high = signs_summary(&column(5.0)?);
    let ok = low.0 > 0 && low.1 > 0 && high.1 == 0 && high.2 == 0;
    let uniform = high.2 == 0 && (high.0 == 0 || high.1 == 0);
    Ok((
        ok,
        format!("(+,-,0) at 0.5: {low:?}, at 5.0: {high:?} (uniform sign at 5.0: {uniform})"),
    ))
}

fn su2_sign_flip() -> Check {
    let ev = evaluator();
    let eps = altxxz::chain::DEFAULT_EPSILON;
    let (s, _) = ev
        .evaluate_stencil(&ed(16, 0.3, 1.0), SweepAxis::Anisotropy, eps, &[8], None)
        .map_err(err)?;
    let below = dlc_column(
        &s.behind.blocks[0].renyi,
        &s.at.blocks[0].renyi,
        DLC_DEAD_ZONE,
    )
    .map_err(err)?;
    let above = s.dlc(0, DLC_DEAD_ZONE).map_err(err)?;
    let flipped = below
        .iter()
        .zip(&above)
        .filter(|(b, a)| **b != 0 && **b == -**a)
        .count();
    Ok((
        flipped == below.len(),
        format!(
            "{flipped}/{} orders flip; below {:?}, above {:?}",
            below.len(),
            signs_summary(&below),
            signs_summary(&above)
        ),
    ))
}

fn neel_majorization() -> Check {
    let ev = evaluator();
    let eps = altxxz::chain::DEFAULT_EPSILON;
    let (s, _) = ev
        .evaluate_stencil(&ed(16, 0.3, 5.0), SweepAxis::Anisotropy, eps, &[8], None)
        .map_err(err)?;
    let m = s.majorization(0, MAJORIZATION_DEAD_ZONE);
    let (p, n, z) = signs_summary(&m.signs);
    let report = s
        .verdict(0, DLC_DEAD_ZONE, MAJORIZATION_DEAD_ZONE)
        .map_err(err)?;
    let uniform = p == 0 || n == 0;
    let free = matches!(
        report.verdict,
        altxxz::analysis::Verdict::ConvertibleUp | altxxz::analysis::Verdict::ConvertibleDown
    );
    Ok((
        uniform && free,
        format!(
            "M(k) signs (+,-,0) = ({p},{n},{z}), verdict {}",
            report.verdict.code()
        ),
    ))
}

/// Curvature along `Δ` at `δ = 0.3`: coarse scan, then a fine scan around
/// the coarse maximum. Returns the refined peak location and height.
fn curvature_peak(n: usize) -> std::result::Result<(f64, f64), String> {
    let ev = evaluator();
    let eps = altxxz::chain::DEFAULT_EPSILON;
    let mut warm: Option<Vec<f64>> = None;
    let mut chi = |g: f64| -> std::result::Result<f64, String> {
        let (s, v) = ev
            .evaluate_stencil(
                &ed(n, 0.3, g),
                SweepAxis::Anisotropy,
                eps,
                &[2],
                warm.as_deref(),
            )
            .map_err(err)?;
        warm = v;
        Ok(s.curvature())
    };
    let coarse: Vec<f64> = Range {
        start: 1.5,
        stop: 5.0,
        step: 0.25,
    }
    .values();
    let values = coarse
        .iter()
        .map(|&g| chi(g))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let top = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("non-empty");
    let centre = coarse[top];
    let fine = Range {
        start: centre - 0.25,
        stop: centre + 0.25,
        step: 0.05,
    }
    .values();
    let fine_values = fine
        .iter()
        .map(|&g| chi(g))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let height = fine_values
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let curve = SweepCurve::new(fine, fine_values).map_err(err)?;
    Ok((pseudo_critical_max(&curve).map_err(err)?, height))
}

fn curvature_trend() -> Check {
    let sizes = [8usize, 12, 16, 20];
    let mut peaks = Vec::new();
    let mut heights = Vec::new();
    for &n in &sizes {
        let (g, h) = curvature_peak(n)?;
        peaks.push(g);
        heights.push(h);
    }
    let growing = heights[..3].windows(2).all(|w| w[1] > w[0]);
    let fit = extrapolate(&sizes, &peaks).map_err(err)?;
    let inside = (3.0..=4.2).contains(&fit.critical_point);
    Ok((
        growing && inside,
        format!(
            "peaks {peaks:.3?}, heights {heights:.4?}, g_c = {:.3} (band [3.0, 4.2]), theta = {:.3}",
            fit.critical_point, fit.exponent
        ),
    ))
}

/// Spectra drawn as normalized exponential variates, 2 to 64 levels.
pub fn random_spectra(count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(2..=64);
            let raw: Vec<f64> = (0..len).map(|_| rng.sample::<f64, _>(Exp1)).collect();
            let total: f64 = raw.iter().sum();
            raw.into_iter().map(|x| x / total).collect()
        })
        .collect()
}

fn entropy_limits() -> Check {
    let (mut near_one, mut large, mut rise) = (0f64, 0f64, f64::NEG_INFINITY);
    for w in random_spectra(100, 0) {
        let sv = renyi_entropy(&w, RenyiOrder::VonNeumann).map_err(err)?;
        for a in [1.0 - 1e-4, 1.0 + 1e-4] {
            near_one =
                near_one.max((renyi_entropy(&w, RenyiOrder::Finite(a)).map_err(err)? - sv).abs());
        }
        let xi0 = -w.iter().copied().fold(0.0, f64::max).ln();
        large = large.max((renyi_entropy(&w, RenyiOrder::Finite(1e3)).map_err(err)? - xi0).abs());
        let grid =
            RenyiGrid::from_weights(&w, &default_orders(), Backend::ExactDiag).map_err(err)?;
        rise = rise.max(grid.max_increase());
    }
    let ok = near_one < 1e-6 && large < 1e-3 && rise <= 0.0;
    Ok((
        ok,
        format!("|S(1±1e-4) - S_v| {near_one:.2e} (tol 1e-6), |S(1e3) - xi0| {large:.2e} (tol 1e-3), largest rise {rise:.1e}"),
    ))
}

/// Small sweep used by the determinism check.
pub fn determinism_config() -> SweepConfig {
    let mut c = SweepConfig::new(
        Backend::ExactDiag,
        SweepAxis::Anisotropy,
        0.3,
        Range {
            start: 0.0,
            stop: 2.0,
            step: 0.25,
        },
    );
    c.name = "determinism".into();
    c.sizes = vec![8, 12];
    c.block_lens = vec![2, 4];
    c.spectrum_levels = 8;
    c.majorization_levels = 16;
    c
}

/// Emits every sweep table of `config` into `dir` and returns `(name, bytes)`
/// pairs together with the number of fresh evaluations.
pub fn emit_sweep(
    config: &SweepConfig,
    opts: &RunOptions,
    dir: &Path,
) -> Result<(Vec<(String, Vec<u8>)>, usize)> {
    let run = run_sweep(config, opts)?;
    let mut files = Vec::new();
    for table in sweep_tables(&run) {
        for format in [Format::Csv, Format::Json] {
            let path = table.write(dir, format)?;
            let bytes = std::fs::read(&path).map_err(|e| crate::error::CliError::io(&path, e))?;
            files.push((
                path.file_name().unwrap().to_string_lossy().into_owned(),
                bytes,
            ));
        }
    }
    Ok((files, run.evaluated))
}

fn determinism() -> Check {
    let config = determinism_config();
    let scratch = tempfile::tempdir().map_err(err)?;
    let mut outputs = Vec::new();
    for workers in [1usize, 2, 8] {
        let opts = RunOptions {
            workers: Some(workers),
            cache: Some(false),
            ..Default::default()
        };
        let dir = scratch.path().join(format!("w{workers}"));
        outputs.push(emit_sweep(&config, &opts, &dir).map_err(err)?.0);
    }
    let identical = outputs.windows(2).all(|w| w[0] == w[1]);

    let cache_root = scratch.path().join("cache");
    let opts = RunOptions {
        workers: Some(2),
        cache: Some(true),
        cache_root: Some(cache_root),
        seed: None,
    };
    let (first, fresh) = emit_sweep(&config, &opts, &scratch.path().join("c1")).map_err(err)?;
    let (second, replayed) = emit_sweep(&config, &opts, &scratch.path().join("c2")).map_err(err)?;
    let replay_ok = replayed == 0 && first == second && first == outputs[0];
    Ok((
        identical && replay_ok,
        format!(
            "{} files identical across 1/2/8 workers: {identical}; replay evaluated {replayed} of {fresh}, bytes identical: {}",
            outputs[0].len(),
            first == second
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_spectra_are_reproducible_and_normalized() {
        let a = random_spectra(5, 3);
        assert_eq!(a, random_spectra(5, 3));
        for w in &a {
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fast_criteria_pass() {
        for id in [3, 4, 5] {
            let r = run_criterion(id);
            assert!(r.passed, "{r}");
        }
    }
}
