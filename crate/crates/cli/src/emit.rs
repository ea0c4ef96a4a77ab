//! Tables derived from a [`SweepRun`]. Row order follows the run's grid order
//! (`N`, `δ`, `Δ`), then block length, then the inner index.
//!
//! Missing integers (no Lanczos data, failed points) are written as `-1`,
//! missing floats as `NaN`.

use std::collections::BTreeMap;

use altxxz::scaling::{
    extrapolate, pseudo_critical_max, pseudo_critical_s2, pseudo_critical_stationary,
    StationaryKind, SweepCurve,
};

use crate::record::ResultRecord;
use crate::sweep::SweepRun;
use crate::table::{Cell, Table};

fn key_cells(rec_n: usize, delta: f64, anisotropy: f64, block_len: usize) -> Vec<Cell> {
    vec![
        rec_n.into(),
        delta.into(),
        anisotropy.into(),
        block_len.into(),
    ]
}

fn ok_records(run: &SweepRun) -> impl Iterator<Item = &ResultRecord> {
    run.records.iter().filter_map(|r| r.as_ref().ok())
}

pub fn points_table(run: &SweepRun) -> Table {
    let mut t = Table::new(
        "points",
        &[
            "n_sites",
            "delta",
            "anisotropy",
            "block_len",
            "energy_per_site",
            "chi",
            "s2",
            "w",
            "xi0",
            "schmidt_gap",
            "gap",
            "residual",
            "iterations",
            "dlc_positive",
            "dlc_negative",
            "majorization_positive",
            "majorization_negative",
            "verdict",
            "error",
        ],
    );
    for (gp, rec) in run.points.iter().zip(&run.records) {
        let p = &gp.params;
        match rec {
            Ok(r) => {
                for b in &r.blocks {
                    let mut row = key_cells(p.n_sites, p.delta, p.anisotropy, b.block_len);
                    row.extend([
                        r.energies[1].into(),
                        r.curvature.into(),
                        b.s2.into(),
                        b.w.into(),
                        b.xi0.into(),
                        b.schmidt_gap.into(),
                        Cell::opt_float(r.gap),
                        Cell::opt_float(r.residual),
                        Cell::Int(r.iterations.map_or(-1, |i| i as i64)),
                        b.dlc_positive.into(),
                        b.dlc_negative.into(),
                        b.majorization_positive.into(),
                        b.majorization_negative.into(),
                        b.verdict.as_str().into(),
                        "".into(),
                    ]);
                    t.push(row);
                }
            }
            Err(msg) => {
                for &la in &p.block_lens {
                    let mut row = key_cells(p.n_sites, p.delta, p.anisotropy, la);
                    row.extend((0..8).map(|_| Cell::Float(f64::NAN)));
                    row.extend((0..5).map(|_| Cell::Int(-1)));
                    row.extend(["".into(), msg.as_str().into()]);
                    t.push(row);
                }
            }
        }
    }
    t
}

/// `S_α` at `g` and `g + ε` with the DLC sign, one row per order.
pub fn renyi_table(run: &SweepRun) -> Table {
    let mut t = Table::new(
        "renyi",
        &[
            "n_sites",
            "delta",
            "anisotropy",
            "block_len",
            "alpha",
            "s_alpha",
            "s_alpha_ahead",
            "dlc_sign",
        ],
    );
    for r in ok_records(run) {
        let p = &r.params;
        for b in &r.blocks {
            for (a, alpha) in p.orders.iter().enumerate() {
                let mut row = key_cells(p.n_sites, p.delta, p.anisotropy, b.block_len);
                row.extend([
                    alpha.unwrap_or(f64::INFINITY).into(),
                    b.renyi[a].into(),
                    b.renyi_ahead[a].into(),
                    b.dlc[a].into(),
                ]);
                t.push(row);
            }
        }
    }
    t
}

pub fn majorization_table(run: &SweepRun) -> Table {
    let mut t = Table::new(
        "majorization",
        &[
            "n_sites",
            "delta",
            "anisotropy",
            "block_len",
            "k",
            "m_k",
            "sign",
        ],
    );
    let limit = run.config.majorization_levels;
    for r in ok_records(run) {
        let p = &r.params;
        for b in &r.blocks {
            for (k, (&m, &s)) in b
                .majorization
                .iter()
                .zip(&b.majorization_signs)
                .take(limit)
                .enumerate()
            {
                let mut row = key_cells(p.n_sites, p.delta, p.anisotropy, b.block_len);
                row.extend([k.into(), m.into(), s.into()]);
                t.push(row);
            }
        }
    }
    t
}

pub fn spectrum_table(run: &SweepRun) -> Table {
    let mut t = Table::new(
        "spectrum",
        &[
            "n_sites",
            "delta",
            "anisotropy",
            "block_len",
            "level",
            "weight",
            "xi",
            "sz_block",
            "parity",
        ],
    );
    let limit = run.config.spectrum_levels;
    for r in ok_records(run) {
        let p = &r.params;
        for b in &r.blocks {
            for (j, l) in b.levels.iter().take(limit).enumerate() {
                let xi = if l.weight > 0.0 {
                    -l.weight.ln()
                } else {
                    f64::INFINITY
                };
                let mut row = key_cells(p.n_sites, p.delta, p.anisotropy, b.block_len);
                row.extend([
                    j.into(),
                    l.weight.into(),
                    xi.into(),
                    (l.twice_sz as f64 / 2.0).into(),
                    l.parity.into(),
                ]);
                t.push(row);
            }
        }
    }
    t
}

/// Observable used for a pseudo-critical point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Observable {
    /// Peak of `χ = -∂²e₀/∂g²`.
    Curvature,
    /// Maximum of `S₂`.
    S2,
    /// Stationary maximum of `ξ₀`.
    Xi0,
}

impl Observable {
    pub fn name(self) -> &'static str {
        match self {
            Observable::Curvature => "chi",
            Observable::S2 => "s2",
            Observable::Xi0 => "xi0",
        }
    }
}

/// Pseudo-critical point of one curve.
#[derive(Debug, Clone)]
pub struct PseudoPoint {
    pub observable: Observable,
    pub fixed: f64,
    pub n_sites: usize,
    /// `0` for the block-independent curvature.
    pub block_len: usize,
    pub value: Result<f64, String>,
}

/// Pseudo-critical points for every `(fixed, N, L_A)` curve of the run,
/// restricted to the configured window.
pub fn pseudo_points(run: &SweepRun) -> Vec<PseudoPoint> {
    let window = run.config.scaling.as_ref().and_then(|s| s.window);
    let inside = |g: f64| window.map_or(true, |w| g >= w[0] - 1e-12 && g <= w[1] + 1e-12);
    // (fixed bits, N, L_A, observable) -> (g, value) samples in grid order
    let mut curves: BTreeMap<(u64, usize, usize, Observable), (f64, Vec<(f64, f64)>)> =
        BTreeMap::new();
    let mut push = |fixed: f64, n: usize, la: usize, obs: Observable, g: f64, v: f64| {
        curves
            .entry((fixed.to_bits(), n, la, obs))
            .or_insert((fixed, Vec::new()))
            .1
            .push((g, v));
    };
    for (gp, rec) in run.points.iter().zip(&run.records) {
        let Ok(r) = rec else { continue };
        if !inside(gp.swept) {
            continue;
        }
        let n = gp.params.n_sites;
        push(gp.fixed, n, 0, Observable::Curvature, gp.swept, r.curvature);
        for b in &r.blocks {
            push(gp.fixed, n, b.block_len, Observable::S2, gp.swept, b.s2);
            push(gp.fixed, n, b.block_len, Observable::Xi0, gp.swept, b.xi0);
        }
    }
    let mut out = Vec::new();
    for ((_, n, la, obs), (fixed, mut samples)) in curves {
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (g, v): (Vec<f64>, Vec<f64>) = samples.into_iter().unzip();
        let value = SweepCurve::new(g, v)
            .and_then(|c| match obs {
                Observable::Curvature => pseudo_critical_max(&c),
                Observable::S2 => pseudo_critical_s2(&c),
                Observable::Xi0 => pseudo_critical_stationary(&c, StationaryKind::Max),
            })
            .map_err(|e| e.to_string());
        out.push(PseudoPoint {
            observable: obs,
            fixed,
            n_sites: n,
            block_len: la,
            value,
        });
    }
    out.sort_by(|a, b| {
        (a.observable, a.n_sites, a.block_len)
            .cmp(&(b.observable, b.n_sites, b.block_len))
            .then(a.fixed.total_cmp(&b.fixed))
    });
    out
}

pub fn pseudo_table(run: &SweepRun, points: &[PseudoPoint]) -> Table {
    let mut t = Table::new(
        "pseudo_critical",
        &[
            "observable",
            "axis",
            "fixed",
            "n_sites",
            "block_len",
            "g_star",
            "error",
        ],
    );
    for p in points {
        t.push(vec![
            p.observable.name().into(),
            run.config.axis.name().into(),
            p.fixed.into(),
            p.n_sites.into(),
            p.block_len.into(),
            Cell::Float(*p.value.as_ref().unwrap_or(&f64::NAN)),
            p.value.as_ref().err().cloned().unwrap_or_default().into(),
        ]);
    }
    t
}

/// Size series fed to one extrapolation.
#[derive(Debug, Clone)]
pub struct FitRow {
    pub observable: Observable,
    pub fixed: f64,
    /// `"all"` for the curvature, `"N/2"` or a fixed length otherwise.
    pub block_rule: String,
    pub sizes: Vec<usize>,
    pub fit: Result<altxxz::ScalingFitF64, String>,
}

pub fn fits(run: &SweepRun, points: &[PseudoPoint]) -> Vec<FitRow> {
    let cfg = &run.config;
    let mut rules: Vec<(Observable, String, Box<dyn Fn(usize) -> usize>)> =
        vec![(Observable::Curvature, "all".into(), Box::new(|_| 0))];
    for obs in [Observable::S2, Observable::Xi0] {
        if cfg.half_block {
            rules.push((obs, "N/2".into(), Box::new(|n| n / 2)));
        }
        for &la in &cfg.block_lens {
            rules.push((obs, la.to_string(), Box::new(move |_| la)));
        }
    }
    let mut out = Vec::new();
    for &fixed in &cfg.fixed {
        for (obs, rule, block_of) in &rules {
            let mut sizes = Vec::new();
            let mut values = Vec::new();
            for p in points {
                if p.observable == *obs && p.fixed == fixed && p.block_len == block_of(p.n_sites) {
                    if let Ok(v) = p.value {
                        sizes.push(p.n_sites);
                        values.push(v);
                    }
                }
            }
            if sizes.len() < 3 {
                continue;
            }
            let fit = extrapolate(&sizes, &values).map_err(|e| e.to_string());
            out.push(FitRow {
                observable: *obs,
                fixed,
                block_rule: rule.clone(),
                sizes,
                fit,
            });
        }
    }
    out
}

pub fn fits_table(run: &SweepRun, rows: &[FitRow]) -> Table {
    let mut t = Table::new(
        "fits",
        &[
            "observable",
            "axis",
            "fixed",
            "block_rule",
            "sizes",
            "critical_point",
            "exponent",
            "inverse_exponent",
            "amplitude",
            "residual_norm",
            "critical_point_stderr",
            "error",
        ],
    );
    for r in rows {
        let sizes = r
            .sizes
            .iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        let mut row: Vec<Cell> = vec![
            r.observable.name().into(),
            run.config.axis.name().into(),
            r.fixed.into(),
            r.block_rule.as_str().into(),
            sizes.into(),
        ];
        match &r.fit {
            Ok(f) => row.extend([
                f.critical_point.into(),
                f.exponent.into(),
                f.inverse_exponent.into(),
                f.amplitude.into(),
                f.residual_norm.into(),
                Cell::opt_float(f.critical_point_stderr),
                "".into(),
            ]),
            Err(e) => {
                row.extend((0..6).map(|_| Cell::Float(f64::NAN)));
                row.push(e.as_str().into());
            }
        }
        t.push(row);
    }
    t
}

/// Critical points per fixed value, from the curvature and the half-system
/// entropies.
pub fn phase_diagram_table(run: &SweepRun, rows: &[FitRow]) -> Table {
    let mut t = Table::new(
        "phase_diagram",
        &[
            "axis",
            "fixed",
            "observable",
            "critical_point",
            "exponent",
            "residual_norm",
            "error",
        ],
    );
    for r in rows
        .iter()
        .filter(|r| r.block_rule == "all" || r.block_rule == "N/2")
    {
        let (gc, th, res, err) = match &r.fit {
            Ok(f) => (f.critical_point, f.exponent, f.residual_norm, String::new()),
            Err(e) => (f64::NAN, f64::NAN, f64::NAN, e.clone()),
        };
        t.push(vec![
            run.config.axis.name().into(),
            r.fixed.into(),
            r.observable.name().into(),
            gc.into(),
            th.into(),
            res.into(),
            err.into(),
        ]);
    }
    t
}

/// The four per-point tables of a sweep.
pub fn sweep_tables(run: &SweepRun) -> Vec<Table> {
    vec![
        points_table(run),
        renyi_table(run),
        majorization_table(run),
        spectrum_table(run),
    ]
}
