//! Grid expansion, parallel evaluation and cache replay.

use std::path::PathBuf;

use altxxz::free_fermion::DEFAULT_TOP_LEVELS;
use altxxz::Evaluator;
use rayon::prelude::*;

use crate::config::SweepConfig;
use crate::error::{CliError, Result};
use crate::record::{evaluate, order_positions, Cache, PointParams, ResultRecord};

/// Run-time overrides of the config.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub workers: Option<usize>,
    pub cache: Option<bool>,
    /// Cache root; otherwise `$ALTXXZ_CACHE_DIR`, otherwise
    /// `<output_dir>/.cache`.
    pub cache_root: Option<PathBuf>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct GridPoint {
    pub fixed: f64,
    pub swept: f64,
    pub params: PointParams,
}

#[derive(Debug)]
pub struct SweepRun {
    pub config: SweepConfig,
    /// Grid points in output order.
    pub points: Vec<GridPoint>,
    /// One entry per point; failures keep their message.
    pub records: Vec<std::result::Result<ResultRecord, String>>,
    pub evaluated: usize,
    pub cache_hits: usize,
}

/// All grid points, sorted by `(N, δ, Δ)`.
pub fn expand(config: &SweepConfig, seed: u64) -> Vec<GridPoint> {
    let orders = order_positions(&config.orders.orders());
    let kept = config.spectrum_levels.max(config.majorization_levels);
    let mut points = Vec::new();
    for n in config.effective_sizes() {
        let blocks = config.blocks_for(n);
        for &fixed in &config.fixed {
            for g in config.range.values() {
                let p = config.point(n, fixed, g);
                points.push(GridPoint {
                    fixed,
                    swept: g,
                    params: PointParams {
                        backend: config.backend.name().into(),
                        axis: config.axis.name().into(),
                        n_sites: n,
                        delta: p.delta,
                        anisotropy: p.anisotropy,
                        epsilon: config.epsilon,
                        block_lens: blocks.clone(),
                        orders: orders.clone(),
                        seed,
                        top_levels: DEFAULT_TOP_LEVELS,
                        kept_levels: kept,
                    },
                });
            }
        }
    }
    points.sort_by(|a, b| {
        let (x, y) = (a.params.tuple(), b.params.tuple());
        x.0.cmp(&y.0)
            .then(x.1.total_cmp(&y.1))
            .then(x.2.total_cmp(&y.2))
    });
    points.dedup_by(|a, b| a.params == b.params);
    points
}

pub fn run_sweep(config: &SweepConfig, opts: &RunOptions) -> Result<SweepRun> {
    config.validate()?;
    let seed = opts.seed.unwrap_or(config.seed);
    let workers = opts.workers.unwrap_or(config.workers);
    let use_cache = opts.cache.unwrap_or(config.cache);
    let cache = match &opts.cache_root {
        Some(root) => Cache::new(root),
        None => Cache::from_env_or(config.output_dir.join(".cache")),
    };
    let evaluator = Evaluator::new(config.orders.orders()).with_seed(seed);
    let points = expand(config, seed);

    let cached: Vec<Option<ResultRecord>> = points
        .iter()
        .map(|p| {
            if use_cache {
                cache.get(&p.params)
            } else {
                None
            }
        })
        .collect();
    let todo: Vec<usize> = (0..points.len()).filter(|&i| cached[i].is_none()).collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Pool(e.to_string()))?;
    let fresh: Vec<std::result::Result<ResultRecord, String>> = pool.install(|| {
        todo.par_iter()
            .map(|&i| {
                let gp = &points[i];
                let point = config.point(gp.params.n_sites, gp.fixed, gp.swept);
                let rec = evaluate(&evaluator, &point, config.axis, &gp.params)
                    .map_err(|e| e.to_string())?;
                if use_cache {
                    cache.put(&rec).map_err(|e| e.to_string())?;
                }
                Ok(rec)
            })
            .collect()
    });

    let evaluated = todo.len();
    let cache_hits = points.len() - evaluated;
    let mut fresh = fresh.into_iter();
    let records = cached
        .into_iter()
        .map(|c| match c {
            Some(rec) => Ok(rec),
            None => fresh.next().expect("one result per pending point"),
        })
        .collect();
    Ok(SweepRun {
        config: config.clone(),
        points,
        records,
        evaluated,
        cache_hits,
    })
}
