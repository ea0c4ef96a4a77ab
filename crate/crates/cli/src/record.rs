//! Per-point result records and the on-disk cache that stores them.

use std::io::Write;
use std::path::{Path, PathBuf};

use altxxz::analysis::{
    dead_zone_sign, purity_w, renyi_entropy, schmidt_gap, RenyiOrder, DLC_DEAD_ZONE,
    MAJORIZATION_DEAD_ZONE,
};
use altxxz::free_fermion::{correlation_matrix, renyi_from_occupations, ChainLength};
use altxxz::{Backend, Evaluator, ModelPoint, SweepAxis};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

/// Bumped whenever the record layout or its numerical content changes.
pub const RECORD_VERSION: u32 = 1;

/// Environment variable overriding the cache root.
pub const CACHE_ENV: &str = "ALTXXZ_CACHE_DIR";

pub fn backend_version() -> String {
    format!(
        "altxxz-{}+record{}",
        env!("CARGO_PKG_VERSION"),
        RECORD_VERSION
    )
}

/// Everything that determines a record. Its canonical JSON form is hashed
/// into the cache key.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointParams {
    pub backend: String,
    pub axis: String,
    pub n_sites: usize,
    pub delta: f64,
    pub anisotropy: f64,
    pub epsilon: f64,
    pub block_lens: Vec<usize>,
    /// Order positions; `1` is von Neumann, `inf` serialized as `null`.
    pub orders: Vec<Option<f64>>,
    pub seed: u64,
    pub top_levels: usize,
    pub kept_levels: usize,
}

impl PointParams {
    pub fn cache_key(&self) -> String {
        let canonical =
            serde_json::to_string(&(self, backend_version())).expect("params serialize");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }

    /// Sort key: `(N, δ, Δ)`.
    pub fn tuple(&self) -> (usize, f64, f64) {
        (self.n_sites, self.delta, self.anisotropy)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub weight: f64,
    pub twice_sz: i64,
    pub parity: i8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockRecord {
    pub block_len: usize,
    /// Leading levels at `g`, non-increasing.
    pub levels: Vec<LevelRecord>,
    pub complete: bool,
    pub renyi: Vec<f64>,
    pub renyi_ahead: Vec<f64>,
    pub dlc: Vec<i8>,
    /// Leading entries of `M(k)` between `g` and `g + ε`.
    pub majorization: Vec<f64>,
    pub majorization_signs: Vec<i8>,
    pub verdict: String,
    pub dlc_positive: usize,
    pub dlc_negative: usize,
    pub majorization_positive: usize,
    pub majorization_negative: usize,
    pub s2: f64,
    pub w: f64,
    pub xi0: f64,
    pub schmidt_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub params: PointParams,
    pub version: String,
    /// Seconds since the Unix epoch; never emitted into tables.
    pub timestamp: u64,
    /// `e₀` at `g - ε`, `g`, `g + ε`.
    pub energies: [f64; 3],
    pub curvature: f64,
    pub gap: Option<f64>,
    pub residual: Option<f64>,
    pub iterations: Option<usize>,
    pub blocks: Vec<BlockRecord>,
}

fn nan_if_err<E>(r: std::result::Result<f64, E>) -> f64 {
    r.unwrap_or(f64::NAN)
}

pub fn order_positions(orders: &[RenyiOrder<f64>]) -> Vec<Option<f64>> {
    orders
        .iter()
        .map(|o| Some(o.position()).filter(|p| p.is_finite()))
        .collect()
}

/// `(S₂, W)` of a block. Truncated free-fermion spectra go through the mode
/// occupations instead of the partial level list.
fn purity(
    point: &ModelPoint<f64>,
    block_len: usize,
    spectrum: &altxxz::EntanglementSpectrumF64,
) -> (f64, f64) {
    let two = RenyiOrder::Finite(2.0);
    if spectrum.is_complete() {
        let w = spectrum.weights();
        return (nan_if_err(renyi_entropy(&w, two)), nan_if_err(purity_w(&w)));
    }
    let length = match point.backend {
        Backend::FreeFermionThermo => ChainLength::Thermodynamic,
        _ => ChainLength::Finite(point.n_sites / 2),
    };
    let s2 = correlation_matrix(length, point.delta, block_len)
        .and_then(|b| renyi_from_occupations(&b.occupations, two))
        .unwrap_or(f64::NAN);
    (s2, 4.0 * (-s2).exp())
}

/// Evaluates the stencil around one grid point.
pub fn evaluate(
    evaluator: &Evaluator<f64>,
    point: &ModelPoint<f64>,
    axis: SweepAxis,
    params: &PointParams,
) -> Result<ResultRecord> {
    let (stencil, _) =
        evaluator.evaluate_stencil(point, axis, params.epsilon, &params.block_lens, None)?;
    let mut blocks = Vec::with_capacity(params.block_lens.len());
    for (i, (at, ahead)) in stencil
        .at
        .blocks
        .iter()
        .zip(&stencil.ahead.blocks)
        .enumerate()
    {
        let dlc = stencil.dlc(i, DLC_DEAD_ZONE)?;
        let maj = stencil.majorization(i, MAJORIZATION_DEAD_ZONE);
        let report = stencil.verdict(i, DLC_DEAD_ZONE, MAJORIZATION_DEAD_ZONE)?;
        let weights = at.spectrum.weights();
        let keep = params.kept_levels.min(weights.len());
        let levels = at.spectrum.levels()[..keep]
            .iter()
            .map(|l| LevelRecord {
                weight: l.weight,
                twice_sz: l.sz_block.twice(),
                parity: l.parity.sign(),
            })
            .collect();
        let kmaj = params.kept_levels.min(maj.differences.len());
        let (s2, w) = purity(point, at.block_len, &at.spectrum);
        blocks.push(BlockRecord {
            block_len: at.block_len,
            levels,
            complete: at.spectrum.is_complete(),
            renyi: at.renyi.values.clone(),
            renyi_ahead: ahead.renyi.values.clone(),
            dlc,
            majorization: maj.differences[..kmaj].to_vec(),
            majorization_signs: maj.signs[..kmaj].to_vec(),
            verdict: report.verdict.code().to_string(),
            dlc_positive: report.evidence.dlc_positive,
            dlc_negative: report.evidence.dlc_negative,
            majorization_positive: report.evidence.majorization_positive,
            majorization_negative: report.evidence.majorization_negative,
            s2,
            w,
            xi0: weights.first().map_or(f64::NAN, |w| -w.ln()),
            schmidt_gap: nan_if_err(schmidt_gap(&weights)),
        });
    }
    let timestamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    Ok(ResultRecord {
        params: params.clone(),
        version: backend_version(),
        timestamp,
        energies: [
            stencil.behind.energy_per_site,
            stencil.at.energy_per_site,
            stencil.ahead.energy_per_site,
        ],
        curvature: stencil.curvature(),
        gap: stencil.at.gap,
        residual: stencil.at.residual,
        iterations: stencil.at.iterations,
        blocks,
    })
}

/// Content-addressed store of records, one JSON file per key.
#[derive(Debug, Clone)]
pub struct Cache {
    root: PathBuf,
}

impl Cache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    /// `$ALTXXZ_CACHE_DIR` if set, otherwise `fallback`.
    pub fn from_env_or(fallback: impl Into<PathBuf>) -> Self {
        match std::env::var_os(CACHE_ENV) {
            Some(dir) if !dir.is_empty() => Self::new(dir),
            _ => Self::new(fallback),
        }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn path(&self, key: &str) -> PathBuf {
        self.root.join(&key[..2]).join(format!("{key}.json"))
    }

    /// A stored record whose parameters match; unreadable entries count as
    /// misses.
    pub fn get(&self, params: &PointParams) -> Option<ResultRecord> {
        let text = std::fs::read_to_string(self.path(&params.cache_key())).ok()?;
        let record: ResultRecord = serde_json::from_str(&text).ok()?;
        (record.params == *params && record.version == backend_version()).then_some(record)
    }

    /// Writes through a temporary file in the target directory, then renames.
    pub fn put(&self, record: &ResultRecord) -> Result<()> {
        let path = self.path(&record.params.cache_key());
        let dir = path.parent().expect("cache path has a parent");
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
        let text = serde_json::to_string(record).expect("record serializes");
        tmp.write_all(text.as_bytes())
            .map_err(|e| CliError::io(tmp.path(), e))?;
        tmp.persist(&path)
            .map_err(|e| CliError::io(&path, e.error))?;
        Ok(())
    }
}

/// Sign with the DLC dead zone, for re-deriving columns from stored values.
pub fn dlc_sign(before: f64, after: f64) -> i8 {
    dead_zone_sign(after - before, DLC_DEAD_ZONE)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orders() -> Vec<RenyiOrder<f64>> {
        altxxz::analysis::log_spaced_orders(5, 0.1, 10.0)
    }

    fn params() -> PointParams {
        PointParams {
            backend: "exact-diag".into(),
            axis: "anisotropy".into(),
            n_sites: 8,
            delta: 0.3,
            anisotropy: 1.0,
            epsilon: 5e-3,
            block_lens: vec![4],
            orders: order_positions(&orders()),
            seed: 0,
            top_levels: 4096,
            kept_levels: 16,
        }
    }

    #[test]
    fn key_depends_on_every_field() {
        let a = params();
        let mut b = params();
        b.anisotropy = 1.0 + f64::EPSILON;
        assert_ne!(a.cache_key(), b.cache_key());
        assert_eq!(a.cache_key(), params().cache_key());
        assert_eq!(a.cache_key().len(), 64);
    }

    #[test]
    fn put_then_get_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let ev = Evaluator::new(orders());
        let p = params();
        let point = ModelPoint {
            backend: Backend::ExactDiag,
            n_sites: 8,
            delta: 0.3,
            anisotropy: 1.0,
        };
        let rec = evaluate(&ev, &point, SweepAxis::Anisotropy, &p).unwrap();
        assert!(cache.get(&p).is_none());
        cache.put(&rec).unwrap();
        assert_eq!(cache.get(&p).unwrap(), rec);
    }
}
