//! Sweep configuration, stored as TOML.
//!
//! ```toml
//! schema_version = 1
//! name = "example"
//! backend = "exact-diag"          # or "free-fermion", "free-fermion-thermo"
//! axis = "anisotropy"             # or "delta"
//! fixed = [0.3]                   # values of the parameter that is not swept
//! range = { start = 0.0, stop = 6.0, step = 0.25 }
//! sizes = [16]                    # N list, ignored by free-fermion-thermo
//! block_lens = [4, 8]
//! half_block = false              # also evaluate L_A = N/2
//! orders = { count = 200, lo = 0.01, hi = 1000.0 }
//! epsilon = 0.005
//! output_dir = "out"
//! workers = 0                     # 0: one per core
//! cache = true
//! seed = 0
//! spectrum_levels = 32
//! majorization_levels = 256
//! [scaling]                       # optional
//! window = [1.5, 5.0]
//! ```

use std::path::{Path, PathBuf};
use std::str::FromStr;

use altxxz::analysis::{log_spaced_orders, RenyiOrder};
use altxxz::ed::EdOptions;
use altxxz::{Backend, ModelPoint, SweepAxis};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn single(value: f64) -> Self {
        Self {
            start: value,
            stop: value,
            step: 1.0,
        }
    }

    /// `start + i·step` for `i = 0..=round((stop - start)/step)`.
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step).round() as usize;
        (0..=n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

/// Log-spaced finite orders plus `α = 1` and `α = ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderGrid {
    pub count: usize,
    pub lo: f64,
    pub hi: f64,
}

impl Default for OrderGrid {
    fn default() -> Self {
        Self {
            count: 200,
            lo: 1e-2,
            hi: 1e3,
        }
    }
}

impl OrderGrid {
    pub fn orders(&self) -> Vec<RenyiOrder<f64>> {
        log_spaced_orders(self.count, self.lo, self.hi)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingSpec {
    /// Sub-range of the sweep searched for extrema.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub name: String,
    #[serde(serialize_with = "ser_backend", deserialize_with = "de_backend")]
    pub backend: Backend,
    #[serde(serialize_with = "ser_axis", deserialize_with = "de_axis")]
    pub axis: SweepAxis,
    pub fixed: Vec<f64>,
    pub range: Range,
    #[serde(default)]
    pub sizes: Vec<usize>,
    #[serde(default)]
    pub block_lens: Vec<usize>,
    #[serde(default)]
    pub half_block: bool,
    #[serde(default)]
    pub orders: OrderGrid,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub workers: usize,
    #[serde(default = "yes")]
    pub cache: bool,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_spectrum_levels")]
    pub spectrum_levels: usize,
    #[serde(default = "default_majorization_levels")]
    pub majorization_levels: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaling: Option<ScalingSpec>,
}

fn default_epsilon() -> f64 {
    altxxz::chain::DEFAULT_EPSILON
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

fn yes() -> bool {
    true
}

fn default_spectrum_levels() -> usize {
    32
}

fn default_majorization_levels() -> usize {
    256
}

fn ser_backend<S: Serializer>(b: &Backend, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(b.name())
}

fn de_backend<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Backend, D::Error> {
    let s = String::deserialize(d)?;
    Backend::from_str(&s).map_err(serde::de::Error::custom)
}

fn ser_axis<S: Serializer>(a: &SweepAxis, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(a.name())
}

fn de_axis<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<SweepAxis, D::Error> {
    let s = String::deserialize(d)?;
    SweepAxis::from_str(&s).map_err(serde::de::Error::custom)
}

impl SweepConfig {
    /// A one-size, one-block skeleton to be adjusted by the caller.
    pub fn new(backend: Backend, axis: SweepAxis, fixed: f64, range: Range) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            name: String::new(),
            backend,
            axis,
            fixed: vec![fixed],
            range,
            sizes: Vec::new(),
            block_lens: Vec::new(),
            half_block: false,
            orders: OrderGrid::default(),
            epsilon: default_epsilon(),
            output_dir: default_output(),
            workers: 0,
            cache: true,
            seed: 0,
            spectrum_levels: default_spectrum_levels(),
            majorization_levels: default_majorization_levels(),
            scaling: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        // check the version before the field layout so old files fail clearly
        let raw: toml::Value = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        let found = raw
            .get("schema_version")
            .and_then(|v| v.as_integer())
            .ok_or_else(|| CliError::Config("missing schema_version".into()))?;
        if found != SCHEMA_VERSION as i64 {
            return Err(CliError::Schema {
                found: found.max(0) as u32,
                expected: SCHEMA_VERSION,
            });
        }
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Sizes actually evaluated; the thermodynamic backend uses the single
    /// placeholder `0`.
    pub fn effective_sizes(&self) -> Vec<usize> {
        if self.backend == Backend::FreeFermionThermo {
            return vec![0];
        }
        let mut s = self.sizes.clone();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Block lengths at size `n`, sorted, with `N/2` added by `half_block`.
    pub fn blocks_for(&self, n: usize) -> Vec<usize> {
        let mut b = self.block_lens.clone();
        if self.half_block && n > 0 {
            b.push(n / 2);
        }
        b.sort_unstable();
        b.dedup();
        b
    }

    pub fn point(&self, n: usize, fixed: f64, g: f64) -> ModelPoint<f64> {
        match self.axis {
            SweepAxis::Anisotropy => ModelPoint {
                backend: self.backend,
                n_sites: n,
                delta: fixed,
                anisotropy: g,
            },
            SweepAxis::Dimerization => ModelPoint {
                backend: self.backend,
                n_sites: n,
                delta: g,
                anisotropy: fixed,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Schema {
                found: self.schema_version,
                expected: SCHEMA_VERSION,
            });
        }
        let r = self.range;
        if !(r.step > 0.0) || !r.start.is_finite() || !r.stop.is_finite() || r.stop < r.start {
            return bad(format!(
                "range must satisfy start <= stop and step > 0, got {r:?}"
            ));
        }
        if self.fixed.is_empty() || self.fixed.iter().any(|f| !f.is_finite()) {
            return bad("fixed must list at least one finite value".into());
        }
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if self.orders.count == 0 || !(self.orders.lo > 0.0) || self.orders.hi < self.orders.lo {
            return bad(format!("bad order grid {:?}", self.orders));
        }
        if self.backend != Backend::FreeFermionThermo && self.sizes.is_empty() {
            return bad("sizes must not be empty".into());
        }
        if let Some(w) = self.scaling.as_ref().and_then(|s| s.window) {
            if !(w[0] < w[1]) {
                return bad(format!("scaling window must be increasing, got {w:?}"));
            }
        }
        // capability checks at the corners of the grid, stencil included
        let ed = EdOptions::default();
        for n in self.effective_sizes() {
            let blocks = self.blocks_for(n);
            if blocks.is_empty() {
                return bad(format!("no block lengths for N = {n}"));
            }
            for &fixed in &self.fixed {
                for g in [
                    r.start - self.epsilon,
                    r.start,
                    r.stop,
                    r.stop + self.epsilon,
                ] {
                    self.point(n, fixed, g).validate(&blocks, &ed)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SweepConfig {
        let mut c = SweepConfig::new(
            Backend::ExactDiag,
            SweepAxis::Anisotropy,
            0.3,
            Range {
                start: 0.0,
                stop: 1.0,
                step: 0.25,
            },
        );
        c.sizes = vec![8];
        c.block_lens = vec![4];
        c
    }

    #[test]
    fn toml_round_trip() {
        let c = sample();
        let back = SweepConfig::from_toml(&c.to_toml()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn range_values_are_exact_multiples() {
        let r = Range {
            start: -1.0,
            stop: 1.0,
            step: 0.1,
        };
        let v = r.values();
        assert_eq!(v.len(), 21);
        assert_eq!(v[20], -1.0 + 20.0 * 0.1);
    }

    #[test]
    fn free_fermions_reject_interactions() {
        let mut c = sample();
        c.backend = Backend::FreeFermion;
        assert!(c.validate().is_err());
        c.axis = SweepAxis::Dimerization;
        c.fixed = vec![0.0];
        c.range = Range {
            start: -0.5,
            stop: 0.5,
            step: 0.1,
        };
        c.validate().unwrap();
    }

    #[test]
    fn rejects_oversized_exact_diag_and_wrong_schema() {
        let mut c = sample();
        c.sizes = vec![24];
        assert!(c.validate().is_err());
        let text = sample()
            .to_toml()
            .replace("schema_version = 1", "schema_version = 9");
        assert!(matches!(
            SweepConfig::from_toml(&text),
            Err(CliError::Schema { found: 9, .. })
        ));
        assert!(SweepConfig::from_toml("schema_version = 1\nbogus = 3").is_err());
    }
}
