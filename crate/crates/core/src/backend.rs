//! Uniform evaluation of a model point by either solver: ground-state energy
//! per site plus, for each block length, the labeled entanglement spectrum and
//! its Rényi entropies.

use std::fmt;
use std::str::FromStr;

use crate::analysis::{
    catalyst_verdict, dlc_column, majorization_column, MajorizationColumn, RenyiGrid, RenyiOrder,
    VerdictReport,
};
use crate::chain::ChainSpec;
use crate::ed::{
    ground_state_from, labeled_entanglement_spectrum, reduced_density_matrix, EdOptions,
};
use crate::error::{Error, Result};
use crate::free_fermion::{
    correlation_matrix, energy_per_site, renyi_from_occupations, spectrum_from_occupations,
    ChainLength, DEFAULT_TOP_LEVELS,
};
use crate::scalar::Real;
use crate::scaling::energy_curvature;
use crate::spectrum::EntanglementSpectrum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Backend {
    ExactDiag,
    FreeFermion,
    /// Free fermions on the infinite chain.
    FreeFermionThermo,
}

impl Backend {
    pub const ALL: [Backend; 3] = [
        Backend::ExactDiag,
        Backend::FreeFermion,
        Backend::FreeFermionThermo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Backend::ExactDiag => "exact-diag",
            Backend::FreeFermion => "free-fermion",
            Backend::FreeFermionThermo => "free-fermion-thermo",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Backend::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::InvalidChain(format!("unknown backend {s:?}")))
    }
}

/// Swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SweepAxis {
    /// Ising anisotropy `Δ`.
    Anisotropy,
    /// Bond alternation `δ`.
    Dimerization,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Anisotropy => "anisotropy",
            SweepAxis::Dimerization => "delta",
        }
    }
}

impl FromStr for SweepAxis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "anisotropy" | "Delta" => Ok(SweepAxis::Anisotropy),
            "delta" | "dimerization" => Ok(SweepAxis::Dimerization),
            _ => Err(Error::InvalidChain(format!("unknown sweep axis {s:?}"))),
        }
    }
}

/// One point of parameter space. `n_sites` is ignored by the thermodynamic
/// backend.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelPoint<T> {
    pub backend: Backend,
    pub n_sites: usize,
    pub delta: T,
    pub anisotropy: T,
}

impl<T: Real> ModelPoint<T> {
    pub fn value(&self, axis: SweepAxis) -> T {
        match axis {
            SweepAxis::Anisotropy => self.anisotropy,
            SweepAxis::Dimerization => self.delta,
        }
    }

    pub fn with_value(mut self, axis: SweepAxis, value: T) -> Self {
        match axis {
            SweepAxis::Anisotropy => self.anisotropy = value,
            SweepAxis::Dimerization => self.delta = value,
        }
        self
    }

    fn length(&self) -> ChainLength {
        match self.backend {
            Backend::FreeFermionThermo => ChainLength::Thermodynamic,
            _ => ChainLength::Finite(self.n_sites / 2),
        }
    }

    /// Checks the backend capabilities and the block lengths.
    pub fn validate(&self, block_lens: &[usize], ed: &EdOptions) -> Result<()> {
        match self.backend {
            Backend::ExactDiag => {
                if self.n_sites > ed.max_sites {
                    return Err(Error::InvalidChain(format!(
                        "N = {} exceeds the exact-diagonalization cap {}",
                        self.n_sites, ed.max_sites
                    )));
                }
                for &la in block_lens {
                    ChainSpec::new(self.n_sites, self.delta, self.anisotropy, la)?;
                }
            }
            Backend::FreeFermion | Backend::FreeFermionThermo => {
                if self.anisotropy != T::zero() {
                    return Err(Error::InvalidChain(format!(
                        "the {} backend requires anisotropy 0, got {}",
                        self.backend, self.anisotropy
                    )));
                }
                if !(self.delta >= -T::one() && self.delta <= T::one()) {
                    return Err(Error::InvalidChain(format!(
                        "delta must lie in [-1, 1], got {}",
                        self.delta
                    )));
                }
                let cells = self.length().cells();
                if self.backend == Backend::FreeFermion
                    && (self.n_sites < 2 || self.n_sites % 2 == 1)
                {
                    return Err(Error::InvalidChain(format!(
                        "N must be even, got {}",
                        self.n_sites
                    )));
                }
                for &la in block_lens {
                    if la < 2 || la % 2 == 1 || la > cells {
                        return Err(Error::InvalidChain(format!(
                            "L_A must be even with 2 <= L_A <= {cells}, got {la}"
                        )));
                    }
                }
            }
        }
        if block_lens.is_empty() {
            return Err(Error::InvalidChain("no block lengths".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct BlockResult<T> {
    pub block_len: usize,
    pub spectrum: EntanglementSpectrum<T>,
    pub renyi: RenyiGrid<T>,
}

#[derive(Debug, Clone)]
pub struct PointResult<T> {
    pub point: ModelPoint<T>,
    pub energy_per_site: T,
    pub blocks: Vec<BlockResult<T>>,
    /// Lanczos ground-state data (exact diagonalization only).
    pub gap: Option<T>,
    pub residual: Option<T>,
    pub iterations: Option<usize>,
}

impl<T: Real> PointResult<T> {
    pub fn block(&self, block_len: usize) -> Option<&BlockResult<T>> {
        self.blocks.iter().find(|b| b.block_len == block_len)
    }
}

/// `g - ε`, `g`, `g + ε` along a sweep axis.
#[derive(Debug, Clone)]
pub struct Stencil<T> {
    pub axis: SweepAxis,
    pub epsilon: T,
    pub behind: PointResult<T>,
    pub at: PointResult<T>,
    pub ahead: PointResult<T>,
}

impl<T: Real> Stencil<T> {
    /// `χ = -∂²e₀/∂g²` by central difference.
    pub fn curvature(&self) -> T {
        energy_curvature(
            self.behind.energy_per_site,
            self.at.energy_per_site,
            self.ahead.energy_per_site,
            self.epsilon,
        )
    }

    fn pair(&self, i: usize) -> (&BlockResult<T>, &BlockResult<T>) {
        (&self.at.blocks[i], &self.ahead.blocks[i])
    }

    /// Forward-difference DLC signs for the `i`-th block length.
    pub fn dlc(&self, i: usize, dead_zone: T) -> Result<Vec<i8>> {
        let (a, b) = self.pair(i);
        dlc_column(&a.renyi, &b.renyi, dead_zone)
    }

    pub fn majorization(&self, i: usize, dead_zone: T) -> MajorizationColumn<T> {
        let (a, b) = self.pair(i);
        majorization_column(&a.spectrum.weights(), &b.spectrum.weights(), dead_zone)
    }

    pub fn verdict(
        &self,
        i: usize,
        dlc_dead_zone: T,
        majorization_dead_zone: T,
    ) -> Result<VerdictReport> {
        let dlc = self.dlc(i, dlc_dead_zone)?;
        Ok(catalyst_verdict(
            &dlc,
            &self.majorization(i, majorization_dead_zone).signs,
        ))
    }
}

#[derive(Debug, Clone)]
pub struct Evaluator<T> {
    pub orders: Vec<RenyiOrder<T>>,
    pub ed: EdOptions,
    /// Levels kept for free-fermion blocks too large to enumerate.
    pub top_levels: usize,
}

impl<T: Real> Evaluator<T> {
    pub fn new(orders: Vec<RenyiOrder<T>>) -> Self {
        Self {
            orders,
            ed: EdOptions::default(),
            top_levels: DEFAULT_TOP_LEVELS,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.ed.lanczos.seed = seed;
        self
    }

    /// Evaluates one point. For exact diagonalization `warm` seeds Lanczos and
    /// the ground-state vector is returned for the next call.
    pub fn evaluate(
        &self,
        point: &ModelPoint<T>,
        block_lens: &[usize],
        warm: Option<&[T]>,
    ) -> Result<(PointResult<T>, Option<Vec<T>>)> {
        point.validate(block_lens, &self.ed)?;
        match point.backend {
            Backend::ExactDiag => self.evaluate_ed(point, block_lens, warm),
            Backend::FreeFermion | Backend::FreeFermionThermo => {
                Ok((self.evaluate_ff(point, block_lens)?, None))
            }
        }
    }

    fn evaluate_ed(
        &self,
        point: &ModelPoint<T>,
        block_lens: &[usize],
        warm: Option<&[T]>,
    ) -> Result<(PointResult<T>, Option<Vec<T>>)> {
        let spec = ChainSpec::new(point.n_sites, point.delta, point.anisotropy, block_lens[0])?;
        let gs = ground_state_from(&spec, &self.ed, warm)?;
        let mut blocks = Vec::with_capacity(block_lens.len());
        for &la in block_lens {
            let rdm = reduced_density_matrix(&gs, la)?;
            let spectrum = labeled_entanglement_spectrum(&rdm, self.ed.inversion_tol)?;
            let renyi =
                RenyiGrid::from_weights(&spectrum.weights(), &self.orders, Backend::ExactDiag)?;
            blocks.push(BlockResult {
                block_len: la,
                spectrum,
                renyi,
            });
        }
        let result = PointResult {
            point: *point,
            energy_per_site: gs.energy_per_site(),
            blocks,
            gap: gs.gap,
            residual: Some(gs.residual),
            iterations: Some(gs.iterations),
        };
        Ok((result, Some(gs.vector)))
    }

    fn evaluate_ff(&self, point: &ModelPoint<T>, block_lens: &[usize]) -> Result<PointResult<T>> {
        let length = point.length();
        let mut blocks = Vec::with_capacity(block_lens.len());
        for &la in block_lens {
            let cfm = correlation_matrix(length, point.delta, la)?;
            let limit = if la <= crate::free_fermion::FULL_SPECTRUM_MAX_BLOCK {
                None
            } else {
                Some(self.top_levels)
            };
            let spectrum = spectrum_from_occupations(&cfm, limit);
            // complete spectra share the exact-diagonalization floor convention
            let renyi = if spectrum.is_complete() {
                RenyiGrid::from_weights(&spectrum.weights(), &self.orders, point.backend)?
            } else {
                let values = self
                    .orders
                    .iter()
                    .map(|&o| renyi_from_occupations(&cfm.occupations, o))
                    .collect::<Result<Vec<_>>>()?;
                RenyiGrid {
                    orders: self.orders.clone(),
                    values,
                    backend: point.backend,
                }
            };
            blocks.push(BlockResult {
                block_len: la,
                spectrum,
                renyi,
            });
        }
        Ok(PointResult {
            point: *point,
            energy_per_site: energy_per_site(length, point.delta),
            blocks,
            gap: None,
            residual: None,
            iterations: None,
        })
    }

    /// Evaluates `g - ε`, `g`, `g + ε`; the outer points are warm-started from
    /// the centre.
    pub fn evaluate_stencil(
        &self,
        point: &ModelPoint<T>,
        axis: SweepAxis,
        epsilon: T,
        block_lens: &[usize],
        warm: Option<&[T]>,
    ) -> Result<(Stencil<T>, Option<Vec<T>>)> {
        let g = point.value(axis);
        let (at, vec) = self.evaluate(point, block_lens, warm)?;
        let seed = vec.as_deref();
        let (behind, _) = self.evaluate(&point.with_value(axis, g - epsilon), block_lens, seed)?;
        let (ahead, _) = self.evaluate(&point.with_value(axis, g + epsilon), block_lens, seed)?;
        Ok((
            Stencil {
                axis,
                epsilon,
                behind,
                at,
                ahead,
            },
            vec,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::default_orders;

    #[test]
    fn names_round_trip() {
        for b in Backend::ALL {
            assert_eq!(b.name().parse::<Backend>().unwrap(), b);
        }
        assert!("dmrg".parse::<Backend>().is_err());
    }

    #[test]
    fn free_fermion_rejects_interactions() {
        let ev = Evaluator::<f64>::new(default_orders());
        let p = ModelPoint {
            backend: Backend::FreeFermion,
            n_sites: 16,
            delta: 0.3,
            anisotropy: 1.0,
        };
        assert!(ev.evaluate(&p, &[4], None).is_err());
    }

    #[test]
    fn thermo_stencil_curvature_is_positive_near_criticality() {
        let ev = Evaluator::<f64>::new(default_orders());
        let p = ModelPoint {
            backend: Backend::FreeFermionThermo,
            n_sites: 0,
            delta: 0.2,
            anisotropy: 0.0,
        };
        let (s, _) = ev
            .evaluate_stencil(&p, SweepAxis::Dimerization, 5e-3, &[8], None)
            .unwrap();
        assert!(s.curvature() > 0.0);
        assert_eq!(s.at.blocks[0].spectrum.len(), 256);
    }
}
