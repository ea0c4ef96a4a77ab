//! Exact diagonalization in the `S^z_total = 0` sector: sparse Hamiltonian,
//! Lanczos ground state, block-A reduced density matrix and the
//! `(S_A^z, p_A)`-labeled entanglement spectrum.

pub mod hamiltonian;
pub mod lanczos;
pub mod rdm;

use crate::chain::{sector_basis, BasisIndex, ChainSpec, HalfInt};
use crate::error::{Error, Result};
use crate::scalar::Real;

pub use hamiltonian::{build_hamiltonian, LinearOperator, SparseSymmetric};
pub use lanczos::{lowest_eigenpair, LanczosOptions, LanczosResult};
pub use rdm::{
    labeled_entanglement_spectrum, reduced_density_matrix, RdmBlock, ReducedDensityMatrix,
};

/// Gap below which the ground state is flagged as quasi-degenerate.
pub const QUASI_DEGENERATE_GAP: f64 = 1e-8;

#[derive(Debug, Clone, Copy)]
pub struct EdOptions {
    pub max_sites: usize,
    pub memory_budget: usize,
    pub lanczos: LanczosOptions,
    /// Largest tolerated inversion-breaking matrix element of `ρ_A`.
    pub inversion_tol: f64,
}

impl Default for EdOptions {
    fn default() -> Self {
        Self {
            max_sites: 20,
            memory_budget: 3 << 30,
            lanczos: LanczosOptions::default(),
            inversion_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GroundState<T> {
    pub spec: ChainSpec<T>,
    pub basis: BasisIndex,
    pub energy: T,
    /// Normalized amplitudes over `basis`.
    pub vector: Vec<T>,
    /// Distance to the next Ritz value in the same sector, if resolved.
    pub gap: Option<T>,
    pub residual: T,
    pub iterations: usize,
    pub quasi_degenerate: bool,
}

impl<T: Real> GroundState<T> {
    pub fn energy_per_site(&self) -> T {
        self.energy / T::lit(self.spec.n_sites() as f64)
    }
}

pub fn ground_state<T: Real>(spec: &ChainSpec<T>, opts: &EdOptions) -> Result<GroundState<T>> {
    ground_state_from(spec, opts, None)
}

/// As [`ground_state`], warm-starting Lanczos from `start` (a vector on the
/// same sector basis, e.g. the ground state at a neighbouring parameter).
pub fn ground_state_from<T: Real>(
    spec: &ChainSpec<T>,
    opts: &EdOptions,
    start: Option<&[T]>,
) -> Result<GroundState<T>> {
    let n = spec.n_sites();
    if n > opts.max_sites {
        return Err(Error::InvalidChain(format!(
            "N = {n} exceeds the exact-diagonalization cap {}",
            opts.max_sites
        )));
    }
    let basis = sector_basis(n, HalfInt::ZERO)?;
    let needed = hamiltonian::estimated_bytes::<T>(n, basis.len(), opts.lanczos.krylov_dim);
    if needed > opts.memory_budget {
        return Err(Error::MemoryBudget {
            dim: basis.len(),
            needed,
            budget: opts.memory_budget,
        });
    }
    let h = build_hamiltonian(spec, &basis, opts.memory_budget)?;
    let start = start.filter(|s| s.len() == basis.len());
    let r = lowest_eigenpair(&h, &opts.lanczos, start)?;
    let gap = r.next_value.map(|e1| e1 - r.value);
    let quasi_degenerate = gap.map_or(false, |g| g < T::lit(QUASI_DEGENERATE_GAP));
    Ok(GroundState {
        spec: *spec,
        basis,
        energy: r.value,
        vector: r.vector,
        gap,
        residual: r.residual,
        iterations: r.iterations,
        quasi_degenerate,
    })
}
