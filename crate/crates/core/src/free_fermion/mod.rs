//! Exact backend at `Δ = 0`: the chain maps to free fermions in a two-band
//! Bloch problem, and block quantities follow from the correlation matrix.

pub mod bloch;
pub mod cfm;
pub mod elliptic;

pub use bloch::{
    berry_phase, dispersion, ground_energy_per_site, ground_energy_thermo, momentum_offsets,
    winding_number, BlochData,
};
pub use cfm::{
    correlation_matrix, edge_mode_report, renyi_from_occupations, spectrum_from_occupations,
    ChainLength, CorrelationMatrixBlock, EdgeModeReport, DEFAULT_TOP_LEVELS,
    FULL_SPECTRUM_MAX_BLOCK, THERMO_CELLS,
};
pub use elliptic::{elliptic_e, elliptic_k};

use crate::scalar::Real;

/// Ground-state energy per site for a finite or infinite chain.
pub fn energy_per_site<T: Real>(length: ChainLength, delta: T) -> T {
    match length {
        ChainLength::Finite(m) => ground_energy_per_site(m, delta),
        ChainLength::Thermodynamic => ground_energy_thermo(delta),
    }
}
