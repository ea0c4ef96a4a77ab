use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("magnetization 2Sz = {twice_sz} out of range for {sites} sites")]
    SectorOutOfRange { sites: usize, twice_sz: i64 },

    #[error("sector dimension {dim} needs ~{needed} bytes, budget is {budget}")]
    MemoryBudget {
        dim: usize,
        needed: usize,
        budget: usize,
    },

    #[error("Lanczos did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("block inversion does not commute with the reduced density matrix (deviation {0:e})")]
    BrokenInversion(f64),

    #[error("spectrum not normalized: total weight {0}")]
    Unnormalized(f64),

    #[error("Renyi order must be positive, got {0}")]
    InvalidOrder(f64),

    #[error("topological invariant undefined at delta = 0 (gapless)")]
    Gapless,

    #[error("no edge modes: closest occupation is {distance} from 1/2")]
    NoEdgeModes { distance: f64 },

    #[error("need at least {needed} values, got {got}")]
    TooFew { needed: usize, got: usize },

    #[error("mismatched grids: {0}")]
    Mismatch(String),

    #[error("non-uniform spacing in finite-difference stencil")]
    NonUniformSpacing,

    #[error("extremum on the boundary of the sweep (index {0})")]
    BoundaryExtremum(usize),

    #[error("no sign change of the discrete derivative")]
    NoSignChange,

    #[error("fit failed: {0}")]
    FitFailed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
