//! Entanglement convertibility of the bond-alternating spin-1/2 XXZ ring.
//!
//! Ground states come from Lanczos exact diagonalization ([`ed`]) or, at
//! `Δ = 0`, from the exact free-fermion correlation matrix
//! ([`free_fermion`]). Both produce [`EntanglementSpectrum`]s labeled by
//! `(S_A^z, p_A)`, which [`analysis`] turns into Rényi entropies, differential
//! local convertibility signs, majorization maps and catalyst verdicts.
//! [`scaling`] extracts pseudo-critical points from sweeps.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the `*F64`
//! aliases below fix the usual double-precision instantiation.

pub mod analysis;
pub mod backend;
pub mod chain;
pub mod ed;
pub mod error;
pub mod free_fermion;
pub mod linalg;
pub mod scalar;
pub mod scaling;
pub mod spectrum;

pub use backend::{Backend, BlockResult, Evaluator, ModelPoint, PointResult, Stencil, SweepAxis};
pub use chain::{ChainSpec, HalfInt, Parity, SymmetrySector};
pub use error::{Error, Result};
pub use scalar::Real;
pub use spectrum::{EntanglementSpectrum, Level};

pub type ChainSpecF64 = chain::ChainSpec<f64>;
pub type GroundStateF64 = ed::GroundState<f64>;
pub type EntanglementSpectrumF64 = spectrum::EntanglementSpectrum<f64>;
pub type RenyiOrderF64 = analysis::RenyiOrder<f64>;
pub type RenyiGridF64 = analysis::RenyiGrid<f64>;
pub type CorrelationMatrixBlockF64 = free_fermion::CorrelationMatrixBlock<f64>;
pub type EdgeModeReportF64 = free_fermion::EdgeModeReport<f64>;
pub type SweepCurveF64 = scaling::SweepCurve<f64>;
pub type ScalingFitF64 = scaling::ScalingFit<f64>;
pub type ModelPointF64 = backend::ModelPoint<f64>;
pub type EvaluatorF64 = backend::Evaluator<f64>;
pub type StencilF64 = backend::Stencil<f64>;
