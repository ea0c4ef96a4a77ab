//! Pseudo-critical points from sweep curves and their extrapolation in the
//! system size.

pub mod curvature;
pub mod fit;
pub mod pseudo;

pub use curvature::{curvature_curve, energy_curvature, energy_curvature_samples};
pub use fit::{extrapolate, ScalingFit};
pub use pseudo::{
    pseudo_critical_max, pseudo_critical_min, pseudo_critical_s2, pseudo_critical_stationary,
    StationaryKind,
};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Relative spacing mismatch tolerated by "uniform grid" checks.
pub const SPACING_TOL: f64 = 1e-9;

/// Observable sampled on a strictly increasing parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCurve<T> {
    params: Vec<T>,
    values: Vec<T>,
}

impl<T: Real> SweepCurve<T> {
    pub fn new(params: Vec<T>, values: Vec<T>) -> Result<Self> {
        if params.len() != values.len() {
            return Err(Error::Mismatch(format!(
                "{} parameters, {} values",
                params.len(),
                values.len()
            )));
        }
        if params.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Mismatch("parameters not strictly increasing".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Mismatch(format!("non-finite value at index {i}")));
        }
        Ok(Self { params, values })
    }

    pub fn from_fn(params: Vec<T>, f: impl Fn(T) -> T) -> Result<Self> {
        let values = params.iter().map(|&g| f(g)).collect();
        Self::new(params, values)
    }

    pub fn params(&self) -> &[T] {
        &self.params
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    /// The curve with every value negated.
    pub fn negated(&self) -> Self {
        Self {
            params: self.params.clone(),
            values: self.values.iter().map(|&v| -v).collect(),
        }
    }
}

pub(crate) fn uniform_step<T: Real>(params: &[T]) -> Result<T> {
    if params.len() < 2 {
        return Err(Error::TooFew {
            needed: 2,
            got: params.len(),
        });
    }
    let h = params[1] - params[0];
    for w in params.windows(2) {
        if ((w[1] - w[0]) - h).abs() > T::tol(SPACING_TOL) * h.abs().max(T::one()) {
            return Err(Error::NonUniformSpacing);
        }
    }
    Ok(h)
}
