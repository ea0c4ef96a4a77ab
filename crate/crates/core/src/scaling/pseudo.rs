use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::scaling::SweepCurve;

/// Relative size below which a finite-difference slope counts as flat.
pub const FLAT_SLOPE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StationaryKind {
    /// Slope goes from positive to negative.
    Max,
    /// Slope goes from negative to positive.
    Min,
    Any,
}

/// Vertex of the parabola through three points.
fn parabola_vertex<T: Real>(x: [T; 3], y: [T; 3]) -> T {
    let (a, b) = (x[1] - x[0], x[1] - x[2]);
    let (fa, fb) = (y[1] - y[2], y[1] - y[0]);
    let den = a * fa - b * fb;
    if den == T::zero() {
        return x[1];
    }
    x[1] - (a * a * fa - b * b * fb) / (den + den)
}

/// Interior grid maximum refined by a three-point parabola.
pub fn pseudo_critical_max<T: Real>(curve: &SweepCurve<T>) -> Result<T> {
    let v = curve.values();
    if v.len() < 3 {
        return Err(Error::TooFew {
            needed: 3,
            got: v.len(),
        });
    }
    let mut best = 0;
    for i in 1..v.len() {
        if v[i] > v[best] {
            best = i;
        }
    }
    if best == 0 || best == v.len() - 1 {
        return Err(Error::BoundaryExtremum(best));
    }
    let g = curve.params();
    Ok(parabola_vertex(
        [g[best - 1], g[best], g[best + 1]],
        [v[best - 1], v[best], v[best + 1]],
    ))
}

pub fn pseudo_critical_min<T: Real>(curve: &SweepCurve<T>) -> Result<T> {
    pseudo_critical_max(&curve.negated())
}

/// Location of the maximum of `S₂`.
pub fn pseudo_critical_s2<T: Real>(s2: &SweepCurve<T>) -> Result<T> {
    pseudo_critical_max(s2)
}

/// Zero of the forward-difference slope, linearly interpolated between the
/// midpoints that bracket a sign change. Slopes within [`FLAT_SLOPE_TOL`] of
/// zero (relative to the curve scale) are skipped. With several candidates,
/// `Max` and `Min` take the most extreme curve value and `Any` the first.
pub fn pseudo_critical_stationary<T: Real>(
    curve: &SweepCurve<T>,
    kind: StationaryKind,
) -> Result<T> {
    let (g, v) = (curve.params(), curve.values());
    if g.len() < 3 {
        return Err(Error::TooFew {
            needed: 3,
            got: g.len(),
        });
    }
    let scale = v.iter().fold(T::one(), |a, &b| a.max(b.abs()));
    let flat = T::tol(FLAT_SLOPE_TOL) * scale;
    // (midpoint, slope) of non-flat steps
    let slopes: Vec<(T, T, usize)> = (0..g.len() - 1)
        .filter(|&i| (v[i + 1] - v[i]).abs() > flat)
        .map(|i| {
            (
                (g[i] + g[i + 1]) / T::lit(2.0),
                (v[i + 1] - v[i]) / (g[i + 1] - g[i]),
                i,
            )
        })
        .collect();
    let mut best: Option<(T, T)> = None;
    for w in slopes.windows(2) {
        let ((m0, d0, i0), (m1, d1, i1)) = (w[0], w[1]);
        let wanted = match kind {
            StationaryKind::Max => d0 > T::zero() && d1 < T::zero(),
            StationaryKind::Min => d0 < T::zero() && d1 > T::zero(),
            StationaryKind::Any => (d0 > T::zero()) != (d1 > T::zero()),
        };
        if !wanted {
            continue;
        }
        let root = m0 + (m1 - m0) * d0 / (d0 - d1);
        let value = v[i0 + 1..=i1]
            .iter()
            .copied()
            .fold(v[i0 + 1], |a, b| match kind {
                StationaryKind::Min => a.min(b),
                _ => a.max(b),
            });
        let better = match (best, kind) {
            (None, _) => true,
            (Some(_), StationaryKind::Any) => false,
            (Some((_, bv)), StationaryKind::Max) => value > bv,
            (Some((_, bv)), StationaryKind::Min) => value < bv,
        };
        if better {
            best = Some((root, value));
        }
    }
    best.map(|b| b.0).ok_or(Error::NoSignChange)
}
