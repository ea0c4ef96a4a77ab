use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::scaling::{uniform_step, SweepCurve, SPACING_TOL};

/// `χ = -[e(g-ε) - 2e(g) + e(g+ε)] / ε²`.
pub fn energy_curvature<T: Real>(e_minus: T, e_center: T, e_plus: T, epsilon: T) -> T {
    -(e_minus - e_center - e_center + e_plus) / (epsilon * epsilon)
}

/// Central second difference from three `(g, e)` samples, which must be
/// equally spaced.
pub fn energy_curvature_samples<T: Real>(g: [T; 3], e: [T; 3]) -> Result<T> {
    let (h1, h2) = (g[1] - g[0], g[2] - g[1]);
    if !(h1 > T::zero()) || (h1 - h2).abs() > T::tol(SPACING_TOL) * h1.max(T::one()) {
        return Err(Error::NonUniformSpacing);
    }
    Ok(energy_curvature(e[0], e[1], e[2], h1))
}

/// `χ` on the interior points of a uniformly spaced energy curve.
pub fn curvature_curve<T: Real>(energy: &SweepCurve<T>) -> Result<SweepCurve<T>> {
    let h = uniform_step(energy.params())?;
    if energy.len() < 3 {
        return Err(Error::TooFew {
            needed: 3,
            got: energy.len(),
        });
    }
    let e = energy.values();
    let g = energy.params()[1..energy.len() - 1].to_vec();
    let chi = (1..energy.len() - 1)
        .map(|i| energy_curvature(e[i - 1], e[i], e[i + 1], h))
        .collect();
    SweepCurve::new(g, chi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_is_exact() {
        for eps in [5e-3, 0.1, 1.0] {
            let g = 0.7;
            let f = |x: f64| x * x;
            assert!((energy_curvature(f(g - eps), f(g), f(g + eps), eps) + 2.0).abs() < 1e-9);
        }
        let grid: Vec<f64> = (0..11).map(|i| i as f64 * 0.25).collect();
        let c = curvature_curve(&SweepCurve::from_fn(grid, |x| x * x).unwrap()).unwrap();
        assert_eq!(c.len(), 9);
        assert!(c.values().iter().all(|v| (v + 2.0).abs() < 1e-12));
    }

    #[test]
    fn rejects_uneven_samples() {
        assert!(matches!(
            energy_curvature_samples([0.0, 0.1, 0.3], [0.0; 3]),
            Err(Error::NonUniformSpacing)
        ));
        let c = SweepCurve::new(vec![0.0, 0.1, 0.3, 0.4], vec![0.0; 4]).unwrap();
        assert!(matches!(curvature_curve(&c), Err(Error::NonUniformSpacing)));
    }
}
