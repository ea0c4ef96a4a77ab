//! Levenberg-Marquardt fit of `g*(N) = g_c + a N^{-θ}`, with `θ = e^φ` to
//! keep the exponent positive.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_ITER: usize = 500;

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit<T> {
    pub sizes: Vec<usize>,
    pub points: Vec<T>,
    pub critical_point: T,
    pub exponent: T,
    /// `1/θ`, emitted because the exponent convention of a quoted `ν` is not
    /// fixed by the fit alone.
    pub inverse_exponent: T,
    pub amplitude: T,
    /// Euclidean norm of the residuals.
    pub residual_norm: T,
    /// Standard error of `g_c` from the linearized covariance; `None` with
    /// only three points.
    pub critical_point_stderr: Option<T>,
    pub iterations: usize,
}

fn model<T: Real>(p: &Vector3<T>, n: T) -> (T, Vector3<T>) {
    let theta = p[2].exp();
    let pw = (-theta * n.ln()).exp();
    let value = p[0] + p[1] * pw;
    let jac = Vector3::new(T::one(), pw, -p[1] * pw * n.ln() * theta);
    (value, jac)
}

fn cost<T: Real>(p: &Vector3<T>, n: &[T], y: &[T]) -> T {
    n.iter().zip(y).fold(T::zero(), |acc, (&ni, &yi)| {
        let r = model(p, ni).0 - yi;
        acc + r * r
    })
}

/// Exponents outside this band leave the correction term flat over any
/// realistic size range (or trade it for a diverging `g_c`).
const EXPONENT_BAND: (f64, f64) = (1e-3, 50.0);

struct Minimum<T> {
    p: Vector3<T>,
    cost: T,
    iterations: usize,
}

fn levenberg_marquardt<T: Real>(mut p: Vector3<T>, n: &[T], y: &[T]) -> Option<Minimum<T>> {
    let k = n.len();
    let mut c = cost(&p, n, y);
    let mut mu = T::lit(1e-3);
    let scale = y.iter().fold(T::one(), |a, &b| a.max(b.abs()));
    let eps = T::default_epsilon();
    // residuals at the rounding level of the data
    let tiny = (eps * scale) * (eps * scale) * T::lit(k as f64);
    let mut iterations = 0;

    while iterations < MAX_ITER {
        iterations += 1;
        let mut jtj = Matrix3::zeros();
        let mut jtr = Vector3::zeros();
        for (&ni, &yi) in n.iter().zip(y) {
            let (v, j) = model(&p, ni);
            jtj += j * j.transpose();
            jtr += j * (v - yi);
        }
        if c <= tiny || jtr.amax() <= eps * eps * scale {
            return Some(Minimum {
                p,
                cost: c,
                iterations,
            });
        }
        let mut accepted = false;
        let mut small = false;
        for _ in 0..40 {
            let mut damped = jtj;
            for d in 0..3 {
                damped[(d, d)] += mu * jtj[(d, d)].max(T::tol(1e-12));
            }
            let Some(step) = damped.cholesky().map(|ch| ch.solve(&(-jtr))) else {
                mu *= T::lit(10.0);
                continue;
            };
            let trial = p + step;
            let tc = cost(&trial, n, y);
            if tc.is_finite() && tc < c {
                small = step.amax() <= T::tol(1e-13) * (p.amax() + T::tol(1e-13));
                p = trial;
                c = tc;
                mu = (mu / T::lit(10.0)).max(T::lit(1e-15));
                accepted = true;
                break;
            }
            mu *= T::lit(10.0);
        }
        // no descent direction left means a minimum to working precision
        if small || !accepted {
            return Some(Minimum {
                p,
                cost: c,
                iterations,
            });
        }
    }
    None
}

fn admissible<T: Real>(m: &Minimum<T>) -> bool {
    let theta = m.p[2].exp();
    m.p.iter().all(|x| x.is_finite())
        && theta >= T::lit(EXPONENT_BAND.0)
        && theta <= T::lit(EXPONENT_BAND.1)
}

/// `(g_c, a)` by linear least squares at `θ = 1`.
fn linear_start<T: Real>(n: &[T], y: &[T]) -> Vector3<T> {
    let k = T::lit(n.len() as f64);
    let x: Vec<T> = n.iter().map(|&v| T::one() / v).collect();
    let (sx, sy) = (
        x.iter().fold(T::zero(), |a, &b| a + b),
        y.iter().fold(T::zero(), |a, &b| a + b),
    );
    let (mx, my) = (sx / k, sy / k);
    let (mut sxx, mut sxy) = (T::zero(), T::zero());
    for (&xi, &yi) in x.iter().zip(y) {
        sxx += (xi - mx) * (xi - mx);
        sxy += (xi - mx) * (yi - my);
    }
    let a = sxy / sxx;
    Vector3::new(my - a * mx, a, T::zero())
}

/// Fits pseudo-critical points `points[i]` at sizes `sizes[i]`. The first
/// start is `g_c = g*(N_max)`, `θ = 1` and `a` through the two largest sizes;
/// a least-squares start at `θ = 1` is also tried and the lower admissible
/// minimum wins. Minima with `θ` outside `[1e-3, 50]` count as failures.
pub fn extrapolate<T: Real>(sizes: &[usize], points: &[T]) -> Result<ScalingFit<T>> {
    if sizes.len() != points.len() {
        return Err(Error::Mismatch(format!(
            "{} sizes, {} points",
            sizes.len(),
            points.len()
        )));
    }
    if sizes.len() < 3 {
        return Err(Error::TooFew {
            needed: 3,
            got: sizes.len(),
        });
    }
    let mut idx: Vec<usize> = (0..sizes.len()).collect();
    idx.sort_by_key(|&i| sizes[i]);
    if idx.windows(2).any(|w| sizes[w[0]] == sizes[w[1]]) || sizes[idx[0]] == 0 {
        return Err(Error::Mismatch(
            "sizes must be distinct and positive".into(),
        ));
    }
    let n: Vec<T> = idx.iter().map(|&i| T::lit(sizes[i] as f64)).collect();
    let y: Vec<T> = idx.iter().map(|&i| points[i]).collect();
    let k = n.len();

    let (n1, n2) = (n[k - 2], n[k - 1]);
    let slope = (y[k - 2] - y[k - 1]) / (T::one() / n1 - T::one() / n2);
    let starts = [
        Vector3::new(y[k - 1], slope, T::zero()),
        linear_start(&n, &y),
    ];
    let mut best: Option<Minimum<T>> = None;
    let mut iterations = 0;
    for p0 in starts {
        let Some(m) = levenberg_marquardt(p0, &n, &y) else {
            continue;
        };
        iterations += m.iterations;
        if admissible(&m) && best.as_ref().map_or(true, |b| m.cost < b.cost) {
            best = Some(m);
        }
    }
    let Some(Minimum { p, cost: c, .. }) = best else {
        return Err(Error::FitFailed(format!(
            "no admissible minimum after {iterations} iterations"
        )));
    };

    let theta = p[2].exp();
    let stderr = if k > 3 {
        let mut jtj = Matrix3::zeros();
        for &ni in &n {
            let j = model(&p, ni).1;
            jtj += j * j.transpose();
        }
        let s2 = c / T::lit((k - 3) as f64);
        jtj.try_inverse()
            .map(|inv| (s2 * inv[(0, 0)]).max(T::zero()).sqrt())
    } else {
        None
    };
    Ok(ScalingFit {
        sizes: idx.iter().map(|&i| sizes[i]).collect(),
        points: y,
        critical_point: p[0],
        exponent: theta,
        inverse_exponent: T::one() / theta,
        amplitude: p[1],
        residual_norm: c.sqrt(),
        critical_point_stderr: stderr,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law_recovered() {
        let sizes: Vec<usize> = (8..=32).step_by(4).collect();
        let pts: Vec<f64> = sizes.iter().map(|&n| 3.6 + 2.0 / n as f64).collect();
        let f = extrapolate(&sizes, &pts).unwrap();
        assert!((f.critical_point - 3.6).abs() < 1e-6);
        assert!((f.exponent - 1.0).abs() < 1e-6);
        assert!((f.amplitude - 2.0).abs() < 1e-5);
        assert!(f.residual_norm < 1e-9, "{f:?}");
    }

    #[test]
    fn other_exponent_and_sign() {
        let sizes = [8usize, 12, 16, 20, 24];
        let pts: Vec<f64> = sizes
            .iter()
            .map(|&n| 1.5 - 4.0 * (n as f64).powf(-0.6))
            .collect();
        let f = extrapolate(&sizes, &pts).unwrap();
        assert!((f.critical_point - 1.5).abs() < 1e-6);
        assert!((f.exponent - 0.6).abs() < 1e-6);
        assert!((f.inverse_exponent - 1.0 / 0.6).abs() < 1e-5);
    }

    #[test]
    fn three_points_fit_exactly() {
        let f = extrapolate(
            &[16usize, 8, 12],
            &[3.6f64 + 2.0 / 16.0, 3.6 + 0.25, 3.6 + 2.0 / 12.0],
        )
        .unwrap();
        assert_eq!(f.sizes, vec![8, 12, 16]);
        assert!((f.critical_point - 3.6).abs() < 1e-6);
        assert!(f.critical_point_stderr.is_none());
    }

    #[test]
    fn too_few_points() {
        assert!(matches!(
            extrapolate(&[8usize, 12], &[1.0, 2.0]),
            Err(Error::TooFew { .. })
        ));
    }
}
