//! Complete elliptic integrals by the arithmetic-geometric mean, parameter
//! convention `m = k²`.

use crate::scalar::Real;

const MAX_ITER: usize = 64;

/// Returns `(a_∞, Σ 2^{n-1} c_n²)` of the AGM started at `(1, √(1-m))`.
fn agm<T: Real>(m: T) -> (T, T) {
    let two = T::lit(2.0);
    let mut a = T::one();
    let mut b = (T::one() - m).sqrt();
    let mut c = m.sqrt();
    let mut weight = T::lit(0.5);
    let mut sum = weight * c * c;
    let eps = T::default_epsilon();
    for _ in 0..MAX_ITER {
        if c.abs() <= eps * a {
            break;
        }
        let an = (a + b) / two;
        c = (a - b) / two;
        b = (a * b).sqrt();
        a = an;
        weight *= two;
        sum += weight * c * c;
    }
    (a, sum)
}

/// `K(m) = ∫₀^{π/2} dθ / √(1 - m sin²θ)` for `m ∈ [0, 1)`; `+∞` at `m = 1`.
pub fn elliptic_k<T: Real>(m: T) -> T {
    if m >= T::one() {
        return T::lit(f64::INFINITY);
    }
    let (a, _) = agm(m);
    T::frac_pi_2() / a
}

/// `E(m) = ∫₀^{π/2} √(1 - m sin²θ) dθ` for `m ∈ [0, 1]`.
pub fn elliptic_e<T: Real>(m: T) -> T {
    if m >= T::one() {
        return T::one();
    }
    if m == T::zero() {
        return T::frac_pi_2();
    }
    let (a, sum) = agm(m);
    (T::frac_pi_2() / a) * (T::one() - sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composite Simpson on [0, π/2].
    fn simpson(f: impl Fn(f64) -> f64, n: usize) -> f64 {
        let h = std::f64::consts::FRAC_PI_2 / n as f64;
        let mut s = f(0.0) + f(std::f64::consts::FRAC_PI_2);
        for i in 1..n {
            s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn endpoints() {
        assert_eq!(elliptic_e(0.0f64), std::f64::consts::FRAC_PI_2);
        assert_eq!(elliptic_e(1.0f64), 1.0);
        assert_eq!(elliptic_k(0.0f64), std::f64::consts::FRAC_PI_2);
        assert!(elliptic_k(1.0f64).is_infinite());
    }

    #[test]
    fn agrees_with_quadrature() {
        for m in [0.01, 0.19, 0.5, 0.75, 0.91, 0.99, 0.9999] {
            let e = simpson(|t: f64| (1.0 - m * t.sin().powi(2)).sqrt(), 20_000);
            assert!((elliptic_e(m) - e).abs() < 1e-12, "E({m})");
            if m < 0.99 {
                let k = simpson(|t: f64| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt(), 20_000);
                assert!((elliptic_k(m) - k).abs() < 1e-12, "K({m})");
            }
        }
    }

    #[test]
    fn legendre_relation() {
        // E(m)K(1-m) + E(1-m)K(m) - K(m)K(1-m) = π/2
        for m in [0.1, 0.3, 0.5, 0.8] {
            let lhs = elliptic_e(m) * elliptic_k(1.0 - m) + elliptic_e(1.0 - m) * elliptic_k(m)
                - elliptic_k(m) * elliptic_k(1.0 - m);
            assert!((lhs - std::f64::consts::FRAC_PI_2).abs() < 1e-13);
        }
    }

    #[test]
    fn single_precision() {
        assert!((elliptic_e(0.5f32) - 1.350_643_9).abs() < 1e-6);
    }
}
