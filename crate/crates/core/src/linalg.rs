//! Dense symmetric eigendecomposition by cyclic Jacobi rotations. Used for
//! the small matrices of the eigensolvers, where eigenvectors must be
//! accurate to rounding level.

use nalgebra::DMatrix;

use crate::scalar::Real;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues in ascending order and the matching orthonormal eigenvectors
/// as columns.
pub fn symmetric_eigen<T: Real>(mut a: DMatrix<T>) -> (Vec<T>, DMatrix<T>) {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "square matrix required");
    let mut v = DMatrix::<T>::identity(n, n);
    let scale = a.norm();
    let negligible = T::default_epsilon() * T::lit(1e-3) * scale;
    let two = T::lit(2.0);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() <= negligible {
                    continue;
                }
                rotated = true;
                let theta = (a[(q, q)] - a[(p, p)]) / (two * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let t = if theta == T::zero() { T::one() } else { t };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap().then(i.cmp(&j)));
    let values = idx.iter().map(|&i| a[(i, i)]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, idx[c])]);
    (values, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn residuals_at_rounding_level() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [1usize, 2, 7, 40] {
            let b = DMatrix::<f64>::from_fn(n, n, |_, _| rng.gen_range(-10.0..10.0));
            let m = &b + b.transpose();
            let (w, v) = symmetric_eigen(m.clone());
            assert!(w.windows(2).all(|p| p[0] <= p[1]));
            assert!((v.transpose() * &v - DMatrix::identity(n, n)).amax() < 1e-13);
            for c in 0..n {
                let r = (&m * v.column(c) - v.column(c) * w[c]).amax();
                assert!(r < 1e-12 * m.norm(), "n={n} col={c} r={r}");
            }
        }
    }

    #[test]
    fn degenerate_and_diagonal() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0f64, -1.0, 2.0]));
        let (w, _) = symmetric_eigen(m);
        assert_eq!(w, vec![-1.0, 2.0, 2.0]);
    }
}
