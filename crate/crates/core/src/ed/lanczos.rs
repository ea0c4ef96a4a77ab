//! Thick-restart Lanczos for the lowest eigenpair of a real symmetric
//! operator, with full (twice-applied) Gram-Schmidt reorthogonalization.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ed::hamiltonian::LinearOperator;
use crate::error::{Error, Result};
use crate::linalg::symmetric_eigen;
use crate::scalar::Real;

pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    /// Absolute residual `‖Hψ - Eψ‖` at which the ground pair is accepted.
    pub tol: f64,
    /// Cap on operator applications.
    pub max_iter: usize,
    /// Krylov basis size before a restart.
    pub krylov_dim: usize,
    /// Ritz vectors kept across a restart.
    pub keep: usize,
    pub seed: u64,
    /// Weight of the seeded random vector mixed into a warm start.
    pub warm_start_noise: f64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 2000,
            krylov_dim: 64,
            keep: 8,
            seed: DEFAULT_SEED,
            warm_start_noise: 1e-3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LanczosResult<T> {
    pub value: T,
    pub vector: Vec<T>,
    /// Second-lowest Ritz value of the final Krylov space.
    pub next_value: Option<T>,
    /// True residual of the returned pair.
    pub residual: T,
    pub iterations: usize,
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    let mut acc = T::zero();
    for (&x, &y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

fn axpy<T: Real>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

fn scale<T: Real>(a: &mut [T], s: T) {
    a.iter_mut().for_each(|x| *x *= s);
}

fn random_vector<T: Real>(dim: usize, seed: u64) -> Vec<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..dim).map(|_| T::lit(rng.gen_range(-1.0..1.0))).collect()
}

/// Project `w` off the span of `basis`, twice; returns the accumulated
/// coefficients.
fn orthogonalize<T: Real>(basis: &[Vec<T>], w: &mut [T]) -> Vec<T> {
    let mut coeff = vec![T::zero(); basis.len()];
    for _ in 0..2 {
        for (c, q) in coeff.iter_mut().zip(basis) {
            let h = dot(q, w);
            axpy(-h, q, w);
            *c += h;
        }
    }
    coeff
}

fn combine<T: Real>(basis: &[Vec<T>], coeffs: impl Iterator<Item = T>) -> Vec<T> {
    let dim = basis[0].len();
    let mut out = vec![T::zero(); dim];
    for (q, c) in basis.iter().zip(coeffs) {
        axpy(c, q, &mut out);
    }
    out
}

/// Lowest eigenpair of `op`. `start`, if given, is used as a warm start with a
/// small seeded random admixture so no symmetry sector is excluded.
pub fn lowest_eigenpair<T: Real, O: LinearOperator<T> + ?Sized>(
    op: &O,
    opts: &LanczosOptions,
    start: Option<&[T]>,
) -> Result<LanczosResult<T>> {
    let dim = op.dim();
    let tol = T::tol(opts.tol);
    if dim == 0 {
        return Err(Error::NotConverged {
            iterations: 0,
            residual: f64::NAN,
        });
    }
    if dim == 1 {
        let mut y = [T::zero()];
        op.apply(&[T::one()], &mut y);
        return Ok(LanczosResult {
            value: y[0],
            vector: vec![T::one()],
            next_value: None,
            residual: T::zero(),
            iterations: 1,
        });
    }

    let krylov_dim = opts.krylov_dim.clamp(4, dim);
    let keep = opts.keep.clamp(1, krylov_dim - 2);

    let mut v0: Vec<T> = random_vector(dim, opts.seed);
    if let Some(s) = start {
        let noise = T::lit(opts.warm_start_noise) / norm(&v0);
        let ns = norm(s);
        for (v, &x) in v0.iter_mut().zip(s) {
            *v = x / ns + noise * *v;
        }
    }
    let n0 = norm(&v0);
    scale(&mut v0, T::one() / n0);

    let mut basis: Vec<Vec<T>> = vec![v0];
    let mut proj = DMatrix::<T>::zeros(krylov_dim, krylov_dim);
    let mut w = vec![T::zero(); dim];
    let mut iterations = 0;

    loop {
        let j = basis.len() - 1;
        op.apply(&basis[j], &mut w);
        iterations += 1;
        let coeff = orthogonalize(&basis, &mut w);
        for (i, &h) in coeff.iter().enumerate() {
            proj[(i, j)] = h;
            proj[(j, i)] = h;
        }
        let beta = norm(&w);
        let m = j + 1;

        let (theta, s) = symmetric_eigen(proj.view((0, 0), (m, m)).into_owned());
        let ritz_residual = beta * s[(m - 1, 0)].abs();
        let exhausted = beta <= T::default_epsilon() * T::lit(64.0) * theta[0].abs().max(T::one());

        if ritz_residual <= tol || exhausted {
            let mut y = combine(&basis, s.column(0).iter().copied());
            let ny = norm(&y);
            scale(&mut y, T::one() / ny);
            let mut hy = vec![T::zero(); dim];
            op.apply(&y, &mut hy);
            let value = dot(&y, &hy);
            axpy(-value, &y, &mut hy);
            let residual = norm(&hy);
            if residual <= tol || exhausted {
                return Ok(LanczosResult {
                    value,
                    vector: y,
                    next_value: theta.get(1).copied(),
                    residual,
                    iterations,
                });
            }
        }
        if iterations >= opts.max_iter {
            return Err(Error::NotConverged {
                iterations,
                residual: ritz_residual.as_f64(),
            });
        }

        scale(&mut w, T::one() / beta);
        if m == krylov_dim {
            // thick restart: keep the lowest `keep` Ritz vectors, then the
            // residual direction; their mutual projections are diagonal
            let kept: Vec<Vec<T>> = (0..keep)
                .map(|c| combine(&basis, s.column(c).iter().copied()))
                .collect();
            proj.fill(T::zero());
            for c in 0..keep {
                proj[(c, c)] = theta[c];
            }
            basis = kept;
            let _ = orthogonalize(&basis, &mut w);
            let nw = norm(&w);
            scale(&mut w, T::one() / nw);
        }
        basis.push(std::mem::replace(&mut w, vec![T::zero(); dim]));
    }
}
