use crate::chain::{BasisIndex, ChainSpec};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Anything a Krylov solver can multiply by.
pub trait LinearOperator<T> {
    fn dim(&self) -> usize;
    /// `y = A x`
    fn apply(&self, x: &[T], y: &mut [T]);
}

/// Real symmetric matrix in CSR form with the diagonal stored separately.
/// Both triangles are stored.
#[derive(Debug, Clone)]
pub struct SparseSymmetric<T> {
    diag: Vec<T>,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<T>,
}

impl<T: Real> SparseSymmetric<T> {
    pub fn nnz(&self) -> usize {
        self.vals.len() + self.diag.len()
    }

    pub fn diagonal(&self) -> &[T] {
        &self.diag
    }

    /// Element `(i, j)`; linear scan of row `i`.
    pub fn get(&self, i: usize, j: usize) -> T {
        if i == j {
            return self.diag[i];
        }
        let row = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[row.clone()]
            .iter()
            .zip(&self.vals[row])
            .filter(|(&c, _)| c as usize == j)
            .fold(T::zero(), |acc, (_, &v)| acc + v)
    }
}

impl<T: Real> LinearOperator<T> for SparseSymmetric<T> {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn apply(&self, x: &[T], y: &mut [T]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = self.diag[i] * x[i];
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.vals[p] * x[self.cols[p] as usize];
            }
            *yi = acc;
        }
    }
}

/// Rough footprint of the Hamiltonian plus `krylov_vectors` work vectors.
pub fn estimated_bytes<T>(spec_sites: usize, dim: usize, krylov_vectors: usize) -> usize {
    let scalar = std::mem::size_of::<T>();
    let off_per_row = spec_sites / 2 + 1;
    dim * (off_per_row * (scalar + 4) + scalar + 8) + dim * scalar * (krylov_vectors + 4)
}

/// `H = Σ_n J_n (σˣσˣ + σʸσʸ + Δ σᶻσᶻ)` on one `S^z` sector. Flip-flop
/// elements are `2 J_n`; the diagonal is `Δ J_n σᶻσᶻ`.
pub fn build_hamiltonian<T: Real>(
    spec: &ChainSpec<T>,
    basis: &BasisIndex,
    memory_budget: usize,
) -> Result<SparseSymmetric<T>> {
    let n = spec.n_sites();
    let dim = basis.len();
    let needed = estimated_bytes::<T>(n, dim, 0);
    if needed > memory_budget {
        return Err(Error::MemoryBudget {
            dim,
            needed,
            budget: memory_budget,
        });
    }
    if u32::try_from(dim).is_err() {
        return Err(Error::MemoryBudget {
            dim,
            needed: usize::MAX,
            budget: memory_budget,
        });
    }
    let bonds = spec.bond_strengths();
    let two = T::lit(2.0);
    let zz: Vec<T> = bonds.iter().map(|&j| j * spec.anisotropy()).collect();

    let mut diag = Vec::with_capacity(dim);
    let mut row_ptr = Vec::with_capacity(dim + 1);
    let mut cols = Vec::with_capacity(dim * (n / 2 + 1));
    let mut vals = Vec::with_capacity(dim * (n / 2 + 1));
    row_ptr.push(0);
    let mut row: Vec<(u32, T)> = Vec::with_capacity(n);
    for &s in basis.states() {
        let mut d = T::zero();
        row.clear();
        for (i, &j) in bonds.iter().enumerate() {
            let k = (i + 1) % n;
            let (bi, bk) = ((s >> i) & 1, (s >> k) & 1);
            if bi == bk {
                d += zz[i];
            } else {
                d -= zz[i];
                if j != T::zero() {
                    let flipped = s ^ ((1u64 << i) | (1u64 << k));
                    let col = basis.index_of(flipped).expect("flip-flop preserves S^z");
                    row.push((col as u32, two * j));
                }
            }
        }
        row.sort_by_key(|e| e.0);
        // N = 2 style double bonds cannot occur for N >= 4, but merge anyway
        let mut last: Option<u32> = None;
        for &(c, v) in row.iter() {
            if last == Some(c) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                vals.push(v);
                last = Some(c);
            }
        }
        diag.push(d);
        row_ptr.push(cols.len());
    }
    Ok(SparseSymmetric {
        diag,
        row_ptr,
        cols,
        vals,
    })
}
