use std::collections::HashMap;

use nalgebra::DMatrix;

use crate::chain::{invert_block_bits, sector_basis, HalfInt, Parity};
use crate::ed::GroundState;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectrum::{EntanglementSpectrum, Level};

/// One `S_A^z` block of `ρ_A`, indexed by block configurations in increasing
/// bitmask order.
#[derive(Debug, Clone)]
pub struct RdmBlock<T> {
    pub sz_block: HalfInt,
    pub configs: Vec<u64>,
    pub matrix: DMatrix<T>,
    /// `Ψ` with `ρ = Ψ Ψᵀ`; rows follow `configs`, columns the complement.
    pub amplitudes: DMatrix<T>,
}

/// `ρ_A = Tr_B |ψ⟩⟨ψ|`, stored block-diagonally in `S_A^z`.
#[derive(Debug, Clone)]
pub struct ReducedDensityMatrix<T> {
    pub block_len: usize,
    pub blocks: Vec<RdmBlock<T>>,
    /// Norm of the component of `ψ` removed when projecting onto a definite
    /// reflection parity about the block centre.
    pub reflection_defect: T,
}

impl<T: Real> ReducedDensityMatrix<T> {
    pub fn trace(&self) -> T {
        self.blocks
            .iter()
            .fold(T::zero(), |acc, b| acc + b.matrix.trace())
    }

    /// Full `2^{L_A} × 2^{L_A}` matrix indexed by block configuration.
    pub fn to_dense(&self) -> DMatrix<T> {
        let d = 1usize << self.block_len;
        let mut m = DMatrix::zeros(d, d);
        for b in &self.blocks {
            for (i, &ci) in b.configs.iter().enumerate() {
                for (j, &cj) in b.configs.iter().enumerate() {
                    m[(ci as usize, cj as usize)] = b.matrix[(i, j)];
                }
            }
        }
        m
    }

    pub fn max_asymmetry(&self) -> T {
        self.blocks
            .iter()
            .map(|b| (&b.matrix - b.matrix.transpose()).amax())
            .fold(T::zero(), |a, b| a.max(b))
    }
}

/// Reflection of the ring that maps block A (sites `0..L_A`) onto itself:
/// site `i -> (L_A - 1 - i) mod N`.
fn reflect_ring(config: u64, n_sites: usize, block_len: usize) -> u64 {
    let rev = config.reverse_bits() >> (64 - n_sites);
    let mask = (1u64 << n_sites) - 1;
    ((rev << block_len) | (rev >> (n_sites - block_len))) & mask
}

/// Reduced density matrix of the first `block_len` sites. The state is first
/// projected onto its dominant parity under the ring reflection about the
/// block centre, which removes Lanczos round-off that would otherwise break
/// the inversion symmetry of `ρ_A`.
pub fn reduced_density_matrix<T: Real>(
    gs: &GroundState<T>,
    block_len: usize,
) -> Result<ReducedDensityMatrix<T>> {
    let n = gs.spec.n_sites();
    if block_len < 2 || block_len % 2 != 0 || block_len > n - 2 {
        return Err(Error::InvalidChain(format!(
            "block length {block_len} invalid for N = {n}"
        )));
    }
    let basis = &gs.basis;
    let mut reflected = vec![T::zero(); basis.len()];
    for (i, &s) in basis.states().iter().enumerate() {
        let r = basis
            .index_of(reflect_ring(s, n, block_len))
            .expect("reflection preserves S^z");
        reflected[r] = gs.vector[i];
    }
    let half = T::lit(0.5);
    let even: Vec<T> = gs
        .vector
        .iter()
        .zip(&reflected)
        .map(|(&a, &b)| half * (a + b))
        .collect();
    let odd: Vec<T> = gs
        .vector
        .iter()
        .zip(&reflected)
        .map(|(&a, &b)| half * (a - b))
        .collect();
    let ne = even.iter().fold(T::zero(), |s, &x| s + x * x).sqrt();
    let no = odd.iter().fold(T::zero(), |s, &x| s + x * x).sqrt();
    let (mut psi, kept, dropped) = if ne >= no {
        (even, ne, no)
    } else {
        (odd, no, ne)
    };
    psi.iter_mut().for_each(|x| *x /= kept);

    let nb = n - block_len;
    let mask_a = (1u64 << block_len) - 1;
    let up_total = basis.up_count();
    let mut blocks = Vec::new();
    for up_a in 0..=block_len {
        if up_a > up_total || up_total - up_a > nb {
            continue;
        }
        let ba = sector_basis(block_len, HalfInt::from_up_count(up_a, block_len))?;
        let bb = sector_basis(nb, HalfInt::from_up_count(up_total - up_a, nb))?;
        let mut psi_mat = DMatrix::<T>::zeros(ba.len(), bb.len());
        for (i, &s) in basis.states().iter().enumerate() {
            let a = s & mask_a;
            if a.count_ones() as usize != up_a {
                continue;
            }
            let ia = ba.index_of(a).unwrap();
            let ib = bb.index_of(s >> block_len).unwrap();
            psi_mat[(ia, ib)] = psi[i];
        }
        let rho = &psi_mat * psi_mat.transpose();
        blocks.push(RdmBlock {
            sz_block: HalfInt::from_up_count(up_a, block_len),
            configs: ba.states().to_vec(),
            matrix: rho,
            amplitudes: psi_mat,
        });
    }
    Ok(ReducedDensityMatrix {
        block_len,
        blocks,
        reflection_defect: dropped,
    })
}

/// Orthonormal inversion-adapted basis of one block: even combinations first.
fn inversion_basis<T: Real>(configs: &[u64], block_len: usize) -> (DMatrix<T>, usize) {
    let index: HashMap<u64, usize> = configs.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let d = configs.len();
    let r = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    let mut even: Vec<Vec<(usize, T)>> = Vec::new();
    let mut odd: Vec<Vec<(usize, T)>> = Vec::new();
    for (i, &c) in configs.iter().enumerate() {
        let j = index[&invert_block_bits(c, block_len)];
        if j == i {
            even.push(vec![(i, T::one())]);
        } else if i < j {
            even.push(vec![(i, r), (j, r)]);
            odd.push(vec![(i, r), (j, -r)]);
        }
    }
    let n_even = even.len();
    let mut u = DMatrix::zeros(d, d);
    for (col, entries) in even.into_iter().chain(odd).enumerate() {
        for (row, v) in entries {
            u[(row, col)] = v;
        }
    }
    (u, n_even)
}

/// Squared singular values, which keep small weights accurate to the
/// precision of the amplitudes rather than of `ρ`.
fn squared_singular_values<T: Real>(m: DMatrix<T>) -> Vec<T> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return vec![T::zero(); m.nrows()];
    }
    let rows = m.nrows();
    let mut out: Vec<T> = m
        .svd(false, false)
        .singular_values
        .iter()
        .map(|&s| s * s)
        .collect();
    out.resize(rows, T::zero());
    out
}

/// Eigenvalues of `ρ_A` labeled by `(S_A^z, p_A)`. Each `S_A^z` block is
/// rotated into its inversion-even and -odd subspaces and diagonalized
/// separately, so every level, including members of degenerate clusters,
/// carries a definite parity.
pub fn labeled_entanglement_spectrum<T: Real>(
    rdm: &ReducedDensityMatrix<T>,
    inversion_tol: f64,
) -> Result<EntanglementSpectrum<T>> {
    let mut levels = Vec::new();
    for b in &rdm.blocks {
        let (u, n_even) = inversion_basis::<T>(&b.configs, rdm.block_len);
        let rotated = u.transpose() * &b.amplitudes;
        let d = rotated.nrows();
        let even = rotated.rows(0, n_even).into_owned();
        let odd = rotated.rows(n_even, d - n_even).into_owned();
        let mixing = if n_even == 0 || n_even == d {
            T::zero()
        } else {
            (&even * odd.transpose()).amax()
        };
        if mixing > T::tol(inversion_tol) {
            return Err(Error::BrokenInversion(mixing.as_f64()));
        }
        for (block, parity) in [(even, Parity::Even), (odd, Parity::Odd)] {
            for w in squared_singular_values(block) {
                levels.push(Level {
                    weight: w,
                    sz_block: b.sz_block,
                    parity,
                });
            }
        }
    }
    Ok(EntanglementSpectrum::new(rdm.block_len, levels, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::ChainSpec;
    use crate::ed::{ground_state, EdOptions};
    use nalgebra::SymmetricEigen;

    #[test]
    fn ring_reflection_is_an_involution_fixing_the_block() {
        for s in [0b0000_0001u64, 0b1010_0110, 0b1111_0000] {
            let r = reflect_ring(s, 8, 4);
            assert_eq!(reflect_ring(r, 8, 4), s);
            assert_eq!(r & 0xF, invert_block_bits(s & 0xF, 4));
        }
    }

    #[test]
    fn singlet_product_gives_four_quarters() {
        for dz in [0.0f64, 1.0, 4.0] {
            let spec = ChainSpec::new(8, 1.0, dz, 4).unwrap();
            let gs = ground_state(&spec, &EdOptions::default()).unwrap();
            for la in [2, 4] {
                let rdm = reduced_density_matrix(&gs, la).unwrap();
                assert!((rdm.trace() - 1.0).abs() < 1e-12);
                let es = labeled_entanglement_spectrum(&rdm, 1e-8).unwrap();
                let w = es.weights();
                for j in 0..4 {
                    assert!((w[j] - 0.25).abs() < 1e-10);
                }
                assert!(w[4..].iter().all(|x| x.abs() < 1e-10));
            }
        }
    }

    #[test]
    fn dense_matrix_is_psd_and_hermitian() {
        let spec = ChainSpec::new(10, 0.2f64, 2.3, 4).unwrap();
        let gs = ground_state(&spec, &EdOptions::default()).unwrap();
        let rdm = reduced_density_matrix(&gs, 4).unwrap();
        let d = rdm.to_dense();
        assert!((&d - d.transpose()).amax() < 1e-14);
        let ev = SymmetricEigen::new(d).eigenvalues;
        assert!(ev.iter().all(|&x| x > -1e-12));
        assert!((ev.sum() - 1.0).abs() < 1e-10);
        assert!(rdm.reflection_defect < 1e-8);
    }

    #[test]
    fn inversion_basis_is_orthogonal() {
        let b = sector_basis(6, HalfInt::ZERO).unwrap();
        let (u, n_even) = inversion_basis::<f64>(b.states(), 6);
        assert!((u.transpose() * &u - DMatrix::identity(20, 20)).amax() < 1e-14);
        // 20 configs, none palindromic (odd popcount)
        assert_eq!(n_even, 10);
    }
}
