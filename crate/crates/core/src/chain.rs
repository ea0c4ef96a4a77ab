//! Physical instance of the bond-alternating XXZ ring and the basis
//! conventions shared by the exact-diagonalization and free-fermion backends.
//!
//! Sites are 0-based internally. Bond `i` joins site `i` and `i + 1 (mod N)`
//! and carries `1 + (-1)^(i+1) δ`, i.e. the 1-based bond `n` carries
//! `1 + (-1)^n δ`. Unit cells are the site pairs `(2j, 2j+1)`, so intra-cell
//! bonds are weak (`1 - δ`) for `δ > 0`. Block A is the contiguous run of the
//! first `L_A` sites; in a configuration bitmask site `i` is bit `i`, so block
//! A occupies the low `L_A` bits.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default forward/central finite-difference step for parameter sweeps.
pub const DEFAULT_EPSILON: f64 = 5e-3;

/// Largest ring handled by the bitmask basis.
pub const MAX_SITES: usize = 62;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec<T> {
    n_sites: usize,
    delta: T,
    anisotropy: T,
    block_len: usize,
    epsilon: T,
}

impl<T: Real> ChainSpec<T> {
    /// Ring of `n_sites` spins with bond alternation `delta` and Ising
    /// anisotropy `anisotropy`, bipartitioned at `block_len` (`L_A`).
    pub fn new(n_sites: usize, delta: T, anisotropy: T, block_len: usize) -> Result<Self> {
        let spec = Self {
            n_sites,
            delta,
            anisotropy,
            block_len,
            epsilon: T::lit(DEFAULT_EPSILON),
        };
        spec.validate(false)?;
        Ok(spec)
    }

    /// Like [`ChainSpec::new`] but lets `L_A` exceed `N/2` (diagnostics only).
    pub fn with_block_override(mut self, block_len: usize) -> Result<Self> {
        self.block_len = block_len;
        self.validate(true)?;
        Ok(self)
    }

    pub fn with_epsilon(mut self, epsilon: T) -> Result<Self> {
        if !(epsilon > T::zero()) || !epsilon.is_finite() {
            return Err(Error::InvalidChain(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        self.epsilon = epsilon;
        Ok(self)
    }

    pub fn with_delta(mut self, delta: T) -> Result<Self> {
        self.delta = delta;
        self.validate(self.block_len > self.n_sites / 2)?;
        Ok(self)
    }

    pub fn with_anisotropy(mut self, anisotropy: T) -> Result<Self> {
        self.anisotropy = anisotropy;
        self.validate(self.block_len > self.n_sites / 2)?;
        Ok(self)
    }

    fn validate(&self, allow_large_block: bool) -> Result<()> {
        let n = self.n_sites;
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidChain(format!(
                "N must be even and >= 4, got {n}"
            )));
        }
        if n > MAX_SITES {
            return Err(Error::InvalidChain(format!("N = {n} exceeds {MAX_SITES}")));
        }
        if !(self.delta > -T::one() && self.delta <= T::one()) {
            return Err(Error::InvalidChain(format!(
                "delta must lie in (-1, 1], got {}",
                self.delta
            )));
        }
        if !self.anisotropy.is_finite() {
            return Err(Error::InvalidChain("anisotropy must be finite".into()));
        }
        let la = self.block_len;
        let cap = if allow_large_block { n - 2 } else { n / 2 };
        if la < 2 || la % 2 != 0 || la > cap {
            return Err(Error::InvalidChain(format!(
                "L_A must be even with 2 <= L_A <= {cap}, got {la}"
            )));
        }
        Ok(())
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_cells(&self) -> usize {
        self.n_sites / 2
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    pub fn anisotropy(&self) -> T {
        self.anisotropy
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    /// Coupling on 0-based bond `i` (sites `i`, `i+1 mod N`).
    pub fn bond_strength(&self, i: usize) -> T {
        if i % 2 == 0 {
            T::one() - self.delta
        } else {
            T::one() + self.delta
        }
    }

    /// Per-bond couplings in bond order; entry `n-1` is `1 + (-1)^n δ`.
    pub fn bond_strengths(&self) -> Vec<T> {
        (0..self.n_sites).map(|i| self.bond_strength(i)).collect()
    }
}

/// A value in `Z/2`, stored as twice its value so `S^z` stays exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub fn from_int(value: i64) -> Self {
        HalfInt(2 * value)
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// Magnetization of `up` raised spins among `sites`.
    pub fn from_up_count(up: usize, sites: usize) -> Self {
        HalfInt(2 * up as i64 - sites as i64)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Eigenvalue of block inversion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> i8 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }

    pub fn from_sign(sign: i64) -> Self {
        if sign >= 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip_if(self, flip: bool) -> Self {
        match (self, flip) {
            (p, false) => p,
            (Parity::Even, true) => Parity::Odd,
            (Parity::Odd, true) => Parity::Even,
        }
    }
}

impl std::ops::Mul for Parity {
    type Output = Parity;
    fn mul(self, rhs: Parity) -> Parity {
        self.flip_if(rhs == Parity::Odd)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymmetrySector {
    pub sz_total: HalfInt,
    pub sz_block: HalfInt,
    pub block_parity: Parity,
}

/// Configurations of `n_sites` spins with fixed total `S^z`, in increasing
/// bitmask order, with an O(N) rank lookup via the combinatorial number
/// system.
#[derive(Debug, Clone)]
pub struct BasisIndex {
    n_sites: usize,
    up: usize,
    states: Vec<u64>,
    binom: Vec<Vec<u64>>,
}

impl BasisIndex {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn up_count(&self) -> usize {
        self.up
    }

    pub fn sz(&self) -> HalfInt {
        HalfInt::from_up_count(self.up, self.n_sites)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    pub fn state(&self, ordinal: usize) -> u64 {
        self.states[ordinal]
    }

    /// Ordinal of `config`, or `None` if it is not in this sector.
    pub fn index_of(&self, config: u64) -> Option<usize> {
        if config >> self.n_sites != 0 || config.count_ones() as usize != self.up {
            return None;
        }
        let mut rank = 0u64;
        let mut rest = config;
        let mut k = 1;
        while rest != 0 {
            let pos = rest.trailing_zeros() as usize;
            rank += self.binom[pos][k];
            k += 1;
            rest &= rest - 1;
        }
        Some(rank as usize)
    }
}

/// Pascal's triangle up to `n` choose `n`.
pub fn binomial_table(n: usize) -> Vec<Vec<u64>> {
    let mut t = vec![vec![0u64; n + 2]; n + 1];
    for i in 0..=n {
        t[i][0] = 1;
        for k in 1..=i {
            t[i][k] = t[i - 1][k - 1] + if k <= i - 1 { t[i - 1][k] } else { 0 };
        }
    }
    t
}

/// All configurations with `popcount = N/2 + S^z`, given `2 S^z`.
pub fn sector_basis(n_sites: usize, sz: HalfInt) -> Result<BasisIndex> {
    let twice = sz.twice();
    if n_sites == 0 || n_sites > MAX_SITES || twice.unsigned_abs() as usize > n_sites {
        return Err(Error::SectorOutOfRange {
            sites: n_sites,
            twice_sz: twice,
        });
    }
    if (n_sites as i64 + twice) % 2 != 0 {
        return Err(Error::SectorOutOfRange {
            sites: n_sites,
            twice_sz: twice,
        });
    }
    let up = ((n_sites as i64 + twice) / 2) as usize;
    let binom = binomial_table(n_sites);
    let dim = binom[n_sites][up] as usize;
    let mut states = Vec::with_capacity(dim);
    if up == 0 {
        states.push(0);
    } else {
        let limit = 1u64 << n_sites;
        let mut v: u64 = (1u64 << up) - 1;
        while v < limit {
            states.push(v);
            // Gosper's hack: next integer with the same popcount.
            let c = v & v.wrapping_neg();
            let r = v + c;
            v = (((r ^ v) >> 2) / c) | r;
        }
    }
    debug_assert_eq!(states.len(), dim);
    Ok(BasisIndex {
        n_sites,
        up,
        states,
        binom,
    })
}

/// Block inversion `i -> L_A - 1 - i` on 0-based sites of block A.
pub fn block_inversion_permutation(block_len: usize) -> Vec<usize> {
    (0..block_len).rev().collect()
}

/// Image of a block configuration (low `block_len` bits) under inversion.
#[inline]
pub fn invert_block_bits(config: u64, block_len: usize) -> u64 {
    config.reverse_bits() >> (64 - block_len)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bond_strengths_examples() {
        let s = ChainSpec::new(4, 0.0, 1.0, 2).unwrap();
        assert_eq!(s.bond_strengths(), vec![1.0, 1.0, 1.0, 1.0]);
        let s = ChainSpec::new(4, 1.0, 1.0, 2).unwrap();
        assert_eq!(s.bond_strengths(), vec![0.0, 2.0, 0.0, 2.0]);
        let s = ChainSpec::new(6, 0.3, 1.0, 2).unwrap();
        let b = s.bond_strengths();
        let want = [0.7f64, 1.3, 0.7, 1.3, 0.7, 1.3];
        for (x, y) in b.iter().zip(want) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn block_cuts_fall_on_strong_bonds() {
        for n in (4..=20).step_by(2) {
            for la in (2..=n / 2).step_by(2) {
                let s = ChainSpec::new(n, 0.4, 1.0, la).unwrap();
                // bonds leaving block A: (L_A-1, L_A) and (N-1, 0)
                assert_eq!(s.bond_strength(la - 1), 1.4);
                assert_eq!(s.bond_strength(n - 1), 1.4);
                let strong = s.bond_strengths().iter().filter(|&&b| b == 1.4).count();
                assert_eq!(strong, n / 2);
            }
        }
    }

    #[test]
    fn spec_validation() {
        assert!(ChainSpec::new(5, 0.0, 1.0, 2).is_err());
        assert!(ChainSpec::new(2, 0.0, 1.0, 2).is_err());
        assert!(ChainSpec::new(8, -1.0, 1.0, 2).is_err());
        assert!(ChainSpec::new(8, 1.2, 1.0, 2).is_err());
        assert!(ChainSpec::new(8, 0.3, 1.0, 3).is_err());
        assert!(ChainSpec::new(8, 0.3, 1.0, 6).is_err());
        let s = ChainSpec::new(8, 0.3, 1.0, 4).unwrap();
        assert!(s.with_block_override(6).is_ok());
        assert!(s.with_epsilon(0.0).is_err());
        assert_eq!(s.epsilon(), 5e-3);
    }

    #[test]
    fn sector_sizes() {
        assert_eq!(sector_basis(4, HalfInt::ZERO).unwrap().len(), 6);
        let full = sector_basis(4, HalfInt::from_int(2)).unwrap();
        assert_eq!(full.states(), &[0b1111]);
        assert_eq!(sector_basis(8, HalfInt::ZERO).unwrap().len(), 70);
        assert!(sector_basis(4, HalfInt::from_int(3)).is_err());
        assert!(sector_basis(4, HalfInt::from_twice(1)).is_err());
        for n in [4usize, 6, 10] {
            let total: usize = (-(n as i64)..=n as i64)
                .step_by(2)
                .map(|t| sector_basis(n, HalfInt::from_twice(t)).unwrap().len())
                .sum();
            assert_eq!(total, 1 << n);
        }
    }

    #[test]
    fn sector_enumeration_is_increasing_and_ranked() {
        let b = sector_basis(12, HalfInt::from_int(1)).unwrap();
        assert!(b.states().windows(2).all(|w| w[0] < w[1]));
        for (i, &s) in b.states().iter().enumerate() {
            assert_eq!(s.count_ones(), 7);
            assert_eq!(b.index_of(s), Some(i));
        }
        assert_eq!(b.index_of(0b1), None);
    }

    #[test]
    fn inversion_permutation() {
        assert_eq!(block_inversion_permutation(4), vec![3, 2, 1, 0]);
        assert_eq!(block_inversion_permutation(2), vec![1, 0]);
        let p = block_inversion_permutation(8);
        for i in 0..8 {
            assert_eq!(p[p[i]], i);
        }
        assert_eq!(invert_block_bits(0b0001, 4), 0b1000);
        assert_eq!(invert_block_bits(0b0110, 4), 0b0110);
        assert_eq!(invert_block_bits(invert_block_bits(0b1011, 6), 6), 0b1011);
    }

    #[test]
    fn half_int_display() {
        assert_eq!(HalfInt::from_twice(3).to_string(), "3/2");
        assert_eq!(HalfInt::from_int(-1).to_string(), "-1");
        assert_eq!(HalfInt::from_up_count(3, 4), HalfInt::from_int(1));
    }
}
