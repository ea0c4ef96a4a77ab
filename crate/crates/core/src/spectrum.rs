//! Entanglement spectrum with `(S_A^z, p_A)` labels, produced by both solver
//! backends.

use std::cmp::Ordering;

use crate::chain::{HalfInt, Parity};
use crate::scalar::Real;

/// Weights below this are kept for sums but carry no entanglement energy.
pub const EIGENVALUE_FLOOR: f64 = 1e-13;

/// Relative tolerance for grouping levels into degeneracy clusters.
pub const CLUSTER_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level<T> {
    pub weight: T,
    pub sz_block: HalfInt,
    pub parity: Parity,
}

impl<T: Real> Level<T> {
    /// `ξ = -ln ω`, or `None` below [`EIGENVALUE_FLOOR`].
    pub fn entanglement_energy(&self) -> Option<T> {
        if self.weight >= T::lit(EIGENVALUE_FLOOR) {
            Some(-self.weight.ln())
        } else {
            None
        }
    }
}

/// Levels in non-increasing weight order. Ties are broken by label so the
/// order is reproducible.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementSpectrum<T> {
    block_len: usize,
    levels: Vec<Level<T>>,
    complete: bool,
}

impl<T: Real> EntanglementSpectrum<T> {
    /// `complete` is false when only the leading part of the spectrum was
    /// generated (large free-fermion blocks).
    pub fn new(block_len: usize, mut levels: Vec<Level<T>>, complete: bool) -> Self {
        for l in &mut levels {
            if l.weight < T::zero() {
                l.weight = T::zero();
            }
        }
        levels.sort_by(|a, b| {
            b.weight
                .partial_cmp(&a.weight)
                .unwrap_or(Ordering::Equal)
                .then(a.sz_block.cmp(&b.sz_block))
                .then(b.parity.cmp(&a.parity))
        });
        Self {
            block_len,
            levels,
            complete,
        }
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn levels(&self) -> &[Level<T>] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn weights(&self) -> Vec<T> {
        self.levels.iter().map(|l| l.weight).collect()
    }

    pub fn total_weight(&self) -> T {
        crate::scalar::pairwise_sum(&self.weights())
    }

    /// Entanglement energies of all levels above the floor, non-decreasing.
    pub fn entanglement_energies(&self) -> Vec<T> {
        self.levels
            .iter()
            .filter_map(|l| l.entanglement_energy())
            .collect()
    }

    /// Index ranges of levels (above the floor) whose weights agree within
    /// relative `rel_tol` of the cluster head.
    pub fn degeneracy_clusters(&self, rel_tol: T) -> Vec<std::ops::Range<usize>> {
        let floor = T::lit(EIGENVALUE_FLOOR);
        let mut out = Vec::new();
        let mut start = 0;
        while start < self.levels.len() && self.levels[start].weight >= floor {
            let head = self.levels[start].weight;
            let mut end = start + 1;
            while end < self.levels.len()
                && self.levels[end].weight >= floor
                && (head - self.levels[end].weight) <= rel_tol * head
            {
                end += 1;
            }
            out.push(start..end);
            start = end;
        }
        out
    }
}
