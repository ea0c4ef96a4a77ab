//! Correlation-function matrix `C_{mn} = ⟨c_m c_n†⟩` of a block of the
//! half-filled free-fermion chain, and everything derived from its
//! occupation spectrum.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use nalgebra::{DMatrix, DVector};

use crate::analysis::RenyiOrder;
use crate::chain::{HalfInt, Parity};
use crate::error::{Error, Result};
use crate::free_fermion::bloch::{momentum_offsets, phase};
use crate::linalg::symmetric_eigen;
use crate::scalar::{pairwise_sum, Real};
use crate::spectrum::{EntanglementSpectrum, Level, EIGENVALUE_FLOOR};

/// Cell count standing in for the infinite chain.
pub const THERMO_CELLS: usize = 4096;

/// Largest block whose full `2^{L_A}` spectrum is generated by default.
pub const FULL_SPECTRUM_MAX_BLOCK: usize = 20;

/// Levels generated for larger blocks.
pub const DEFAULT_TOP_LEVELS: usize = 4096;

/// Occupations closer than this to 1/2 are edge-mode candidates.
pub const EDGE_WINDOW: f64 = 0.2;

/// Levels compared by the edge factorization check.
pub const FACTORIZATION_LEVELS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainLength {
    /// `M` unit cells (`N = 2M` sites).
    Finite(usize),
    /// Infinite chain, evaluated as a [`THERMO_CELLS`]-cell momentum sum.
    Thermodynamic,
}

impl ChainLength {
    pub fn cells(self) -> usize {
        match self {
            ChainLength::Finite(m) => m,
            ChainLength::Thermodynamic => THERMO_CELLS,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CorrelationMatrixBlock<T> {
    pub length: ChainLength,
    pub delta: T,
    pub matrix: DMatrix<T>,
    /// Eigenvalues `q_l` of `C`, ascending, clamped to `[0, 1]`. A mode is
    /// empty with probability `q_l`.
    pub occupations: Vec<T>,
    /// Eigenmodes as columns, in the order of `occupations`.
    pub modes: DMatrix<T>,
    /// Block-inversion eigenvalue of each mode.
    pub parities: Vec<Parity>,
}

impl<T: Real> CorrelationMatrixBlock<T> {
    pub fn block_len(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Real-space kernels `(C_aa, C_ab, C_ba)` at cell separation `d = m - n`.
fn kernels<T: Real>(n_cells: usize, delta: T, max_sep: usize) -> Vec<[T; 3]> {
    let two = T::lit(2.0);
    let modes: Vec<(T, T, T)> = momentum_offsets(n_cells)
        .into_iter()
        .map(|p| {
            let theta = phase::<T>(p, n_cells);
            let rx = two * (T::one() - delta) + two * (T::one() + delta) * theta.cos();
            let ry = two * (T::one() + delta) * theta.sin();
            let r = (rx * rx + ry * ry).sqrt();
            if r > T::zero() {
                (theta, rx / r, ry / r)
            } else {
                (theta, T::zero(), T::zero())
            }
        })
        .collect();
    let norm = T::lit(2.0 * n_cells as f64);
    let sum =
        |f: &dyn Fn(&(T, T, T)) -> T| pairwise_sum(&modes.iter().map(f).collect::<Vec<_>>()) / norm;
    (0..=2 * max_sep)
        .map(|i| {
            let d = T::lit(i as f64 - max_sep as f64);
            let aa = sum(&|&(t, _, _)| (t * d).cos());
            let ab = sum(&|&(t, x, y)| (t * d).cos() * x + (t * d).sin() * y);
            let ba = sum(&|&(t, x, y)| (t * d).cos() * x - (t * d).sin() * y);
            [aa, ab, ba]
        })
        .collect()
}

/// Basis of block inversion eigenvectors, even ones first.
fn inversion_frame<T: Real>(len: usize) -> DMatrix<T> {
    let r = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    let half = len / 2;
    let mut u = DMatrix::zeros(len, len);
    for i in 0..half {
        u[(i, i)] = r;
        u[(len - 1 - i, i)] = r;
        u[(i, half + i)] = r;
        u[(len - 1 - i, half + i)] = -r;
    }
    u
}

/// Block `A` of `block_len` sites (sublattice `a` on even, `b` on odd sites)
/// and its occupation spectrum. Modes are resolved by block-inversion parity.
pub fn correlation_matrix<T: Real>(
    length: ChainLength,
    delta: T,
    block_len: usize,
) -> Result<CorrelationMatrixBlock<T>> {
    let n_cells = length.cells();
    if n_cells == 0 || block_len == 0 || block_len % 2 == 1 || block_len > 2 * n_cells {
        return Err(Error::InvalidChain(format!(
            "block of {block_len} sites in a chain of {n_cells} cells"
        )));
    }
    let cells = block_len / 2;
    let ker = kernels(n_cells, delta, cells - 1);
    let at = |m: usize, n: usize| &ker[m + cells - 1 - n];
    let matrix = DMatrix::from_fn(block_len, block_len, |i, j| {
        let k = at(i / 2, j / 2);
        match (i % 2, j % 2) {
            (0, 1) => k[1],
            (1, 0) => k[2],
            _ => k[0],
        }
    });

    let u = inversion_frame::<T>(block_len);
    let rotated = u.transpose() * &matrix * &u;
    let half = cells;
    let mixing = rotated.view((0, half), (half, half)).amax();
    if mixing > T::tol(1e-10) {
        return Err(Error::BrokenInversion(mixing.as_f64()));
    }
    let mut found: Vec<(T, DVector<T>, Parity)> = Vec::with_capacity(block_len);
    for (offset, parity) in [(0, Parity::Even), (half, Parity::Odd)] {
        let sub = rotated.view((offset, offset), (half, half)).into_owned();
        let (values, vectors) = symmetric_eigen(sub);
        let frame = u.columns(offset, half);
        for c in 0..half {
            let q = values[c].max(T::zero()).min(T::one());
            found.push((q, &frame * vectors.column(c), parity));
        }
    }
    found.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap_or(Ordering::Equal)
            .then(a.2.cmp(&b.2))
    });
    let occupations = found.iter().map(|f| f.0).collect();
    let parities = found.iter().map(|f| f.2).collect();
    let modes = DMatrix::from_columns(&found.into_iter().map(|f| f.1).collect::<Vec<_>>());
    Ok(CorrelationMatrixBlock {
        length,
        delta,
        matrix,
        occupations,
        modes,
        parities,
    })
}

/// `S_α = 1/(1-α) Σ ln[q^α + (1-q)^α]` with its `α → 1`, `α → ∞` and
/// effective-rank limits. Modes within [`EIGENVALUE_FLOOR`] of 0 or 1 count
/// as pure.
pub fn renyi_from_occupations<T: Real>(q: &[T], order: RenyiOrder<T>) -> Result<T> {
    let floor = T::lit(EIGENVALUE_FLOOR);
    let clamp = |x: T| {
        if x < floor {
            T::zero()
        } else if x > T::one() - floor {
            T::one()
        } else {
            x
        }
    };
    let terms: Vec<T> = match order {
        RenyiOrder::RankLimit => q
            .iter()
            .map(|&x| {
                let x = clamp(x);
                if x > T::zero() && x < T::one() {
                    T::lit(2.0).ln()
                } else {
                    T::zero()
                }
            })
            .collect(),
        RenyiOrder::Infinity => q
            .iter()
            .map(|&x| -clamp(x).max(T::one() - clamp(x)).ln())
            .collect(),
        RenyiOrder::VonNeumann => q.iter().map(|&x| binary_entropy(clamp(x))).collect(),
        RenyiOrder::Finite(a) if a == T::one() => {
            q.iter().map(|&x| binary_entropy(clamp(x))).collect()
        }
        RenyiOrder::Finite(a) => {
            if !(a > T::zero()) || !a.is_finite() {
                return Err(Error::InvalidOrder(a.as_f64()));
            }
            q.iter()
                .map(|&x| {
                    let x = clamp(x);
                    let (hi, lo) = (x.max(T::one() - x), x.min(T::one() - x));
                    // ln(hi^α + lo^α) without underflow at large α
                    let tail = if lo > T::zero() {
                        (a * (lo.ln() - hi.ln())).exp()
                    } else {
                        T::zero()
                    };
                    (a * hi.ln() + tail.ln_1p()) / (T::one() - a)
                })
                .collect()
        }
    };
    Ok(pairwise_sum(&terms))
}

fn binary_entropy<T: Real>(x: T) -> T {
    let h = |p: T| {
        if p > T::zero() {
            -p * p.ln()
        } else {
            T::zero()
        }
    };
    h(x) + h(T::one() - x)
}

/// One factor per mode: the dominant choice, its log weight and the cost
/// `ln(max/min)` of flipping it.
struct ModeChoice<T> {
    occupied: bool,
    log_weight: T,
    flip_cost: T,
}

fn mode_choices<T: Real>(q: &[T]) -> Vec<ModeChoice<T>> {
    q.iter()
        .map(|&x| {
            let empty = x;
            let full = T::one() - x;
            let (occupied, hi, lo) = if full > empty {
                (true, full, empty)
            } else {
                (false, empty, full)
            };
            let flip_cost = if lo > T::zero() {
                hi.ln() - lo.ln()
            } else {
                T::lit(f64::INFINITY)
            };
            ModeChoice {
                occupied,
                log_weight: hi.ln(),
                flip_cost,
            }
        })
        .collect()
}

fn level_label(occupied: usize, parity: Parity, block_len: usize) -> (HalfInt, Parity) {
    let reorder = (occupied * occupied.saturating_sub(1) / 2) % 2 == 1;
    (
        HalfInt::from_up_count(occupied, block_len),
        parity.flip_if(reorder),
    )
}

#[derive(PartialEq)]
struct Candidate<T> {
    cost: T,
    set: Vec<usize>,
}

impl<T: PartialOrd> Eq for Candidate<T> {}

impl<T: PartialOrd> PartialOrd for Candidate<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: PartialOrd> Ord for Candidate<T> {
    // reversed so BinaryHeap pops the cheapest set; ties by set for determinism
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .partial_cmp(&self.cost)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.set.cmp(&self.set))
    }
}

/// Subsets of `costs` (sorted ascending, all finite) in non-decreasing total
/// cost, at most `limit` of them, the empty set first.
fn cheapest_subsets<T: Real>(costs: &[T], limit: usize) -> Vec<(T, Vec<usize>)> {
    let mut out = vec![(T::zero(), Vec::new())];
    let mut heap = BinaryHeap::new();
    if !costs.is_empty() {
        heap.push(Candidate {
            cost: costs[0],
            set: vec![0],
        });
    }
    while out.len() < limit {
        let Some(Candidate { cost, set }) = heap.pop() else {
            break;
        };
        let last = *set.last().unwrap();
        if last + 1 < costs.len() {
            let mut grow = set.clone();
            grow.push(last + 1);
            heap.push(Candidate {
                cost: cost + costs[last + 1],
                set: grow,
            });
            let mut shift = set.clone();
            *shift.last_mut().unwrap() = last + 1;
            heap.push(Candidate {
                cost: cost - costs[last] + costs[last + 1],
                set: shift,
            });
        }
        out.push((cost, set));
    }
    out
}

/// Labeled spectrum `Π_l [q_l or 1-q_l]`. Blocks up to
/// [`FULL_SPECTRUM_MAX_BLOCK`] sites are enumerated fully unless `max_levels`
/// is smaller; larger blocks yield the `max_levels` (default
/// [`DEFAULT_TOP_LEVELS`]) largest levels.
pub fn spectrum_from_occupations<T: Real>(
    block: &CorrelationMatrixBlock<T>,
    max_levels: Option<usize>,
) -> EntanglementSpectrum<T> {
    let len = block.block_len();
    let choices = mode_choices(&block.occupations);
    let total: Option<usize> = (len < usize::BITS as usize - 1).then(|| 1usize << len);
    let limit = match (max_levels, total) {
        (Some(k), Some(t)) => k.min(t),
        (Some(k), None) => k,
        (None, Some(t)) if len <= FULL_SPECTRUM_MAX_BLOCK => t,
        (None, _) => DEFAULT_TOP_LEVELS,
    };

    let base_log: T = pairwise_sum(&choices.iter().map(|c| c.log_weight).collect::<Vec<_>>());
    let base_occupied = choices.iter().filter(|c| c.occupied).count();
    let base_parity = choices
        .iter()
        .zip(&block.parities)
        .filter(|(c, _)| c.occupied)
        .fold(Parity::Even, |acc, (_, &p)| acc * p);

    // flippable modes by ascending cost; infinite-cost flips give zero weight
    let mut order: Vec<usize> = (0..len)
        .filter(|&l| choices[l].flip_cost.is_finite())
        .collect();
    order.sort_by(|&a, &b| {
        choices[a]
            .flip_cost
            .partial_cmp(&choices[b].flip_cost)
            .unwrap()
            .then(a.cmp(&b))
    });
    let costs: Vec<T> = order.iter().map(|&l| choices[l].flip_cost).collect();

    let levels: Vec<Level<T>> = cheapest_subsets(&costs, limit)
        .into_iter()
        .map(|(cost, set)| {
            let mut occupied = base_occupied;
            let mut parity = base_parity;
            for &i in &set {
                let l = order[i];
                if choices[l].occupied {
                    occupied -= 1;
                } else {
                    occupied += 1;
                }
                parity = parity * block.parities[l];
            }
            let (sz_block, parity) = level_label(occupied, parity, len);
            Level {
                weight: (base_log - cost).exp(),
                sz_block,
                parity,
            }
        })
        .collect();
    let complete = total.is_some_and(|t| levels.len() == t);
    EntanglementSpectrum::new(len, levels, complete)
}

#[derive(Debug, Clone)]
pub struct EdgeModeReport<T> {
    /// Upper occupation of the near-1/2 pair.
    pub q1: T,
    pub q2: T,
    /// `λ = q₁ - 1/2`.
    pub lambda: T,
    /// `ε₁ = ln(q₁/(1-q₁)) ≥ 0`.
    pub epsilon1: T,
    pub epsilon2: T,
    pub left: Vec<T>,
    pub right: Vec<T>,
    /// Largest deviation between the edge-factorized and the exact spectrum
    /// over the leading [`FACTORIZATION_LEVELS`] levels.
    pub factorization_error: T,
    /// `(ω₀ - ω₃)/ω₀`; zero for an exact four-fold degeneracy.
    pub quartet_splitting: T,
}

/// Locates the two modes nearest half filling and compares the spectrum with
/// a bulk state times two free edge qubits of weights `1/2 ± λ`.
pub fn edge_mode_report<T: Real>(block: &CorrelationMatrixBlock<T>) -> Result<EdgeModeReport<T>> {
    let half = T::lit(0.5);
    let len = block.block_len();
    let mut idx: Vec<usize> = (0..len).collect();
    idx.sort_by(|&a, &b| {
        let da = (block.occupations[a] - half).abs();
        let db = (block.occupations[b] - half).abs();
        da.partial_cmp(&db).unwrap().then(a.cmp(&b))
    });
    let nearest = (block.occupations[idx[0]] - half).abs();
    if nearest >= T::lit(EDGE_WINDOW) || len < 2 {
        return Err(Error::NoEdgeModes {
            distance: nearest.as_f64(),
        });
    }
    let (mut i1, mut i2) = (idx[0], idx[1]);
    if block.occupations[i2] > block.occupations[i1] {
        std::mem::swap(&mut i1, &mut i2);
    }
    let (q1, q2) = (block.occupations[i1], block.occupations[i2]);
    let lambda = q1 - half;
    let log_odds = |q: T| q.ln() - (T::one() - q).ln();

    let r = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    let (u1, u2) = (block.modes.column(i1), block.modes.column(i2));
    let fix_sign = |mut v: Vec<T>| {
        if let Some(first) = v.iter().find(|x| x.abs() > T::lit(1e-12)) {
            if *first < T::zero() {
                v.iter_mut().for_each(|x| *x = -*x);
            }
        }
        v
    };
    let u1 = fix_sign(u1.iter().copied().collect());
    let u2 = fix_sign(u2.iter().copied().collect());
    let left = fix_sign(u1.iter().zip(&u2).map(|(&a, &b)| (a + b) * r).collect());
    let right = fix_sign(u1.iter().zip(&u2).map(|(&a, &b)| (b - a) * r).collect());

    let exact = spectrum_from_occupations(block, Some(FACTORIZATION_LEVELS)).weights();
    let bulk_q: Vec<T> = (0..len)
        .filter(|&l| l != i1 && l != i2)
        .map(|l| block.occupations[l])
        .collect();
    let bulk = spectrum_from_occupations(
        &CorrelationMatrixBlock {
            length: block.length,
            delta: block.delta,
            matrix: DMatrix::zeros(bulk_q.len(), bulk_q.len()),
            occupations: bulk_q.clone(),
            modes: DMatrix::zeros(bulk_q.len(), bulk_q.len()),
            parities: vec![Parity::Even; bulk_q.len()],
        },
        Some(FACTORIZATION_LEVELS),
    )
    .weights();
    let (hi, lo) = (half + lambda.abs(), half - lambda.abs());
    let mut rebuilt: Vec<T> = bulk
        .iter()
        .flat_map(|&w| [w * hi * hi, w * hi * lo, w * lo * hi, w * lo * lo])
        .collect();
    rebuilt.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let factorization_error = exact
        .iter()
        .zip(&rebuilt)
        .map(|(&a, &b)| (a - b).abs())
        .fold(T::zero(), |a, b| a.max(b));
    let quartet_splitting = if exact.len() >= 4 {
        (exact[0] - exact[3]) / exact[0]
    } else {
        T::zero()
    };

    Ok(EdgeModeReport {
        q1,
        q2,
        lambda,
        epsilon1: log_odds(q1),
        epsilon2: log_odds(q2),
        left,
        right,
        factorization_error,
        quartet_splitting,
    })
}
