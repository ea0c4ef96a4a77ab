use crate::error::{Error, Result};
use crate::free_fermion::elliptic::elliptic_e;
use crate::scalar::{pairwise_sum, Real};

/// Momentum offsets `p_k`, `k = 1..M`: `2k` for odd `M` (periodic fermions),
/// `2k + 1` for even `M` (anti-periodic). Phases are `p_k π / M`.
pub fn momentum_offsets(n_cells: usize) -> Vec<usize> {
    let shift = if n_cells % 2 == 1 { 0 } else { 1 };
    (1..=n_cells).map(|k| 2 * k + shift).collect()
}

/// Two-band Bloch data of the Jordan-Wigner fermion chain with `M` cells.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochData<T> {
    pub n_cells: usize,
    pub delta: T,
    pub offsets: Vec<usize>,
    pub rx: Vec<T>,
    pub ry: Vec<T>,
    /// Band energy `R(k) = |R(k)|`; the bands are `±R(k)`.
    pub energy: Vec<T>,
    /// Fermion boundary condition: periodic for odd `M`.
    pub periodic: bool,
}

impl<T: Real> BlochData<T> {
    pub fn new(n_cells: usize, delta: T) -> Self {
        let offsets = momentum_offsets(n_cells);
        let two = T::lit(2.0);
        let (mut rx, mut ry, mut energy) = (Vec::new(), Vec::new(), Vec::new());
        for &p in &offsets {
            let theta = phase::<T>(p, n_cells);
            rx.push(two * (T::one() - delta) + two * (T::one() + delta) * theta.cos());
            ry.push(two * (T::one() + delta) * theta.sin());
            energy.push(band_energy(p, n_cells, delta));
        }
        Self {
            n_cells,
            delta,
            offsets,
            rx,
            ry,
            energy,
            periodic: n_cells % 2 == 1,
        }
    }

    pub fn min_energy(&self) -> T {
        self.energy
            .iter()
            .copied()
            .fold(T::lit(f64::INFINITY), |a, b| a.min(b))
    }
}

/// `p π / M`
pub(crate) fn phase<T: Real>(p: usize, n_cells: usize) -> T {
    T::lit(p as f64) * T::pi() / T::lit(n_cells as f64)
}

fn band_energy<T: Real>(p: usize, n_cells: usize, delta: T) -> T {
    let half = phase::<T>(p, n_cells) / T::lit(2.0);
    let (s, c) = (half.sin(), half.cos());
    T::lit(4.0) * (c * c + delta * delta * s * s).sqrt()
}

/// `R(k) = 4 √(cos²(p_k π/2M) + δ² sin²(p_k π/2M))` for 1-based `k`.
pub fn dispersion<T: Real>(n_cells: usize, delta: T, k: usize) -> T {
    assert!((1..=n_cells).contains(&k), "k = {k} outside 1..={n_cells}");
    band_energy(momentum_offsets(n_cells)[k - 1], n_cells, delta)
}

/// `e₀ = -(1/2M) Σ_k R(k)`, summed pairwise.
pub fn ground_energy_per_site<T: Real>(n_cells: usize, delta: T) -> T {
    let shift = if n_cells % 2 == 1 { 0 } else { 1 };
    let terms: Vec<T> = (1..=n_cells)
        .map(|k| band_energy(2 * k + shift, n_cells, delta))
        .collect();
    -pairwise_sum(&terms) / T::lit(2.0 * n_cells as f64)
}

/// `e₀ = -(4/π) E(1 - δ²)` in the thermodynamic limit.
pub fn ground_energy_thermo<T: Real>(delta: T) -> T {
    let m = (T::one() - delta * delta).max(T::zero());
    -T::lit(4.0) / T::pi() * elliptic_e(m)
}

/// Winding number of `(R_x, R_y)` about the origin: 1 for `δ > 0`, 0 for
/// `δ < 0`.
pub fn winding_number<T: Real>(delta: T) -> Result<u8> {
    if delta == T::zero() {
        return Err(Error::Gapless);
    }
    Ok(if delta > T::zero() { 1 } else { 0 })
}

/// Discretized Berry phase of the lower band on a closed `grid_size`-point
/// loop, `γ = -arg Π ⟨φ(k_i)|φ(k_{i+1})⟩`, reduced to `[-π/2, 3π/2)`.
pub fn berry_phase<T: Real>(delta: T, grid_size: usize) -> Result<T> {
    if delta == T::zero() {
        return Err(Error::Gapless);
    }
    if grid_size < 64 {
        return Err(Error::TooFew {
            needed: 64,
            got: grid_size,
        });
    }
    let two = T::lit(2.0);
    let angle = |i: usize| {
        let k = T::two_pi() * T::lit(i as f64) / T::lit(grid_size as f64);
        let rx = two * (T::one() - delta) + two * (T::one() + delta) * k.cos();
        let ry = two * (T::one() + delta) * k.sin();
        ry.atan2(rx)
    };
    // lower-band eigenvector (1, -e^{iθ})/√2; ⟨φ_i|φ_j⟩ = (1 + e^{i(θ_j - θ_i)})/2
    let (mut re, mut im) = (T::one(), T::zero());
    let mut prev = angle(0);
    for i in 1..=grid_size {
        let cur = angle(i % grid_size);
        let d = cur - prev;
        let (or, oi) = ((T::one() + d.cos()) / two, d.sin() / two);
        let (nr, ni) = (re * or - im * oi, re * oi + im * or);
        let n = (nr * nr + ni * ni).sqrt();
        re = nr / n;
        im = ni / n;
        prev = cur;
    }
    let mut gamma = -im.atan2(re);
    let lo = -T::frac_pi_2();
    while gamma < lo {
        gamma += T::two_pi();
    }
    while gamma >= lo + T::two_pi() {
        gamma -= T::two_pi();
    }
    Ok(gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn offsets() {
        assert_eq!(momentum_offsets(3), vec![2, 4, 6]);
        assert_eq!(momentum_offsets(2), vec![3, 5]);
        assert_eq!(momentum_offsets(1), vec![2]);
    }

    #[test]
    fn dispersion_examples() {
        for m in [3usize, 4, 17] {
            for k in 1..=m {
                assert!((dispersion(m, 1.0f64, k) - 4.0).abs() < 1e-14);
            }
        }
        // p_k/M -> 1 closes the gap at δ = 0
        let m = 1001;
        let closest = (1..=m)
            .map(|k| dispersion(m, 0.0, k))
            .fold(f64::INFINITY, f64::min);
        assert!(closest < 4.0 * PI / m as f64);
        // phase 0 (p = 2M for odd M)
        assert!((dispersion(5, 0.37f64, 5) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn bloch_vector_length_matches_closed_form() {
        for (m, d) in [(4usize, 0.3f64), (7, -0.6), (10, 0.0)] {
            let b = BlochData::new(m, d);
            for i in 0..m {
                let len = (b.rx[i] * b.rx[i] + b.ry[i] * b.ry[i]).sqrt();
                assert!((len - b.energy[i]).abs() < 1e-13);
            }
            assert_eq!(b.periodic, m % 2 == 1);
        }
    }

    #[test]
    fn gapped_away_from_zero_delta() {
        for m in [1usize, 2, 3, 64, 1000, 1_000_000] {
            for d in [-0.9, -0.1, 0.01, 0.5] {
                let min = (1..=m.min(5000))
                    .map(|k| dispersion(m, d, k))
                    .fold(f64::INFINITY, f64::min);
                assert!(min > 0.0);
            }
        }
        let b = BlochData::new(512, 0.3);
        assert!(b.min_energy() >= 4.0 * 0.3 * (511.0 * PI / 1024.0).sin() - 1e-12);
    }

    #[test]
    fn energy_examples() {
        for m in [1usize, 5, 64] {
            assert!((ground_energy_per_site(m, 1.0f64) + 2.0).abs() < 1e-14);
        }
        assert!((ground_energy_thermo(1.0f64) + 2.0).abs() < 1e-15);
        assert!((ground_energy_thermo(0.0f64) + 4.0 / PI).abs() < 1e-15);
        for m in [4usize, 6, 100] {
            for d in [0.2f64, 0.7] {
                assert!(
                    (ground_energy_per_site(m, d) - ground_energy_per_site(m, -d)).abs() < 1e-12
                );
            }
        }
        assert_eq!(ground_energy_thermo(0.3f64), ground_energy_thermo(-0.3f64));
    }

    #[test]
    fn riemann_sum_converges_to_four_over_pi() {
        let e = ground_energy_per_site(1_000_000, 0.0f64);
        assert!((e + 4.0 / PI).abs() < 1e-6);
    }

    #[test]
    fn large_sum_matches_elliptic() {
        let e = ground_energy_per_site(100_000, 0.5f64);
        assert!((e - ground_energy_thermo(0.5)).abs() < 1e-8);
    }

    #[test]
    fn winding() {
        assert_eq!(winding_number(0.3).unwrap(), 1);
        assert_eq!(winding_number(-0.3).unwrap(), 0);
        assert!(matches!(winding_number(0.0), Err(Error::Gapless)));
    }

    #[test]
    fn berry_phase_examples() {
        assert!((berry_phase(0.5f64, 256).unwrap() - PI).abs() < 1e-6);
        assert!(berry_phase(-0.5f64, 256).unwrap().abs() < 1e-6);
        let coarse = berry_phase(0.5f64, 256).unwrap();
        let fine = berry_phase(0.5f64, 1024).unwrap();
        assert!((coarse - fine).abs() < 1e-8);
        assert!(berry_phase(0.0, 256).is_err());
        assert!(berry_phase(0.5, 16).is_err());
    }
}
