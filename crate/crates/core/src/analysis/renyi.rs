use std::cmp::Ordering;

use crate::backend::Backend;
use crate::error::{Error, Result};
use crate::scalar::{pairwise_sum, Real};
use crate::spectrum::EIGENVALUE_FLOOR;

/// Normalization tolerance for probability vectors.
pub const NORM_TOL: f64 = 1e-10;

/// Order of a Renyi entropy. `Finite(1)` is treated as von Neumann.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RenyiOrder<T> {
    /// `α -> 0⁺`: log of the number of weights above the rank floor.
    RankLimit,
    Finite(T),
    VonNeumann,
    Infinity,
}

impl<T: Real> RenyiOrder<T> {
    /// Numeric position on the α axis (`0`, `α`, `1`, `+∞`).
    pub fn position(&self) -> f64 {
        match *self {
            RenyiOrder::RankLimit => 0.0,
            RenyiOrder::Finite(a) => a.as_f64(),
            RenyiOrder::VonNeumann => 1.0,
            RenyiOrder::Infinity => f64::INFINITY,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            RenyiOrder::RankLimit => "0+".into(),
            RenyiOrder::Finite(a) => format!("{:.16e}", a.as_f64()),
            RenyiOrder::VonNeumann => "1".into(),
            RenyiOrder::Infinity => "inf".into(),
        }
    }

    pub fn is_valid(&self) -> bool {
        match *self {
            RenyiOrder::Finite(a) => a > T::zero() && a.is_finite(),
            _ => true,
        }
    }
}

/// `count` log-spaced finite orders on `[lo, hi]` plus the `α = 1` and
/// `α = ∞` sentinels, sorted along the α axis.
pub fn log_spaced_orders<T: Real>(count: usize, lo: f64, hi: f64) -> Vec<RenyiOrder<T>> {
    let mut orders: Vec<RenyiOrder<T>> = match count {
        0 => Vec::new(),
        1 => vec![RenyiOrder::Finite(T::lit(lo))],
        _ => {
            let (l0, l1) = (lo.log10(), hi.log10());
            (0..count)
                .map(|i| {
                    let t = l0 + (l1 - l0) * i as f64 / (count - 1) as f64;
                    RenyiOrder::Finite(T::lit(10f64.powf(t)))
                })
                .collect()
        }
    };
    orders.push(RenyiOrder::VonNeumann);
    orders.push(RenyiOrder::Infinity);
    orders.sort_by(|a, b| {
        a.position()
            .partial_cmp(&b.position())
            .unwrap_or(Ordering::Equal)
    });
    orders
}

/// 200 orders on `[1e-2, 1e3]` plus sentinels.
pub fn default_orders<T: Real>() -> Vec<RenyiOrder<T>> {
    log_spaced_orders(200, 1e-2, 1e3)
}

fn check_normalized<T: Real>(weights: &[T]) -> Result<()> {
    let total = pairwise_sum(weights);
    if (total - T::one()).abs() > T::tol(NORM_TOL) || weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::Unnormalized(total.as_f64()));
    }
    Ok(())
}

/// `S_α = ln(Σ ω^α) / (1 - α)` and its limits. Weights below
/// [`EIGENVALUE_FLOOR`] are treated as zero.
pub fn renyi_entropy<T: Real>(weights: &[T], order: RenyiOrder<T>) -> Result<T> {
    check_normalized(weights)?;
    renyi_unchecked(weights, order)
}

pub(crate) fn renyi_unchecked<T: Real>(weights: &[T], order: RenyiOrder<T>) -> Result<T> {
    // weights under the floor are numerical zeros; at small α their powers
    // would otherwise dominate the trace
    let floor = T::lit(EIGENVALUE_FLOOR);
    let positive: Vec<T> = weights.iter().copied().filter(|&w| w >= floor).collect();
    let top = positive.iter().copied().fold(T::zero(), |a, b| a.max(b));
    if top <= T::zero() {
        return Err(Error::Unnormalized(0.0));
    }
    match order {
        RenyiOrder::RankLimit => {
            let rank = positive.len().max(1);
            Ok(T::lit(rank as f64).ln())
        }
        RenyiOrder::Infinity => Ok(-top.ln()),
        RenyiOrder::VonNeumann => {
            let terms: Vec<T> = positive.iter().map(|&w| -w * w.ln()).collect();
            Ok(pairwise_sum(&terms))
        }
        RenyiOrder::Finite(a) if a == T::one() => renyi_unchecked(weights, RenyiOrder::VonNeumann),
        RenyiOrder::Finite(a) => {
            if !(a > T::zero()) || !a.is_finite() {
                return Err(Error::InvalidOrder(a.as_f64()));
            }
            // log-sum-exp around the largest weight so α = 10³ does not underflow
            let log_top = top.ln();
            let terms: Vec<T> = positive
                .iter()
                .map(|&w| (a * (w.ln() - log_top)).exp())
                .collect();
            let log_trace = a * log_top + pairwise_sum(&terms).ln();
            Ok(log_trace / (T::one() - a))
        }
    }
}

/// Which solver produced a set of entropies.
#[derive(Debug, Clone, PartialEq)]
pub struct RenyiGrid<T> {
    pub orders: Vec<RenyiOrder<T>>,
    pub values: Vec<T>,
    pub backend: Backend,
}

impl<T: Real> RenyiGrid<T> {
    pub fn from_weights(weights: &[T], orders: &[RenyiOrder<T>], backend: Backend) -> Result<Self> {
        check_normalized(weights)?;
        let values = orders
            .iter()
            .map(|&o| renyi_unchecked(weights, o))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            orders: orders.to_vec(),
            values,
            backend,
        })
    }

    pub fn value(&self, order: RenyiOrder<T>) -> Option<T> {
        self.orders
            .iter()
            .position(|&o| o == order)
            .map(|i| self.values[i])
    }

    /// Largest increase between consecutive orders (`<= 0` for a valid grid).
    pub fn max_increase(&self) -> T {
        self.values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(T::lit(f64::NEG_INFINITY), |a, b| a.max(b))
    }
}

/// `W = 4 Σ ω²`, equal to `4 exp(-S_2)`.
pub fn purity_w<T: Real>(weights: &[T]) -> Result<T> {
    check_normalized(weights)?;
    let sq: Vec<T> = weights.iter().map(|&w| w * w).collect();
    Ok(T::lit(4.0) * pairwise_sum(&sq))
}

/// Schmidt gap `ω₀ - ω₁`.
pub fn schmidt_gap<T: Real>(weights: &[T]) -> Result<T> {
    let floor = T::lit(EIGENVALUE_FLOOR);
    let mut above: Vec<T> = weights.iter().copied().filter(|&w| w >= floor).collect();
    if above.len() < 2 {
        return Err(Error::TooFew {
            needed: 2,
            got: above.len(),
        });
    }
    above.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    Ok(above[0] - above[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const LN4: f64 = 1.386_294_361_119_890_6;

    #[test]
    fn flat_spectrum_is_ln4_for_every_order() {
        let w = [0.25; 4];
        for o in default_orders::<f64>()
            .into_iter()
            .chain([RenyiOrder::RankLimit])
        {
            assert!((renyi_entropy(&w, o).unwrap() - LN4).abs() < 1e-12, "{o:?}");
        }
    }

    #[test]
    fn pure_state_has_zero_entropy() {
        let w = [1.0, 0.0, 0.0];
        for o in [
            RenyiOrder::Finite(0.5),
            RenyiOrder::VonNeumann,
            RenyiOrder::Infinity,
            RenyiOrder::RankLimit,
        ] {
            assert_eq!(renyi_entropy(&w, o).unwrap(), 0.0);
        }
    }

    #[test]
    fn min_entropy_definition() {
        let s = renyi_entropy(&[0.9, 0.1], RenyiOrder::Infinity).unwrap();
        assert_eq!(s, -(0.9f64).ln());
    }

    #[test]
    fn errors() {
        assert!(matches!(
            renyi_entropy(&[0.5, 0.4], RenyiOrder::VonNeumann),
            Err(Error::Unnormalized(_))
        ));
        assert!(matches!(
            renyi_entropy(&[0.5, 0.5], RenyiOrder::Finite(-1.0)),
            Err(Error::InvalidOrder(_))
        ));
        assert!(matches!(
            renyi_entropy(&[0.5, 0.5], RenyiOrder::Finite(0.0)),
            Err(Error::InvalidOrder(_))
        ));
    }

    #[test]
    fn order_grid_layout() {
        let g = default_orders::<f64>();
        assert_eq!(g.len(), 202);
        assert_eq!(g[0], RenyiOrder::Finite(1e-2));
        assert_eq!(*g.last().unwrap(), RenyiOrder::Infinity);
        assert!(g.windows(2).all(|w| w[0].position() < w[1].position()));
        match g[200] {
            RenyiOrder::Finite(a) => assert!((a - 1e3).abs() < 1e-9),
            _ => panic!(),
        }
    }

    #[test]
    fn purity_and_gap_examples() {
        assert_eq!(purity_w(&[0.25; 4]).unwrap(), 1.0);
        assert_eq!(purity_w(&[1.0]).unwrap(), 4.0);
        assert_eq!(schmidt_gap(&[0.25; 4]).unwrap(), 0.0);
        assert!((schmidt_gap(&[0.5f64, 0.3, 0.2]).unwrap() - 0.2).abs() < 1e-15);
        assert!(schmidt_gap(&[1.0]).is_err());
        assert!(schmidt_gap(&[1.0, 1e-15]).is_err());
    }

    #[test]
    fn generic_over_f32() {
        let s = renyi_entropy(&[0.25f32; 4], RenyiOrder::Finite(2.0)).unwrap();
        assert!((s - LN4 as f32).abs() < 1e-6);
    }

    fn spectrum() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(1e-6f64..1.0, 2..24).prop_map(|v| {
            let s: f64 = v.iter().sum();
            let mut w: Vec<f64> = v.iter().map(|x| x / s).collect();
            w.sort_by(|a, b| b.partial_cmp(a).unwrap());
            w
        })
    }

    proptest! {
        #[test]
        fn entropy_is_non_increasing_in_order(w in spectrum()) {
            let g = RenyiGrid::from_weights(&w, &default_orders(), Backend::ExactDiag).unwrap();
            prop_assert!(g.max_increase() <= 1e-12);
            prop_assert!((g.value(RenyiOrder::Infinity).unwrap() + w[0].ln()).abs() < 1e-14);
        }

        #[test]
        fn purity_is_exp_of_collision_entropy(w in spectrum()) {
            let s2 = renyi_entropy(&w, RenyiOrder::Finite(2.0)).unwrap();
            let big_w = purity_w(&w).unwrap();
            prop_assert!(big_w > 0.0 && big_w <= 4.0 + 1e-12);
            prop_assert!((-(big_w / 4.0).ln() - s2).abs() < 1e-12);
        }

        #[test]
        fn near_one_slope_is_half_log_variance(w in spectrum()) {
            // S_{1+h} = S_1 - (h/2) Var_ω(ln ω) + O(h²)
            let h = 1e-4;
            let sv = renyi_entropy(&w, RenyiOrder::VonNeumann).unwrap();
            let mean: f64 = w.iter().map(|x| x * x.ln()).sum();
            let var: f64 = w.iter().map(|x| x * (x.ln() - mean).powi(2)).sum();
            for sgn in [1.0, -1.0] {
                let s = renyi_entropy(&w, RenyiOrder::Finite(1.0 + sgn * h)).unwrap();
                let predicted = sv - sgn * h * var / 2.0;
                prop_assert!((s - predicted).abs() < 1e-6 * (1.0 + var * var), "{s} vs {predicted}");
            }
        }
    }
}
