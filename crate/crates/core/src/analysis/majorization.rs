use std::cmp::Ordering;

use crate::analysis::dead_zone_sign;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Cumulative-sum differences below this are not assigned a sign.
pub const MAJORIZATION_DEAD_ZONE: f64 = 1e-13;

/// `M(k) = Σ_{j<=k} ω_j(g + ε) - Σ_{j<=k} ω_j(g)` and its dead-zoned signs.
#[derive(Debug, Clone, PartialEq)]
pub struct MajorizationColumn<T> {
    pub differences: Vec<T>,
    pub signs: Vec<i8>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MajorizationMap<T> {
    pub sweep: Vec<T>,
    pub columns: Vec<MajorizationColumn<T>>,
    pub dead_zone: T,
}

fn sorted_desc<T: Real>(w: &[T]) -> Vec<T> {
    let mut v = w.to_vec();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    v
}

/// Both spectra are sorted non-increasing and zero-padded to a common length.
/// The last entry compares two totals and is forced to sign 0.
pub fn majorization_column<T: Real>(at: &[T], ahead: &[T], dead_zone: T) -> MajorizationColumn<T> {
    let len = at.len().max(ahead.len());
    let (mut a, mut b) = (sorted_desc(at), sorted_desc(ahead));
    a.resize(len, T::zero());
    b.resize(len, T::zero());
    let (mut ca, mut cb) = (T::zero(), T::zero());
    let mut differences = Vec::with_capacity(len);
    for k in 0..len {
        ca += a[k];
        cb += b[k];
        differences.push(cb - ca);
    }
    let mut signs: Vec<i8> = differences
        .iter()
        .map(|&d| dead_zone_sign(d, dead_zone))
        .collect();
    if let Some(last) = signs.last_mut() {
        *last = 0;
    }
    MajorizationColumn { differences, signs }
}

pub fn majorization_map<T: Real>(
    sweep: &[T],
    pairs: &[(Vec<T>, Vec<T>)],
    dead_zone: T,
) -> Result<MajorizationMap<T>> {
    if sweep.len() != pairs.len() {
        return Err(Error::Mismatch(format!(
            "{} sweep values for {} pairs",
            sweep.len(),
            pairs.len()
        )));
    }
    let columns = pairs
        .iter()
        .map(|(a, b)| majorization_column(a, b, dead_zone))
        .collect();
    Ok(MajorizationMap {
        sweep: sweep.to_vec(),
        columns,
        dead_zone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identical_is_all_zero() {
        let c = majorization_column(&[0.5, 0.3, 0.2], &[0.5, 0.3, 0.2], 1e-13);
        assert!(c.signs.iter().all(|&s| s == 0));
    }

    #[test]
    fn more_ordered_target_is_positive() {
        let c = majorization_column(&[0.6f64, 0.4], &[0.7, 0.3], 1e-13);
        assert_eq!(c.signs, vec![1, 0]);
        assert!((c.differences[0] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn padding_with_zeros() {
        let c = majorization_column(&[0.5, 0.5], &[0.4, 0.3, 0.3], 1e-13);
        assert_eq!(c.differences.len(), 3);
        assert_eq!(c.signs, vec![-1, -1, 0]);
    }

    proptest! {
        #[test]
        fn telescopes_to_zero(a in prop::collection::vec(0.0f64..1.0, 1..20),
                              b in prop::collection::vec(0.0f64..1.0, 1..20)) {
            let na: f64 = a.iter().sum::<f64>().max(1e-9);
            let nb: f64 = b.iter().sum::<f64>().max(1e-9);
            let a: Vec<f64> = a.iter().map(|x| x / na).collect();
            let b: Vec<f64> = b.iter().map(|x| x / nb).collect();
            if (a.iter().sum::<f64>() - 1.0).abs() < 1e-9 && (b.iter().sum::<f64>() - 1.0).abs() < 1e-9 {
                let c = majorization_column(&a, &b, 1e-13);
                prop_assert!(c.differences.last().unwrap().abs() < 1e-12);
                prop_assert_eq!(*c.signs.last().unwrap(), 0);
            }
        }
    }
}
