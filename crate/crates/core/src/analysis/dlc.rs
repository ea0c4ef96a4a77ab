use crate::analysis::dead_zone_sign;
use crate::analysis::renyi::{RenyiGrid, RenyiOrder};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Differences of Renyi entropies smaller than this are reported as 0.
pub const DLC_DEAD_ZONE: f64 = 1e-12;

/// Signs of `S_α(g + ε) - S_α(g)`; `signs[i][a]` is sweep point `i`, order `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvertibilityMap<T> {
    pub sweep: Vec<T>,
    pub orders: Vec<RenyiOrder<T>>,
    pub signs: Vec<Vec<i8>>,
    pub dead_zone: T,
}

impl<T: Real> ConvertibilityMap<T> {
    pub fn column(&self, i: usize) -> &[i8] {
        &self.signs[i]
    }
}

/// One α-column of forward-difference signs.
pub fn dlc_column<T: Real>(
    at: &RenyiGrid<T>,
    ahead: &RenyiGrid<T>,
    dead_zone: T,
) -> Result<Vec<i8>> {
    if at.orders != ahead.orders || at.values.len() != ahead.values.len() {
        return Err(Error::Mismatch(
            "Renyi grids differ between g and g + eps".into(),
        ));
    }
    Ok(at
        .values
        .iter()
        .zip(&ahead.values)
        .map(|(&s0, &s1)| dead_zone_sign(s1 - s0, dead_zone))
        .collect())
}

/// Assembles the sign map from `(S(g), S(g + ε))` pairs, one per sweep value.
pub fn dlc_map<T: Real>(
    sweep: &[T],
    pairs: &[(RenyiGrid<T>, RenyiGrid<T>)],
    dead_zone: T,
) -> Result<ConvertibilityMap<T>> {
    if sweep.len() != pairs.len() {
        return Err(Error::Mismatch(format!(
            "{} sweep values for {} pairs",
            sweep.len(),
            pairs.len()
        )));
    }
    let orders = match pairs.first() {
        Some((g, _)) => g.orders.clone(),
        None => Vec::new(),
    };
    let signs = pairs
        .iter()
        .map(|(a, b)| {
            if a.orders != orders {
                return Err(Error::Mismatch(
                    "order grids differ across sweep points".into(),
                ));
            }
            dlc_column(a, b, dead_zone)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvertibilityMap {
        sweep: sweep.to_vec(),
        orders,
        signs,
        dead_zone,
    })
}
