//! Backend-agnostic entanglement analysis: Renyi entropies, differential
//! local convertibility, majorization and catalyst verdicts.

pub mod dlc;
pub mod majorization;
pub mod renyi;
pub mod verdict;

pub use dlc::{dlc_column, dlc_map, ConvertibilityMap, DLC_DEAD_ZONE};
pub use majorization::{
    majorization_column, majorization_map, MajorizationColumn, MajorizationMap,
    MAJORIZATION_DEAD_ZONE,
};
pub use renyi::{
    default_orders, log_spaced_orders, purity_w, renyi_entropy, schmidt_gap, RenyiGrid, RenyiOrder,
};
pub use verdict::{catalyst_verdict, Direction, Evidence, Verdict, VerdictReport};

/// Sign with a symmetric dead zone mapped to 0.
pub fn dead_zone_sign<T: crate::scalar::Real>(x: T, dead_zone: T) -> i8 {
    if x.abs() < dead_zone || x.abs() == T::zero() {
        0
    } else if x > T::zero() {
        1
    } else {
        -1
    }
}
