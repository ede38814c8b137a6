//! Shared numerical tolerances.
//!
//! The geometric tolerance is process-wide and can be changed once at start-up
//! (the CLI does this from `--tol`). Everything else is a fixed constant.

use std::sync::atomic::{AtomicU64, Ordering};

/// Default geometric tolerance in plane units. Coordinates are O(1).
pub const DEFAULT_GEOMETRIC: f64 = 1e-10;

/// Closure tolerance for periodic billiard orbits, in the (position, direction)
/// product metric.
pub const ORBIT_CLOSURE: f64 = 1e-9;

/// Cap on bisection steps anywhere in the crate.
pub const BISECTION_DEPTH: usize = 200;

/// Threshold below which a direction counts as tangential to the boundary.
pub const ENTRY_ANGLE: f64 = 1e-12;

/// Residual threshold for accepting a network as stationary.
pub const STATIONARY: f64 = 1e-9;

static GEOMETRIC_BITS: AtomicU64 = AtomicU64::new(0x3DDB_7CDF_D9D7_BDBB); // 1e-10

/// Current geometric tolerance.
pub fn geometric() -> f64 {
    f64::from_bits(GEOMETRIC_BITS.load(Ordering::Relaxed))
}

/// Overrides the geometric tolerance. Non-positive or non-finite values are ignored.
pub fn set_geometric(tol: f64) {
    if tol.is_finite() && tol > 0.0 {
        GEOMETRIC_BITS.store(tol.to_bits(), Ordering::Relaxed);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_bits_decode_to_1e_10() {
        assert_eq!(f64::from_bits(0x3DDB_7CDF_D9D7_BDBB), DEFAULT_GEOMETRIC);
        assert_eq!(geometric(), DEFAULT_GEOMETRIC);
    }
}
