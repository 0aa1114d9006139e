//! Enumeration guards.
//!
//! Every operation that enumerates a combinatorial family checks the family
//! size against a limit before allocating anything. The environment variable
//! `GRPD_GUARD_OVERRIDE` (a single integer) raises every limit to at least
//! that value for large runs; it never lowers a limit.

use crate::error::{Error, Result};

/// Fiber product bound for section enumeration.
pub const SECTION_PRODUCT: u128 = 1_000_000;
/// Path count bound for window enumeration.
pub const WINDOW_PATHS: u128 = 100_000;
/// Box size bound (2B+1)^dim for integer witness search.
pub const WITNESS_BOX: u128 = 10_000_000;
/// Point count bound for exhaustive subset enumeration (2^n subsets).
pub const SUBSET_POINTS: u128 = 20;
/// Point count bound for brute-force homology.
pub const BRUTE_POINTS: u128 = 12;

fn override_value() -> Option<u128> {
    std::env::var("GRPD_GUARD_OVERRIDE")
        .ok()
        .and_then(|s| s.trim().parse::<u128>().ok())
}

/// Effective limit: the default, raised by the override when one is set.
pub fn limit(default: u128) -> u128 {
    match override_value() {
        Some(v) => default.max(v),
        None => default,
    }
}

/// Errors when `size` exceeds the effective limit for `default`.
pub fn check(what: &'static str, size: u128, default: u128) -> Result<()> {
    let lim = limit(default);
    if size > lim {
        return Err(Error::Guard {
            what,
            size,
            limit: lim,
        });
    }
    Ok(())
}
