//! Enumeration guard shared by every exhaustive routine.

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const DEFAULT_GUARD: u128 = 1 << 24;
pub const GUARD_ENV: &str = "TLR_GUARD_MAX";

/// Maximum number of items an exhaustive routine may enumerate.
///
/// Read once from `TLR_GUARD_MAX`, defaulting to 2^24.
pub fn enumeration_guard() -> u128 {
    static GUARD: OnceLock<u128> = OnceLock::new();
    *GUARD.get_or_init(|| {
        std::env::var(GUARD_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u128>().ok())
            .unwrap_or(DEFAULT_GUARD)
    })
}

pub fn check(required: u128) -> Result<()> {
    let guard = enumeration_guard();
    if required > guard {
        Err(Error::GuardExceeded { required, guard })
    } else {
        Ok(())
    }
}

/// `base^exp`, saturating at `u128::MAX`.
pub fn saturating_pow(base: u128, exp: u32) -> u128 {
    base.checked_pow(exp).unwrap_or(u128::MAX)
}
