//! Hard caps on brute-force enumeration.

use thiserror::Error;

/// Default cap on primitive enumeration steps per call.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("enumeration budget exceeded in {what}: needs {needed} steps, cap is {limit}")]
pub struct BudgetExceeded {
    pub what: &'static str,
    pub needed: u128,
    pub limit: u64,
}

/// A per-call cap, checked before an enumeration starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    limit: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            limit: DEFAULT_BUDGET,
        }
    }
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Self { limit }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn check(&self, what: &'static str, needed: u128) -> Result<(), BudgetExceeded> {
        if needed <= self.limit as u128 {
            Ok(())
        } else {
            Err(BudgetExceeded {
                what,
                needed,
                limit: self.limit,
            })
        }
    }

    /// Checks `q^exp` steps without overflowing.
    pub fn check_power(&self, what: &'static str, q: u32, exp: usize) -> Result<(), BudgetExceeded> {
        self.check(what, saturating_pow(q, exp))
    }
}

pub fn saturating_pow(q: u32, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(q as u128);
    }
    acc
}
