//! Resource guard for the enumeration entry points.

use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

/// Raised when an enumeration visits more items than its [`Budget`] allows.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("enumeration budget exhausted (limit {limit} items)")]
pub struct BudgetExceeded {
    pub limit: u64,
}

/// A shared item-count ceiling.
///
/// Enumerations charge the budget once per candidate they visit, so a single
/// `Budget` bounds the total work of a whole pipeline even when intermediate
/// results are discarded. Charging is atomic; a `Budget` may be shared across
/// threads.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: AtomicU64,
}

impl Budget {
    /// Default ceiling, generous for desk-scale runs.
    pub const DEFAULT_LIMIT: u64 = 100_000_000;

    pub fn new(limit: u64) -> Self {
        Budget {
            limit,
            used: AtomicU64::new(0),
        }
    }

    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    pub fn charge(&self, amount: u64) -> Result<(), BudgetExceeded> {
        let before = self.used.fetch_add(amount, Ordering::Relaxed);
        if before.saturating_add(amount) > self.limit {
            Err(BudgetExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(Self::DEFAULT_LIMIT)
    }
}
