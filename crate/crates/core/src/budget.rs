use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// Default node limit for the exhaustive searches.
pub const DEFAULT_NODE_LIMIT: u64 = 50_000_000;

/// Node counter shared by all branches of one search.
#[derive(Debug)]
pub struct SearchBudget {
    limit: u64,
    used: AtomicU64,
}

impl SearchBudget {
    pub fn new(limit: u64) -> Self {
        Self { limit, used: AtomicU64::new(0) }
    }

    pub fn unlimited() -> Self {
        Self::new(u64::MAX)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    pub fn tick(&self) -> Result<()> {
        self.charge(1)
    }

    pub fn charge(&self, nodes: u64) -> Result<()> {
        let before = self.used.fetch_add(nodes, Ordering::Relaxed);
        if before.saturating_add(nodes) > self.limit {
            Err(Error::SearchBudgetExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self::new(DEFAULT_NODE_LIMIT)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exceeding_the_limit_fails() {
        let b = SearchBudget::new(3);
        assert!(b.tick().is_ok());
        assert!(b.charge(2).is_ok());
        assert_eq!(b.tick(), Err(Error::SearchBudgetExceeded { limit: 3 }));
    }
}
