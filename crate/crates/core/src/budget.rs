//! Memory budget for operations that materialize words of length `k^m`.

use crate::error::{GtmError, Result};

/// Environment variable overriding the default term budget.
pub const BUDGET_ENV: &str = "GTM_MAX_TERMS";

/// Default number of sequence terms a single operation may materialize.
pub const DEFAULT_MAX_TERMS: u64 = 1 << 28;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_terms: u64,
}

impl Budget {
    pub const fn new(max_terms: u64) -> Self {
        Self { max_terms }
    }

    /// Reads [`BUDGET_ENV`], falling back to [`DEFAULT_MAX_TERMS`] when unset or unparsable.
    pub fn from_env() -> Self {
        let max_terms = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_TERMS);
        Self { max_terms }
    }

    pub fn check(&self, what: &'static str, requested: u128) -> Result<()> {
        if requested > u128::from(self.max_terms) {
            Err(GtmError::BudgetExceeded {
                what,
                requested,
                budget: self.max_terms,
            })
        } else {
            Ok(())
        }
    }

    /// Checks `base^exp` terms, treating overflow of `u128` as over budget.
    pub fn check_power(&self, what: &'static str, base: u32, exp: u32) -> Result<usize> {
        let requested = u128::from(base).checked_pow(exp).unwrap_or(u128::MAX);
        self.check(what, requested)?;
        Ok(requested as usize)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::from_env()
    }
}
