//! Resource budgets for constructions that can blow up.

use crate::error::{Error, Result};

/// State budget for subset constructions and automaton products.
///
/// Constructions that can explode (determinization, complements, sphere
/// products) count the states they materialize against this cap and abort
/// with [`Error::StateCapExceeded`] instead of thrashing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StateCap(usize);

impl StateCap {
    pub const DEFAULT: usize = 1_000_000;

    pub fn new(cap: usize) -> Self {
        StateCap(cap)
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Errors once `count` states (or other budgeted items) exceed the cap.
    pub(crate) fn charge(self, count: usize, during: &'static str) -> Result<()> {
        if count > self.0 {
            Err(Error::StateCapExceeded {
                cap: self.0,
                during,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for StateCap {
    fn default() -> Self {
        StateCap(Self::DEFAULT)
    }
}
