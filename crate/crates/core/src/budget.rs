//! Wall-clock budgets for long computations.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// An optional deadline. `Deadline::none()` never expires.
#[derive(Clone, Copy, Debug, Default)]
pub struct Deadline(Option<Instant>);

impl Deadline {
    pub fn none() -> Self {
        Deadline(None)
    }

    pub fn after(budget: Duration) -> Self {
        Deadline(Some(Instant::now() + budget))
    }

    pub fn from_secs(secs: Option<f64>) -> Self {
        secs.map_or(Deadline::none(), |s| {
            Deadline::after(Duration::from_secs_f64(s))
        })
    }

    pub fn expired(&self) -> bool {
        self.0.is_some_and(|t| Instant::now() >= t)
    }

    pub fn check(&self) -> Result<()> {
        if self.expired() {
            Err(Error::BudgetExceeded)
        } else {
            Ok(())
        }
    }
}
