use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Wall-clock allowance for exponential searches.
#[derive(Debug, Clone, Copy, Default)]
pub struct Budget {
    deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { deadline: None }
    }

    pub fn seconds(secs: f64) -> Self {
        Budget { deadline: Some(Instant::now() + Duration::from_secs_f64(secs.max(0.0))) }
    }

    pub fn is_limited(&self) -> bool {
        self.deadline.is_some()
    }

    pub fn check(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(Error::BudgetExceeded),
            _ => Ok(()),
        }
    }
}
