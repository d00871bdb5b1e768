use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// A wall-clock deadline checked cooperatively by long enumerations.
#[derive(Clone, Copy, Debug, Default)]
pub struct Budget {
    deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { deadline: None }
    }

    pub fn with_timeout(timeout: Duration) -> Self {
        Budget {
            deadline: Some(Instant::now() + timeout),
        }
    }

    pub fn check(&self, what: &str) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(Error::Budget(format!("timeout during {what}"))),
            _ => Ok(()),
        }
    }
}
