use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One verification. `residual` is the measured quantity and `bound` the threshold it is held to;
/// checks of the form "at least" say so in their id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    pub residual: f64,
    pub bound: f64,
}

impl Check {
    /// Passes when `residual ≤ bound`.
    pub fn at_most(id: impl Into<String>, residual: f64, bound: f64) -> Check {
        let status = if residual <= bound { Status::Pass } else { Status::Fail };
        Check { id: id.into(), status, residual, bound }
    }

    /// Passes when `residual ≥ bound`.
    pub fn at_least(id: impl Into<String>, residual: f64, bound: f64) -> Check {
        let status = if residual >= bound { Status::Pass } else { Status::Fail };
        Check { id: id.into(), status, residual, bound }
    }

    /// A count of failing instances, which must be zero.
    pub fn failures(id: impl Into<String>, failures: usize) -> Check {
        Check::at_most(id, failures as f64, 0.0)
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        };
        write!(f, "{s} {:<40} residual {:.3e} bound {:.3e}", self.id, self.residual, self.bound)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub config: RunConfig,
    pub checks: Vec<Check>,
    pub seed: u64,
}

impl Report {
    pub fn new(suite: impl Into<String>, config: RunConfig, mut checks: Vec<Check>) -> Report {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        Report { suite: suite.into(), config, seed: config.seed, checks }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}
