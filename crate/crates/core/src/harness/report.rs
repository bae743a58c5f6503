use serde::{Deserialize, Serialize};

/// One case whose defect exceeded the tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseFailure {
    pub case: usize,
    pub seed: u64,
    pub defect: f64,
}

/// Outcome of a property suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub tolerance: f64,
    pub max_defect: f64,
    pub failures: Vec<CaseFailure>,
    /// Negative controls are expected to fail.
    pub expect_failures: bool,
}

/// Smallest defect a negative control must reach to count as failing.
pub const NEGATIVE_CONTROL_FLOOR: f64 = 1e-3;

impl SuiteReport {
    pub fn from_defects(suite: &str, seed: u64, tolerance: f64, defects: &[(u64, f64)]) -> Self {
        let failures = defects
            .iter()
            .enumerate()
            .filter(|(_, (_, d))| !(*d <= tolerance))
            .map(|(case, &(seed, defect))| CaseFailure { case, seed, defect })
            .collect();
        Self {
            suite: suite.to_string(),
            seed,
            cases: defects.len(),
            tolerance,
            max_defect: defects.iter().map(|d| d.1).fold(0.0, f64::max),
            failures,
            expect_failures: false,
        }
    }

    pub fn expecting_failures(mut self) -> Self {
        self.expect_failures = true;
        self
    }

    /// Ordinary suites pass with no failures; negative controls pass when
    /// they fail by at least the control floor.
    pub fn passed(&self) -> bool {
        if self.expect_failures {
            !self.failures.is_empty() && self.max_defect >= NEGATIVE_CONTROL_FLOOR
        } else {
            self.failures.is_empty()
        }
    }
}
