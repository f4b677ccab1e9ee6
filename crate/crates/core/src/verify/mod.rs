//! Batch verification harness.
//!
//! The suites in [`suites`] replay the library's cross-route identities
//! over exhaustive enumerations, a randomized pool, and the full monomial
//! corpus. They back both the `verify-corpus` command of the CLI and the
//! acceptance test target.

pub mod enumerate;
pub mod suites;

pub use enumerate::{
    enumerate_complete_ideals, enumerate_constellations, minimal_complete_above,
    random_constellation, random_ideal, restrict_to_support, signature, support_signature,
};
pub use suites::run_all;

/// Result of running one verification suite.
#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub name: &'static str,
    /// Number of individual checks performed.
    pub instances: u64,
    /// Human-readable descriptions of the first few failures, if any.
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// One line in the `name: PASS (k instances)` format.
    pub fn summary(&self) -> String {
        if self.passed() {
            format!("{}: PASS ({} instances)", self.name, self.instances)
        } else {
            format!(
                "{}: FAIL ({} instances, first failures: {})",
                self.name,
                self.instances,
                self.failures.join("; ")
            )
        }
    }
}
