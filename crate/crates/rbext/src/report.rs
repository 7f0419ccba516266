//! Verification reports collecting every axiom violation, not just the first.

use std::fmt;

use crate::field::Scalar;

/// One failed identity instance: which law, at which basis tuple, with the
/// residual vector (LHS - RHS in coordinates).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub law: String,
    pub indices: Vec<usize>,
    pub residual: Vec<Scalar>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn new() -> VerificationReport {
        VerificationReport::default()
    }

    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn record(&mut self, law: &str, indices: &[usize], residual: Vec<Scalar>) {
        self.violations.push(Violation {
            law: law.to_string(),
            indices: indices.to_vec(),
            residual,
        });
    }

    /// Records a violation only when the residual is nonzero.
    pub fn check(&mut self, law: &str, indices: &[usize], residual: Vec<Scalar>) {
        if !residual.iter().all(|s| s.is_zero()) {
            self.record(law, indices, residual);
        }
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.violations.extend(other.violations);
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return writeln!(f, "ok");
        }
        writeln!(f, "FAILED ({} violations)", self.violations.len())?;
        for v in &self.violations {
            let idx: Vec<String> = v.indices.iter().map(|i| i.to_string()).collect();
            let res: Vec<String> = v.residual.iter().map(|s| s.to_string()).collect();
            writeln!(
                f,
                "  {} at ({}) residual ({})",
                v.law,
                idx.join(", "),
                res.join(", ")
            )?;
        }
        Ok(())
    }
}
