//! Verdict reports shared by the `check`, `suite` and acceptance runs.

use std::fmt;
use std::time::Instant;

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
        Check { name: name.into(), passed, detail: detail.into(), counterexample: None, elapsed_ms: None }
    }

    pub fn with_counterexample(mut self, c: impl Into<String>) -> Check {
        self.counterexample = Some(c.into());
        self
    }

    /// A failed check carrying an error message.
    pub fn error(name: impl Into<String>, err: impl fmt::Display) -> Check {
        Check::new(name, false, format!("error: {}", err))
    }
}

/// Runs `f` and records its wall time on the resulting check.
pub fn timed(f: impl FnOnce() -> Check) -> Check {
    let start = Instant::now();
    let mut c = f();
    c.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    c
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: impl Into<String>, seed: Option<u64>, checks: Vec<Check>) -> Report {
        Report {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }

    /// Drops wall-clock timings so that reports compare bit-exactly.
    pub fn without_timings(mut self) -> Report {
        for c in &mut self.checks {
            c.elapsed_ms = None;
        }
        self
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
            if let Some(ms) = c.elapsed_ms {
                write!(f, " ({} ms)", ms)?;
            }
            writeln!(f)?;
            if let Some(ce) = &c.counterexample {
                writeln!(f, "    counterexample: {}", ce)?;
            }
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        write!(f, "{}: {} checks, {} failed", self.command, self.checks.len(), failed)
    }
}
