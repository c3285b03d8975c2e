//! Deterministic invariant suites over the built-in catalog.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

mod oracle;
mod suites;

pub use oracle::enumerate_distances;

/// One named check inside a suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Number of instances examined.
    pub count: usize,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, count: usize, detail: impl Into<String>) -> Self {
        Check { name: name.to_string(), passed, count, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// `key=value` lines, one per check.
    pub fn machine_lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| {
                format!(
                    "suite={} check={} pass={} count={} detail={}",
                    self.suite,
                    c.name,
                    c.passed,
                    c.count,
                    machine_value(&c.detail)
                )
            })
            .collect()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {}: {}", self.suite, if self.passed() { "PASS" } else { "FAIL" })?;
        for c in &self.checks {
            let mark = if c.passed { "ok" } else { "FAILED" };
            writeln!(f, "  {:<28} {:<6} n={:<6} {}", c.name, mark, c.count, c.detail)?;
        }
        Ok(())
    }
}

/// A value for a `key=value` line, quoted when it holds spaces, `=` or quotes.
pub fn machine_value(v: &dyn fmt::Display) -> String {
    let s = v.to_string();
    if s.is_empty() || s.contains(|c: char| c.is_whitespace() || c == '=' || c == '"') {
        format!("{s:?}")
    } else {
        s
    }
}

/// Suite names in the order `all` runs them.
pub const SUITES: &[&str] = &[
    "ordinal",
    "oracle",
    "metric",
    "boundary-gap",
    "unbounded-walk",
    "witness",
    "embedding",
    "refinement",
    "ladder",
    "single-galaxy",
];

pub const DEFAULT_SEED: u64 = 0x5eed;

/// Runs one suite, or every suite for `all`.
pub fn run(name: &str, seed: u64) -> Result<Vec<SuiteReport>> {
    if name == "all" {
        return SUITES.iter().map(|s| run_one(s, seed)).collect();
    }
    Ok(vec![run_one(name, seed)?])
}

fn run_one(name: &str, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fxhash(name));
    let checks = match name {
        "ordinal" => suites::ordinal(&mut rng, 10_000),
        "oracle" => suites::oracle()?,
        "metric" => suites::metric(&mut rng, 500, 100)?,
        "boundary-gap" => suites::boundary_gap()?,
        "unbounded-walk" => suites::unbounded_walk()?,
        "witness" => suites::witness()?,
        "embedding" => suites::embedding()?,
        "refinement" => suites::refinement()?,
        "ladder" => suites::ladder(4)?,
        "single-galaxy" => suites::single_galaxy()?,
        other => {
            return Err(Error::Usage(format!("unknown suite `{other}`; expected one of {} or all", SUITES.join(", "))))
        }
    };
    Ok(SuiteReport { suite: name.to_string(), checks })
}

/// Stable per-suite seed offset.
fn fxhash(s: &str) -> u64 {
    s.bytes().fold(0xcbf29ce484222325, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3))
}

pub(crate) fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    &items[rng.gen_range(0..items.len())]
}
