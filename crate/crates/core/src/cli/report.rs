//! JSON report envelope shared by every command.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub code_version: &'static str,
    pub cache_hits: Vec<String>,
    pub cache_writes: Vec<String>,
    /// Set when the field degree was raised from the requested r.
    pub r_raised_from: Option<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report<T: Serialize> {
    pub schema_version: u32,
    pub command: String,
    pub config: serde_json::Value,
    pub result: T,
    pub provenance: Provenance,
    /// Seconds per stage; the only nondeterministic block.
    pub timings: BTreeMap<String, f64>,
}

/// Stage timer feeding the `timings` block.
#[derive(Debug, Default)]
pub struct Timings {
    pub stages: BTreeMap<String, f64>,
}

impl Timings {
    pub fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        *self.stages.entry(stage.to_string()).or_default() += t.elapsed().as_secs_f64();
        out
    }
}

impl Provenance {
    pub fn new() -> Self {
        Provenance {
            code_version: env!("CARGO_PKG_VERSION"),
            cache_hits: vec![],
            cache_writes: vec![],
            r_raised_from: None,
        }
    }
}

impl Default for Provenance {
    fn default() -> Self {
        Self::new()
    }
}
