//! Seeded experiment drivers and their reports.

mod density;
mod diffrank;
mod escan;
mod torus;
mod verify;

pub use density::{density, density_grid};
pub use diffrank::diff_rank;
pub use escan::escan;
pub use torus::{dickson_oracle, torus_restrict};
pub use verify::{verify_suite, BATTERIES};

use std::collections::BTreeMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::aut::AdOrientation;
use crate::error::{Error, Result};
use crate::gf::{Field, FieldRef};
use crate::ham::{HamCtx, HamRef};

pub const SCHEMA_VERSION: u32 = 1;
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A rational tolerance `num / den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub num: i64,
    pub den: i64,
}

impl Ratio {
    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

/// Population and wall-clock caps. Exceeding the time cap stops early and
/// marks the report partial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub max_elements: u64,
    pub max_seconds: Option<f64>,
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_elements: 1_000_000, max_seconds: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub p: u64,
    pub r: usize,
    pub m: u32,
    pub seed: u64,
    pub samples: usize,
    pub tolerances: BTreeMap<String, Ratio>,
    pub budget: Budget,
    pub execution: Execution,
    /// Fault injection for the `gh_multiplier` battery.
    pub corrupt: bool,
}

impl ExperimentConfig {
    pub fn new(p: u64, r: usize, m: u32, seed: u64, samples: usize) -> Self {
        let tolerances = BTreeMap::from([
            ("window_low".to_string(), Ratio { num: 1, den: 2 }),
            ("window_high".to_string(), Ratio { num: 3, den: 2 }),
            ("ci_share".to_string(), Ratio { num: 1, den: 5 }),
        ]);
        Self {
            p,
            r,
            m,
            seed,
            samples,
            tolerances,
            budget: Budget::default(),
            execution: Execution::default(),
            corrupt: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.r == 0 {
            return Err(Error::InvalidArgument("r must be at least 1".into()));
        }
        if self.m == 0 {
            return Err(Error::InvalidDegree(0));
        }
        if self.samples == 0 {
            return Err(Error::InvalidArgument("samples must be at least 1".into()));
        }
        Field::new(self.p, self.m).map(|_| ())
    }

    pub fn field(&self) -> Result<FieldRef> {
        self.validate()?;
        Field::new(self.p, self.m)
    }

    pub fn ham(&self) -> Result<HamRef> {
        HamCtx::new(self.field()?, self.r)
    }

    fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).map_or(default, |t| t.value())
    }
}

/// One named check: how many cases ran, how many failed, and the first
/// failing case.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub population: u64,
    pub failures: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stats: Option<serde_json::Value>,
}

impl Check {
    pub fn new(name: &str) -> Self {
        Self { name: name.to_string(), population: 0, failures: 0, witness: None, stats: None }
    }

    /// Records one case; the first failure becomes the witness.
    pub fn record(&mut self, failure: Option<String>) {
        self.population += 1;
        if let Some(w) = failure {
            self.failures += 1;
            self.witness.get_or_insert(w);
        }
    }

    pub fn with_stats(mut self, stats: serde_json::Value) -> Self {
        self.stats = Some(stats);
        self
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Rows for CSV output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub code_version: String,
    pub p: u64,
    pub r: usize,
    pub m: u32,
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub partial: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ad_orientation: Option<AdOrientation>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub table: Option<Table>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub result: Option<serde_json::Value>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(command: &str, cfg: &ExperimentConfig) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            code_version: CODE_VERSION.to_string(),
            p: cfg.p,
            r: cfg.r,
            m: cfg.m,
            seed: cfg.seed,
            samples: cfg.samples,
            checks: Vec::new(),
            pass: true,
            partial: false,
            ad_orientation: None,
            table: None,
            result: None,
            elapsed_ms: 0,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.pass &= check.passed();
        self.checks.push(check);
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn finish(mut self, started: Instant) -> Self {
        self.elapsed_ms = started.elapsed().as_millis() as u64;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// CSV of the report's table, if it has one.
    pub fn to_csv(&self) -> Option<String> {
        let table = self.table.as_ref()?;
        let mut out = table.columns.join(",");
        out.push('\n');
        for row in &table.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        Some(out)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} p={} r={} m={} seed={} samples={}\n",
            self.command, self.p, self.r, self.m, self.seed, self.samples
        );
        if let Some(o) = self.ad_orientation {
            out.push_str(&format!("ad orientation: {}\n", serde_json::to_value(o).expect("enum").as_str().unwrap_or("")));
        }
        for c in &self.checks {
            let status = if c.passed() { "ok" } else { "FAIL" };
            out.push_str(&format!("  {:<28} {:>4} {:>9} cases {:>6} failures\n", c.name, status, c.population, c.failures));
            if let Some(w) = &c.witness {
                out.push_str(&format!("    witness: {w}\n"));
            }
            if let Some(s) = &c.stats {
                out.push_str(&format!("    stats: {s}\n"));
            }
        }
        if let Some(r) = &self.result {
            out.push_str(&format!("  result: {r}\n"));
        }
        if self.partial {
            out.push_str("  (partial: budget reached)\n");
        }
        out.push_str(if self.pass { "pass\n" } else { "FAIL\n" });
        out
    }
}

/// The generator for sample `index` of stream `stream`: independent of
/// scheduling, so parallel and sequential runs agree.
pub fn sample_rng(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    rng.set_stream(index);
    rng
}

/// Evaluates `f` on `0..count` in order-preserving chunks. Stops between
/// chunks once the deadline passes; the flag reports an early stop.
pub(crate) fn run_indexed<T, F>(cfg: &ExperimentConfig, count: u64, started: Instant, f: F) -> (Vec<T>, bool)
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    const CHUNK: u64 = 64;
    let mut out = Vec::with_capacity(count as usize);
    let mut start = 0;
    while start < count {
        if let Some(limit) = cfg.budget.max_seconds {
            if started.elapsed().as_secs_f64() > limit {
                return (out, true);
            }
        }
        let end = (start + CHUNK).min(count);
        out.extend(map_range(cfg.execution, start..end, &f));
        start = end;
    }
    (out, false)
}

#[cfg(feature = "parallel")]
fn map_range<T: Send, F: Fn(u64) -> T + Sync + Send>(exec: Execution, range: std::ops::Range<u64>, f: &F) -> Vec<T> {
    use rayon::prelude::*;
    match exec {
        Execution::Parallel => range.into_par_iter().map(f).collect(),
        Execution::Sequential => range.map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn map_range<T: Send, F: Fn(u64) -> T + Sync + Send>(_exec: Execution, range: std::ops::Range<u64>, f: &F) -> Vec<T> {
    range.map(f).collect()
}

/// Wilson score interval for `hits` successes out of `n`.
pub fn wilson(hits: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let phat = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}
