//! Experiment suites.
//!
//! Rows are produced by independent tasks that run in parallel and are
//! collected in task order, so output does not depend on scheduling.

use std::time::Instant;

use hypenergy_core::modfield::is_prime;
use hypenergy_core::report::envelope_log_cubed;
use hypenergy_core::BoundReport;
use rayon::prelude::*;
use thiserror::Error;

use crate::rows::ExperimentRow;
use crate::setspec::{SetSpec, SpecError};

mod envelopes;
mod identities;
mod integer;
mod kloosterman;

/// `{11, 53, 101, 401, 1009, 2003}`.
pub const DEFAULT_GRID: &[u64] = &[11, 53, 101, 401, 1009, 2003];

/// Largest prime the Fourier-heavy suites accept.
pub const SPECTRAL_PRIME_CAP: u64 = 2003;

pub const SUITES: &[&str] = &[
    "identities",
    "thm1",
    "progression",
    "rAA",
    "kloosterman-NM",
    "sl2-free",
    "lemma27-Z",
    "asym-Z",
];

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown suite `{0}` (expected one of: {list})", list = SUITES.join(", "))]
    UnknownSuite(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Core(#[from] hypenergy_core::Error),
}

pub type Result<T> = std::result::Result<T, HarnessError>;

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub primes: Vec<u64>,
    pub a: Option<SetSpec>,
    pub b: Option<SetSpec>,
    pub c: Option<SetSpec>,
    pub d: Option<SetSpec>,
    pub lambda: i64,
    pub seed: u64,
    /// Replaces the leading constant of the `C·log³p` envelopes.
    pub envelope: Option<f64>,
    pub timings: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            primes: DEFAULT_GRID.to_vec(),
            a: None,
            b: None,
            c: None,
            d: None,
            lambda: 1,
            seed: 0,
            envelope: None,
            timings: false,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.primes.is_empty() {
            return Err(HarnessError::Config("empty prime list".into()));
        }
        if let Some(&p) = self.primes.iter().find(|&&p| !is_prime(p)) {
            return Err(HarnessError::Config(format!("{p} is not prime")));
        }
        if self.lambda == 0 {
            return Err(HarnessError::Config("lambda must be nonzero".into()));
        }
        if let Some(c) = self.envelope {
            if !(c.is_finite() && c > 0.0) {
                return Err(HarnessError::Config(format!(
                    "envelope must be positive, got {c}"
                )));
            }
        }
        Ok(())
    }

    /// Applies the `--envelope` override to a `1024·log³p` report.
    pub(crate) fn envelope(&self, report: BoundReport, p: u64) -> BoundReport {
        match self.envelope {
            Some(c) => report.with_envelope(envelope_log_cubed(c, p)),
            None => report,
        }
    }

    /// Seed for the `i`-th generated instance.
    pub(crate) fn instance_seed(&self, i: u64) -> u64 {
        self.seed.wrapping_mul(1_000_003).wrapping_add(i)
    }
}

pub(crate) type Task<'a> = Box<dyn Fn() -> Result<Vec<ExperimentRow>> + Send + Sync + 'a>;

pub(crate) fn run_tasks(tasks: Vec<Task<'_>>, timings: bool) -> Result<Vec<ExperimentRow>> {
    let chunks: Vec<Result<Vec<ExperimentRow>>> = tasks
        .par_iter()
        .map(|task| {
            let start = Instant::now();
            let mut rows = task()?;
            if timings {
                let ms = start.elapsed().as_millis() as u64;
                rows.iter_mut().for_each(|r| r.millis = ms);
            }
            Ok(rows)
        })
        .collect();
    let mut out = Vec::new();
    for c in chunks {
        out.extend(c?);
    }
    Ok(out)
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Vec<ExperimentRow>> {
    cfg.validate()?;
    log::info!("running suite {name} over primes {:?}", cfg.primes);
    match name {
        "identities" => identities::run(cfg),
        "thm1" => envelopes::thm1(cfg),
        "progression" => envelopes::progression(cfg),
        "rAA" => envelopes::r_aa(cfg),
        "kloosterman-NM" => kloosterman::run(cfg),
        "sl2-free" => integer::free_group(cfg),
        "lemma27-Z" => integer::integer_t2k(cfg),
        "asym-Z" => integer::asym(cfg),
        other => Err(HarnessError::UnknownSuite(other.to_string())),
    }
}

/// Exact equality row: passes iff `lhs == rhs`.
pub(crate) fn equality_report(
    name: &str,
    lhs: impl Into<num_bigint::BigInt>,
    rhs: impl Into<num_bigint::BigInt>,
) -> BoundReport {
    let (lhs, rhs) = (lhs.into(), rhs.into());
    let equal = lhs == rhs;
    let mut r = BoundReport::exact(name, lhs, rhs, vec![]);
    r.passed = equal;
    r
}

/// `err ≤ tol` row for floating-point identities.
pub(crate) fn tolerance_report(name: &str, err: f64, tol: f64) -> BoundReport {
    BoundReport::new(name, err, 0.0, vec![], tol, 1.0)
}
