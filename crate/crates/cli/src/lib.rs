//! Runs the qframes verification suites and renders their reports.

pub mod emit;
pub mod suites;

use std::time::Instant;

use clap::ValueEnum;
use serde::Serialize;
use thiserror::Error;

pub use qframes::{Status, VerificationReport};

/// Seed used when neither `--seed` nor `QFRAMES_SEED` is given.
pub const DEFAULT_SEED: u64 = 2024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Crf,
    Tds,
    Expansion,
    Erasure,
    FrameChange,
    Nogo,
    Scaffold,
    All,
}

impl Suite {
    pub const CONCRETE: [Suite; 7] = [
        Suite::Crf,
        Suite::Tds,
        Suite::Expansion,
        Suite::Erasure,
        Suite::FrameChange,
        Suite::Nogo,
        Suite::Scaffold,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Crf => "crf",
            Suite::Tds => "tds",
            Suite::Expansion => "expansion",
            Suite::Erasure => "erasure",
            Suite::FrameChange => "frame-change",
            Suite::Nogo => "nogo",
            Suite::Scaffold => "scaffold",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub suites: Vec<Suite>,
    pub format: Format,
    pub restarts: usize,
    pub max_iters: usize,
    pub ancilla_dim: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dim: 2,
            samples: 100,
            seed: DEFAULT_SEED,
            tol: 1e-9,
            suites: vec![Suite::All],
            format: Format::Text,
            restarts: 50,
            max_iters: 200,
            ancilla_dim: 1,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("dimension must be at least 2, got {0}")]
    Dim(usize),
    #[error("samples must be at least 1")]
    Samples,
    #[error("tolerance must be positive and finite, got {0}")]
    Tol(f64),
    #[error("no suite selected")]
    NoSuite,
    #[error("restarts must be at least 1")]
    Restarts,
    #[error("ancilla dimension must be at least 1")]
    Ancilla,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.dim < 2 {
            return Err(ConfigError::Dim(self.dim));
        }
        if self.samples == 0 {
            return Err(ConfigError::Samples);
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(ConfigError::Tol(self.tol));
        }
        if self.suites.is_empty() {
            return Err(ConfigError::NoSuite);
        }
        if self.restarts == 0 {
            return Err(ConfigError::Restarts);
        }
        if self.ancilla_dim == 0 {
            return Err(ConfigError::Ancilla);
        }
        Ok(())
    }

    /// Selected suites in canonical order, `all` expanded, duplicates dropped.
    pub fn resolved_suites(&self) -> Vec<Suite> {
        if self.suites.contains(&Suite::All) {
            return Suite::CONCRETE.to_vec();
        }
        Suite::CONCRETE
            .iter()
            .copied()
            .filter(|s| self.suites.contains(s))
            .collect()
    }
}

/// Runs every selected suite in order, handing each report to `sink` as
/// soon as it is ready.
pub fn run_streaming(
    config: &RunConfig,
    mut sink: impl FnMut(&VerificationReport),
) -> Result<Vec<VerificationReport>, ConfigError> {
    config.validate()?;
    let mut all = Vec::new();
    for suite in config.resolved_suites() {
        for check in suites::checks(suite) {
            let start = Instant::now();
            let mut report = check(config);
            report.wall_time_ms = start.elapsed().as_millis() as u64;
            sink(&report);
            all.push(report);
        }
    }
    Ok(all)
}

pub fn run(config: &RunConfig) -> Result<Vec<VerificationReport>, ConfigError> {
    run_streaming(config, |_| {})
}

/// 0 if every report passed, 1 otherwise.
pub fn exit_code(reports: &[VerificationReport]) -> i32 {
    if reports.iter().all(|r| r.passed()) {
        0
    } else {
        1
    }
}

pub const CONFIG_ERROR_EXIT: i32 = 2;
