//! Text and JSON rendering of reports.
//!
//! JSON keys come out in struct order and every real number is written in
//! scientific notation with six significant digits, so two runs with the same
//! configuration produce the same bytes. Wall times are left out for the
//! same reason.

use serde::Serialize;
use serde_json::value::RawValue;

use qframes::{Bound, Status, VerificationReport};

use crate::{Format, RunConfig};

pub const SCHEMA_VERSION: u32 = 1;

/// `x` with `frac` digits after the point and a signed, two-digit exponent:
/// `sci(1e-9, 1) == "1.0e-09"`.
pub fn sci(x: f64, frac: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.frac$e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let (sign, digits) = match exp.strip_prefix('-') {
        Some(d) => ("-", d),
        None => ("+", exp),
    };
    format!("{mantissa}e{sign}{digits:0>2}")
}

fn number(x: f64) -> Box<RawValue> {
    let text = if x.is_finite() { sci(x, 5) } else { "null".to_string() };
    RawValue::from_string(text).expect("valid JSON number")
}

#[derive(Serialize)]
struct JsonConfig<'a> {
    dim: usize,
    samples: usize,
    seed: u64,
    tol: Box<RawValue>,
    suites: Vec<&'a str>,
    restarts: usize,
    max_iters: usize,
    ancilla_dim: usize,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    suite: &'a str,
    check: &'a str,
    status: Status,
    max_error: Box<RawValue>,
    tolerance: Box<RawValue>,
    bound: Bound,
    samples: usize,
    seed: u64,
    notes: &'a [String],
}

#[derive(Serialize)]
struct JsonRun<'a> {
    schema: u32,
    config: JsonConfig<'a>,
    reports: Vec<JsonReport<'a>>,
}

pub fn json(config: &RunConfig, reports: &[VerificationReport]) -> String {
    let run = JsonRun {
        schema: SCHEMA_VERSION,
        config: JsonConfig {
            dim: config.dim,
            samples: config.samples,
            seed: config.seed,
            tol: number(config.tol),
            suites: config.resolved_suites().iter().map(|s| s.name()).collect(),
            restarts: config.restarts,
            max_iters: config.max_iters,
            ancilla_dim: config.ancilla_dim,
        },
        reports: reports
            .iter()
            .map(|r| JsonReport {
                suite: &r.suite,
                check: &r.check,
                status: r.status,
                max_error: number(r.max_error),
                tolerance: number(r.tolerance),
                bound: r.bound,
                samples: r.samples,
                seed: r.seed,
                notes: &r.notes,
            })
            .collect(),
    };
    serde_json::to_string(&run).expect("report serializes")
}

/// `PASS crf/two-frame-agreement max_err=3.2e-12 tol=1.0e-09 n=100 seed=7`.
/// Lower-bounded checks print `value=` and `floor=` instead.
pub fn text_line(r: &VerificationReport) -> String {
    let (v, t) = match r.bound {
        Bound::Upper => ("max_err", "tol"),
        Bound::Lower => ("value", "floor"),
    };
    format!(
        "{} {}/{} {v}={} {t}={} n={} seed={}",
        r.status.label(),
        r.suite,
        r.check,
        sci(r.max_error, 1),
        sci(r.tolerance, 1),
        r.samples,
        r.seed
    )
}

pub fn text(reports: &[VerificationReport]) -> String {
    reports.iter().map(|r| text_line(r) + "\n").collect()
}

pub fn render(config: &RunConfig, reports: &[VerificationReport]) -> String {
    match config.format {
        Format::Text => text(reports),
        Format::Json => json(config, reports) + "\n",
    }
}
