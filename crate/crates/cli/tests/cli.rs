use std::process::Command;

use qframes_cli::suites::sample_errors;
use qframes_cli::{run, ConfigError, RunConfig, Suite};

fn qframes(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qframes"))
        .args(args)
        .env_remove("QFRAMES_SEED")
        .output()
        .expect("binary runs")
}

#[test]
fn crf_suite_passes_with_exit_zero() {
    let out = qframes(&["--suite", "crf", "--dim", "2", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 6);
    assert!(lines.iter().all(|l| l.starts_with("PASS crf/") && l.ends_with("seed=7")));
}

#[test]
fn bad_dimension_is_a_config_error() {
    let out = qframes(&["--dim", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("dimension"));
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_suite_is_a_config_error() {
    assert_eq!(qframes(&["--suite", "nope"]).status.code(), Some(2));
    assert_eq!(qframes(&["--tol", "0"]).status.code(), Some(2));
}

#[test]
fn failing_check_exits_one() {
    // No floating-point identity meets a tolerance of 1e-300.
    let out = qframes(&["--suite", "expansion", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains("FAIL expansion/basis-orthogonality"));
}

#[test]
fn json_runs_are_byte_identical_and_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let path_s = path.to_str().unwrap();
    let args = ["--suite", "tds,scaffold", "--samples", "5", "--seed", "11", "--format", "json"];
    let first = qframes(&[&args[..], &["--report-file", path_s]].concat());
    let second = qframes(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(std::fs::read(&path).unwrap(), first.stdout);
    let v: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["config"]["suites"], serde_json::json!(["tds", "scaffold"]));
    assert!(v["reports"].as_array().unwrap().iter().all(|r| r.get("wall_time_ms").is_none()));
}

#[test]
fn seed_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_qframes"))
        .args(["--suite", "tds", "--samples", "2"])
        .env("QFRAMES_SEED", "99")
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().all(|l| l.ends_with("seed=99")));
    let flag = Command::new(env!("CARGO_BIN_EXE_qframes"))
        .args(["--suite", "tds", "--samples", "2", "--seed", "5"])
        .env("QFRAMES_SEED", "99")
        .output()
        .unwrap();
    assert!(String::from_utf8(flag.stdout).unwrap().lines().all(|l| l.ends_with("seed=5")));
}

#[test]
fn degenerate_nogo_run_reports_the_initial_objective() {
    let out = qframes(&["--suite", "nogo", "--restarts", "1", "--max-iters", "0", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let floor = &v["reports"][0];
    assert_eq!(floor["check"], "floor");
    assert_eq!(floor["bound"], "lower");
    let best = floor["max_error"].as_f64().unwrap();
    let note = floor["notes"][0].as_str().unwrap();
    let initial: f64 = note.rsplit(' ').next().unwrap().parse().unwrap();
    assert_eq!(best, initial);
}

#[test]
fn sample_streams_do_not_depend_on_sample_count() {
    let small = RunConfig { samples: 4, ..Default::default() };
    let large = RunConfig { samples: 9, ..Default::default() };
    for (suite, check) in [
        (Suite::Crf, "process-unitarity"),
        (Suite::FrameChange, "born-weight"),
        (Suite::Scaffold, "purity"),
    ] {
        let a = sample_errors(&small, suite, check).unwrap();
        let b = sample_errors(&large, suite, check).unwrap();
        assert_eq!(a[..], b[..4], "{check}");
    }
}

#[test]
fn config_validation() {
    let ok = RunConfig::default();
    assert_eq!(ok.validate(), Ok(()));
    let bad = |f: fn(&mut RunConfig)| {
        let mut c = RunConfig::default();
        f(&mut c);
        c.validate().unwrap_err()
    };
    assert_eq!(bad(|c| c.dim = 1), ConfigError::Dim(1));
    assert_eq!(bad(|c| c.samples = 0), ConfigError::Samples);
    assert_eq!(bad(|c| c.suites.clear()), ConfigError::NoSuite);
    assert!(matches!(bad(|c| c.tol = f64::NAN), ConfigError::Tol(_)));
    assert!(run(&RunConfig { dim: 0, ..Default::default() }).is_err());
}

#[test]
fn all_expands_in_canonical_order() {
    let c = RunConfig {
        suites: vec![Suite::Scaffold, Suite::Crf, Suite::Scaffold],
        ..Default::default()
    };
    assert_eq!(c.resolved_suites(), vec![Suite::Crf, Suite::Scaffold]);
    let all = RunConfig::default().resolved_suites();
    assert_eq!(all.len(), 7);
    assert!(!all.contains(&Suite::All));
}
