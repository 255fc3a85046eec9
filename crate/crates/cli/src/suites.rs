//! The checks behind each suite.
//!
//! Sampled checks draw sample `i` from `sample_rng(seed, suite, check, i)`
//! and run in parallel; results are collected in index order, so neither
//! the thread schedule nor the sample count changes what sample `i` sees.

use qframes::foliation;
use qframes::frame_change::{
    self, build_j_a_to_b, localization_errors, nogo, BoundaryData, PerspectiveChange, J_ROUTES_CORRUPTED,
};
use qframes::linalg::{self, Matrix};
use qframes::sampling::{haar_unitary, random_state, sample_rng, SampleRng};
use qframes::scaffold::{self, Side};
use qframes::switch::{self, Agent};
use qframes::{weyl_basis, Result, VerificationReport};
use rayon::prelude::*;

use crate::{RunConfig, Suite};

pub type Check = fn(&RunConfig) -> VerificationReport;

/// Probe gates used by the localization check.
pub const LOCALIZATION_PROBES: usize = 20;
/// Restarts, iteration cap and acceptance bound of the wrap-around search.
pub const WRAP_RESTARTS: usize = 4;
pub const WRAP_ITERS: usize = 400;
pub const WRAP_BOUND: f64 = 1e-9;
/// Random points and step of the no-go gradient check.
pub const GRADIENT_POINTS: usize = 5;
pub const GRADIENT_STEP: f64 = 1e-5;
pub const GRADIENT_BOUND: f64 = 1e-4;

pub fn checks(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Crf => vec![
            crf_identity,
            |c| sampled(c, Suite::Crf, "two-frame-agreement", c.tol),
            |c| sampled(c, Suite::Crf, "consistency", c.tol),
            |c| sampled(c, Suite::Crf, "fragment-link", c.tol),
            |c| sampled(c, Suite::Crf, "process-unitarity", c.tol),
            |c| sampled(c, Suite::Crf, "control-order", c.tol),
        ],
        Suite::Tds => vec![|c| sampled(c, Suite::Tds, "two-tds-agreement", c.tol), tds_reconstruction],
        Suite::Expansion => vec![expansion_basis, expansion_completeness, expansion_reconstruction],
        Suite::Erasure => vec![|c| sampled(c, Suite::Erasure, "interface-erasure", c.tol)],
        Suite::FrameChange => vec![
            j_unitarity,
            |c| sampled(c, Suite::FrameChange, "closed-form", c.tol),
            localization,
            |c| sampled(c, Suite::FrameChange, "born-weight", c.tol),
        ],
        Suite::Nogo => vec![nogo_floor, wrap_around, gradient],
        Suite::Scaffold => vec![
            |c| sampled(c, Suite::Scaffold, "reduction", c.tol),
            |c| sampled(c, Suite::Scaffold, "purity", strict(c, 1e-10)),
            s_unitarity,
            |c| sampled(c, Suite::Scaffold, "gate-fragments", c.tol),
            transformed_form,
            |c| sampled(c, Suite::Scaffold, "composite", c.tol),
            round_trip,
            slot_symmetry,
        ],
        Suite::All => Suite::CONCRETE.iter().flat_map(|s| checks(*s)).collect(),
    }
}

/// The configured tolerance, tightened to `bound` for exact identities.
fn strict(cfg: &RunConfig, bound: f64) -> f64 {
    cfg.tol.min(bound)
}

/// Largest entry and its index; a NaN counts as the worst possible value.
pub fn worst(errors: &[f64]) -> (f64, usize) {
    let mut best = (f64::NEG_INFINITY, 0);
    for (i, &e) in errors.iter().enumerate() {
        if e.is_nan() {
            return (e, i);
        }
        if e > best.0 {
            best = (e, i);
        }
    }
    best
}

fn guarded(
    cfg: &RunConfig,
    suite: Suite,
    check: &str,
    tol: f64,
    samples: usize,
    f: impl FnOnce() -> Result<VerificationReport>,
) -> VerificationReport {
    f().unwrap_or_else(|e| {
        VerificationReport::upper(suite.name(), check, f64::NAN, tol, samples, cfg.seed).fail_with(format!("error: {e}"))
    })
}

fn single(cfg: &RunConfig, suite: Suite, check: &str, tol: f64, f: impl FnOnce() -> Result<f64>) -> VerificationReport {
    guarded(cfg, suite, check, tol, 1, || {
        Ok(VerificationReport::upper(suite.name(), check, f()?, tol, 1, cfg.seed))
    })
}

fn for_each_sample<F>(cfg: &RunConfig, suite: Suite, check: &str, f: F) -> Result<Vec<f64>>
where
    F: Fn(&mut SampleRng) -> Result<f64> + Sync,
{
    (0..cfg.samples)
        .into_par_iter()
        .map(|i| f(&mut sample_rng(cfg.seed, suite.name(), check, i as u64)))
        .collect()
}

fn gate_pair(rng: &mut SampleRng, d: usize) -> (Matrix, Matrix) {
    let ua = haar_unitary(d, rng);
    let ub = haar_unitary(d, rng);
    (ua, ub)
}

fn boundary(rng: &mut SampleRng, d: usize) -> Result<BoundaryData> {
    let c = random_state(2, rng);
    BoundaryData::with_control(random_state(d, rng), random_state(d, rng), [c[0], c[1]])
}

/// Per-sample errors of a sampled check, in index order.
pub fn sample_errors(cfg: &RunConfig, suite: Suite, check: &str) -> Result<Vec<f64>> {
    let d = cfg.dim;
    let run = |f: &(dyn Fn(&mut SampleRng) -> Result<f64> + Sync)| for_each_sample(cfg, suite, check, f);
    match (suite, check) {
        (Suite::Crf, "two-frame-agreement") => run(&|r| {
            let (ua, ub) = gate_pair(r, d);
            switch::crf_agreement_error(&ua, &ub)
        }),
        (Suite::Crf, "consistency") => run(&|r| {
            let (ua, ub) = gate_pair(r, d);
            Ok(switch::crf_consistency_error(Agent::A, &ub)?.max(switch::crf_consistency_error(Agent::B, &ua)?))
        }),
        (Suite::Crf, "fragment-link") => run(&|r| {
            let (ua, ub) = gate_pair(r, d);
            Ok(switch::crf_fragment_error(Agent::A, &ub)?.max(switch::crf_fragment_error(Agent::B, &ua)?))
        }),
        (Suite::Crf, "process-unitarity") => run(&|r| {
            let (ua, ub) = gate_pair(r, d);
            switch::process_unitarity_error(&ua, &ub)
        }),
        (Suite::Crf, "control-order") => run(&|r| {
            let (ua, ub) = gate_pair(r, d);
            switch::control_marginal_error(&ua, &ub)
        }),
        (Suite::Tds, "two-tds-agreement") => run(&|r| {
            let (ua, ub) = gate_pair(r, d);
            switch::tds_agreement_error(&ua, &ub)
        }),
        (Suite::Erasure, "interface-erasure") => run(&|r| foliation::erasure_error(&haar_unitary(d, r))),
        (Suite::FrameChange, "closed-form") => {
            let j = build_j_a_to_b(d)?;
            run(&|r| {
                let (ua, ub) = gate_pair(r, d);
                let b = boundary(r, d)?;
                frame_change::apply_perspective_change(&j, &ua, &ub, &b)?
                    .distance(&frame_change::expected_transformed(&ua, &ub, &b)?)
            })
        }
        (Suite::FrameChange, "born-weight") => {
            let j = build_j_a_to_b(d)?;
            run(&|r| {
                let (ua, ub) = gate_pair(r, d);
                let (p, q) = frame_change::born_weights(&j, &ua, &ub, &boundary(r, d)?)?;
                Ok((p - q).abs())
            })
        }
        (Suite::Scaffold, "reduction") => {
            let w = scaffold::build_scaffold(d)?;
            run(&|r| {
                let (ua, ub) = gate_pair(r, d);
                scaffold::reduce_with(&w, &ua, &ub)?.distance(&scaffold::expected_reduction(&ua, &ub)?)
            })
        }
        (Suite::Scaffold, "purity") => {
            let w = scaffold::build_scaffold(d)?;
            run(&|r| {
                let (ua, ub) = gate_pair(r, d);
                let reduced = scaffold::reduce_with(&w, &ua, &ub)?;
                let p = scaffold::reduced_purity(&reduced, &random_state(d, r), &random_state(2, r), &random_state(d, r))?;
                Ok((1.0 - p).max(0.0))
            })
        }
        (Suite::Scaffold, "gate-fragments") => {
            let s = scaffold::build_s_a_to_b(d)?.vectorize();
            run(&|r| {
                let (ua, ub) = gate_pair(r, d);
                scaffold::gate_fragment_error_with(&s, &ua, &ub)
            })
        }
        (Suite::Scaffold, "composite") => {
            let w = scaffold::transform_scaffold(d)?;
            run(&|r| {
                let (ua, ub) = gate_pair(r, d);
                scaffold::composite_error_with(&w, &ua, &ub)
            })
        }
        _ => Err(qframes::Error::Config(format!("no sampled check {}/{check}", suite.name()))),
    }
}

fn sampled(cfg: &RunConfig, suite: Suite, check: &str, tol: f64) -> VerificationReport {
    guarded(cfg, suite, check, tol, cfg.samples, || {
        let errors = sample_errors(cfg, suite, check)?;
        let (max, i) = worst(&errors);
        let report = VerificationReport::upper(suite.name(), check, max, tol, errors.len(), cfg.seed);
        Ok(if errors.len() > 1 {
            report.with_note(format!("worst sample {i}"))
        } else {
            report
        })
    })
}

fn crf_identity(cfg: &RunConfig) -> VerificationReport {
    single(cfg, Suite::Crf, "identity-fill", strict(cfg, 1e-12), || switch::identity_fill_error(cfg.dim))
}

fn tds_reconstruction(cfg: &RunConfig) -> VerificationReport {
    single(cfg, Suite::Tds, "reconstruction", cfg.tol, || {
        Ok(switch::tds_reconstruction_error(Agent::A, cfg.dim)?.max(switch::tds_reconstruction_error(Agent::B, cfg.dim)?))
    })
}

fn expansion_basis(cfg: &RunConfig) -> VerificationReport {
    single(cfg, Suite::Expansion, "basis-orthogonality", strict(cfg, 1e-12), || {
        Ok(weyl_basis(cfg.dim)?.orthogonality_error())
    })
}

fn expansion_completeness(cfg: &RunConfig) -> VerificationReport {
    single(cfg, Suite::Expansion, "resolution-of-identity", strict(cfg, 1e-12), || {
        Ok(qframes::choi::completeness_error(&weyl_basis(cfg.dim)?))
    })
}

fn expansion_reconstruction(cfg: &RunConfig) -> VerificationReport {
    let tol = cfg.tol;
    guarded(cfg, Suite::Expansion, "weyl-reconstruction", tol, 1, || {
        let d = cfg.dim;
        let basis = weyl_basis(d)?;
        let scale = 1.0 / d as f64;
        let err = switch::crf_expansion_error(Agent::A, &basis, scale)?
            .max(switch::crf_expansion_error(Agent::B, &basis, scale)?);
        let bare = switch::crf_expansion_unconjugated(Agent::A, &basis)?
            .scale(linalg::c(scale, 0.0))
            .distance(&switch::build_switch(d)?)?;
        Ok(VerificationReport::upper(Suite::Expansion.name(), "weyl-reconstruction", err, tol, 1, cfg.seed)
            .with_note(format!("without conjugating the basis kets: error {}", crate::emit::sci(bare, 2))))
    })
}

fn j_unitarity(cfg: &RunConfig) -> VerificationReport {
    single(cfg, Suite::FrameChange, "j-unitarity", strict(cfg, 1e-12), || {
        Ok(build_j_a_to_b(cfg.dim)?.gate().unitarity_error())
    })
}

fn localization(cfg: &RunConfig) -> VerificationReport {
    let tol = cfg.tol;
    let check = "localization";
    guarded(cfg, Suite::FrameChange, check, tol, LOCALIZATION_PROBES, || {
        let d = cfg.dim;
        let mut rng = sample_rng(cfg.seed, Suite::FrameChange.name(), check, 0);
        let ua = haar_unitary(d, &mut rng);
        let b = boundary(&mut rng, d)?;
        let probes: Vec<Matrix> = (1..=LOCALIZATION_PROBES as u64)
            .map(|i| haar_unitary(d, &mut sample_rng(cfg.seed, Suite::FrameChange.name(), check, i)))
            .collect();
        let report = frame_change::verify_localization(&build_j_a_to_b(d)?, &ua, &b, &probes, tol, cfg.seed)?;
        let printed = localization_errors(&PerspectiveChange::from_routes(d, J_ROUTES_CORRUPTED)?, &ua, &b, &probes)?;
        Ok(report.with_note(format!(
            "printed routing table: factor error {}, constancy error {}",
            crate::emit::sci(printed.factor, 2),
            crate::emit::sci(printed.constancy, 2)
        )))
    })
}

fn nogo_config(cfg: &RunConfig) -> nogo::NoGoConfig {
    let mut c = nogo::NoGoConfig::new(cfg.dim);
    c.restarts = cfg.restarts;
    c.max_iters = cfg.max_iters;
    c.seed = cfg.seed;
    c.ansatz.ancilla_dim = cfg.ancilla_dim;
    c
}

fn nogo_floor(cfg: &RunConfig) -> VerificationReport {
    let nc = nogo_config(cfg);
    guarded(cfg, Suite::Nogo, "floor", nogo::NOGO_FLOOR, nc.restarts, || {
        let r = nogo::nogo_search(&nc)?;
        let best_initial = r.initial.iter().cloned().fold(f64::INFINITY, f64::min);
        let mut report = VerificationReport::lower(
            Suite::Nogo.name(),
            "floor",
            r.best_objective,
            nogo::NOGO_FLOOR,
            nc.restarts,
            cfg.seed,
        )
        .with_note(format!("best initial objective {}", crate::emit::sci(best_initial, 5)))
        .with_note(format!(
            "ancilla dimension {}, {} objective samples, {} iterations per restart",
            nc.ansatz.ancilla_dim, nc.samples, nc.max_iters
        ));
        if r.budget_exceeded {
            report = report.with_note("iteration budget exceeded before convergence");
        }
        Ok(report)
    })
}

fn wrap_around(cfg: &RunConfig) -> VerificationReport {
    single(cfg, Suite::Nogo, "wrap-around", WRAP_BOUND, || {
        Ok(nogo::wrap_around_search(cfg.dim, nogo::NoGoConfig::new(cfg.dim).samples, cfg.seed, WRAP_RESTARTS, WRAP_ITERS)?.value)
    })
}

fn gradient(cfg: &RunConfig) -> VerificationReport {
    single(cfg, Suite::Nogo, "gradient-check", GRADIENT_BOUND, || {
        let nc = nogo_config(cfg);
        let samples = nogo::draw_samples(cfg.dim, nc.samples, cfg.seed);
        Ok(nogo::gradient_check(&nc.ansatz, &samples, GRADIENT_POINTS, GRADIENT_STEP, cfg.seed))
    })
}

fn s_unitarity(cfg: &RunConfig) -> VerificationReport {
    let tol = strict(cfg, 1e-12);
    guarded(cfg, Suite::Scaffold, "s-unitarity", tol, 1, || {
        let s = scaffold::build_s_a_to_b(cfg.dim)?;
        let report = VerificationReport::upper(Suite::Scaffold.name(), "s-unitarity", s.unitarity_error(), tol, 1, cfg.seed);
        Ok(if scaffold::s_acts_only_on_k(&s) {
            report
        } else {
            report.fail_with("S touches a global wire")
        })
    })
}

fn transformed_form(cfg: &RunConfig) -> VerificationReport {
    let r = single(cfg, Suite::Scaffold, "transformed-form", strict(cfg, 1e-12), || {
        scaffold::transformed_scaffold_error(cfg.dim)
    });
    r.with_note(scaffold::W_A_GIVEN_B_NOTE)
}

fn round_trip(cfg: &RunConfig) -> VerificationReport {
    single(cfg, Suite::Scaffold, "round-trip", strict(cfg, 1e-13), || scaffold::round_trip_error(cfg.dim))
}

fn slot_symmetry(cfg: &RunConfig) -> VerificationReport {
    let tol = strict(cfg, 1e-12);
    guarded(cfg, Suite::Scaffold, "slot-symmetry", tol, 1, || {
        let d = cfg.dim;
        let mut rng = sample_rng(cfg.seed, Suite::Scaffold.name(), "slot-symmetry", 0);
        let g = scaffold::build_delocalized_gate(Side::BInAFrame, &haar_unitary(d, &mut rng))?;
        let err = scaffold::slot_symmetry_error(&g, [scaffold::C_0, scaffold::C_0_IN])?;
        let w = scaffold::slot_symmetry_error(&scaffold::build_scaffold(d)?, [scaffold::C_0, "C_7"])?;
        Ok(VerificationReport::upper(Suite::Scaffold.name(), "slot-symmetry", err, tol, 1, cfg.seed)
            .with_note(format!("delocalized gate; the scaffold itself differs by {}", crate::emit::sci(w, 2))))
    })
}
