//! The quantum switch and its decompositions.
//!
//! Branch convention: control `|0⟩` means Alice acts first (A≺B), control
//! `|1⟩` means Bob acts first. Wires:
//!
//! | wire | role |
//! |------|------|
//! | `P_C`, `P_S` | global past: control qubit and target |
//! | `A_I`, `A_O` | Alice's slot |
//! | `B_I`, `B_O` | Bob's slot |
//! | `F_S`, `F_C` | global future: target and control |

use num_complex::Complex64;

use crate::choi::{double_ket, insert_gate, link, wire, UnitaryBasis};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::tensor::{LabeledTensor, SystemLabel};

pub const P_C: &str = "P_C";
pub const P_S: &str = "P_S";
pub const A_I: &str = "A_I";
pub const A_O: &str = "A_O";
pub const B_I: &str = "B_I";
pub const B_O: &str = "B_O";
pub const F_S: &str = "F_S";
pub const F_C: &str = "F_C";

/// Link wire between a past and a future fragment.
pub const E_C: &str = "E_C";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Agent {
    A,
    B,
}

impl Agent {
    pub fn other(self) -> Self {
        match self {
            Agent::A => Agent::B,
            Agent::B => Agent::A,
        }
    }

    /// `(output, input)` of this agent's slot.
    pub fn slot(self) -> (&'static str, &'static str) {
        match self {
            Agent::A => (A_O, A_I),
            Agent::B => (B_O, B_I),
        }
    }

    /// Ancilla wires `(target, control)` used by this agent's TDS fragments.
    pub fn tds_ancillas(self) -> (&'static str, &'static str) {
        match self {
            Agent::A => ("EA'_S", "EA'_C"),
            Agent::B => ("EB'_S", "EB'_C"),
        }
    }
}

pub(crate) fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    Ok(())
}

/// `|b_1⟩|b_2⟩… ⊗ kets`, where each control bit lives on a qubit wire.
pub(crate) fn branch(bits: &[(&str, usize)], kets: &[LabeledTensor]) -> Result<LabeledTensor> {
    let mut t = LabeledTensor::scalar(Complex64::new(1.0, 0.0));
    for (name, b) in bits {
        t = t.product(&LabeledTensor::basis(SystemLabel::new(*name, 2), *b)?)?;
    }
    for k in kets {
        t = t.product(k)?;
    }
    Ok(t)
}

pub(crate) fn two_branches(b0: LabeledTensor, b1: LabeledTensor) -> Result<LabeledTensor> {
    b0.add(&b1)
}

/// Full switch with both slots open.
pub fn build_switch(d: usize) -> Result<LabeledTensor> {
    check_dim(d)?;
    two_branches(
        branch(
            &[(P_C, 0), (F_C, 0)],
            &[wire(A_I, P_S, d), wire(B_I, A_O, d), wire(F_S, B_O, d)],
        )?,
        branch(
            &[(P_C, 1), (F_C, 1)],
            &[wire(B_I, P_S, d), wire(A_I, B_O, d), wire(F_S, A_O, d)],
        )?,
    )
}

/// CRF form: `agent`'s slot open, the other agent's gate already in place
/// and delocalized across `agent`'s past and future.
pub fn crf_process(agent: Agent, other_gate: &Matrix) -> Result<LabeledTensor> {
    let d = other_gate.nrows();
    check_dim(d)?;
    let (o, i) = agent.slot();
    let u = other_gate;
    two_branches(
        branch(
            &[(F_C, 0), (P_C, 0)],
            &match agent {
                Agent::A => [wire(i, P_S, d), double_ket(u, F_S, o)],
                Agent::B => [double_ket(u, i, P_S), wire(F_S, o, d)],
            },
        )?,
        branch(
            &[(F_C, 1), (P_C, 1)],
            &match agent {
                Agent::A => [wire(F_S, o, d), double_ket(u, i, P_S)],
                Agent::B => [wire(i, P_S, d), double_ket(u, F_S, o)],
            },
        )?,
    )
}

/// Past and future fragments of the CRF form, joined by the control link
/// `E_C`. The past fragment carries `P_C`, `P_S` and the agent's input; the
/// future fragment carries the agent's output, `F_S` and `F_C`.
pub fn crf_fragments(agent: Agent, other_gate: &Matrix) -> Result<(LabeledTensor, LabeledTensor)> {
    let d = other_gate.nrows();
    check_dim(d)?;
    let (o, i) = agent.slot();
    let u = other_gate;
    let id = linalg::identity(d);
    // Branch on which the other agent acts in the past.
    let past_gate = |c: usize| match (agent, c) {
        (Agent::A, 1) | (Agent::B, 0) => u,
        _ => &id,
    };
    let future_gate = |c: usize| match (agent, c) {
        (Agent::A, 0) | (Agent::B, 1) => u,
        _ => &id,
    };
    let past = two_branches(
        branch(&[(E_C, 0), (P_C, 0)], &[double_ket(past_gate(0), i, P_S)])?,
        branch(&[(E_C, 1), (P_C, 1)], &[double_ket(past_gate(1), i, P_S)])?,
    )?;
    let future = two_branches(
        branch(&[(F_C, 0), (E_C, 0)], &[double_ket(future_gate(0), F_S, o)])?,
        branch(&[(F_C, 1), (E_C, 1)], &[double_ket(future_gate(1), F_S, o)])?,
    )?;
    Ok((past, future))
}

/// Time-delocalized-subsystem fragments `(L, R)` for `agent`. Linking them
/// over the agent's ancillas gives back the full switch.
pub fn tds_fragments(agent: Agent, d: usize) -> Result<(LabeledTensor, LabeledTensor)> {
    check_dim(d)?;
    let (es, ec) = agent.tds_ancillas();
    // `first` is the control value on which this agent acts before the
    // other one.
    let (me_o, me_i) = agent.slot();
    let (you_o, you_i) = agent.other().slot();
    let first = match agent {
        Agent::A => 0,
        Agent::B => 1,
    };
    let second = 1 - first;
    let l = two_branches(
        branch(
            &[(P_C, first), (ec, first)],
            &[wire(me_i, P_S, d), wire(es, you_o, d)],
        )?,
        branch(
            &[(P_C, second), (ec, second)],
            &[wire(me_i, you_o, d), wire(es, P_S, d)],
        )?,
    )?;
    let r = two_branches(
        branch(
            &[(ec, first), (F_C, first)],
            &[wire(you_i, me_o, d), wire(F_S, es, d)],
        )?,
        branch(
            &[(ec, second), (F_C, second)],
            &[wire(you_i, es, d), wire(F_S, me_o, d)],
        )?,
    )?;
    Ok((l, r))
}

/// Inserts `U_A` and `U_B` into their slots.
pub fn fill(process: &LabeledTensor, ua: &Matrix, ub: &Matrix) -> Result<LabeledTensor> {
    let w = insert_gate(process, ua, A_O, A_I)?;
    insert_gate(&w, ub, B_O, B_I)
}

/// Matrix of a filled switch as a map `(P_C, P_S) → (F_C, F_S)`.
pub fn induced_map(filled: &LabeledTensor) -> Result<Matrix> {
    filled.to_matrix(&[F_C, F_S], &[P_C, P_S])
}

/// `W(U_A, U_B)` reached three ways: inserting both gates into the full
/// switch, inserting `U_A` into Alice's CRF form, and inserting `U_B` into
/// Bob's. Returns the largest pairwise phase-insensitive distance.
pub fn crf_agreement_error(ua: &Matrix, ub: &Matrix) -> Result<f64> {
    let d = ua.nrows();
    let full = fill(&build_switch(d)?, ua, ub)?;
    let via_a = insert_gate(&crf_process(Agent::A, ub)?, ua, A_O, A_I)?;
    let via_b = insert_gate(&crf_process(Agent::B, ua)?, ub, B_O, B_I)?;
    max_phase_error(&[&full, &via_a, &via_b])
}

/// Same as [`crf_agreement_error`] through the two TDS factorizations.
pub fn tds_agreement_error(ua: &Matrix, ub: &Matrix) -> Result<f64> {
    let d = ua.nrows();
    let full = fill(&build_switch(d)?, ua, ub)?;
    let mut routes = vec![full];
    for agent in [Agent::A, Agent::B] {
        let (l, r) = tds_fragments(agent, d)?;
        routes.push(fill(&link(&l, &r)?, ua, ub)?);
    }
    max_phase_error(&routes.iter().collect::<Vec<_>>())
}

pub(crate) fn max_phase_error(ts: &[&LabeledTensor]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (k, a) in ts.iter().enumerate() {
        for b in &ts[k + 1..] {
            worst = worst.max(a.equal_up_to_phase(b, 0.0)?.error);
        }
    }
    Ok(worst)
}

/// Distance of `link(L, R)` from the bare switch.
pub fn tds_reconstruction_error(agent: Agent, d: usize) -> Result<f64> {
    let (l, r) = tds_fragments(agent, d)?;
    link(&l, &r)?.distance(&build_switch(d)?)
}

/// Distance between the directly built CRF form and the switch with the
/// other agent's gate inserted.
pub fn crf_consistency_error(agent: Agent, other_gate: &Matrix) -> Result<f64> {
    let d = other_gate.nrows();
    let (o, i) = agent.other().slot();
    let inserted = insert_gate(&build_switch(d)?, other_gate, o, i)?;
    crf_process(agent, other_gate)?.distance(&inserted)
}

/// Distance between `link(past, future)` and the CRF form.
pub fn crf_fragment_error(agent: Agent, other_gate: &Matrix) -> Result<f64> {
    let (p, f) = crf_fragments(agent, other_gate)?;
    link(&p, &f)?.distance(&crf_process(agent, other_gate)?)
}

/// Distance of the induced map of `W(I, I)` from the identity.
pub fn identity_fill_error(d: usize) -> Result<f64> {
    let id = linalg::identity(d);
    let m = induced_map(&fill(&build_switch(d)?, &id, &id)?)?;
    Ok((m - linalg::identity(2 * d)).norm())
}

/// `‖M†M − I‖` for the induced map of `W(U_A, U_B)`.
pub fn process_unitarity_error(ua: &Matrix, ub: &Matrix) -> Result<f64> {
    let m = induced_map(&fill(&build_switch(ua.nrows())?, ua, ub)?)?;
    Ok(linalg::unitarity_error(&m))
}

/// Control `|0⟩` must induce `U_B U_A`, control `|1⟩` must induce `U_A U_B`.
pub fn control_marginal_error(ua: &Matrix, ub: &Matrix) -> Result<f64> {
    let d = ua.nrows();
    let m = induced_map(&fill(&build_switch(d)?, ua, ub)?)?;
    let b00 = m.view((0, 0), (d, d)) - ub * ua;
    let b11 = m.view((d, d), (d, d)) - ua * ub;
    let off = m.view((0, d), (d, d)).norm() + m.view((d, 0), (d, d)).norm();
    Ok(b00.norm().max(b11.norm()).max(off))
}

/// `Σ_i crf_process(agent, U_i) ⊗ conj|U_i⟩⟩` on the other agent's slot,
/// scaled by `scale`. With `scale = 1/d` this reconstructs the switch.
pub fn crf_expansion(agent: Agent, basis: &UnitaryBasis, scale: f64) -> Result<LabeledTensor> {
    let (o, i) = agent.other().slot();
    let terms = basis
        .elements()
        .iter()
        .map(|u| crf_process(agent, u)?.product(&double_ket(u, o, i).conjugate()))
        .collect::<Result<Vec<_>>>()?;
    Ok(LabeledTensor::sum(&terms)?.scale(Complex64::new(scale, 0.0)))
}

/// Relative reconstruction error of [`crf_expansion`] against the switch.
pub fn crf_expansion_error(agent: Agent, basis: &UnitaryBasis, scale: f64) -> Result<f64> {
    crf_expansion(agent, basis, scale)?.distance(&build_switch(basis.dim())?)
}

/// Like [`crf_expansion`] but without conjugating the basis kets. Agrees
/// with the switch only when every basis element is real.
pub fn crf_expansion_unconjugated(agent: Agent, basis: &UnitaryBasis) -> Result<LabeledTensor> {
    let (o, i) = agent.other().slot();
    let terms = basis
        .elements()
        .iter()
        .map(|u| crf_process(agent, u)?.product(&double_ket(u, o, i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(LabeledTensor::sum(&terms)?.scale(Complex64::new(1.0 / basis.dim() as f64, 0.0)))
}
