//! Switch embedded in a spatiotemporal scaffold.
//!
//! Four controlled swaps move the target `S` and a reference lane `R`
//! through three open slots: Bob's `T_1→T_2` and `T_5→T_6`, Alice's
//! `T_3→T_4`. Inside the scaffold control `|0⟩` sends the target through
//! Bob's early slot first (B≺A), the opposite of the bare switch, so
//! comparisons with [`build_switch`] flip both control wires.
//!
//! `S_{A→B}` is a controlled relabeling of the slot wires `T_k → T̃_k`
//! (written `~T_k`) that localizes Bob's gate at `~T_3→~T_4` and
//! delocalizes Alice's, leaving the global past `{C_0, S_0, R_0}` and
//! future `{C_7, S_7, R_7}` untouched.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::choi::{double_ket, link, wire, GateSpec};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::report::VerificationReport;
use crate::switch::{self, build_switch, check_dim, fill};
use crate::tensor::{LabeledTensor, SystemLabel};

/// Scaffold control input; also the control output of the delocalized gates.
pub const C_0: &str = "C_0";
/// Global-past control wire feeding a delocalized gate.
pub const C_0_IN: &str = "C_0.in";
/// Control output of `S_{A→B}`, renamed to `C_0` after linking.
pub const C_0_S: &str = "C_0.s";

pub fn t(k: usize) -> String {
    format!("T_{k}")
}

pub fn tilde(k: usize) -> String {
    format!("~T_{k}")
}

/// Wires contracted by a frame change: `C_0, T_1, …, T_6`.
pub fn k_labels() -> Vec<String> {
    std::iter::once(C_0.to_string()).chain((1..=6).map(t)).collect()
}

pub const GLOBAL_WIRES: [&str; 6] = ["C_0", "S_0", "R_0", "C_7", "S_7", "R_7"];

fn swap_gate(
    d: usize,
    ctrl: (&str, &str),
    outputs: [&str; 2],
    inputs: [&str; 2],
    routes: [[usize; 2]; 2],
) -> Result<GateSpec> {
    GateSpec::controlled_routing(
        ctrl.0,
        ctrl.1,
        outputs.iter().map(|n| SystemLabel::new(*n, d)).collect(),
        inputs.iter().map(|n| SystemLabel::new(*n, d)).collect(),
        &[routes[0].to_vec(), routes[1].to_vec()],
    )
}

/// The four controlled swaps, as printed, except that the `|1⟩` branch of
/// the last one sends `S_6` to `R_7` (its printed output `T_7` would leave
/// the box non-unitary).
pub fn build_timestep_swaps(d: usize) -> Result<[GateSpec; 4]> {
    check_dim(d)?;
    Ok([
        // c0: S_1←R_0, T_1←S_0   c1: T_1←R_0, S_1←S_0
        swap_gate(d, ("C_1", "C_0"), ["S_1", "T_1"], ["R_0", "S_0"], [[0, 1], [1, 0]])?,
        // c0: T_3←T_2, S_3←S_2   c1: T_3←S_2, S_3←T_2
        swap_gate(d, ("C_3", "C_2"), ["T_3", "S_3"], ["T_2", "S_2"], [[0, 1], [1, 0]])?,
        // c0: S_5←T_4, T_5←S_4   c1: T_5←T_4, S_5←S_4
        swap_gate(d, ("C_5", "C_4"), ["S_5", "T_5"], ["T_4", "S_4"], [[0, 1], [1, 0]])?,
        // c0: S_7←S_6, R_7←T_6   c1: S_7←T_6, R_7←S_6
        swap_gate(d, ("C_7", "C_6"), ["S_7", "R_7"], ["S_6", "T_6"], [[0, 1], [1, 0]])?,
    ])
}

/// Internal `(out, in)` splices joining consecutive swaps.
pub const SPLICES: [[(&str, &str); 2]; 3] = [
    [("C_1", "C_2"), ("S_1", "S_2")],
    [("C_3", "C_4"), ("S_3", "S_4")],
    [("C_5", "C_6"), ("S_5", "S_6")],
];

fn splice(a: &LabeledTensor, b: &LabeledTensor, pairs: &[(&str, &str)]) -> Result<LabeledTensor> {
    for (o, i) in pairs {
        let (lo, li) = (a.label(o), b.label(i));
        let reason = match (lo, li) {
            (None, _) => Some(format!("`{o}` is not an output of the earlier box")),
            (_, None) => Some(format!("`{i}` is not an input of the later box")),
            (Some(x), Some(y)) if x.dim() != y.dim() => Some(format!("dimensions {} and {}", x.dim(), y.dim())),
            _ => None,
        };
        if let Some(reason) = reason {
            return Err(Error::SpliceMismatch {
                out: o.to_string(),
                input: i.to_string(),
                reason,
            });
        }
    }
    a.contract_with(b, pairs)
}

/// `|W_{B|A}⟩⟩`: the swaps linked along [`SPLICES`]. Open wires: `C_0, S_0,
/// R_0` in, `C_7, S_7, R_7` out, and the slot wires `T_1 … T_6`.
pub fn build_scaffold(d: usize) -> Result<LabeledTensor> {
    let [a, b, c, e] = build_timestep_swaps(d)?;
    let mut w = a.vectorize();
    for (next, pairs) in [b, c, e].iter().zip(SPLICES) {
        w = splice(&w, &next.vectorize(), &pairs)?;
    }
    Ok(w)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Bob's gate delocalized over `T_1→T_2` and `T_5→T_6`.
    BInAFrame,
    /// Alice's gate delocalized over `~T_1→~T_2` and `~T_5→~T_6`.
    AInBFrame,
}

/// Controlled placement of `g` into one of two slots, reading the control
/// on `C_0.in` and passing it on to `C_0`.
///
/// `B|A`: `|00⟩ |g⟩⟩^{T_2T_1} |I⟩⟩^{T_6T_5} + |11⟩ |I⟩⟩^{T_2T_1} |g⟩⟩^{T_6T_5}`
///
/// `A|B`: `|00⟩ |I⟩⟩^{~T_2~T_1} |g⟩⟩^{~T_6~T_5} + |11⟩ |g⟩⟩^{~T_2~T_1} |I⟩⟩^{~T_6~T_5}`
pub fn build_delocalized_gate(side: Side, g: &Matrix) -> Result<LabeledTensor> {
    let d = g.nrows();
    check_dim(d)?;
    let id = linalg::identity(d);
    type Placement<'a> = (fn(usize) -> String, [&'a Matrix; 2], [&'a Matrix; 2]);
    let (name, early, late): Placement = match side {
        Side::BInAFrame => (t, [g, &id], [&id, g]),
        Side::AInBFrame => (tilde, [&id, g], [g, &id]),
    };
    let mut branches = Vec::new();
    for c in 0..2 {
        branches.push(switch::branch(
            &[(C_0, c), (C_0_IN, c)],
            &[
                double_ket(early[c], &name(2), &name(1)),
                double_ket(late[c], &name(6), &name(5)),
            ],
        )?);
    }
    switch::two_branches(branches.remove(0), branches.remove(0))
}

/// `(C_0.in, slot inputs) → (C_0, slot outputs)` matrix of a delocalized
/// gate.
pub fn delocalized_gate_matrix(side: Side, g: &Matrix) -> Result<Matrix> {
    let name: fn(usize) -> String = match side {
        Side::BInAFrame => t,
        Side::AInBFrame => tilde,
    };
    let (o2, o6, i1, i5) = (name(2), name(6), name(1), name(5));
    build_delocalized_gate(side, g)?.to_matrix(&[C_0, &o2, &o6], &[C_0_IN, &i1, &i5])
}

/// Bare switch with both control wires flipped, renamed onto the
/// scaffold's global wires, tensored with `|I⟩⟩^{R_7 R_0}`.
pub fn expected_reduction(ua: &Matrix, ub: &Matrix) -> Result<LabeledTensor> {
    let d = ua.nrows();
    let x = linalg::pauli_x();
    let sw = fill(&build_switch(d)?, ua, ub)?
        .relabel_many(&[
            (switch::P_C, C_0),
            (switch::F_C, "C_7"),
            (switch::P_S, "S_0"),
            (switch::F_S, "S_7"),
        ])?
        .apply_local(C_0, &x)?
        .apply_local("C_7", &x)?;
    wire("R_7", "R_0", d).product(&sw)
}

/// Both agents' gates inserted into the scaffold, control renamed to `C_0`.
pub fn reduce(ua: &Matrix, ub: &Matrix) -> Result<LabeledTensor> {
    reduce_with(&build_scaffold(ua.nrows())?, ua, ub)
}

/// [`reduce`] against a prebuilt scaffold.
pub fn reduce_with(scaffold: &LabeledTensor, ua: &Matrix, ub: &Matrix) -> Result<LabeledTensor> {
    let gates = build_delocalized_gate(Side::BInAFrame, ub)?.product(&double_ket(ua, &t(4), &t(3)))?;
    link(scaffold, &gates)?.relabel(C_0_IN, C_0)
}

pub fn reduce_to_switch_error(ua: &Matrix, ub: &Matrix) -> Result<f64> {
    reduce(ua, ub)?.distance(&expected_reduction(ua, ub)?)
}

/// Largest eigenvalue of the normalized `(C_7, S_7)` state after feeding
/// `r` into `R_0`, `control ⊗ target` into `(C_0, S_0)`, and tracing out
/// `R_7`.
pub fn reduced_purity(
    reduced: &LabeledTensor,
    r: &[Complex64],
    control: &[Complex64],
    target: &[Complex64],
) -> Result<f64> {
    let out = reduced
        .contract_with(&LabeledTensor::vector("R_0", r)?, &[("R_0", "R_0")])?
        .contract_with(&LabeledTensor::vector(C_0, control)?, &[(C_0, C_0)])?
        .contract_with(&LabeledTensor::vector("S_0", target)?, &[("S_0", "S_0")])?;
    let m = out.to_matrix(&["C_7", "S_7"], &["R_7"])?;
    let rho: DMatrix<Complex64> = &m * m.adjoint();
    let tr = rho.trace().re;
    if tr <= 0.0 {
        return Err(Error::ZeroTensor);
    }
    let eig = (rho / Complex64::new(tr, 0.0)).symmetric_eigen();
    Ok(eig.eigenvalues.iter().cloned().fold(f64::MIN, f64::max))
}

/// `S_{A→B}` as printed: control `C_0 → C_0.s`, inputs `T_1…T_6`, outputs
/// `~T_1…~T_6`.
///
/// Branch 0: `~T_4←T_2, ~T_5←T_3, ~T_6←T_4, ~T_3←T_1, ~T_1←T_5, ~T_2←T_6`.
/// Branch 1: `~T_4←T_6, ~T_1←T_3, ~T_2←T_4, ~T_3←T_5, ~T_6←T_2, ~T_5←T_1`.
pub fn build_s_a_to_b(d: usize) -> Result<GateSpec> {
    check_dim(d)?;
    GateSpec::controlled_routing(
        C_0_S,
        C_0,
        (1..=6).map(|k| SystemLabel::new(tilde(k), d)).collect(),
        (1..=6).map(|k| SystemLabel::new(t(k), d)).collect(),
        &[vec![4, 5, 0, 1, 2, 3], vec![2, 3, 4, 5, 0, 1]],
    )
}

/// `⟨⟨I|^{KK} S |U_{B|A}(U_B)⟩⟩ |U_A⟩⟩^{T_4 T_3}`.
pub fn transform_gate_fragments(ua: &Matrix, ub: &Matrix) -> Result<LabeledTensor> {
    transform_gate_fragments_with(&build_s_a_to_b(ua.nrows())?.vectorize(), ua, ub)
}

/// [`transform_gate_fragments`] with a prebuilt `|S⟩⟩`.
pub fn transform_gate_fragments_with(s: &LabeledTensor, ua: &Matrix, ub: &Matrix) -> Result<LabeledTensor> {
    let gates = build_delocalized_gate(Side::BInAFrame, ub)?.product(&double_ket(ua, &t(4), &t(3)))?;
    link(s, &gates)?.relabel(C_0_S, C_0)
}

/// `|U_{A|B}(U_A)⟩⟩ |U_B⟩⟩^{~T_4 ~T_3}`.
pub fn expected_gate_fragments(ua: &Matrix, ub: &Matrix) -> Result<LabeledTensor> {
    build_delocalized_gate(Side::AInBFrame, ua)?.product(&double_ket(ub, &tilde(4), &tilde(3)))
}

pub fn gate_fragment_error(ua: &Matrix, ub: &Matrix) -> Result<f64> {
    gate_fragment_error_with(&build_s_a_to_b(ua.nrows())?.vectorize(), ua, ub)
}

pub fn gate_fragment_error_with(s: &LabeledTensor, ua: &Matrix, ub: &Matrix) -> Result<f64> {
    let got = transform_gate_fragments_with(s, ua, ub)?;
    Ok(got.equal_up_to_phase(&expected_gate_fragments(ua, ub)?, 0.0)?.error)
}

/// `⟨⟨I|^{KK} S† |W_{B|A}⟩⟩`, control renamed to `C_0`.
pub fn transform_scaffold(d: usize) -> Result<LabeledTensor> {
    let s_dag = build_s_a_to_b(d)?.adjoint().vectorize();
    link(&build_scaffold(d)?, &s_dag)?.relabel(C_0_S, C_0)
}

/// `|W_{A|B}⟩⟩` written out branch by branch, with the untilded `T_4` of
/// the printed control-0 branch read as `~T_4`.
pub fn expected_transformed_scaffold(d: usize) -> Result<LabeledTensor> {
    let ts = |k| tilde(k);
    switch::two_branches(
        switch::branch(
            &[("C_7", 0), (C_0, 0)],
            &[
                wire(&ts(3), "S_0", d),
                wire(&ts(1), "R_0", d),
                wire(&ts(5), &ts(4), d),
                wire("S_7", &ts(6), d),
                wire("R_7", &ts(2), d),
            ],
        )?,
        switch::branch(
            &[("C_7", 1), (C_0, 1)],
            &[
                wire(&ts(5), "R_0", d),
                wire(&ts(1), "S_0", d),
                wire("R_7", &ts(6), d),
                wire(&ts(3), &ts(2), d),
                wire("S_7", &ts(4), d),
            ],
        )?,
    )
}

/// Note recorded with the scaffold-transform check.
pub const W_A_GIVEN_B_NOTE: &str = "control-0 branch: printed T_4 read as ~T_4";

pub fn transformed_scaffold_error(d: usize) -> Result<f64> {
    transform_scaffold(d)?.distance(&expected_transformed_scaffold(d)?)
}

/// Transformed gates inserted into the transformed scaffold, against
/// `|I⟩⟩^{R_7 R_0} ⊗` the flipped switch.
pub fn composite_error(ua: &Matrix, ub: &Matrix) -> Result<f64> {
    composite_error_with(&transform_scaffold(ua.nrows())?, ua, ub)
}

/// [`composite_error`] against a prebuilt transformed scaffold.
pub fn composite_error_with(transformed: &LabeledTensor, ua: &Matrix, ub: &Matrix) -> Result<f64> {
    let gates = expected_gate_fragments(ua, ub)?;
    let out = link(transformed, &gates)?.relabel(C_0_IN, C_0)?;
    out.distance(&expected_reduction(ua, ub)?)
}

/// Applies `S` to the transformed scaffold and compares with the original.
pub fn round_trip_error(d: usize) -> Result<f64> {
    let w = transform_scaffold(d)?.relabel(C_0, C_0_S)?;
    let back = link(&w, &build_s_a_to_b(d)?.vectorize())?;
    back.distance(&build_scaffold(d)?)
}

/// True iff `S` touches nothing outside `K` and the tilde wires.
pub fn s_acts_only_on_k(s: &GateSpec) -> bool {
    let k = k_labels();
    s.inputs().iter().all(|l| k.iter().any(|x| x == l.name()))
        && s.outputs()
            .iter()
            .all(|l| l.name() == C_0_S || l.name().starts_with("~T_"))
        && s.outputs()
            .iter()
            .chain(s.inputs())
            .all(|l| !GLOBAL_WIRES[1..].contains(&l.name()))
}

/// Distance between `x` and its image under `(T_1,T_2) ↔ (T_5,T_6)` with
/// both control wires flipped.
pub fn slot_symmetry_error(x: &LabeledTensor, controls: [&str; 2]) -> Result<f64> {
    let pauli = linalg::pauli_x();
    let mut y = x.relabel_many(&[("T_1", "T_5"), ("T_5", "T_1"), ("T_2", "T_6"), ("T_6", "T_2")])?;
    for c in controls {
        y = y.apply_local(c, &pauli)?;
    }
    x.distance(&y)
}

/// Worst [`reduce_to_switch_error`] over `pairs`.
pub fn reduce_to_switch(pairs: &[(Matrix, Matrix)], tol: f64, seed: u64) -> Result<VerificationReport> {
    let mut worst: f64 = 0.0;
    for (ua, ub) in pairs {
        worst = worst.max(reduce_to_switch_error(ua, ub)?);
    }
    Ok(VerificationReport::upper("scaffold", "reduction", worst, tol, pairs.len(), seed))
}

/// Worst [`gate_fragment_error`] over `pairs`.
pub fn verify_gate_fragments(pairs: &[(Matrix, Matrix)], tol: f64, seed: u64) -> Result<VerificationReport> {
    let s = build_s_a_to_b(pairs.first().map_or(2, |p| p.0.nrows()))?.vectorize();
    let mut worst: f64 = 0.0;
    for (ua, ub) in pairs {
        worst = worst.max(gate_fragment_error_with(&s, ua, ub)?);
    }
    Ok(VerificationReport::upper("scaffold", "gate-fragments", worst, tol, pairs.len(), seed))
}

/// Larger of the distance to the written-out `W_{A|B}` and the worst
/// composite error over `pairs`. The label resolution is recorded as a note.
pub fn verify_transformed_scaffold(d: usize, pairs: &[(Matrix, Matrix)], tol: f64, seed: u64) -> Result<VerificationReport> {
    let w = transform_scaffold(d)?;
    let mut worst = w.distance(&expected_transformed_scaffold(d)?)?;
    for (ua, ub) in pairs {
        worst = worst.max(composite_error_with(&w, ua, ub)?);
    }
    Ok(VerificationReport::upper("scaffold", "transformed-scaffold", worst, tol, pairs.len(), seed).with_note(W_A_GIVEN_B_NOTE))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, hadamard, pauli_x, pauli_z};
    use crate::sampling::{haar_unitary, random_state, sample_rng};

    #[test]
    fn swaps_are_unitary_permutations() {
        for d in [2, 3] {
            for g in build_timestep_swaps(d).unwrap() {
                assert_eq!(g.unitarity_error(), 0.0);
                assert_eq!(g.inputs().len(), 3);
            }
        }
    }

    #[test]
    fn first_swap_reading() {
        let [t01, t12, ..] = build_timestep_swaps(2).unwrap();
        let v = t01.vectorize();
        // control 0: R_0 → S_1, S_0 → T_1
        let amp = v
            .get_named(&[("C_1", 0), ("C_0", 0), ("R_0", 1), ("S_1", 1), ("S_0", 0), ("T_1", 0)])
            .unwrap();
        assert_eq!(amp, c(1.0, 0.0));
        let amp = v
            .get_named(&[("C_1", 0), ("C_0", 0), ("R_0", 1), ("T_1", 1), ("S_0", 0), ("S_1", 0)])
            .unwrap();
        assert_eq!(amp, c(0.0, 0.0));
        // control 1 on the second swap exchanges the lanes
        let v = t12.vectorize();
        let amp = v
            .get_named(&[("C_3", 1), ("C_2", 1), ("T_2", 1), ("S_3", 1), ("S_2", 0), ("T_3", 0)])
            .unwrap();
        assert_eq!(amp, c(1.0, 0.0));
    }

    #[test]
    fn open_wire_census() {
        let w = build_scaffold(2).unwrap();
        let mut names: Vec<&str> = w.names();
        names.sort();
        let mut expected = vec!["C_0", "C_7", "R_0", "R_7", "S_0", "S_7", "T_1", "T_2", "T_3", "T_4", "T_5", "T_6"];
        expected.sort();
        assert_eq!(names, expected);
        let r = reduce(&hadamard(), &pauli_z()).unwrap();
        let mut names: Vec<&str> = r.names();
        names.sort();
        let mut global = GLOBAL_WIRES.to_vec();
        global.sort();
        assert_eq!(names, global);
    }

    #[test]
    fn scaffold_is_unitary() {
        let w = build_scaffold(2).unwrap();
        let m = w
            .to_matrix(&["C_7", "S_7", "R_7", "T_1", "T_3", "T_5"], &["C_0", "S_0", "R_0", "T_2", "T_4", "T_6"])
            .unwrap();
        assert_eq!(linalg::unitarity_error(&m), 0.0);
    }

    #[test]
    fn identity_slots_control_zero_is_straight() {
        let d = 2;
        let id = linalg::identity(d);
        let r = reduce(&id, &id).unwrap().select(C_0, 0).unwrap().select("C_7", 0).unwrap();
        let expected = wire("R_7", "R_0", d).product(&wire("S_7", "S_0", d)).unwrap();
        assert_eq!(r.distance(&expected).unwrap(), 0.0);
        assert_eq!(reduce_to_switch_error(&id, &id).unwrap(), 0.0);
    }

    #[test]
    fn reduction_matches_switch() {
        let mut rng = sample_rng(1, "scaffold", "reduce", 0);
        for d in [2, 3] {
            let ua = haar_unitary(d, &mut rng);
            let ub = haar_unitary(d, &mut rng);
            assert!(reduce_to_switch_error(&ua, &ub).unwrap() < 1e-14);
        }
    }

    #[test]
    fn wrong_splice_is_rejected() {
        let [a, b, ..] = build_timestep_swaps(2).unwrap();
        let err = splice(&a.vectorize(), &b.vectorize(), &[("C_1", "C_4")]).unwrap_err();
        assert!(matches!(err, Error::SpliceMismatch { .. }));
    }

    #[test]
    fn reduced_state_stays_pure() {
        let mut rng = sample_rng(2, "scaffold", "purity", 0);
        let d = 2;
        let ua = haar_unitary(d, &mut rng);
        let ub = haar_unitary(d, &mut rng);
        let r = reduce(&ua, &ub).unwrap();
        let p = reduced_purity(&r, &random_state(d, &mut rng), &random_state(2, &mut rng), &random_state(d, &mut rng))
            .unwrap();
        assert!(p >= 1.0 - 1e-10, "{p}");
    }

    #[test]
    fn delocalized_gate_examples() {
        let d = 2;
        let id = linalg::identity(d);
        let g = build_delocalized_gate(Side::BInAFrame, &id).unwrap();
        let expected = LabeledTensor::product_all(&[
            wire(C_0, C_0_IN, 2),
            wire("T_2", "T_1", d),
            wire("T_6", "T_5", d),
        ])
        .unwrap();
        assert_eq!(g.distance(&expected).unwrap(), 0.0);

        let h = hadamard();
        for side in [Side::BInAFrame, Side::AInBFrame] {
            let m = delocalized_gate_matrix(side, &h).unwrap();
            assert!(linalg::unitarity_error(&m) < 1e-14);
        }
        let b0 = build_delocalized_gate(Side::BInAFrame, &h).unwrap().select(C_0, 0).unwrap().select(C_0_IN, 0).unwrap();
        let placed = double_ket(&h, "T_2", "T_1").product(&wire("T_6", "T_5", d)).unwrap();
        assert_eq!(b0.distance(&placed).unwrap(), 0.0);
    }

    #[test]
    fn s_is_a_unitary_controlled_permutation() {
        for d in [2, 3] {
            let s = build_s_a_to_b(d).unwrap();
            assert_eq!(s.unitarity_error(), 0.0);
            assert!(s_acts_only_on_k(&s));
            let n = d.pow(6);
            let b0 = s.matrix().view((0, 0), (n, n)).clone_owned();
            assert!(b0.iter().all(|z| *z == c(0.0, 0.0) || *z == c(1.0, 0.0)));
            assert!(b0.row_iter().all(|r| r.iter().filter(|z| **z == c(1.0, 0.0)).count() == 1));
        }
    }

    #[test]
    fn gate_fragments_transform() {
        let mut rng = sample_rng(3, "scaffold", "fragments", 0);
        for d in [2, 3] {
            let ua = haar_unitary(d, &mut rng);
            let ub = haar_unitary(d, &mut rng);
            assert!(gate_fragment_error(&ua, &ub).unwrap() < 1e-14);
        }
        let id = linalg::identity(2);
        assert_eq!(gate_fragment_error(&id, &id).unwrap(), 0.0);
    }

    #[test]
    fn control_one_puts_alice_early() {
        let out = transform_gate_fragments(&pauli_x(), &pauli_z()).unwrap();
        let b1 = out.select(C_0, 1).unwrap().select(C_0_IN, 1).unwrap();
        let expected = LabeledTensor::product_all(&[
            double_ket(&pauli_x(), &tilde(2), &tilde(1)),
            wire(&tilde(6), &tilde(5), 2),
            double_ket(&pauli_z(), &tilde(4), &tilde(3)),
        ])
        .unwrap();
        assert_eq!(b1.distance(&expected).unwrap(), 0.0);
    }

    #[test]
    fn scaffold_transform_and_round_trip() {
        for d in [2, 3] {
            assert_eq!(transformed_scaffold_error(d).unwrap(), 0.0);
            assert!(round_trip_error(d).unwrap() <= 1e-13);
        }
    }

    #[test]
    fn control_zero_feeds_bob_slot_first() {
        let w = transform_scaffold(2).unwrap();
        let b0 = w.select(C_0, 0).unwrap().select("C_7", 0).unwrap();
        // S_0 flows into ~T_3, the input of Bob's localized slot
        let amp = b0
            .get_named(&[("S_0", 1), (&tilde(3), 1), ("R_0", 0), (&tilde(1), 0)])
            .unwrap();
        assert_eq!(amp, c(1.0, 0.0));
    }

    #[test]
    fn composite_consistency() {
        let mut rng = sample_rng(4, "scaffold", "composite", 0);
        for d in [2, 3] {
            let ua = haar_unitary(d, &mut rng);
            let ub = haar_unitary(d, &mut rng);
            assert!(composite_error(&ua, &ub).unwrap() < 1e-14);
        }
    }

    #[test]
    fn report_wrappers() {
        let mut rng = sample_rng(6, "scaffold", "reports", 0);
        let pairs: Vec<(Matrix, Matrix)> = (0..5).map(|_| (haar_unitary(2, &mut rng), haar_unitary(2, &mut rng))).collect();
        assert!(reduce_to_switch(&pairs, 1e-10, 6).unwrap().passed());
        assert!(verify_gate_fragments(&pairs, 1e-10, 6).unwrap().passed());
        let r = verify_transformed_scaffold(2, &pairs, 1e-10, 6).unwrap();
        assert!(r.passed());
        assert_eq!(r.notes, vec![W_A_GIVEN_B_NOTE.to_string()]);
    }

    #[test]
    fn slot_symmetry() {
        let mut rng = sample_rng(5, "scaffold", "symmetry", 0);
        let ub = haar_unitary(2, &mut rng);
        let g = build_delocalized_gate(Side::BInAFrame, &ub).unwrap();
        assert_eq!(slot_symmetry_error(&g, [C_0, C_0_IN]).unwrap(), 0.0);
        // The scaffold itself is not symmetric: Alice's slot and the
        // reference lane break the exchange of Bob's two slots.
        let w = build_scaffold(2).unwrap();
        assert!(slot_symmetry_error(&w, [C_0, "C_7"]).unwrap() > 0.5);
    }
}
