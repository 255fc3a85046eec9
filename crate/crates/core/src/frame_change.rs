//! Perspective change from Alice's causal reference frame to Bob's.
//!
//! `J_{A→B}` is a controlled wire permutation. Acting on the wires of
//! Alice's CRF form `W(U_B)` it moves Bob's gate, delocalized in Alice's
//! frame, onto a single pair of wires `(B_O, B_I)`. Its conjugate acts on a
//! partner copy of the remaining data (Alice's gate, preparation and
//! effect), whose wires carry a `#` suffix. The result factorizes as
//! `|U_B⟩⟩^{B_O B_I} ⊗ W̃`, with `W̃` independent of `U_B`.

pub mod nogo;

use num_complex::Complex64;

use crate::choi::{double_ket, insert_gate, GateSpec};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::report::VerificationReport;
use crate::switch::{self, check_dim, crf_process, Agent, A_I, A_O, B_I, B_O, F_C, F_S, P_C, P_S};
use crate::tensor::{LabeledTensor, SystemLabel};

pub const F_S_NEW: &str = "F'_S";
pub const P_S_NEW: &str = "P'_S";
/// Intermediate control wire between `J` and its conjugate.
pub const F_C_MID: &str = "F_C.mid";

/// Name of the partner copy of a wire.
pub fn sharp(name: &str) -> String {
    format!("{name}#")
}

/// Inputs of `J` besides the control, in routing order.
pub const J_INPUTS: [&str; 4] = [F_S, A_O, A_I, P_S];
/// Outputs of `J` besides the control, in routing order.
pub const J_OUTPUTS: [&str; 4] = [B_O, B_I, F_S_NEW, P_S_NEW];

/// Routing of `J_{A→B}`: entry `[c][j]` is the input feeding output `j`
/// when the control is `c`.
///
/// Branch 0: `B_O←F_S, B_I←A_O, F'_S←A_I, P'_S←P_S`.
/// Branch 1: `B_O←A_I, B_I←P_S, F'_S←F_S, P'_S←A_O`.
pub const J_ROUTES: [[usize; 4]; 2] = [[0, 1, 2, 3], [2, 3, 0, 1]];

/// Alternative branch-1 routing `B_O←A_O, B_I←P_S, F'_S←F_S, P'_S←A_I`.
/// Also a valid permutation, but it leaves Bob's gate split across wires.
pub const J_ROUTES_CORRUPTED: [[usize; 4]; 2] = [[0, 1, 2, 3], [1, 3, 0, 2]];

#[derive(Clone, Debug)]
pub struct PerspectiveChange {
    gate: GateSpec,
    /// `(process wire, J input)` pairs contracted on the process side.
    x_pairs: Vec<(String, String)>,
    /// `(partner wire, J̄ input)` pairs contracted on the partner side.
    y_pairs: Vec<(String, String)>,
}

impl PerspectiveChange {
    pub fn from_routes(d: usize, routes: [[usize; 4]; 2]) -> Result<Self> {
        check_dim(d)?;
        let outs = J_OUTPUTS.iter().map(|n| SystemLabel::new(*n, d)).collect();
        let ins = J_INPUTS.iter().map(|n| SystemLabel::new(*n, d)).collect();
        let gate = GateSpec::controlled_routing(F_C_MID, F_C, outs, ins, &[routes[0].to_vec(), routes[1].to_vec()])?;
        let mut x_pairs = vec![(F_C.to_string(), F_C.to_string())];
        let mut y_pairs = vec![];
        for w in J_INPUTS {
            x_pairs.push((w.to_string(), w.to_string()));
            y_pairs.push((sharp(w), sharp(w)));
        }
        Ok(Self { gate, x_pairs, y_pairs })
    }

    pub fn gate(&self) -> &GateSpec {
        &self.gate
    }

    pub fn x_pairs(&self) -> &[(String, String)] {
        &self.x_pairs
    }

    pub fn y_pairs(&self) -> &[(String, String)] {
        &self.y_pairs
    }

    /// `|J⟩⟩`: control `F_C → F_C.mid`, targets per the routing.
    pub fn tensor(&self) -> LabeledTensor {
        self.gate.vectorize()
    }

    /// Conjugate of `|J⟩⟩` on the partner wires: control `F_C.mid → F_C`,
    /// every target wire suffixed with `#`.
    pub fn partner_tensor(&self) -> Result<LabeledTensor> {
        let mut names: Vec<(String, String)> = vec![
            (F_C_MID.to_string(), F_C.to_string()),
            (F_C.to_string(), F_C_MID.to_string()),
        ];
        for w in J_INPUTS.iter().chain(&J_OUTPUTS) {
            names.push((w.to_string(), sharp(w)));
        }
        let map: Vec<(&str, &str)> = names.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        self.tensor().conjugate().relabel_many(&map)
    }
}

pub fn build_j_a_to_b(d: usize) -> Result<PerspectiveChange> {
    PerspectiveChange::from_routes(d, J_ROUTES)
}

/// Preparation `φ` on `P_S`, final effect `ψ` on `F_S`, control state on
/// `P_C`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryData {
    phi: Vec<Complex64>,
    psi: Vec<Complex64>,
    control: [Complex64; 2],
}

fn check_unit(v: &[Complex64], what: &str) -> Result<()> {
    let n: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::Config(format!("{what} has norm {n}, expected 1")));
    }
    Ok(())
}

impl BoundaryData {
    /// Control defaults to `|0⟩`.
    pub fn new(phi: Vec<Complex64>, psi: Vec<Complex64>) -> Result<Self> {
        Self::with_control(phi, psi, [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])
    }

    pub fn with_control(phi: Vec<Complex64>, psi: Vec<Complex64>, control: [Complex64; 2]) -> Result<Self> {
        check_unit(&phi, "phi")?;
        check_unit(&psi, "psi")?;
        check_unit(&control, "control")?;
        if phi.len() != psi.len() {
            return Err(Error::DimMismatch {
                label: F_S.to_string(),
                left: phi.len(),
                right: psi.len(),
            });
        }
        Ok(Self { phi, psi, control })
    }

    pub fn dim(&self) -> usize {
        self.phi.len()
    }

    pub fn phi(&self) -> &[Complex64] {
        &self.phi
    }

    pub fn psi(&self) -> &[Complex64] {
        &self.psi
    }

    pub fn control(&self) -> [Complex64; 2] {
        self.control
    }

    pub fn phi_on(&self, wire: &str) -> LabeledTensor {
        LabeledTensor::vector(wire, &self.phi).expect("nonempty vector")
    }

    /// `ψ̄`, the amplitudes of the effect `⟨ψ|` as a ket.
    pub fn psi_bar_on(&self, wire: &str) -> LabeledTensor {
        LabeledTensor::vector(wire, &self.psi).expect("nonempty vector").conjugate()
    }

    pub fn control_on(&self, wire: &str) -> LabeledTensor {
        LabeledTensor::vector(wire, &self.control).expect("nonempty vector")
    }
}

fn expected_open_wires() -> Vec<String> {
    let mut v: Vec<String> = vec![P_C.into(), F_C.into()];
    for w in J_OUTPUTS {
        v.push(w.to_string());
        v.push(sharp(w));
    }
    v.sort();
    v
}

fn pairs(p: &[(String, String)]) -> Vec<(&str, &str)> {
    p.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect()
}

/// Contracts `J` into Alice's CRF form `W(U_B)` over `X` and `J̄` into the
/// partner data `|U_A⟩⟩ φ ψ̄` over `Y`, then joins the two control ends.
/// Open wires of the result: `P_C, F_C`, the four `J` outputs and their `#`
/// partners.
pub fn apply_perspective_change(
    j: &PerspectiveChange,
    ua: &Matrix,
    ub: &Matrix,
    boundary: &BoundaryData,
) -> Result<LabeledTensor> {
    let w = crf_process(Agent::A, ub)?;
    let process_side = w.contract_with(&j.tensor(), &pairs(j.x_pairs()))?;
    let partner = LabeledTensor::product_all(&[
        double_ket(ua, &sharp(A_O), &sharp(A_I)),
        boundary.phi_on(&sharp(P_S)),
        boundary.psi_bar_on(&sharp(F_S)),
    ])?;
    let partner_side = partner.contract_with(&j.partner_tensor()?, &pairs(j.y_pairs()))?;
    let out = process_side.contract_with(&partner_side, &[(F_C_MID, F_C_MID)])?;
    let mut open: Vec<String> = out.names().into_iter().map(String::from).collect();
    open.sort();
    if open != expected_open_wires() {
        return Err(Error::PlanMismatch(open));
    }
    Ok(out)
}

/// Closed form of the transformed process, written down branch by branch:
///
/// control 0: `|U_B⟩⟩^{B_O B_I} |I⟩⟩^{F'_S P'_S} |U_A⟩⟩^{B_I# F'_S#} φ^{P'_S#} ψ̄^{B_O#}`
///
/// control 1: `|U_B⟩⟩^{B_O B_I} |I⟩⟩^{F'_S P'_S} |U_A⟩⟩^{P'_S# B_O#} φ^{B_I#} ψ̄^{F'_S#}`
pub fn expected_transformed(ua: &Matrix, ub: &Matrix, boundary: &BoundaryData) -> Result<LabeledTensor> {
    let d = ua.nrows();
    let common = || -> Result<Vec<LabeledTensor>> {
        Ok(vec![
            double_ket(ub, B_O, B_I),
            crate::choi::wire(F_S_NEW, P_S_NEW, d),
        ])
    };
    let s = |w: &str| sharp(w);
    let mut k0 = common()?;
    k0.extend([
        double_ket(ua, &s(B_I), &s(F_S_NEW)),
        boundary.phi_on(&s(P_S_NEW)),
        boundary.psi_bar_on(&s(B_O)),
    ]);
    let mut k1 = common()?;
    k1.extend([
        double_ket(ua, &s(P_S_NEW), &s(B_O)),
        boundary.phi_on(&s(B_I)),
        boundary.psi_bar_on(&s(F_S_NEW)),
    ]);
    switch::two_branches(
        switch::branch(&[(F_C, 0), (P_C, 0)], &k0)?,
        switch::branch(&[(F_C, 1), (P_C, 1)], &k1)?,
    )
}

/// `(1/d) ⟨⟨U_B|` applied on `(B_O, B_I)`.
pub fn residual(transformed: &LabeledTensor, ub: &Matrix) -> Result<LabeledTensor> {
    let d = ub.nrows() as f64;
    let bra = double_ket(ub, B_O, B_I).conjugate();
    Ok(transformed
        .contract_with(&bra, &[(B_O, B_O), (B_I, B_I)])?
        .scale(Complex64::new(1.0 / d, 0.0)))
}

/// Worst deviations seen while factoring out the probes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalizationErrors {
    /// `max_k` distance of the output from `|U_B⟩⟩ ⊗ R(U_B)`.
    pub factor: f64,
    /// `max_k` distance of `R(U_B^k)` from `R(U_B^0)`, up to phase.
    pub constancy: f64,
}

pub fn localization_errors(
    j: &PerspectiveChange,
    ua: &Matrix,
    boundary: &BoundaryData,
    probes: &[Matrix],
) -> Result<LocalizationErrors> {
    let mut factor: f64 = 0.0;
    let mut constancy: f64 = 0.0;
    let mut first: Option<LabeledTensor> = None;
    for ub in probes {
        let out = apply_perspective_change(j, ua, ub, boundary)?;
        let r = residual(&out, ub)?;
        let rebuilt = double_ket(ub, B_O, B_I).product(&r)?;
        factor = factor.max(match out.equal_up_to_phase(&rebuilt, 0.0) {
            Ok(c) => c.error,
            Err(Error::ZeroTensor) => 1.0,
            Err(e) => return Err(e),
        });
        match &first {
            None => first = Some(r),
            Some(r0) => {
                constancy = constancy.max(match r0.equal_up_to_phase(&r, 0.0) {
                    Ok(c) => c.error,
                    Err(Error::ZeroTensor) => 1.0,
                    Err(e) => return Err(e),
                })
            }
        }
    }
    Ok(LocalizationErrors { factor, constancy })
}

pub fn verify_localization(
    j: &PerspectiveChange,
    ua: &Matrix,
    boundary: &BoundaryData,
    probes: &[Matrix],
    tol: f64,
    seed: u64,
) -> Result<VerificationReport> {
    let e = localization_errors(j, ua, boundary, probes)?;
    let report = VerificationReport::upper(
        "frame-change",
        "localization",
        e.factor.max(e.constancy),
        tol,
        probes.len(),
        seed,
    );
    Ok(if probes.len() < 2 {
        report.with_note("single probe: residual constancy holds trivially")
    } else {
        report
    })
}

/// Amplitude per final control value of the `φ → ψ` transition through
/// `W(U_A, U_B)`, computed on the untransformed process.
pub fn original_amplitudes(ua: &Matrix, ub: &Matrix, boundary: &BoundaryData) -> Result<LabeledTensor> {
    let w = insert_gate(&crf_process(Agent::A, ub)?, ua, A_O, A_I)?;
    w.contract_with(&boundary.phi_on(P_S), &[(P_S, P_S)])?
        .contract_with(&boundary.psi_bar_on(F_S), &[(F_S, F_S)])?
        .contract_with(&boundary.control_on(P_C), &[(P_C, P_C)])
}

/// Same amplitudes read off the transformed process: every output wire is
/// joined to its `#` partner, then the control state is attached.
pub fn transformed_amplitudes(
    j: &PerspectiveChange,
    ua: &Matrix,
    ub: &Matrix,
    boundary: &BoundaryData,
) -> Result<LabeledTensor> {
    let out = apply_perspective_change(j, ua, ub, boundary)?;
    let sharps: Vec<String> = J_OUTPUTS.iter().map(|w| sharp(w)).collect();
    let p: Vec<(&str, &str)> = J_OUTPUTS.iter().zip(&sharps).map(|(a, b)| (*a, b.as_str())).collect();
    out.contract(&p)?
        .contract_with(&boundary.control_on(P_C), &[(P_C, P_C)])
}

/// `(original, transformed)` Born weights.
pub fn born_weights(
    j: &PerspectiveChange,
    ua: &Matrix,
    ub: &Matrix,
    boundary: &BoundaryData,
) -> Result<(f64, f64)> {
    Ok((
        original_amplitudes(ua, ub, boundary)?.norm_sqr(),
        transformed_amplitudes(j, ua, ub, boundary)?.norm_sqr(),
    ))
}

pub fn verify_statistics_preserved(
    j: &PerspectiveChange,
    ua: &Matrix,
    ub: &Matrix,
    boundary: &BoundaryData,
    tol: f64,
    seed: u64,
) -> Result<VerificationReport> {
    let (a, b) = born_weights(j, ua, ub, boundary)?;
    Ok(VerificationReport::upper("frame-change", "born-weight", (a - b).abs(), tol, 1, seed))
}

/// Partner wires that carry `φ` and `ψ̄` in control branch `c` of a
/// residual. A wire carries a vector `v` if the residual, read as a matrix
/// with that wire as rows, has every column parallel to `v`.
pub fn locate_boundary(
    residual: &LabeledTensor,
    c: usize,
    boundary: &BoundaryData,
) -> Result<(Option<String>, Option<String>)> {
    let b = residual.select(F_C, c)?.select(P_C, c)?;
    let phi = boundary.phi_on("v");
    let psi = boundary.psi_bar_on("v");
    let mut found = (None, None);
    for w in J_OUTPUTS {
        let name = sharp(w);
        if carries(&b, &name, &phi)? {
            found.0 = Some(name.clone());
        }
        if carries(&b, &name, &psi)? {
            found.1 = Some(name);
        }
    }
    Ok(found)
}

fn carries(t: &LabeledTensor, wire: &str, v: &LabeledTensor) -> Result<bool> {
    let rest: Vec<&str> = t.names().into_iter().filter(|n| *n != wire).collect();
    let m = t.to_matrix(&[wire], &rest)?;
    if m.norm() == 0.0 {
        return Ok(false);
    }
    let vv = nalgebra::DVector::from_column_slice(v.data());
    let proj = &vv * vv.adjoint();
    let off = &m - proj * &m;
    Ok(off.norm() <= 1e-10 * m.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{self, c, hadamard, pauli_x, pauli_z};
    use crate::sampling::{haar_unitary, random_state, sample_rng};

    fn zero_boundary(d: usize) -> BoundaryData {
        let mut e = vec![c(0.0, 0.0); d];
        e[0] = c(1.0, 0.0);
        BoundaryData::new(e.clone(), e).unwrap()
    }

    fn random_boundary(d: usize, rng: &mut rand_chacha::ChaCha8Rng) -> BoundaryData {
        let ctl = random_state(2, rng);
        BoundaryData::with_control(random_state(d, rng), random_state(d, rng), [ctl[0], ctl[1]]).unwrap()
    }

    #[test]
    fn j_is_unitary() {
        for d in [2, 3] {
            let j = build_j_a_to_b(d).unwrap();
            assert!(j.gate().unitarity_error() < 1e-12);
            let m = j.gate().matrix();
            assert!((m.adjoint() * m - linalg::identity(m.nrows())).norm() == 0.0);
        }
    }

    #[test]
    fn branch_zero_permutes_basis_states() {
        let d = 3;
        let t = build_j_a_to_b(d).unwrap().tensor();
        let (x, y, z, w) = (2, 0, 1, 2);
        for (bo, bi, fs, ps) in [(x, y, z, w), (y, x, z, w)] {
            let amp = t
                .get_named(&[
                    (F_C, 0),
                    (F_C_MID, 0),
                    (F_S, x),
                    (A_O, y),
                    (A_I, z),
                    (P_S, w),
                    (B_O, bo),
                    (B_I, bi),
                    (F_S_NEW, fs),
                    (P_S_NEW, ps),
                ])
                .unwrap();
            let expected = if bo == x { 1.0 } else { 0.0 };
            assert_eq!(amp, c(expected, 0.0));
        }
    }

    #[test]
    fn composing_with_roles_swapped_gives_a_routing_permutation() {
        // J followed by the same routing, reading its outputs back as inputs,
        // is again a wire permutation per branch.
        for r in J_ROUTES {
            let twice: Vec<usize> = (0..4).map(|j| r[r[j]]).collect();
            let mut sorted = twice.clone();
            sorted.sort();
            assert_eq!(sorted, vec![0, 1, 2, 3]);
        }
        // branch 1 is an involution: swapping the pair (F_S, A_I) and
        // (A_O, P_S) twice is the identity routing
        let r = J_ROUTES[1];
        assert_eq!((0..4).map(|j| r[r[j]]).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn matches_closed_form() {
        let mut rng = sample_rng(4, "frame", "closed", 0);
        for d in [2, 3] {
            let j = build_j_a_to_b(d).unwrap();
            let ua = haar_unitary(d, &mut rng);
            let ub = haar_unitary(d, &mut rng);
            let b = random_boundary(d, &mut rng);
            let got = apply_perspective_change(&j, &ua, &ub, &b).unwrap();
            let want = expected_transformed(&ua, &ub, &b).unwrap();
            assert!(got.distance(&want).unwrap() < 1e-14);
        }
    }

    #[test]
    fn identity_inputs_factor() {
        let d = 2;
        let id = linalg::identity(d);
        let j = build_j_a_to_b(d).unwrap();
        let b = zero_boundary(d);
        let out = apply_perspective_change(&j, &id, &id, &b).unwrap();
        let r = residual(&out, &id).unwrap();
        let rebuilt = double_ket(&id, B_O, B_I).product(&r).unwrap();
        assert!(out.distance(&rebuilt).unwrap() < 1e-15);
    }

    #[test]
    fn norm_is_preserved() {
        let mut rng = sample_rng(5, "frame", "norm", 0);
        let d = 2;
        let j = build_j_a_to_b(d).unwrap();
        let ua = haar_unitary(d, &mut rng);
        let ub = haar_unitary(d, &mut rng);
        let b = random_boundary(d, &mut rng);
        let out = apply_perspective_change(&j, &ua, &ub, &b).unwrap();
        let w = crf_process(Agent::A, &ub).unwrap();
        let partner_norm = double_ket(&ua, "x", "y").norm();
        assert!((out.norm() - w.norm() * partner_norm).abs() < 1e-12);
    }

    #[test]
    fn z_and_identity_differ_only_in_bob_factor() {
        let d = 2;
        let j = build_j_a_to_b(d).unwrap();
        let ua = hadamard();
        let b = zero_boundary(d);
        let out_i = apply_perspective_change(&j, &ua, &linalg::identity(2), &b).unwrap();
        let out_z = apply_perspective_change(&j, &ua, &pauli_z(), &b).unwrap();
        let r_i = residual(&out_i, &linalg::identity(2)).unwrap();
        let r_z = residual(&out_z, &pauli_z()).unwrap();
        assert!(r_i.distance(&r_z).unwrap() < 1e-15);
        assert!(out_i.distance(&out_z).unwrap() > 0.5);
    }

    #[test]
    fn localization_passes_for_pauli_probes() {
        let d = 2;
        let j = build_j_a_to_b(d).unwrap();
        let probes = vec![linalg::identity(2), pauli_x(), pauli_z(), hadamard()];
        let mut rng = sample_rng(6, "frame", "loc", 0);
        let ua = haar_unitary(d, &mut rng);
        let b = random_boundary(d, &mut rng);
        let r = verify_localization(&j, &ua, &b, &probes, 1e-10, 0).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.max_error < 1e-10);
    }

    #[test]
    fn corrupted_j_fails_localization() {
        let d = 2;
        let j = PerspectiveChange::from_routes(d, J_ROUTES_CORRUPTED).unwrap();
        assert!(j.gate().unitarity_error() < 1e-12);
        let probes = vec![linalg::identity(2), pauli_x(), pauli_z(), hadamard()];
        let mut rng = sample_rng(7, "frame", "corrupt", 0);
        let ua = haar_unitary(d, &mut rng);
        let b = random_boundary(d, &mut rng);
        let r = verify_localization(&j, &ua, &b, &probes, 1e-9, 0).unwrap();
        assert!(!r.passed());
        assert!(r.max_error > 0.1);
    }

    #[test]
    fn single_probe_is_flagged() {
        let j = build_j_a_to_b(2).unwrap();
        let r = verify_localization(&j, &pauli_x(), &zero_boundary(2), &[hadamard()], 1e-9, 0).unwrap();
        assert!(r.passed());
        assert_eq!(r.notes.len(), 1);
    }

    #[test]
    fn born_weight_examples() {
        let d = 2;
        let j = build_j_a_to_b(d).unwrap();
        let id = linalg::identity(d);
        let (a, b) = born_weights(&j, &id, &id, &zero_boundary(d)).unwrap();
        assert!((a - 1.0).abs() < 1e-15 && (b - 1.0).abs() < 1e-15);

        // ψ ⟂ U_B U_A φ with control |0⟩
        let ua = hadamard();
        let ub = pauli_z();
        let phi = vec![c(1.0, 0.0), c(0.0, 0.0)];
        let v = &ub * &ua * nalgebra::DVector::from_vec(phi.clone());
        let psi = vec![-v[1].conj(), v[0].conj()];
        let bd = BoundaryData::new(phi, psi).unwrap();
        let (a, b) = born_weights(&j, &ua, &ub, &bd).unwrap();
        assert!(a < 1e-30 && b < 1e-30);
    }

    #[test]
    fn born_weights_agree_on_random_samples() {
        let mut rng = sample_rng(8, "frame", "born", 0);
        for d in [2, 3] {
            let j = build_j_a_to_b(d).unwrap();
            for _ in 0..5 {
                let ua = haar_unitary(d, &mut rng);
                let ub = haar_unitary(d, &mut rng);
                let b = random_boundary(d, &mut rng);
                // direct matrix oracle
                let phi = nalgebra::DVector::from_vec(b.phi().to_vec());
                let psi = nalgebra::DVector::from_vec(b.psi().to_vec());
                let a0 = (psi.adjoint() * &ub * &ua * &phi)[0] * b.control()[0];
                let a1 = (psi.adjoint() * &ua * &ub * &phi)[0] * b.control()[1];
                let oracle = a0.norm_sqr() + a1.norm_sqr();
                let (w1, w2) = born_weights(&j, &ua, &ub, &b).unwrap();
                assert!((w1 - oracle).abs() < 1e-13);
                assert!((w2 - oracle).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn boundary_data_moves_between_branches() {
        let mut rng = sample_rng(9, "frame", "deloc", 0);
        let d = 2;
        let j = build_j_a_to_b(d).unwrap();
        let ua = haar_unitary(d, &mut rng);
        let ub = haar_unitary(d, &mut rng);
        let b = random_boundary(d, &mut rng);
        let r = residual(&apply_perspective_change(&j, &ua, &ub, &b).unwrap(), &ub).unwrap();
        let (phi0, psi0) = locate_boundary(&r, 0, &b).unwrap();
        let (phi1, psi1) = locate_boundary(&r, 1, &b).unwrap();
        assert_eq!(phi0.as_deref(), Some("P'_S#"));
        assert_eq!(psi0.as_deref(), Some("B_O#"));
        assert_eq!(phi1.as_deref(), Some("B_I#"));
        assert_eq!(psi1.as_deref(), Some("F'_S#"));
    }

    #[test]
    fn boundary_validation() {
        assert!(BoundaryData::new(vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]).is_err());
        assert!(BoundaryData::new(vec![c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]).is_err());
    }
}
