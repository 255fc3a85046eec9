//! Fine-grained time circuits and interface erasure.
//!
//! A circuit is kept as a [`FragmentNetwork`], a list of small box tensors
//! that is never multiplied out: at `d = 2` the fully expanded fine-grained
//! circuit would hold 2^26 amplitudes. Internal wires between time steps
//! appear as pairs `X.out` (written by the earlier box) and `X.in` (read by
//! the later box). Erasing interface `X` splices that pair.

use std::collections::BTreeMap;

use crate::choi::{wire, GateSpec};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::switch::{self, check_dim};
use crate::tensor::{LabeledTensor, SystemLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Boundary {
    Past,
    Slot,
    Future,
    /// Between two time steps of the same fragment; erasable.
    Internal,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Foliation {
    interface_labels: Vec<String>,
    partition: BTreeMap<String, Boundary>,
}

impl Foliation {
    pub fn new(interface_labels: Vec<String>, partition: BTreeMap<String, Boundary>) -> Result<Self> {
        for name in &interface_labels {
            if !partition.contains_key(name) {
                return Err(Error::UnknownLabel(name.clone()));
            }
        }
        Ok(Self {
            interface_labels,
            partition,
        })
    }

    pub fn interface_labels(&self) -> &[String] {
        &self.interface_labels
    }

    pub fn boundary(&self, wire: &str) -> Option<Boundary> {
        self.partition.get(wire).copied()
    }

    pub fn wires(&self, kind: Boundary) -> Vec<&str> {
        self.partition
            .iter()
            .filter(|(_, b)| **b == kind)
            .map(|(n, _)| n.as_str())
            .collect()
    }

    /// Every wire of `net` (internal pairs counted once) must be assigned.
    pub fn covers(&self, net: &FragmentNetwork) -> Result<()> {
        for name in net.open_wires() {
            let base = base_name(&name);
            if !self.partition.contains_key(base) {
                return Err(Error::UnknownLabel(name));
            }
        }
        Ok(())
    }
}

fn base_name(label: &str) -> &str {
    label
        .strip_suffix(".out")
        .or_else(|| label.strip_suffix(".in"))
        .unwrap_or(label)
}

fn out_of(name: &str) -> String {
    format!("{name}.out")
}

fn in_of(name: &str) -> String {
    format!("{name}.in")
}

/// A product of box tensors with pairwise disjoint labels.
#[derive(Clone, Debug, PartialEq)]
pub struct FragmentNetwork {
    pieces: Vec<LabeledTensor>,
}

impl FragmentNetwork {
    pub fn new(pieces: Vec<LabeledTensor>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for p in &pieces {
            for l in p.labels() {
                if !seen.insert(l.name().to_string()) {
                    return Err(Error::DuplicateLabel(l.name().to_string()));
                }
            }
        }
        Ok(Self { pieces })
    }

    pub fn pieces(&self) -> &[LabeledTensor] {
        &self.pieces
    }

    pub fn open_wires(&self) -> Vec<String> {
        self.pieces
            .iter()
            .flat_map(|p| p.names().into_iter().map(String::from))
            .collect()
    }

    fn find(&self, label: &str) -> Option<usize> {
        self.pieces.iter().position(|p| p.has_label(label))
    }

    /// Splices `out` with `inp`, merging the pieces holding them.
    pub fn splice(&self, out: &str, inp: &str) -> Result<Self> {
        let i = self.find(out).ok_or_else(|| Error::UnknownLabel(out.to_string()))?;
        let j = self.find(inp).ok_or_else(|| Error::UnknownLabel(inp.to_string()))?;
        let mut pieces = self.pieces.clone();
        if i == j {
            pieces[i] = pieces[i].contract(&[(out, inp)])?;
        } else {
            let merged = pieces[i].contract_with(&pieces[j], &[(out, inp)])?;
            let (hi, lo) = if i > j { (i, j) } else { (j, i) };
            pieces.remove(hi);
            pieces[lo] = merged;
        }
        Ok(Self { pieces })
    }

    /// Dense product of every piece. Fails with `TooLarge` when the open
    /// wires do not fit in memory.
    pub fn to_tensor(&self) -> Result<LabeledTensor> {
        LabeledTensor::product_all(&self.pieces)
    }
}

/// Contracts the `(X.out, X.in)` pair of every listed interface `X`. Each
/// must be an internal wire of `foliation`.
pub fn erase_interfaces(
    fragment: &FragmentNetwork,
    foliation: &Foliation,
    wires_to_erase: &[&str],
) -> Result<FragmentNetwork> {
    foliation.covers(fragment)?;
    let mut net = fragment.clone();
    for w in wires_to_erase {
        if foliation.boundary(w) != Some(Boundary::Internal) {
            return Err(Error::UnknownLabel((*w).to_string()));
        }
        net = net.splice(&out_of(w), &in_of(w))?;
    }
    Ok(net)
}

/// Time labels of the fine-grained circuit in Alice's frame.
pub fn fine_grained_foliation() -> Foliation {
    let mut partition = BTreeMap::new();
    for (name, b) in [
        ("T_0", Boundary::Past),
        ("C_0", Boundary::Past),
        ("T_3", Boundary::Slot),
        ("T_4", Boundary::Slot),
        ("T_7", Boundary::Future),
        ("C_7", Boundary::Future),
    ] {
        partition.insert(name.to_string(), b);
    }
    for k in [1, 2, 5, 6] {
        partition.insert(format!("T_{k}"), Boundary::Internal);
    }
    for k in 1..=6 {
        partition.insert(format!("C_{k}"), Boundary::Internal);
    }
    let mut interface_labels: Vec<String> = (0..8).map(|k| format!("T_{k}")).collect();
    interface_labels.extend((0..8).map(|k| format!("C_{k}")));
    Foliation::new(interface_labels, partition).expect("all interfaces are partitioned")
}

/// Interfaces erased to recover the coarse fragment.
pub const ERASABLE: [&str; 10] = [
    "T_1", "T_2", "T_5", "T_6", "C_1", "C_2", "C_3", "C_4", "C_5", "C_6",
];

fn controlled_box(
    d: usize,
    ctrl_out: &str,
    ctrl_in: &str,
    out: &str,
    inp: &str,
    branches: [&Matrix; 2],
) -> Result<LabeledTensor> {
    Ok(GateSpec::controlled(
        ctrl_out,
        ctrl_in,
        &[branches[0].clone(), branches[1].clone()],
        vec![SystemLabel::new(out, d)],
        vec![SystemLabel::new(inp, d)],
    )?
    .vectorize())
}

/// Seven time steps in Alice's frame. Bob's gate sits at step 1→2 when the
/// control is `|1⟩` and at step 5→6 when it is `|0⟩`; Alice's slot is the
/// open pair `T_3 → T_4`.
pub fn fine_grained_circuit(ub: &Matrix) -> Result<FragmentNetwork> {
    let d = ub.nrows();
    check_dim(d)?;
    let id = linalg::identity(d);
    let boxes = vec![
        wire(&out_of("T_1"), "T_0", d).product(&wire(&out_of("C_1"), "C_0", 2))?,
        controlled_box(d, &out_of("C_2"), &in_of("C_1"), &out_of("T_2"), &in_of("T_1"), [&id, ub])?,
        wire("T_3", &in_of("T_2"), d).product(&wire(&out_of("C_3"), &in_of("C_2"), 2))?,
        wire(&out_of("C_4"), &in_of("C_3"), 2),
        wire(&out_of("T_5"), "T_4", d).product(&wire(&out_of("C_5"), &in_of("C_4"), 2))?,
        controlled_box(d, &out_of("C_6"), &in_of("C_5"), &out_of("T_6"), &in_of("T_5"), [ub, &id])?,
        wire("T_7", &in_of("T_6"), d).product(&wire("C_7", &in_of("C_6"), 2))?,
    ];
    FragmentNetwork::new(boxes)
}

/// Boundary wires of the fine-grained circuit renamed to the switch wires.
pub const TO_SWITCH: [(&str, &str); 6] = [
    ("T_0", switch::P_S),
    ("C_0", switch::P_C),
    ("T_3", switch::A_I),
    ("T_4", switch::A_O),
    ("T_7", switch::F_S),
    ("C_7", switch::F_C),
];

/// Erases every internal interface and compares with Alice's CRF form.
pub fn erasure_error(ub: &Matrix) -> Result<f64> {
    let net = fine_grained_circuit(ub)?;
    let coarse = erase_interfaces(&net, &fine_grained_foliation(), &ERASABLE)?;
    if coarse.pieces().len() != 1 {
        return Err(Error::PlanMismatch(coarse.open_wires()));
    }
    let t = coarse.to_tensor()?.relabel_many(&TO_SWITCH)?;
    t.distance(&switch::crf_process(switch::Agent::A, ub)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{haar_unitary, sample_rng};

    #[test]
    fn foliation_partitions_every_wire() {
        let f = fine_grained_foliation();
        let net = fine_grained_circuit(&linalg::identity(2)).unwrap();
        f.covers(&net).unwrap();
        assert_eq!(f.wires(Boundary::Internal).len(), 10);
        assert_eq!(f.wires(Boundary::Slot), vec!["T_3", "T_4"]);
        assert_eq!(f.interface_labels().len(), 16);
    }

    #[test]
    fn identity_circuit_erases_to_straight_wires() {
        let d = 2;
        let net = fine_grained_circuit(&linalg::identity(d)).unwrap();
        let coarse = erase_interfaces(&net, &fine_grained_foliation(), &ERASABLE).unwrap();
        let t = coarse.to_tensor().unwrap();
        let expected = LabeledTensor::product_all(&[
            wire("T_3", "T_0", d),
            wire("T_7", "T_4", d),
            wire("C_7", "C_0", 2),
        ])
        .unwrap();
        assert_eq!(t.distance(&expected).unwrap(), 0.0);
    }

    #[test]
    fn random_bob_gate_matches_crf_fragment() {
        let mut rng = sample_rng(9, "foliation", "erase", 0);
        for d in [2, 3] {
            let ub = haar_unitary(d, &mut rng);
            assert!(erasure_error(&ub).unwrap() < 1e-14);
        }
    }

    #[test]
    fn erasing_nothing_is_identity() {
        let net = fine_grained_circuit(&crate::linalg::hadamard()).unwrap();
        let same = erase_interfaces(&net, &fine_grained_foliation(), &[]).unwrap();
        assert_eq!(same, net);
    }

    #[test]
    fn erase_order_does_not_matter() {
        let mut rng = sample_rng(10, "foliation", "order", 0);
        let ub = haar_unitary(2, &mut rng);
        let net = fine_grained_circuit(&ub).unwrap();
        let f = fine_grained_foliation();
        let mut rev = ERASABLE;
        rev.reverse();
        let a = erase_interfaces(&net, &f, &ERASABLE).unwrap().to_tensor().unwrap();
        let b = erase_interfaces(&net, &f, &rev).unwrap().to_tensor().unwrap();
        assert!(a.distance(&b).unwrap() < 1e-15);
    }

    #[test]
    fn boundary_wires_cannot_be_erased() {
        let net = fine_grained_circuit(&linalg::identity(2)).unwrap();
        let f = fine_grained_foliation();
        assert_eq!(
            erase_interfaces(&net, &f, &["T_3"]),
            Err(Error::UnknownLabel("T_3".into()))
        );
        assert!(erase_interfaces(&net, &f, &["T_9"]).is_err());
    }

    #[test]
    fn full_expansion_is_too_large() {
        let net = fine_grained_circuit(&linalg::identity(2)).unwrap();
        assert!(matches!(net.to_tensor(), Err(Error::TooLarge(_))));
    }
}
