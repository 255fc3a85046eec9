//! Double-ket conventions.
//!
//! A gate `U` with output wire `o` and input wire `i` is represented by the
//! vector `|U⟩⟩ = Σ U_{oi} |o⟩|i⟩`, labels ordered `[out, in]`, so the
//! amplitude array *is* the matrix. Composition is the link product: wires
//! sharing a name are spliced with `⟨⟨I| = Σ_k ⟨k|⟨k|`, which turns
//! `|U⟩⟩^{E,A}` and `|V⟩⟩^{B,E}` into `|VU⟩⟩^{B,A}`.
//!
//! Filling a slot of a process with a gate is the same link product, so the
//! process then implements `U` itself. Written as a bra, that is
//! `⟨⟨Ū|`; the conjugate cancels against the bra's own conjugation.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::tensor::{LabeledTensor, SystemLabel};

/// Tolerance for accepting a matrix as unitary.
pub const UNITARITY_TOL: f64 = 1e-10;

/// A unitary together with the wires it maps between. The matrix rows run
/// over `outputs` (row-major), columns over `inputs`.
#[derive(Clone, Debug, PartialEq)]
pub struct GateSpec {
    matrix: Matrix,
    outputs: Vec<SystemLabel>,
    inputs: Vec<SystemLabel>,
}

impl GateSpec {
    pub fn new(matrix: Matrix, outputs: Vec<SystemLabel>, inputs: Vec<SystemLabel>) -> Result<Self> {
        let no: usize = outputs.iter().map(|l| l.dim()).product();
        let ni: usize = inputs.iter().map(|l| l.dim()).product();
        if matrix.nrows() != no || matrix.ncols() != ni {
            return Err(Error::ShapeMismatch {
                expected: no * ni,
                actual: matrix.nrows() * matrix.ncols(),
            });
        }
        let err = linalg::unitarity_error(&matrix);
        if err > UNITARITY_TOL {
            return Err(Error::NotUnitary(err));
        }
        Ok(Self {
            matrix,
            outputs,
            inputs,
        })
    }

    /// Single-wire gate `out ← in`; both wires take the matrix dimension.
    pub fn single(matrix: Matrix, out: &str, inp: &str) -> Result<Self> {
        let d = matrix.nrows();
        Self::new(
            matrix,
            vec![SystemLabel::new(out, d)],
            vec![SystemLabel::new(inp, d)],
        )
    }

    /// `Σ_c |c⟩⟨c| ⊗ V_c`: the control passes from `control_in` to
    /// `control_out` unchanged and selects the branch unitary.
    pub fn controlled(
        control_out: &str,
        control_in: &str,
        branches: &[Matrix],
        outputs: Vec<SystemLabel>,
        inputs: Vec<SystemLabel>,
    ) -> Result<Self> {
        let k = branches.len();
        let no: usize = outputs.iter().map(|l| l.dim()).product();
        let ni: usize = inputs.iter().map(|l| l.dim()).product();
        let mut m = Matrix::zeros(k * no, k * ni);
        for (c, v) in branches.iter().enumerate() {
            if v.nrows() != no || v.ncols() != ni {
                return Err(Error::ShapeMismatch {
                    expected: no * ni,
                    actual: v.nrows() * v.ncols(),
                });
            }
            m.view_mut((c * no, c * ni), (no, ni)).copy_from(v);
        }
        let mut outs = vec![SystemLabel::new(control_out, k)];
        outs.extend(outputs);
        let mut ins = vec![SystemLabel::new(control_in, k)];
        ins.extend(inputs);
        Self::new(m, outs, ins)
    }

    /// Controlled wire permutation. For control value `c`, output wire `j`
    /// is fed by input wire `routes[c][j]`.
    pub fn controlled_routing(
        control_out: &str,
        control_in: &str,
        outputs: Vec<SystemLabel>,
        inputs: Vec<SystemLabel>,
        routes: &[Vec<usize>],
    ) -> Result<Self> {
        let branches = routes
            .iter()
            .map(|r| routing_matrix(&outputs, &inputs, r))
            .collect::<Result<Vec<_>>>()?;
        Self::controlled(control_out, control_in, &branches, outputs, inputs)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn outputs(&self) -> &[SystemLabel] {
        &self.outputs
    }

    pub fn inputs(&self) -> &[SystemLabel] {
        &self.inputs
    }

    pub fn unitarity_error(&self) -> f64 {
        linalg::unitarity_error(&self.matrix)
    }

    /// `|U⟩⟩` with labels `outputs ++ inputs`.
    pub fn vectorize(&self) -> LabeledTensor {
        LabeledTensor::from_matrix(&self.matrix, self.outputs.clone(), self.inputs.clone())
            .expect("gate labels were validated at construction")
    }

    /// `U†`, with outputs and inputs exchanged.
    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            outputs: self.inputs.clone(),
            inputs: self.outputs.clone(),
        }
    }

    /// Renames wires; names not in `map` are kept.
    pub fn relabeled(&self, map: &[(&str, &str)]) -> Result<Self> {
        let rename = |l: &SystemLabel| {
            map.iter()
                .find(|(from, _)| *from == l.name())
                .map_or_else(|| l.clone(), |(_, to)| l.renamed(*to))
        };
        let outputs: Vec<_> = self.outputs.iter().map(rename).collect();
        let inputs: Vec<_> = self.inputs.iter().map(rename).collect();
        let mut all: Vec<&str> = outputs.iter().chain(&inputs).map(|l| l.name()).collect();
        all.sort();
        if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateLabel(w[0].to_string()));
        }
        Ok(Self {
            matrix: self.matrix.clone(),
            outputs,
            inputs,
        })
    }
}

/// Permutation matrix sending input wire `route[j]` to output wire `j`.
pub fn routing_matrix(
    outputs: &[SystemLabel],
    inputs: &[SystemLabel],
    route: &[usize],
) -> Result<Matrix> {
    let n = outputs.len();
    if inputs.len() != n || route.len() != n {
        return Err(Error::Config(format!(
            "routing needs equal wire counts, got {} outputs, {} inputs, {} routes",
            n,
            inputs.len(),
            route.len()
        )));
    }
    let mut seen = vec![false; n];
    for (j, &r) in route.iter().enumerate() {
        if r >= n || seen[r] {
            return Err(Error::Config(format!("route {route:?} is not a permutation")));
        }
        seen[r] = true;
        if outputs[j].dim() != inputs[r].dim() {
            return Err(Error::DimMismatch {
                label: outputs[j].name().to_string(),
                left: outputs[j].dim(),
                right: inputs[r].dim(),
            });
        }
    }
    let in_dims: Vec<usize> = inputs.iter().map(|l| l.dim()).collect();
    let out_dims: Vec<usize> = outputs.iter().map(|l| l.dim()).collect();
    let size: usize = in_dims.iter().product();
    let mut m = Matrix::zeros(size, size);
    let mut idx = vec![0usize; n];
    for col in 0..size {
        let mut row = 0;
        for j in 0..n {
            row = row * out_dims[j] + idx[route[j]];
        }
        m[(row, col)] = Complex64::new(1.0, 0.0);
        for axis in (0..n).rev() {
            idx[axis] += 1;
            if idx[axis] < in_dims[axis] {
                break;
            }
            idx[axis] = 0;
        }
    }
    Ok(m)
}

/// `Σ_k |k⟩^{out}|k⟩^{in}`, unnormalized.
pub fn max_entangled(out: SystemLabel, inp: SystemLabel) -> Result<LabeledTensor> {
    if out.dim() != inp.dim() {
        return Err(Error::DimMismatch {
            label: out.name().to_string(),
            left: out.dim(),
            right: inp.dim(),
        });
    }
    LabeledTensor::from_fn(vec![out, inp], |i| {
        Complex64::new(if i[0] == i[1] { 1.0 } else { 0.0 }, 0.0)
    })
}

/// Identity wire `|I⟩⟩^{out,in}` of dimension `d`.
pub fn wire(out: &str, inp: &str, d: usize) -> LabeledTensor {
    max_entangled(SystemLabel::new(out, d), SystemLabel::new(inp, d))
        .expect("equal dimensions by construction")
}

/// `|U⟩⟩^{out,in}` for a bare matrix.
pub fn double_ket(u: &Matrix, out: &str, inp: &str) -> LabeledTensor {
    LabeledTensor::from_matrix(
        u,
        vec![SystemLabel::new(out, u.nrows())],
        vec![SystemLabel::new(inp, u.ncols())],
    )
    .expect("matrix shape matches labels")
}

pub fn vectorize(g: &GateSpec) -> LabeledTensor {
    g.vectorize()
}

/// Link product: product of `a` and `b` with every shared label name
/// contracted.
pub fn link(a: &LabeledTensor, b: &LabeledTensor) -> Result<LabeledTensor> {
    let shared: Vec<&str> = a
        .labels()
        .iter()
        .map(|l| l.name())
        .filter(|n| b.has_label(n))
        .collect();
    let pairs: Vec<(&str, &str)> = shared.iter().map(|n| (*n, *n)).collect();
    a.contract_with(b, &pairs)
}

/// Fills the slot `(slot_out, slot_in)` of `process` with a single-wire
/// gate. The process must expose both slot wires; they are removed.
pub fn insert_gate(
    process: &LabeledTensor,
    g: &Matrix,
    slot_out: &str,
    slot_in: &str,
) -> Result<LabeledTensor> {
    for name in [slot_out, slot_in] {
        let label = process
            .label(name)
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))?;
        if label.dim() != g.nrows() {
            return Err(Error::DimMismatch {
                label: name.to_string(),
                left: label.dim(),
                right: g.nrows(),
            });
        }
    }
    let err = linalg::unitarity_error(g);
    if err > UNITARITY_TOL {
        return Err(Error::NotUnitary(err));
    }
    process.contract_with(
        &double_ket(g, slot_out, slot_in),
        &[(slot_out, slot_out), (slot_in, slot_in)],
    )
}

/// An orthonormal unitary basis: `d²` unitaries with `Tr[U_i†U_j] = d δ_ij`.
#[derive(Clone, Debug)]
pub struct UnitaryBasis {
    dim: usize,
    elements: Vec<Matrix>,
}

impl UnitaryBasis {
    pub fn new(dim: usize, elements: Vec<Matrix>) -> Result<Self> {
        if elements.len() != dim * dim {
            return Err(Error::BasisInvalid(format!(
                "expected {} elements, got {}",
                dim * dim,
                elements.len()
            )));
        }
        let basis = Self { dim, elements };
        if basis.elements.iter().any(|u| u.nrows() != dim || u.ncols() != dim) {
            return Err(Error::BasisInvalid("element of wrong size".into()));
        }
        let err = basis.orthogonality_error();
        if err > 1e-12 {
            return Err(Error::BasisInvalid(format!(
                "Hilbert-Schmidt orthogonality violated by {err:.3e}"
            )));
        }
        Ok(basis)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    /// `max_{ij} |Tr[U_i†U_j] − d δ_ij|`.
    pub fn orthogonality_error(&self) -> f64 {
        let d = self.dim as f64;
        let mut worst: f64 = 0.0;
        for (i, a) in self.elements.iter().enumerate() {
            for (j, b) in self.elements.iter().enumerate() {
                let expected = if i == j { d } else { 0.0 };
                let ip = linalg::hs_inner(a, b);
                worst = worst.max((ip - Complex64::new(expected, 0.0)).norm());
            }
        }
        worst
    }
}

/// Weyl–Heisenberg basis `{X^a Z^b : 0 ≤ a, b < d}`, ordered with `a` major.
pub fn weyl_basis(d: usize) -> Result<UnitaryBasis> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let x = linalg::shift(d);
    let z = linalg::clock(d);
    let mut elements = Vec::with_capacity(d * d);
    let mut xa = linalg::identity(d);
    for _ in 0..d {
        let mut zb = linalg::identity(d);
        for _ in 0..d {
            elements.push(&xa * &zb);
            zb = &zb * &z;
        }
        xa = &xa * &x;
    }
    UnitaryBasis::new(d, elements)
}

/// Completeness defect `‖Σ_i |U_i⟩⟩⟨⟨U_i| − d·I‖_F` on the `d²` space.
pub fn completeness_error(basis: &UnitaryBasis) -> f64 {
    let d = basis.dim();
    let mut acc = DMatrix::<Complex64>::zeros(d * d, d * d);
    for u in basis.elements() {
        let v = DMatrix::from_row_slice(d * d, 1, double_ket(u, "o", "i").data());
        acc += &v * v.adjoint();
    }
    (acc - linalg::identity(d * d) * Complex64::new(d as f64, 0.0)).norm()
}
