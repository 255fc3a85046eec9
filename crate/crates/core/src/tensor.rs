//! Dense labeled tensors.
//!
//! A [`LabeledTensor`] is a complex amplitude array whose axes are named by
//! [`SystemLabel`]s. Every double-ket in the crate (processes, gates, states,
//! effects, fragments) is one of these. Amplitudes are stored row-major over
//! the label list, so the last label varies fastest.
//!
//! Contraction follows the un-transposed splice `Σ_k ⟨k|⟨k|`: pairing two
//! labels sums over equal index values, with no conjugation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense storage limit, in amplitudes.
pub const MAX_AMPLITUDES: usize = 1 << 24;

/// Relative tolerance used when none is given explicitly.
pub const DEFAULT_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// A named wire with a finite dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SystemLabel {
    name: String,
    dim: usize,
}

impl SystemLabel {
    /// # Panics
    ///
    /// Panics if `dim == 0`.
    pub fn new(name: impl Into<String>, dim: usize) -> Self {
        assert!(dim >= 1, "system dimension must be positive");
        Self {
            name: name.into(),
            dim,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        Self::new(name, self.dim)
    }
}

impl fmt::Display for SystemLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.name, self.dim)
    }
}

/// Outcome of [`LabeledTensor::equal_up_to_phase`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseComparison {
    pub equal: bool,
    /// `min_θ ‖a − e^{iθ} b‖ / max(‖a‖, ‖b‖)`.
    pub error: f64,
    /// The minimizing `θ`.
    pub phase: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledTensor {
    labels: Vec<SystemLabel>,
    data: Vec<Complex64>,
}

fn checked_size(labels: &[SystemLabel]) -> Result<usize> {
    let mut size: u128 = 1;
    for l in labels {
        size = size.saturating_mul(l.dim as u128);
    }
    if size > MAX_AMPLITUDES as u128 {
        return Err(Error::TooLarge(size));
    }
    Ok(size as usize)
}

fn check_unique(labels: &[SystemLabel]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for l in labels {
        if !seen.insert(l.name.as_str()) {
            return Err(Error::DuplicateLabel(l.name.clone()));
        }
    }
    Ok(())
}

fn row_major_strides(dims: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    strides
}

/// Calls `f(offset)` for every multi-index over `dims`, where the offset is
/// `base + Σ idx_i * strides_i`. Visits in row-major order.
fn for_each_offset(dims: &[usize], strides: &[usize], base: usize, mut f: impl FnMut(usize)) {
    if dims.contains(&0) {
        return;
    }
    let n = dims.len();
    let mut idx = vec![0usize; n];
    let mut offset = base;
    loop {
        f(offset);
        let mut axis = n;
        loop {
            if axis == 0 {
                return;
            }
            axis -= 1;
            idx[axis] += 1;
            offset += strides[axis];
            if idx[axis] < dims[axis] {
                break;
            }
            offset -= strides[axis] * dims[axis];
            idx[axis] = 0;
        }
    }
}

impl LabeledTensor {
    pub fn new(labels: Vec<SystemLabel>, data: Vec<Complex64>) -> Result<Self> {
        check_unique(&labels)?;
        let size = checked_size(&labels)?;
        if size != data.len() {
            return Err(Error::ShapeMismatch {
                expected: size,
                actual: data.len(),
            });
        }
        Ok(Self { labels, data })
    }

    pub fn zeros(labels: Vec<SystemLabel>) -> Result<Self> {
        check_unique(&labels)?;
        let size = checked_size(&labels)?;
        Ok(Self {
            labels,
            data: vec![ZERO; size],
        })
    }

    /// Rank-0 tensor holding `value`.
    pub fn scalar(value: Complex64) -> Self {
        Self {
            labels: Vec::new(),
            data: vec![value],
        }
    }

    /// Computational basis ket `|k⟩` on a single wire.
    pub fn basis(label: SystemLabel, k: usize) -> Result<Self> {
        if k >= label.dim {
            return Err(Error::DimMismatch {
                label: label.name,
                left: k,
                right: label.dim,
            });
        }
        let mut t = Self::zeros(vec![label])?;
        t.data[k] = ONE;
        Ok(t)
    }

    /// Single-wire tensor with the given amplitudes.
    pub fn vector(name: impl Into<String>, amplitudes: &[Complex64]) -> Result<Self> {
        Self::new(
            vec![SystemLabel::new(name, amplitudes.len())],
            amplitudes.to_vec(),
        )
    }

    pub fn from_fn(
        labels: Vec<SystemLabel>,
        mut f: impl FnMut(&[usize]) -> Complex64,
    ) -> Result<Self> {
        let mut t = Self::zeros(labels)?;
        let dims = t.dims();
        let mut idx = vec![0usize; dims.len()];
        for slot in t.data.iter_mut() {
            *slot = f(&idx);
            for axis in (0..dims.len()).rev() {
                idx[axis] += 1;
                if idx[axis] < dims[axis] {
                    break;
                }
                idx[axis] = 0;
            }
        }
        Ok(t)
    }

    /// Builds a tensor from a matrix, rows indexed by `rows` (row-major over
    /// those labels) and columns by `cols`.
    pub fn from_matrix(
        matrix: &DMatrix<Complex64>,
        rows: Vec<SystemLabel>,
        cols: Vec<SystemLabel>,
    ) -> Result<Self> {
        let nr: usize = rows.iter().map(|l| l.dim).product();
        let nc: usize = cols.iter().map(|l| l.dim).product();
        if matrix.nrows() != nr || matrix.ncols() != nc {
            return Err(Error::ShapeMismatch {
                expected: nr * nc,
                actual: matrix.nrows() * matrix.ncols(),
            });
        }
        let mut labels = rows;
        labels.extend(cols);
        let mut data = Vec::with_capacity(nr * nc);
        for r in 0..nr {
            for c in 0..nc {
                data.push(matrix[(r, c)]);
            }
        }
        Self::new(labels, data)
    }

    pub fn labels(&self) -> &[SystemLabel] {
        &self.labels
    }

    pub fn names(&self) -> Vec<&str> {
        self.labels.iter().map(|l| l.name.as_str()).collect()
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn dims(&self) -> Vec<usize> {
        self.labels.iter().map(|l| l.dim).collect()
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l.name == name)
    }

    pub fn label(&self, name: &str) -> Option<&SystemLabel> {
        self.labels.iter().find(|l| l.name == name)
    }

    pub fn has_label(&self, name: &str) -> bool {
        self.position(name).is_some()
    }

    fn require(&self, name: &str) -> Result<usize> {
        self.position(name)
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    /// Amplitude at a multi-index given in label order.
    pub fn get(&self, index: &[usize]) -> Complex64 {
        let strides = row_major_strides(&self.dims());
        let offset: usize = index.iter().zip(&strides).map(|(i, s)| i * s).sum();
        self.data[offset]
    }

    /// Amplitude at the index given by name. Labels not mentioned are taken
    /// at index 0.
    pub fn get_named(&self, index: &[(&str, usize)]) -> Result<Complex64> {
        let mut full = vec![0; self.rank()];
        for (name, k) in index {
            full[self.require(name)?] = *k;
        }
        Ok(self.get(&full))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            labels: self.labels.clone(),
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// Entrywise complex conjugation.
    pub fn conjugate(&self) -> Self {
        Self {
            labels: self.labels.clone(),
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Reorders axes; `order[j]` is the old position of new axis `j`.
    fn permuted_by(&self, order: &[usize]) -> Self {
        if order.iter().enumerate().all(|(j, &o)| j == o) {
            return self.clone();
        }
        let old_strides = row_major_strides(&self.dims());
        let labels: Vec<SystemLabel> = order.iter().map(|&o| self.labels[o].clone()).collect();
        let dims: Vec<usize> = labels.iter().map(|l| l.dim).collect();
        let strides: Vec<usize> = order.iter().map(|&o| old_strides[o]).collect();
        let mut data = Vec::with_capacity(self.data.len());
        for_each_offset(&dims, &strides, 0, |off| data.push(self.data[off]));
        Self { labels, data }
    }

    /// Reorders axes to the given name order, which must be a permutation of
    /// the current labels.
    pub fn permuted(&self, names: &[&str]) -> Result<Self> {
        if names.len() != self.rank() {
            return Err(self.label_set_error(names));
        }
        let mut order = Vec::with_capacity(names.len());
        for name in names {
            order.push(self.position(name).ok_or_else(|| self.label_set_error(names))?);
        }
        check_unique(&order.iter().map(|&o| self.labels[o].clone()).collect::<Vec<_>>())?;
        Ok(self.permuted_by(&order))
    }

    fn label_set_error(&self, other: &[&str]) -> Error {
        let mut left: Vec<String> = self.labels.iter().map(|l| l.name.clone()).collect();
        let mut right: Vec<String> = other.iter().map(|s| s.to_string()).collect();
        left.sort();
        right.sort();
        Error::LabelSetMismatch { left, right }
    }

    /// Labels sorted lexicographically by name.
    pub fn canonical(&self) -> Self {
        let mut order: Vec<usize> = (0..self.rank()).collect();
        order.sort_by(|&a, &b| self.labels[a].name.cmp(&self.labels[b].name));
        self.permuted_by(&order)
    }

    /// `other` reordered to this tensor's label order. Fails unless both
    /// carry the same labels with the same dimensions.
    pub fn align(&self, other: &Self) -> Result<Self> {
        let names = self.names();
        let aligned = other.permuted(&names)?;
        for (a, b) in self.labels.iter().zip(&aligned.labels) {
            if a.dim != b.dim {
                return Err(Error::DimMismatch {
                    label: a.name.clone(),
                    left: a.dim,
                    right: b.dim,
                });
            }
        }
        Ok(aligned)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let b = self.align(other)?;
        Ok(Self {
            labels: self.labels.clone(),
            data: self.data.iter().zip(&b.data).map(|(x, y)| x + y).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let b = self.align(other)?;
        Ok(Self {
            labels: self.labels.clone(),
            data: self.data.iter().zip(&b.data).map(|(x, y)| x - y).collect(),
        })
    }

    /// Sum of tensors over a common label set.
    pub fn sum<'a>(terms: impl IntoIterator<Item = &'a LabeledTensor>) -> Result<Self> {
        let mut iter = terms.into_iter();
        let mut acc = match iter.next() {
            Some(t) => t.clone(),
            None => return Ok(Self::scalar(ZERO)),
        };
        for t in iter {
            acc = acc.add(t)?;
        }
        Ok(acc)
    }

    /// `⟨self|other⟩` after aligning `other`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        let b = self.align(other)?;
        Ok(self
            .data
            .iter()
            .zip(&b.data)
            .map(|(x, y)| x.conj() * y)
            .sum())
    }

    /// Renames one label.
    pub fn relabel(&self, from: &str, to: &str) -> Result<Self> {
        self.relabel_many(&[(from, to)])
    }

    /// Renames several labels simultaneously.
    pub fn relabel_many(&self, map: &[(&str, &str)]) -> Result<Self> {
        let mut labels = self.labels.clone();
        for (from, to) in map {
            let i = self.require(from)?;
            labels[i] = labels[i].renamed(*to);
        }
        check_unique(&labels)?;
        Ok(Self {
            labels,
            data: self.data.clone(),
        })
    }

    /// Fixes label `name` to index `k`, removing it.
    pub fn select(&self, name: &str, k: usize) -> Result<Self> {
        let p = self.require(name)?;
        let dim = self.labels[p].dim;
        if k >= dim {
            return Err(Error::DimMismatch {
                label: name.to_string(),
                left: k,
                right: dim,
            });
        }
        let strides = row_major_strides(&self.dims());
        let mut labels = self.labels.clone();
        labels.remove(p);
        let mut sub_strides = strides.clone();
        sub_strides.remove(p);
        let dims: Vec<usize> = labels.iter().map(|l| l.dim).collect();
        let mut data = Vec::with_capacity(self.data.len() / dim);
        for_each_offset(&dims, &sub_strides, k * strides[p], |off| data.push(self.data[off]));
        Ok(Self { labels, data })
    }

    /// Applies a square operator to one wire in place of its old amplitudes.
    pub fn apply_local(&self, name: &str, op: &DMatrix<Complex64>) -> Result<Self> {
        let p = self.require(name)?;
        let d = self.labels[p].dim;
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::DimMismatch {
                label: name.to_string(),
                left: d,
                right: op.nrows(),
            });
        }
        let stride = row_major_strides(&self.dims())[p];
        let block = d * stride;
        let mut out = vec![ZERO; self.data.len()];
        let mut column = vec![ZERO; d];
        for hi in 0..self.data.len() / block {
            for lo in 0..stride {
                let base = hi * block + lo;
                for (j, c) in column.iter_mut().enumerate() {
                    *c = self.data[base + j * stride];
                }
                for i in 0..d {
                    let mut acc = ZERO;
                    for (j, c) in column.iter().enumerate() {
                        acc += op[(i, j)] * c;
                    }
                    out[base + i * stride] = acc;
                }
            }
        }
        Ok(Self {
            labels: self.labels.clone(),
            data: out,
        })
    }

    /// Tensor product; labels concatenated `self` then `other`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        for l in &other.labels {
            if self.has_label(&l.name) {
                return Err(Error::DuplicateLabel(l.name.clone()));
            }
        }
        self.contract_with(other, &[])
    }

    /// Product of a list of tensors, left to right.
    pub fn product_all<'a>(factors: impl IntoIterator<Item = &'a LabeledTensor>) -> Result<Self> {
        let mut acc = Self::scalar(ONE);
        for f in factors {
            acc = acc.product(f)?;
        }
        Ok(acc)
    }

    /// Contracts label pairs within this tensor: each pair is summed over
    /// equal index values and both labels are removed.
    pub fn contract(&self, pairs: &[(&str, &str)]) -> Result<Self> {
        if pairs.is_empty() {
            return Ok(self.clone());
        }
        let mut used = BTreeSet::new();
        let mut paired = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            let ia = self.require(a)?;
            let ib = self.require(b)?;
            if ia == ib || !used.insert(ia) || !used.insert(ib) {
                return Err(Error::DuplicateLabel(if ia == ib { a } else { b }.to_string()));
            }
            let (da, db) = (self.labels[ia].dim, self.labels[ib].dim);
            if da != db {
                return Err(Error::DimMismatch {
                    label: a.to_string(),
                    left: da,
                    right: db,
                });
            }
            paired.push((ia, ib));
        }
        let strides = row_major_strides(&self.dims());
        let free: Vec<usize> = (0..self.rank()).filter(|i| !used.contains(i)).collect();
        let labels: Vec<SystemLabel> = free.iter().map(|&i| self.labels[i].clone()).collect();
        let free_dims: Vec<usize> = labels.iter().map(|l| l.dim).collect();
        let free_strides: Vec<usize> = free.iter().map(|&i| strides[i]).collect();
        let pair_dims: Vec<usize> = paired.iter().map(|&(a, _)| self.labels[a].dim).collect();
        let pair_strides: Vec<usize> = paired.iter().map(|&(a, b)| strides[a] + strides[b]).collect();
        let mut data = Vec::with_capacity(free_dims.iter().product());
        for_each_offset(&free_dims, &free_strides, 0, |base| {
            let mut acc = ZERO;
            for_each_offset(&pair_dims, &pair_strides, base, |off| acc += self.data[off]);
            data.push(acc);
        });
        Ok(Self { labels, data })
    }

    /// Contracts `self` against `other` over the given `(self_label,
    /// other_label)` pairs without materializing the full product. Result
    /// labels are the free labels of `self` followed by those of `other`.
    pub fn contract_with(&self, other: &Self, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut a_pair = Vec::with_capacity(pairs.len());
        let mut b_pair = Vec::with_capacity(pairs.len());
        for (la, lb) in pairs {
            let ia = self.require(la)?;
            let ib = other.require(lb)?;
            if a_pair.contains(&ia) {
                return Err(Error::DuplicateLabel(la.to_string()));
            }
            if b_pair.contains(&ib) {
                return Err(Error::DuplicateLabel(lb.to_string()));
            }
            let (da, db) = (self.labels[ia].dim, other.labels[ib].dim);
            if da != db {
                return Err(Error::DimMismatch {
                    label: la.to_string(),
                    left: da,
                    right: db,
                });
            }
            a_pair.push(ia);
            b_pair.push(ib);
        }
        let a_free: Vec<usize> = (0..self.rank()).filter(|i| !a_pair.contains(i)).collect();
        let b_free: Vec<usize> = (0..other.rank()).filter(|i| !b_pair.contains(i)).collect();

        let mut labels: Vec<SystemLabel> = a_free.iter().map(|&i| self.labels[i].clone()).collect();
        labels.extend(b_free.iter().map(|&i| other.labels[i].clone()));
        check_unique(&labels)?;
        let out_size = checked_size(&labels)?;

        let a_order: Vec<usize> = a_free.iter().chain(&a_pair).copied().collect();
        let b_order: Vec<usize> = b_pair.iter().chain(&b_free).copied().collect();
        let a = self.permuted_by(&a_order);
        let b = other.permuted_by(&b_order);
        let m: usize = a_free.iter().map(|&i| self.labels[i].dim).product();
        let k: usize = a_pair.iter().map(|&i| self.labels[i].dim).product();
        let n: usize = b_free.iter().map(|&i| other.labels[i].dim).product();
        debug_assert_eq!(m * n, out_size);

        let mut data = vec![ZERO; out_size];
        for i in 0..m {
            let row = &mut data[i * n..(i + 1) * n];
            for kk in 0..k {
                let aik = a.data[i * k + kk];
                if aik == ZERO {
                    continue;
                }
                let brow = &b.data[kk * n..(kk + 1) * n];
                for (c, bv) in row.iter_mut().zip(brow) {
                    *c += aik * bv;
                }
            }
        }
        Ok(Self { labels, data })
    }

    /// Reshapes into a matrix with rows over `rows` and columns over `cols`;
    /// together they must cover every label exactly once.
    pub fn to_matrix(&self, rows: &[&str], cols: &[&str]) -> Result<DMatrix<Complex64>> {
        let order: Vec<&str> = rows.iter().chain(cols).copied().collect();
        let t = self.permuted(&order)?;
        let nr: usize = t.labels[..rows.len()].iter().map(|l| l.dim).product();
        let nc: usize = t.labels[rows.len()..].iter().map(|l| l.dim).product();
        Ok(DMatrix::from_row_slice(nr, nc, &t.data))
    }

    /// Exact relative distance `‖a − b‖ / max(‖a‖, ‖b‖)` after alignment.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        let diff = self.sub(other)?;
        let scale = self.norm().max(other.norm());
        if scale == 0.0 {
            return Ok(0.0);
        }
        Ok(diff.norm() / scale)
    }

    /// Compares two tensors up to a global phase.
    ///
    /// The phase minimizing `‖a − e^{iθ} b‖` is `θ = arg ⟨b|a⟩`, giving a
    /// residual of `sqrt(‖a‖² + ‖b‖² − 2|⟨b|a⟩|)`.
    pub fn equal_up_to_phase(&self, other: &Self, tol: f64) -> Result<PhaseComparison> {
        let b = self.align(other)?;
        let (na, nb) = (self.norm(), b.norm());
        if na == 0.0 || nb == 0.0 {
            return Err(Error::ZeroTensor);
        }
        let overlap: Complex64 = b.data.iter().zip(&self.data).map(|(x, y)| x.conj() * y).sum();
        let phase = overlap.arg();
        let rot = Complex64::from_polar(1.0, phase);
        let residual: f64 = self
            .data
            .iter()
            .zip(&b.data)
            .map(|(x, y)| (x - rot * y).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let error = residual / na.max(nb);
        Ok(PhaseComparison {
            equal: error <= tol,
            error,
            phase,
        })
    }

    /// Label names mapped to dimensions.
    pub fn shape(&self) -> BTreeMap<String, usize> {
        self.labels.iter().map(|l| (l.name.clone(), l.dim)).collect()
    }
}

/// Free-function form of [`LabeledTensor::product`].
pub fn product(a: &LabeledTensor, b: &LabeledTensor) -> Result<LabeledTensor> {
    a.product(b)
}

/// Free-function form of [`LabeledTensor::contract`].
pub fn contract(t: &LabeledTensor, pairs: &[(&str, &str)]) -> Result<LabeledTensor> {
    t.contract(pairs)
}

pub fn conjugate(t: &LabeledTensor) -> LabeledTensor {
    t.conjugate()
}

pub fn equal_up_to_phase(a: &LabeledTensor, b: &LabeledTensor, tol: f64) -> Result<PhaseComparison> {
    a.equal_up_to_phase(b, tol)
}
