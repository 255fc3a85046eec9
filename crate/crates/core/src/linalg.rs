//! Small dense-matrix helpers on top of nalgebra.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type Matrix = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(d: usize) -> Matrix {
    Matrix::identity(d, d)
}

/// Cyclic shift `X|k⟩ = |k+1 mod d⟩`.
pub fn shift(d: usize) -> Matrix {
    Matrix::from_fn(d, d, |r, k| if r == (k + 1) % d { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

/// Clock `Z = diag(ω^k)`, `ω = e^{2πi/d}`.
pub fn clock(d: usize) -> Matrix {
    Matrix::from_fn(d, d, |r, k| {
        if r == k {
            Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / d as f64)
        } else {
            c(0.0, 0.0)
        }
    })
}

pub fn pauli_x() -> Matrix {
    shift(2)
}

pub fn pauli_z() -> Matrix {
    clock(2)
}

pub fn hadamard() -> Matrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Matrix::from_row_slice(2, 2, &[c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)])
}

/// Frobenius norm of `U†U − I` and `UU† − I`, whichever is larger.
pub fn unitarity_error(u: &Matrix) -> f64 {
    if u.nrows() != u.ncols() {
        return f64::INFINITY;
    }
    let n = u.nrows();
    let nnz = u.iter().filter(|z| **z != c(0.0, 0.0)).count();
    if n > 64 && nnz <= 4 * n {
        return sparse_gram_error(u).max(sparse_gram_error(&u.adjoint()));
    }
    let id = identity(n);
    let a = (u.adjoint() * u - &id).norm();
    let b = (u * u.adjoint() - &id).norm();
    a.max(b)
}

/// `‖U†U − I‖_F` accumulated row by row over the nonzero entries.
fn sparse_gram_error(u: &Matrix) -> f64 {
    let n = u.ncols();
    let mut gram = std::collections::HashMap::<(usize, usize), Complex64>::new();
    for r in 0..u.nrows() {
        let nz: Vec<(usize, Complex64)> = (0..n).map(|j| (j, u[(r, j)])).filter(|(_, z)| *z != c(0.0, 0.0)).collect();
        for &(i, x) in &nz {
            for &(j, y) in &nz {
                *gram.entry((i, j)).or_default() += x.conj() * y;
            }
        }
    }
    let mut err = 0.0;
    for i in 0..n {
        let g = gram.remove(&(i, i)).unwrap_or_default();
        err += (g - c(1.0, 0.0)).norm_sqr();
    }
    err += gram.values().map(|g| g.norm_sqr()).sum::<f64>();
    err.sqrt()
}

/// Closest unitary in Frobenius norm, `W V†` from the SVD `U = W Σ V†`.
pub fn polar_unitary(m: &Matrix) -> Matrix {
    let svd = m.clone().svd(true, true);
    let w = svd.u.expect("svd requested u");
    let v_t = svd.v_t.expect("svd requested v_t");
    w * v_t
}

/// `e^{A}` for a square matrix.
pub fn expm(a: &Matrix) -> Matrix {
    a.clone().exp()
}

/// Orthonormal basis of the anti-Hermitian matrices `u(n)` under the real
/// inner product `Re tr(A†B)`.
pub fn skew_hermitian_basis(n: usize) -> Vec<Matrix> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut basis = Vec::with_capacity(n * n);
    for j in 0..n {
        let mut m = Matrix::zeros(n, n);
        m[(j, j)] = c(0.0, 1.0);
        basis.push(m);
    }
    for j in 0..n {
        for k in j + 1..n {
            let mut re = Matrix::zeros(n, n);
            re[(j, k)] = c(s, 0.0);
            re[(k, j)] = c(-s, 0.0);
            basis.push(re);
            let mut im = Matrix::zeros(n, n);
            im[(j, k)] = c(0.0, s);
            im[(k, j)] = c(0.0, s);
            basis.push(im);
        }
    }
    basis
}

/// `tr(A†B)`.
pub fn hs_inner(a: &Matrix, b: &Matrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Kronecker product `a ⊗ b` with `a`'s index major.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    a.kronecker(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_unitarity_agrees_with_dense() {
        let n = 100;
        let mut p = Matrix::from_fn(n, n, |r, k| if r == (3 * k + 1) % n { c(1.0, 0.0) } else { c(0.0, 0.0) });
        p[(0, 5)] = c(0.0, 0.3);
        let id = identity(n);
        let dense = (p.adjoint() * &p - &id).norm().max((&p * p.adjoint() - &id).norm());
        assert!((unitarity_error(&p) - dense).abs() < 1e-12);
        assert!(dense > 0.1);
    }

    #[test]
    fn weyl_generators_are_unitary() {
        for d in 2..6 {
            assert!(unitarity_error(&shift(d)) < 1e-14);
            assert!(unitarity_error(&clock(d)) < 1e-14);
        }
        assert!(unitarity_error(&hadamard()) < 1e-15);
    }

    #[test]
    fn skew_basis_is_orthonormal_and_exponentiates_to_unitaries() {
        let basis = skew_hermitian_basis(3);
        assert_eq!(basis.len(), 9);
        for (i, a) in basis.iter().enumerate() {
            assert!((a + a.adjoint()).norm() < 1e-15);
            for (j, b) in basis.iter().enumerate() {
                let ip = hs_inner(a, b).re;
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((ip - expected).abs() < 1e-15);
            }
            assert!(unitarity_error(&expm(&(a * c(0.7, 0.0)))) < 1e-13);
        }
    }

    #[test]
    fn polar_of_unitary_is_itself() {
        let h = hadamard();
        assert!((polar_unitary(&h) - &h).norm() < 1e-14);
        let scaled = &h * c(3.0, 0.0);
        assert!((polar_unitary(&scaled) - &h).norm() < 1e-14);
    }
}
