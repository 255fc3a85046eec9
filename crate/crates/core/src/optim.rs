//! Riemannian steepest descent on products of unitary groups.
//!
//! A point is a list of unitaries `U_j`. Tangent directions are `U_j Ω_j`
//! with `Ω_j` anti-Hermitian, expanded in the orthonormal basis of
//! [`linalg::skew_hermitian_basis`]. A step moves to `U_j exp(t Ω_j)`, then
//! retracts onto the group with a polar decomposition to stop drift.

use crate::linalg::{self, Matrix};

/// Sufficient-decrease constant. Large enough that a step overshooting a
/// quadratic minimum by a factor of two is rejected.
const ARMIJO: f64 = 0.25;

/// Step used by the finite-difference gradient.
pub const FD_STEP: f64 = 1e-6;

pub trait UnitaryObjective: Sync {
    /// Size of each unitary factor.
    fn sizes(&self) -> Vec<usize>;

    fn value(&self, us: &[Matrix]) -> f64;

    /// `g[j][k] = d/dt f(…, U_j exp(t B_k), …)` at `t = 0`. The default is a
    /// central difference.
    fn gradient(&self, us: &[Matrix]) -> Vec<Vec<f64>> {
        central_difference(self, us, FD_STEP)
    }
}

pub fn central_difference<O: UnitaryObjective + ?Sized>(obj: &O, us: &[Matrix], h: f64) -> Vec<Vec<f64>> {
    us.iter()
        .enumerate()
        .map(|(j, u)| {
            linalg::skew_hermitian_basis(u.nrows())
                .iter()
                .map(|b| {
                    let mut plus = us.to_vec();
                    let mut minus = us.to_vec();
                    plus[j] = u * linalg::expm(&(b * linalg::c(h, 0.0)));
                    minus[j] = u * linalg::expm(&(b * linalg::c(-h, 0.0)));
                    (obj.value(&plus) - obj.value(&minus)) / (2.0 * h)
                })
                .collect()
        })
        .collect()
}

/// `U_j exp(t Ω_j)` followed by polar retraction.
pub fn step(us: &[Matrix], directions: &[Matrix], t: f64) -> Vec<Matrix> {
    us.iter()
        .zip(directions)
        .map(|(u, w)| linalg::polar_unitary(&(u * linalg::expm(&(w * linalg::c(t, 0.0))))))
        .collect()
}

/// Anti-Hermitian generators `Ω_j = Σ_k c_jk B_k`.
pub fn generators(sizes: &[usize], coeffs: &[Vec<f64>]) -> Vec<Matrix> {
    sizes
        .iter()
        .zip(coeffs)
        .map(|(&n, cj)| {
            linalg::skew_hermitian_basis(n)
                .iter()
                .zip(cj)
                .fold(Matrix::zeros(n, n), |acc, (b, g)| acc + b * linalg::c(*g, 0.0))
        })
        .collect()
}

fn grad_norm_sqr(g: &[Vec<f64>]) -> f64 {
    g.iter().flatten().map(|x| x * x).sum()
}

#[derive(Clone, Debug)]
pub struct DescentOptions {
    pub max_iters: usize,
    pub initial_step: f64,
    /// Stop once the objective is at or below this value.
    pub target: f64,
    pub grad_tol: f64,
    pub min_step: f64,
}

impl Default for DescentOptions {
    fn default() -> Self {
        Self {
            max_iters: 200,
            initial_step: 0.5,
            target: 0.0,
            grad_tol: 1e-10,
            min_step: 1e-14,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DescentResult {
    pub value: f64,
    pub params: Vec<Matrix>,
    pub iterations: usize,
    /// Stopped on the target, a small gradient, or a vanishing step, rather
    /// than on the iteration cap.
    pub converged: bool,
    /// Objective after each accepted step, starting with the initial value.
    pub history: Vec<f64>,
}

/// Steepest descent with Armijo backtracking. The trial step grows after
/// every accepted step and halves on rejection.
pub fn minimize<O: UnitaryObjective + ?Sized>(obj: &O, init: Vec<Matrix>, opts: &DescentOptions) -> DescentResult {
    let sizes = obj.sizes();
    let mut us = init;
    let mut f = obj.value(&us);
    let mut history = vec![f];
    let mut t = opts.initial_step;
    let mut converged = f <= opts.target;
    let mut iterations = 0;
    while !converged && iterations < opts.max_iters {
        iterations += 1;
        let g = obj.gradient(&us);
        let gg = grad_norm_sqr(&g);
        if gg.sqrt() < opts.grad_tol {
            converged = true;
            break;
        }
        let neg: Vec<Vec<f64>> = g.iter().map(|gj| gj.iter().map(|x| -x).collect()).collect();
        let dirs = generators(&sizes, &neg);
        let mut accepted = false;
        while t >= opts.min_step {
            let cand = step(&us, &dirs, t);
            let fc = obj.value(&cand);
            if fc <= f - ARMIJO * t * gg {
                us = cand;
                f = fc;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            converged = true;
            break;
        }
        history.push(f);
        t = (t * 2.0).min(4.0 * opts.initial_step);
        if f <= opts.target {
            converged = true;
        }
    }
    DescentResult {
        value: f,
        params: us,
        iterations,
        converged,
        history,
    }
}
