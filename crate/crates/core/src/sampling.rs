//! Seeded random unitaries and states.
//!
//! Every sample draws from its own generator, keyed by
//! `(seed, suite, check, index)`, so a single sample can be reproduced
//! without replaying the ones before it.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rand_distr::StandardNormal;
use sha2::{Digest, Sha256};

use crate::linalg::Matrix;

pub type SampleRng = ChaCha8Rng;

/// Generator for one sample of one check.
pub fn sample_rng(seed: u64, suite: &str, check: &str, index: u64) -> SampleRng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(suite.as_bytes());
    h.update([0]);
    h.update(check.as_bytes());
    h.update([0]);
    h.update(index.to_le_bytes());
    ChaCha8Rng::from_seed(h.finalize().into())
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-random `d × d` unitary: QR of a complex Ginibre matrix with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Matrix {
    let z = DMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        q.column_mut(j).scale_mut_complex(phase);
    }
    q
}

/// Uniformly random unit vector in `C^d`.
pub fn random_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..d).map(|_| gaussian(rng)).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

trait ScaleComplex {
    fn scale_mut_complex(&mut self, f: Complex64);
}

impl<S> ScaleComplex for nalgebra::Matrix<Complex64, nalgebra::Dyn, nalgebra::U1, S>
where
    S: nalgebra::StorageMut<Complex64, nalgebra::Dyn, nalgebra::U1>,
{
    fn scale_mut_complex(&mut self, f: Complex64) {
        for z in self.iter_mut() {
            *z *= f;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitarity_error;

    #[test]
    fn same_key_same_stream() {
        let a: u64 = sample_rng(7, "crf", "eq7", 3).gen();
        let b: u64 = sample_rng(7, "crf", "eq7", 3).gen();
        let c: u64 = sample_rng(7, "crf", "eq7", 4).gen();
        let d: u64 = sample_rng(7, "crf", "eq8", 3).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn haar_unitaries_are_unitary() {
        let mut rng = sample_rng(1, "t", "t", 0);
        for d in 1..6 {
            assert!(unitarity_error(&haar_unitary(d, &mut rng)) < 1e-12);
        }
    }

    #[test]
    fn haar_first_moment_vanishes() {
        // E[U_00] = 0 and E[|U_00|^2] = 1/d for Haar measure.
        let mut rng = sample_rng(2, "t", "moments", 0);
        let n = 4000;
        let d = 3;
        let (mut m1, mut m2) = (Complex64::new(0.0, 0.0), 0.0);
        for _ in 0..n {
            let u = haar_unitary(d, &mut rng);
            m1 += u[(0, 0)];
            m2 += u[(0, 0)].norm_sqr();
        }
        assert!((m1 / n as f64).norm() < 0.05);
        assert!((m2 / n as f64 - 1.0 / d as f64).abs() < 0.03);
    }

    #[test]
    fn random_states_are_normalized() {
        let mut rng = sample_rng(3, "t", "t", 0);
        let v = random_state(5, &mut rng);
        let n: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-14);
    }
}
