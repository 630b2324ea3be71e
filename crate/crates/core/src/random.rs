//! Seeded random instances.
//!
//! Every generator takes a [`ChaCha8Rng`] seeded through [`rng`]; ChaCha8 is a
//! portable stream cipher PRNG, so a seed reproduces the same instance on any
//! platform.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::weights::Weight;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(StandardNormal))
}

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the signs
/// of `R`'s diagonal folded into `Q`.
pub fn random_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let qr = gaussian_matrix(n, n, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// `Qᵀ D Q` for a random orthogonal `Q`.
pub fn conjugated_diagonal(diag: &[f64], rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let q = random_orthogonal(diag.len(), rng);
    let d = DMatrix::from_diagonal(&DVector::from_column_slice(diag));
    q.transpose() * d * q
}

/// Random SPD matrix `MᵀM + n·I`.
pub fn random_spd(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let m = gaussian_matrix(n, n, rng);
    m.transpose() * &m + DMatrix::identity(n, n) * n as f64
}

/// Spectrum of a random test operator: magnitudes in `[0.5, 4]` with random
/// signs, and the first `zeros` entries set to exactly 0.
pub fn random_spectrum(n: usize, zeros: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let mag: f64 = rng.random_range(0.5..4.0);
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            if i < zeros {
                0.0
            } else {
                sign * mag
            }
        })
        .collect()
}

/// A seeded symmetric operator together with its exact spectrum.
#[derive(Debug, Clone)]
pub struct SymmetricInstance {
    pub seed: u64,
    pub spectrum: Vec<f64>,
    pub matrix: DMatrix<f64>,
}

impl SymmetricInstance {
    pub fn kernel_dim(&self) -> usize {
        self.spectrum.iter().filter(|g| **g == 0.0).count()
    }
}

pub fn symmetric_instance(n: usize, zeros: usize, seed: u64) -> SymmetricInstance {
    let mut rng = rng(seed);
    let spectrum = random_spectrum(n, zeros, &mut rng);
    let matrix = conjugated_diagonal(&spectrum, &mut rng);
    SymmetricInstance {
        seed,
        spectrum,
        matrix,
    }
}

/// Monotone weight with `f(1) ≥ 1`, built from positive log increments.
pub fn random_weight(n: usize, rng: &mut ChaCha8Rng) -> Weight {
    let mut acc = 0.0;
    let logs = (0..n)
        .map(|_| {
            acc += rng.random_range(0.0..0.5);
            acc
        })
        .collect();
    Weight::from_log_values(logs)
}
