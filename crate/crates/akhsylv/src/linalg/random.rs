//! Seeded random matrix generation with known spectra.
//!
//! The PRNG is ChaCha8 seeded through `seed_from_u64`, with normal deviates
//! from the ziggurat in `rand_distr`. Fixed algorithm and seeding keep every
//! experiment reproducible bit for bit in serial mode.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{factor::qr, Matrix};

/// Eigenvalues plus the seed of the conjugating orthogonal factor.
#[derive(Clone, Debug)]
pub struct SpectrumSpec {
    pub eigenvalues: Vec<f64>,
    pub orthogonal_factor_seed: u64,
}

impl SpectrumSpec {
    pub fn new(eigenvalues: Vec<f64>, seed: u64) -> Self {
        SpectrumSpec {
            eigenvalues,
            orthogonal_factor_seed: seed,
        }
    }

    /// Eigenvalues drawn uniformly from `[lo, hi]` with a separate draw seed.
    pub fn uniform(n: usize, lo: f64, hi: f64, draw_seed: u64, factor_seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(draw_seed);
        let eigenvalues = (0..n).map(|_| rng.gen_range(lo..hi)).collect();
        SpectrumSpec::new(eigenvalues, factor_seed)
    }
}

/// `M = Q diag(eigenvalues) Q^T` with `Q` the sign-fixed Q factor of a seeded
/// Gaussian matrix. Returns `(M, Q)`.
pub fn random_known_spectrum(spec: &SpectrumSpec) -> (Matrix, Matrix) {
    let n = spec.eigenvalues.len();
    let g = gaussian_matrix(n, n, spec.orthogonal_factor_seed);
    let (mut q, r) = qr(&g);
    // fix the sign ambiguity so Q is a deterministic function of the seed
    for j in 0..n {
        if r.get(j, j) < 0.0 {
            for i in 0..n {
                q.set(i, j, -q.get(i, j));
            }
        }
    }
    let lam = Matrix::diagonal(&spec.eigenvalues);
    let m = q.matmul(&lam).matmul(&q.transpose());
    (m, q)
}

/// Seeded matrix of i.i.d. standard normal entries.
pub fn gaussian_matrix(rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Matrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}
