use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::matcore::matrix::{CMatrix, Density, MatrixTuple};
use crate::matcore::Seed;

/// Random matrix ensembles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ensemble {
    /// Entries (g + i g') / sqrt(2) with independent standard normals, so
    /// each entry has unit second moment.
    ComplexGaussian,
    /// Real standard normal entries.
    RealGaussian,
    /// Independent uniform +/-1 real entries.
    SignMatrix,
}

/// Seeded random matrix. Entries are drawn row-major, so the result is
/// reproducible across platforms and thread counts.
pub fn random_matrix(kind: Ensemble, rows: usize, cols: usize, seed: Seed) -> CMatrix {
    let mut rng = seed.rng();
    let mut entries = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        let z = match kind {
            Ensemble::ComplexGaussian => {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im) / Complex64::new(2.0f64.sqrt(), 0.0)
            }
            Ensemble::RealGaussian => {
                let re: f64 = rng.sample(StandardNormal);
                Complex64::new(re, 0.0)
            }
            Ensemble::SignMatrix => {
                let s: bool = rng.gen();
                Complex64::new(if s { 1.0 } else { -1.0 }, 0.0)
            }
        };
        entries.push(z);
    }
    CMatrix::from_row_slice(rows, cols, &entries)
}

/// Tuple of k seeded random matrices; member k uses the child seed k.
pub fn random_tuple(
    kind: Ensemble,
    k: usize,
    rows: usize,
    cols: usize,
    seed: Seed,
) -> Result<MatrixTuple> {
    let mats = (0..k)
        .map(|i| random_matrix(kind, rows, cols, seed.split(i as u64)))
        .collect();
    MatrixTuple::new(mats)
}

/// Random Hermitian matrix (G + G*)/2 from the chosen ensemble.
pub fn random_hermitian(kind: Ensemble, n: usize, seed: Seed) -> CMatrix {
    let g = random_matrix(kind, n, n, seed);
    (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Random positive semidefinite matrix G*G.
pub fn random_psd(n: usize, seed: Seed) -> CMatrix {
    let g = random_matrix(Ensemble::ComplexGaussian, n, n, seed);
    g.adjoint() * g
}

/// Random density: G*G normalized to unit trace, mixed with a small
/// multiple of the identity so the spectrum stays strictly positive.
pub fn random_density(n: usize, seed: Seed) -> Result<Density> {
    let g = random_matrix(Ensemble::ComplexGaussian, n, n, seed);
    let psd = g.adjoint() * g + CMatrix::identity(n, n) * Complex64::new(1e-6, 0.0);
    Density::from_unnormalized(&psd)
}

/// Seeded vector of k independent +/-1 signs.
pub fn random_signs(k: usize, seed: Seed) -> Vec<f64> {
    let mut rng = seed.rng();
    (0..k)
        .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
        .collect()
}
