//! The weighted anticommutator x -> f^a x + x f^a for a density f, its
//! exact inverse in the eigenbasis of f, and a search for a single
//! density certifying a euclidean bound for a generator tuple.

use num_complex::Complex64;

use crate::decomp::SolverConfig;
use crate::error::{Error, Result};
use crate::matcore::{check_finite, CMatrix, Density, MatrixTuple};

/// f^alpha x + x f^alpha, or its inverse when `inverse` is set. The
/// inverse divides by mu_i^alpha + mu_j^alpha in the eigenbasis, so it
/// requires a strictly positive spectrum.
pub fn weighted_anticommutator(
    f: &Density,
    alpha: f64,
    x: &CMatrix,
    inverse: bool,
) -> Result<CMatrix> {
    check_finite(x)?;
    if !alpha.is_finite() {
        return Err(Error::invalid("exponent alpha must be finite"));
    }
    if x.nrows() != f.size() || x.ncols() != f.size() {
        return Err(Error::shape(format!(
            "operand is {:?}, density has size {}",
            x.shape(),
            f.size()
        )));
    }
    if !inverse {
        let fa = f.power(alpha)?;
        return Ok(&fa * x + x * &fa);
    }
    let top = *f.eigenvalues().last().expect("non-empty spectrum");
    if f.min_eigenvalue() <= 1e-14 * top.max(1e-300) {
        return Err(Error::SingularDensity(f.min_eigenvalue()));
    }
    let u = f.eigenvectors();
    let xt = u.adjoint() * x * u;
    let pow: Vec<f64> = f.eigenvalues().iter().map(|&m| m.powf(alpha)).collect();
    let yt = CMatrix::from_fn(f.size(), f.size(), |i, j| {
        xt[(i, j)] / Complex64::new(pow[i] + pow[j], 0.0)
    });
    Ok(u * yt * u.adjoint())
}

/// Largest singular value of c -> T(F^{1/r})^{-1} (sum c_k u_k) as a map
/// from euclidean coefficient space into Frobenius space. Exact for the
/// given density.
pub fn density_bound(u: &MatrixTuple, f: &Density, r: f64) -> Result<f64> {
    if u.is_empty() {
        return Ok(0.0);
    }
    let (n, m) = u.shape().expect("non-empty tuple");
    if n != m || n != f.size() {
        return Err(Error::shape("generators must be square and match the density"));
    }
    if r.is_nan() || r <= 0.0 {
        return Err(Error::invalid("exponent r must be positive"));
    }
    let k = u.len();
    let mut stacked = CMatrix::zeros(n * n, k);
    for (col, gen) in u.iter().enumerate() {
        let y = weighted_anticommutator(f, 1.0 / r, gen, true)?;
        for j in 0..n {
            for i in 0..n {
                stacked[(j * n + i, col)] = y[(i, j)];
            }
        }
    }
    let svd = stacked.svd(false, false);
    Ok(svd.singular_values.iter().fold(0.0f64, |a, &v| a.max(v)))
}

/// Search over candidate densities for one making the euclidean bound of
/// the generator map small. Candidates: the uniform density, normalized
/// Gram mixes of the generators, and a seeded multiplicative coordinate
/// search over diagonal weights; the best (smallest exact bound) wins.
pub fn single_density_search(
    u: &MatrixTuple,
    p: f64,
    cfg: &SolverConfig,
) -> Result<(Density, f64)> {
    if p.is_nan() || p < 1.0 || p >= 2.0 {
        return Err(Error::invalid("exponent p must lie in [1, 2)"));
    }
    cfg.validate()?;
    let r = 1.0 / (1.0 / p - 0.5);
    let Some((n, m)) = u.shape() else {
        return Ok((Density::uniform(1)?, 0.0));
    };
    if n != m {
        return Err(Error::shape("generators must be square"));
    }
    let mut best_f = Density::uniform(n)?;
    let mut best = density_bound(u, &best_f, r)?;
    let consider = |f: Density, best: &mut f64, best_f: &mut Density| -> Result<()> {
        let b = density_bound(u, &f, r)?;
        if b < *best {
            *best = b;
            *best_f = f;
        }
        Ok(())
    };
    // Gram-based candidates concentrate where the generators act.
    let mut left = CMatrix::zeros(n, n);
    let mut right = CMatrix::zeros(n, n);
    for g in u.iter() {
        left += g * g.adjoint();
        right += g.adjoint() * g;
    }
    let reg = CMatrix::identity(n, n).scale(1e-6);
    for gram in [&left, &right, &(&left + &right)] {
        let tr: f64 = (0..n).map(|i| gram[(i, i)].re).sum();
        if tr > 0.0 {
            if let Ok(f) = Density::from_unnormalized(&(gram + &reg)) {
                consider(f, &mut best, &mut best_f)?;
            }
        }
    }
    // Multiplicative coordinate search over diagonal weights.
    for s in 0..cfg.restarts.max(1) {
        let mut w: Vec<f64> = if s == 0 {
            (0..n)
                .map(|i| 1e-6 + left[(i, i)].re + right[(i, i)].re)
                .collect()
        } else {
            use rand::Rng;
            let mut rng = cfg.seed.split(9000 + s as u64).rng();
            (0..n).map(|_| 0.2 + rng.gen::<f64>()).collect()
        };
        let norm_w = |w: &[f64]| -> Vec<f64> {
            let s: f64 = w.iter().sum();
            w.iter().map(|v| v / s).collect()
        };
        let mut cur = density_bound(u, &Density::diagonal(&norm_w(&w))?, r)?;
        for _ in 0..30 {
            let mut moved = false;
            for i in 0..n {
                for factor in [2.0, 0.5] {
                    let mut wt = w.clone();
                    wt[i] *= factor;
                    let f = Density::diagonal(&norm_w(&wt))?;
                    let b = density_bound(u, &f, r)?;
                    if b < cur - 1e-12 * (1.0 + cur) {
                        cur = b;
                        w = wt;
                        moved = true;
                    }
                }
            }
            if !moved {
                break;
            }
        }
        consider(Density::diagonal(&norm_w(&w))?, &mut best, &mut best_f)?;
    }
    Ok((best_f, best))
}
