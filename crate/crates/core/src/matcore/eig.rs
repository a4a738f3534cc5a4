use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::matrix::{check_finite, check_hermitian, CMatrix};
use crate::matcore::GRAM_CLAMP_REL;

/// Eigendecomposition of a Hermitian matrix: ascending real eigenvalues and
/// a unitary of eigenvectors (columns). The input is validated against the
/// crate Hermitian tolerance and symmetrized before factorization so the
/// decomposition is exactly self-adjoint.
pub fn hermitian_eigen(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    check_hermitian(a)?;
    let sym = (a + a.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&i, &j| {
        eig.eigenvalues[i]
            .partial_cmp(&eig.eigenvalues[j])
            .expect("finite eigenvalues")
    });
    let evals: Vec<f64> = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let n = a.nrows();
    let mut evecs = CMatrix::zeros(n, n);
    for (new_col, &old_col) in idx.iter().enumerate() {
        evecs.set_column(new_col, &eig.eigenvectors.column(old_col));
    }
    Ok((evals, evecs))
}

/// Eigenvalues of A*A (equivalently AA*, whichever side is smaller),
/// descending, with values below `GRAM_CLAMP_REL * max` clamped to exact
/// zero. The clamp keeps quasi-norms (p < 1) from amplifying rounding noise
/// in deficient-rank matrices.
pub fn clamped_gram_spectrum(a: &CMatrix) -> Result<Vec<f64>> {
    check_finite(a)?;
    let gram = if a.ncols() <= a.nrows() {
        a.adjoint() * a
    } else {
        a * a.adjoint()
    };
    let eig = gram.symmetric_eigen();
    let mut mu: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    mu.sort_by(|x, y| y.partial_cmp(x).expect("finite eigenvalues"));
    let top = mu.first().copied().unwrap_or(0.0).max(0.0);
    let clamp = GRAM_CLAMP_REL * top;
    for v in &mut mu {
        if *v < clamp {
            *v = 0.0;
        }
    }
    Ok(mu)
}

/// Singular values, descending, clamped as in [`clamped_gram_spectrum`].
pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    Ok(clamped_gram_spectrum(a)?.into_iter().map(f64::sqrt).collect())
}

/// A^alpha for Hermitian positive semidefinite A, through its eigenbasis.
///
/// Tiny negative eigenvalues (within the PSD tolerance) are clamped to zero;
/// genuinely negative spectra are rejected. Negative exponents require a
/// strictly positive spectrum.
pub fn psd_power(a: &CMatrix, alpha: f64) -> Result<CMatrix> {
    if !alpha.is_finite() {
        return Err(Error::invalid("power exponent must be finite"));
    }
    let (evals, evecs) = hermitian_eigen(a)?;
    let top = evals.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let psd_tol = 1e-10 * top.max(1.0);
    let min = evals.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < -psd_tol {
        return Err(Error::NotPsd(min));
    }
    let clamp = GRAM_CLAMP_REL * top.max(0.0);
    let clamped: Vec<f64> = evals
        .iter()
        .map(|&v| if v < clamp { 0.0 } else { v })
        .collect();
    if alpha < 0.0 && clamped.iter().any(|&v| v == 0.0) {
        return Err(Error::SingularDensity(min));
    }
    let d: Vec<Complex64> = clamped
        .iter()
        .map(|&v| {
            let w = if v == 0.0 && alpha == 0.0 { 1.0 } else { v.powf(alpha) };
            Complex64::new(w, 0.0)
        })
        .collect();
    let diag = CMatrix::from_diagonal(&DVector::from_vec(d));
    Ok(&evecs * diag * evecs.adjoint())
}

/// Real gradient of A -> |A|_p in the convention dF = Re tr(g* dA).
///
/// For finite p: |A|_p^{1-p} U diag(s^{p-1}) V, built from the same SVD
/// factors that reconstruct A, so the result is convention independent.
/// p = infinity returns the top singular pair outer product (a valid
/// supergradient under degeneracy). Singular values under the relative
/// clamp contribute nothing; for p < 1 this also caps the weight blowup.
pub fn schatten_norm_gradient(a: &CMatrix, p: f64) -> Result<CMatrix> {
    check_finite(a)?;
    if p.is_nan() || p <= 0.0 {
        return Err(Error::invalid("exponent p must be positive"));
    }
    let svd = a.clone().svd(true, true);
    let u = svd.u.as_ref().expect("requested U");
    let v_t = svd.v_t.as_ref().expect("requested V");
    let s = &svd.singular_values;
    let k = s.len();
    let top = s.iter().fold(0.0f64, |m, &v| m.max(v));
    if top == 0.0 {
        return Ok(CMatrix::zeros(a.nrows(), a.ncols()));
    }
    let clamp = (GRAM_CLAMP_REL * top * top).sqrt();
    let weights: Vec<f64> = if p.is_infinite() {
        let arg = (0..k)
            .max_by(|&i, &j| s[i].partial_cmp(&s[j]).expect("finite"))
            .expect("non-empty");
        (0..k).map(|i| if i == arg { 1.0 } else { 0.0 }).collect()
    } else {
        let norm_p: f64 = s
            .iter()
            .map(|&v| if v > clamp { v.powf(p) } else { 0.0 })
            .sum::<f64>()
            .powf(1.0 / p);
        s.iter()
            .map(|&v| {
                if v > clamp {
                    norm_p.powf(1.0 - p) * v.powf(p - 1.0)
                } else {
                    0.0
                }
            })
            .collect()
    };
    let mut g = CMatrix::zeros(a.nrows(), a.ncols());
    for (i, &w) in weights.iter().enumerate() {
        if w != 0.0 {
            let ui = u.column(i);
            let vi = v_t.row(i);
            for r in 0..a.nrows() {
                for c in 0..a.ncols() {
                    g[(r, c)] += ui[r] * vi[c] * Complex64::new(w, 0.0);
                }
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::norms::schatten_norm;
    use crate::matcore::random::{random_matrix, Ensemble};
    use crate::matcore::seed::Seed;

    #[test]
    fn norm_gradient_matches_finite_differences() {
        let a = random_matrix(Ensemble::ComplexGaussian, 3, 4, Seed(11));
        let h = 1e-6;
        for &p in &[0.7, 1.0, 1.6, 2.0, 3.0] {
            let g = schatten_norm_gradient(&a, p).unwrap();
            for &(r, c) in &[(0usize, 0usize), (1, 2), (2, 3)] {
                for re_dir in [true, false] {
                    let mut ap = a.clone();
                    let mut am = a.clone();
                    let d = if re_dir {
                        Complex64::new(h, 0.0)
                    } else {
                        Complex64::new(0.0, h)
                    };
                    ap[(r, c)] += d;
                    am[(r, c)] -= d;
                    let fd = (schatten_norm(&ap, p).unwrap() - schatten_norm(&am, p).unwrap())
                        / (2.0 * h);
                    let pred = if re_dir { g[(r, c)].re } else { g[(r, c)].im };
                    assert!(
                        (fd - pred).abs() <= 1e-4 * (1.0 + fd.abs()),
                        "p {p} entry ({r},{c}) re_dir {re_dir}: fd {fd} pred {pred}"
                    );
                }
            }
        }
    }

    #[test]
    fn norm_gradient_zero_matrix() {
        let z = CMatrix::zeros(2, 3);
        let g = schatten_norm_gradient(&z, 1.5).unwrap();
        assert_eq!(g.iter().filter(|v| v.norm() != 0.0).count(), 0);
    }
}
