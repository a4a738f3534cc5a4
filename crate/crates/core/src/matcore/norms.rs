use crate::error::{Error, Result};
use crate::matcore::eig::clamped_gram_spectrum;
use crate::matcore::matrix::{CMatrix, MatrixTuple};
use crate::matcore::GRAM_CLAMP_REL;

fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p <= 0.0 {
        return Err(Error::invalid(format!(
            "Schatten exponent must be positive or infinite, got {p}"
        )));
    }
    Ok(())
}

fn p_sum(spectrum_sq: &[f64], p: f64) -> f64 {
    // spectrum_sq holds eigenvalues of A*A; singular values are their roots.
    if p.is_infinite() {
        return spectrum_sq.first().copied().unwrap_or(0.0).sqrt();
    }
    let total: f64 = spectrum_sq
        .iter()
        .filter(|&&mu| mu > 0.0)
        .map(|&mu| mu.sqrt().powf(p))
        .sum();
    total.powf(1.0 / p)
}

/// Schatten p-(quasi)norm: the vector p-norm of the singular values.
///
/// p may be any positive real or infinity (operator norm). Singular values
/// come from the Hermitian eigendecomposition of A*A with eigenvalues below
/// `GRAM_CLAMP_REL * max` excluded from the sum.
pub fn schatten_norm(a: &CMatrix, p: f64) -> Result<f64> {
    check_exponent(p)?;
    let mu = clamped_gram_spectrum(a)?;
    Ok(p_sum(&mu, p))
}

/// Largest singular value.
pub fn operator_norm(a: &CMatrix) -> Result<f64> {
    schatten_norm(a, f64::INFINITY)
}

/// Sum of singular values.
pub fn trace_norm(a: &CMatrix) -> Result<f64> {
    schatten_norm(a, 1.0)
}

/// Schatten norm with respect to the normalized trace tr/n on n x n
/// matrices: `n^{-1/p}` times the ordinary norm, and the operator norm at
/// p = infinity.
pub fn normalized_schatten_norm(a: &CMatrix, p: f64) -> Result<f64> {
    check_exponent(p)?;
    if a.nrows() != a.ncols() {
        return Err(Error::shape("normalized trace norms need a square matrix"));
    }
    let raw = schatten_norm(a, p)?;
    if p.is_infinite() {
        Ok(raw)
    } else {
        Ok(raw * (a.nrows() as f64).powf(-1.0 / p))
    }
}

/// Vertical stack [x_1; x_2; ...; x_k].
pub fn stack_columns(xs: &MatrixTuple) -> Result<CMatrix> {
    let (rows, cols) = xs
        .shape()
        .ok_or_else(|| Error::shape("cannot stack an empty tuple"))?;
    let mut s = CMatrix::zeros(rows * xs.len(), cols);
    for (k, x) in xs.iter().enumerate() {
        s.view_mut((k * rows, 0), (rows, cols)).copy_from(x);
    }
    Ok(s)
}

/// Horizontal stack [x_1, x_2, ..., x_k].
pub fn stack_rows(xs: &MatrixTuple) -> Result<CMatrix> {
    let (rows, cols) = xs
        .shape()
        .ok_or_else(|| Error::shape("cannot stack an empty tuple"))?;
    let mut s = CMatrix::zeros(rows, cols * xs.len());
    for (k, x) in xs.iter().enumerate() {
        s.view_mut((0, k * cols), (rows, cols)).copy_from(x);
    }
    Ok(s)
}

fn square_function_norm(gram: CMatrix, q: f64) -> f64 {
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
    p_sum(&mu, q)
}

/// Column square-function norm ||(sum_k x_k* x_k)^{1/2}||_q.
///
/// Equals the Schatten q-norm of the vertical stack of the tuple. The empty
/// tuple gives 0.
pub fn column_square_norm(xs: &MatrixTuple, q: f64) -> Result<f64> {
    check_exponent(q)?;
    let Some((_, cols)) = xs.shape() else {
        return Ok(0.0);
    };
    let mut gram = CMatrix::zeros(cols, cols);
    for x in xs {
        gram += x.adjoint() * x;
    }
    Ok(square_function_norm(gram, q))
}

/// Row square-function norm ||(sum_k x_k x_k*)^{1/2}||_q.
///
/// Equals the Schatten q-norm of the horizontal stack of the tuple.
pub fn row_square_norm(xs: &MatrixTuple, q: f64) -> Result<f64> {
    check_exponent(q)?;
    let Some((rows, _)) = xs.shape() else {
        return Ok(0.0);
    };
    let mut gram = CMatrix::zeros(rows, rows);
    for x in xs {
        gram += x * x.adjoint();
    }
    Ok(square_function_norm(gram, q))
}

/// Scalar helper: vector q-(quasi)norm of a nonnegative slice, with the sup
/// at q = infinity.
pub(crate) fn vec_q_norm(vals: &[f64], q: f64) -> f64 {
    if q.is_infinite() {
        return vals.iter().cloned().fold(0.0, f64::max);
    }
    vals.iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| v.powf(q))
        .sum::<f64>()
        .powf(1.0 / q)
}
