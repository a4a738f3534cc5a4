use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::HERMITIAN_TOL;

/// Dense complex matrix used throughout the crate.
pub type CMatrix = DMatrix<Complex64>;

/// True when every entry is finite.
pub fn is_finite(a: &CMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub(crate) fn check_finite(a: &CMatrix) -> Result<()> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Err(Error::shape("matrix must have at least one row and column"));
    }
    if !is_finite(a) {
        return Err(Error::invalid("matrix has non-finite entries"));
    }
    Ok(())
}

/// Largest entry modulus.
pub fn max_abs_entry(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Frobenius norm.
pub fn frobenius_norm(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest modulus of A - A*.
pub fn hermitian_defect(a: &CMatrix) -> f64 {
    if a.nrows() != a.ncols() {
        return f64::INFINITY;
    }
    let mut d = 0.0f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            d = d.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    d
}

/// Hermitian part (A + A*)/2.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()) * Complex64::new(0.5, 0.0)
}

pub(crate) fn check_hermitian(a: &CMatrix) -> Result<()> {
    check_finite(a)?;
    let scale = max_abs_entry(a).max(1.0);
    let defect = hermitian_defect(a);
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian(defect));
    }
    Ok(())
}

/// Finite tuple (x_1, ..., x_k) of equally shaped complex matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixTuple {
    mats: Vec<CMatrix>,
}

impl MatrixTuple {
    /// Builds a tuple, checking that all members share one shape and are
    /// finite. The empty tuple is allowed (its square-function norms are 0).
    pub fn new(mats: Vec<CMatrix>) -> Result<Self> {
        if let Some(first) = mats.first() {
            check_finite(first)?;
            let shape = first.shape();
            for (k, m) in mats.iter().enumerate().skip(1) {
                check_finite(m)?;
                if m.shape() != shape {
                    return Err(Error::shape(format!(
                        "tuple member {k} has shape {:?}, expected {:?}",
                        m.shape(),
                        shape
                    )));
                }
            }
        }
        Ok(MatrixTuple { mats })
    }

    pub fn single(m: CMatrix) -> Result<Self> {
        Self::new(vec![m])
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    /// Common (rows, cols) of the members; None for the empty tuple.
    pub fn shape(&self) -> Option<(usize, usize)> {
        self.mats.first().map(|m| m.shape())
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CMatrix> {
        self.mats.iter()
    }

    pub fn as_slice(&self) -> &[CMatrix] {
        &self.mats
    }
}

impl std::ops::Index<usize> for MatrixTuple {
    type Output = CMatrix;
    fn index(&self, i: usize) -> &CMatrix {
        &self.mats[i]
    }
}

impl<'a> IntoIterator for &'a MatrixTuple {
    type Item = &'a CMatrix;
    type IntoIter = std::slice::Iter<'a, CMatrix>;
    fn into_iter(self) -> Self::IntoIter {
        self.mats.iter()
    }
}

/// Doubly indexed family (x_ij), i < grid_rows, j < grid_cols, of equally
/// shaped square matrices whose size covers the grid, so the entry
/// (x_ij)_{ij} is always defined.
#[derive(Clone, Debug)]
pub struct MatrixFamily {
    grid_rows: usize,
    grid_cols: usize,
    mats: Vec<CMatrix>, // row-major over (i, j)
}

impl MatrixFamily {
    pub fn new(grid_rows: usize, grid_cols: usize, mats: Vec<CMatrix>) -> Result<Self> {
        if grid_rows == 0 || grid_cols == 0 {
            return Err(Error::shape("family grid must be non-empty"));
        }
        if mats.len() != grid_rows * grid_cols {
            return Err(Error::shape(format!(
                "family needs {} matrices, got {}",
                grid_rows * grid_cols,
                mats.len()
            )));
        }
        let shape = mats[0].shape();
        if shape.0 != shape.1 {
            return Err(Error::shape("family members must be square"));
        }
        if shape.0 < grid_rows || shape.1 < grid_cols {
            return Err(Error::shape(format!(
                "member size {:?} does not cover the {}x{} grid",
                shape, grid_rows, grid_cols
            )));
        }
        for m in &mats {
            check_finite(m)?;
            if m.shape() != shape {
                return Err(Error::shape("family members must share one shape"));
            }
        }
        Ok(MatrixFamily {
            grid_rows,
            grid_cols,
            mats,
        })
    }

    pub fn grid(&self) -> (usize, usize) {
        (self.grid_rows, self.grid_cols)
    }

    pub fn member(&self, i: usize, j: usize) -> &CMatrix {
        &self.mats[i * self.grid_cols + j]
    }

    pub fn member_size(&self) -> usize {
        self.mats[0].nrows()
    }

    /// Flattens the family into a tuple (row-major grid order).
    pub fn to_tuple(&self) -> MatrixTuple {
        MatrixTuple {
            mats: self.mats.clone(),
        }
    }
}

/// Positive semidefinite matrix with unit trace, stored together with its
/// eigendecomposition (ascending eigenvalues, clamped at zero).
#[derive(Clone, Debug)]
pub struct Density {
    mat: CMatrix,
    evals: Vec<f64>,
    evecs: CMatrix,
}

impl Density {
    /// Validates Hermitian symmetry, positive semidefiniteness (small
    /// negative eigenvalues are clamped to zero) and unit trace within 1e-8.
    pub fn new(mat: CMatrix) -> Result<Self> {
        check_hermitian(&mat)?;
        let (evals, evecs) = super::eig::hermitian_eigen(&mat)?;
        let scale = evals.iter().fold(0.0f64, |m, &v| m.max(v.abs())).max(1e-300);
        let min = evals.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -1e-10 * scale.max(1.0) {
            return Err(Error::NotPsd(min));
        }
        let tr: f64 = evals.iter().sum();
        if (tr - 1.0).abs() > 1e-8 {
            return Err(Error::invalid(format!(
                "density must have unit trace, got {tr:.12}"
            )));
        }
        let evals = evals.into_iter().map(|v| v.max(0.0)).collect();
        Ok(Density { mat, evals, evecs })
    }

    /// Scales a PSD matrix with positive trace to unit trace.
    pub fn from_unnormalized(psd: &CMatrix) -> Result<Self> {
        check_hermitian(psd)?;
        let tr: f64 = (0..psd.nrows()).map(|i| psd[(i, i)].re).sum();
        if !(tr > 0.0) || !tr.is_finite() {
            return Err(Error::invalid(format!(
                "cannot normalize matrix with trace {tr:.3e}"
            )));
        }
        Density::new(psd / Complex64::new(tr, 0.0))
    }

    /// Maximally mixed density I/n.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::shape("density must have positive size"));
        }
        let mat = CMatrix::identity(n, n) / Complex64::new(n as f64, 0.0);
        Density::new(mat)
    }

    /// Diagonal density from nonnegative weights summing to 1 within 1e-8.
    pub fn diagonal(weights: &[f64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::shape("density must have positive size"));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::invalid("diagonal weights must be finite and >= 0"));
        }
        let mat = CMatrix::from_fn(weights.len(), weights.len(), |i, j| {
            if i == j {
                Complex64::new(weights[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Density::new(mat)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn size(&self) -> usize {
        self.mat.nrows()
    }

    /// Ascending, clamped spectrum.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.evals
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.evecs
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.evals[0]
    }

    /// Entrywise power f^alpha through the stored eigenbasis. Negative
    /// powers require a strictly positive spectrum.
    pub fn power(&self, alpha: f64) -> Result<CMatrix> {
        if !alpha.is_finite() {
            return Err(Error::invalid("power exponent must be finite"));
        }
        let top = *self.evals.last().expect("non-empty spectrum");
        if alpha < 0.0 && self.evals[0] <= 1e-14 * top.max(1e-300) {
            return Err(Error::SingularDensity(self.evals[0]));
        }
        let d: Vec<Complex64> = self
            .evals
            .iter()
            .map(|&v| Complex64::new(power_or_zero(v, alpha), 0.0))
            .collect();
        let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(d));
        Ok(&self.evecs * diag * self.evecs.adjoint())
    }
}

fn power_or_zero(v: f64, alpha: f64) -> f64 {
    if v == 0.0 && alpha == 0.0 {
        1.0
    } else {
        v.powf(alpha)
    }
}

/// Serializable dense-matrix payload used in JSON reports and certificates.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixData {
    pub rows: usize,
    pub cols: usize,
    /// Row-major (re, im) pairs.
    pub entries: Vec<(f64, f64)>,
}

impl From<&CMatrix> for MatrixData {
    fn from(a: &CMatrix) -> Self {
        let mut entries = Vec::with_capacity(a.nrows() * a.ncols());
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                entries.push((a[(i, j)].re, a[(i, j)].im));
            }
        }
        MatrixData {
            rows: a.nrows(),
            cols: a.ncols(),
            entries,
        }
    }
}

impl MatrixData {
    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.entries.len() != self.rows * self.cols {
            return Err(Error::shape("matrix payload has wrong entry count"));
        }
        let m = CMatrix::from_fn(self.rows, self.cols, |i, j| {
            let (re, im) = self.entries[i * self.cols + j];
            Complex64::new(re, im)
        });
        check_finite(&m)?;
        Ok(m)
    }
}
