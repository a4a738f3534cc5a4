//! Complex matrices, spectral primitives, Schatten norms, seeded random
//! ensembles, and the plain-text matrix exchange format.

mod eig;
mod exchange;
mod matrix;
mod norms;
mod random;
mod seed;

pub use eig::{
    clamped_gram_spectrum, hermitian_eigen, psd_power, schatten_norm_gradient, singular_values,
};
pub use exchange::{
    read_matrices, read_matrix, read_matrix_file, read_matrices_file, write_matrices,
    write_matrix, write_matrix_file,
};
pub use matrix::{
    frobenius_norm, hermitian_defect, hermitian_part, is_finite, max_abs_entry, CMatrix, Density,
    MatrixData, MatrixFamily, MatrixTuple,
};
pub(crate) use matrix::{check_finite, check_hermitian};
pub use norms::{
    column_square_norm, normalized_schatten_norm, operator_norm, row_square_norm, schatten_norm,
    stack_columns, stack_rows, trace_norm,
};
pub use random::{random_density, random_hermitian, random_matrix, random_psd, random_signs, random_tuple, Ensemble};
pub use seed::Seed;

/// Relative threshold below which eigenvalues of A*A are treated as exact
/// zeros when extracting singular values. Values under
/// `GRAM_CLAMP_REL * max_eigenvalue` are excluded from norm sums entirely so
/// that quasi-norm exponents (p < 1) do not amplify rounding noise.
pub const GRAM_CLAMP_REL: f64 = 1e-12;

/// Relative tolerance for Hermitian-symmetry checks.
pub const HERMITIAN_TOL: f64 = 1e-10;
