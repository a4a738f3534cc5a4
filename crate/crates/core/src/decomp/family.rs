//! Operations on doubly-indexed matrix families: entry pinning and the
//! paired square-function norms used to compare families against their
//! pinned diagonals.

use num_complex::Complex64;

use crate::error::Result;
use crate::matcore::{column_square_norm, row_square_norm, CMatrix, MatrixFamily, MatrixTuple};

/// Replaces each member x_ij by its (i, j) entry times e_ij.
pub fn pin_entries(fam: &MatrixFamily) -> MatrixFamily {
    let (gr, gc) = fam.grid();
    let n = fam.member_size();
    let mats: Vec<CMatrix> = (0..gr)
        .flat_map(|i| {
            (0..gc).map(move |j| {
                let mut m = CMatrix::zeros(n, n);
                m[(i, j)] = fam.member(i, j)[(i, j)];
                m
            })
        })
        .collect();
    MatrixFamily::new(gr, gc, mats).expect("same grid and sizes")
}

/// l_q norm of the pinned diagonal entries (x_ij)_{ij}.
pub fn pinned_entry_q_norm(fam: &MatrixFamily, q: f64) -> f64 {
    let (gr, gc) = fam.grid();
    let mut s = 0.0;
    for i in 0..gr {
        for j in 0..gc {
            let a = fam.member(i, j)[(i, j)].norm();
            if a > 0.0 {
                s += a.powf(q);
            }
        }
    }
    s.powf(1.0 / q)
}

/// Column and row square-function q-norms of the family viewed as one
/// tuple. Returns (column side, row side).
pub fn family_square_norms(fam: &MatrixFamily, q: f64) -> Result<(f64, f64)> {
    let tup = fam.to_tuple();
    Ok((column_square_norm(&tup, q)?, row_square_norm(&tup, q)?))
}

/// Family with x_jj = sum_k e_jk on the diagonal slots and zero elsewhere.
/// Its pinned version has unit diagonal entries while the family's own
/// square functions stay dimension-small: the source of the q < 1 gap.
pub fn row_ones_diagonal_family(n: usize) -> MatrixFamily {
    let mats: Vec<CMatrix> = (0..n)
        .flat_map(|i| {
            (0..n).map(move |j| {
                if i == j {
                    CMatrix::from_fn(n, n, |r, _| {
                        if r == j {
                            Complex64::new(1.0, 0.0)
                        } else {
                            Complex64::new(0.0, 0.0)
                        }
                    })
                } else {
                    CMatrix::zeros(n, n)
                }
            })
        })
        .collect();
    MatrixFamily::new(n, n, mats).expect("square grid")
}

/// Convenience for tests: the tuple of pinned members scaled by nothing,
/// i.e. (lambda_ij e_ij) built from a plain coefficient matrix.
pub fn elementary_tuple(lambda: &CMatrix) -> MatrixTuple {
    let (n, m) = lambda.shape();
    let mats: Vec<CMatrix> = (0..n)
        .flat_map(|i| {
            (0..m).map(move |j| {
                let mut e = CMatrix::zeros(n, m);
                e[(i, j)] = lambda[(i, j)];
                e
            })
        })
        .collect();
    MatrixTuple::new(mats).expect("same shapes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn pinned_family_keeps_diagonal_entry() {
        let fam = row_ones_diagonal_family(3);
        let pinned = pin_entries(&fam);
        for j in 0..3 {
            assert_relative_eq!(pinned.member(j, j)[(j, j)].re, 1.0);
            for (r, z) in pinned.member(j, j).iter().enumerate() {
                if r != j * 3 + j {
                    assert_eq!(z.norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn counterexample_scalings() {
        // Pinned l_q side is n^{1/q} = n^2 at q = 1/2. The column gram of
        // the family is n * (all-ones), whose square root has the single
        // singular value n, so the column square norm is exactly n.
        for n in [2usize, 4] {
            let fam = row_ones_diagonal_family(n);
            let q = 0.5;
            let lq = pinned_entry_q_norm(&fam, q);
            assert_relative_eq!(lq, (n as f64) * (n as f64), max_relative = 1e-12);
            let (col, _row) = family_square_norms(&fam, q).unwrap();
            assert_relative_eq!(col, n as f64, max_relative = 1e-9);
        }
    }
}
