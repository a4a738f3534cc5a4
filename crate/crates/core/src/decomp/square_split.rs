//! Square-function decomposition norms for matrix tuples.
//!
//! A tuple (x_k) splits as x_k = a_k + b_k; the objective is the Schatten
//! q-norm of the column square function of (a_k) plus that of the row
//! square function of (b_k). Defined here for q >= 1 only (the infimum is
//! then attained and the objective convex); q < 1 is rejected.
//!
//! Two companions: a self-adjoint variant that perturbs a Hermitian tuple
//! by skew parts (alpha_k = x_k + i s_k with s_k Hermitian) and measures
//! the column side alone, and a diagonal variant that replaces the square
//! functions by their diagonals.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matcore::{
    column_square_norm, hermitian_defect, hermitian_eigen, max_abs_entry, row_square_norm,
    CMatrix, MatrixTuple, HERMITIAN_TOL,
};

use super::optimize::{pack_mats, solve_multi, unpack_mats, SolverConfig, SplitObjective};

/// Witness for the tuple decomposition norm.
#[derive(Clone, Debug)]
pub struct TupleSplit {
    pub value: f64,
    pub part_a: MatrixTuple,
    pub part_b: MatrixTuple,
    pub converged: bool,
    pub restarts_used: usize,
    pub gap_estimate: f64,
}

/// Witness for the self-adjoint variant: alpha_k = x_k + i s_k.
#[derive(Clone, Debug)]
pub struct HermitianWitness {
    pub value: f64,
    pub alphas: MatrixTuple,
    pub converged: bool,
    pub restarts_used: usize,
    pub gap_estimate: f64,
}

fn check_q(q: f64) -> Result<()> {
    if q.is_nan() || !q.is_finite() {
        return Err(Error::invalid("finite exponent q required"));
    }
    if q < 1.0 {
        return Err(Error::invalid(
            "decomposition norm requires q >= 1; the infimum degenerates below that",
        ));
    }
    Ok(())
}

/// Smoothed Schatten q-norm of a PSD Gram matrix given its eigenvalues,
/// plus the weight matrix used by the gradient. Eigenvalues clamp at zero
/// before smoothing.
struct GramTerm {
    /// (sum (mu + eps^2)^{q/2})^{1/q}
    norm: f64,
    /// U diag((mu + eps^2)^{q/2 - 1}) U^* scaled by norm^{1 - q}... kept
    /// as the full multiplier so grad = mult-applied matrix.
    weight: CMatrix,
}

fn gram_term(gram: &CMatrix, q: f64, eps: f64) -> Result<GramTerm> {
    let (mu, u) = hermitian_eigen(gram)?;
    let e2 = eps * eps;
    let top = mu.iter().fold(0.0f64, |a, &b| a.max(b.max(0.0)));
    let mut w = 0.0;
    let mut dvals = Vec::with_capacity(mu.len());
    for &m in &mu {
        let v = m.max(0.0) + e2;
        if v > 0.0 {
            w += v.powf(q / 2.0);
            // Exclude numerically-zero directions at eps = 0 (kink).
            if eps == 0.0 && m.max(0.0) <= 1e-14 * top.max(1e-300) {
                dvals.push(0.0);
            } else {
                dvals.push(v.powf(q / 2.0 - 1.0));
            }
        } else {
            dvals.push(0.0);
        }
    }
    let norm = w.powf(1.0 / q);
    let scale = if w > 0.0 { w.powf(1.0 / q - 1.0) } else { 0.0 };
    let d = CMatrix::from_fn(mu.len(), mu.len(), |i, j| {
        if i == j {
            Complex64::new(scale * dvals[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let weight = &u * d * u.adjoint();
    Ok(GramTerm { norm, weight })
}

struct SquareSplit<'a> {
    xs: &'a MatrixTuple,
    q: f64,
    rows: usize,
    cols: usize,
}

impl SquareSplit<'_> {
    fn parts(&self, x: &[f64]) -> (Vec<CMatrix>, Vec<CMatrix>) {
        let a = unpack_mats(x, self.xs.len(), self.rows, self.cols);
        let b: Vec<CMatrix> = a
            .iter()
            .zip(self.xs.iter())
            .map(|(ak, xk)| xk - ak)
            .collect();
        (a, b)
    }

    fn grams(&self, a: &[CMatrix], b: &[CMatrix]) -> (CMatrix, CMatrix) {
        let mut ga = CMatrix::zeros(self.cols, self.cols);
        let mut gb = CMatrix::zeros(self.rows, self.rows);
        for (ak, bk) in a.iter().zip(b.iter()) {
            ga += ak.adjoint() * ak;
            gb += bk * bk.adjoint();
        }
        (ga, gb)
    }
}

impl SplitObjective for SquareSplit<'_> {
    fn dim(&self) -> usize {
        2 * self.xs.len() * self.rows * self.cols
    }

    fn value(&self, x: &[f64], eps: f64) -> f64 {
        let (a, b) = self.parts(x);
        let (ga, gb) = self.grams(&a, &b);
        let ta = gram_term(&ga, self.q, eps).expect("gram is Hermitian");
        let tb = gram_term(&gb, self.q, eps).expect("gram is Hermitian");
        ta.norm + tb.norm
    }

    fn grad(&self, x: &[f64], eps: f64, g: &mut [f64]) {
        let (a, b) = self.parts(x);
        let (ga, gb) = self.grams(&a, &b);
        let ta = gram_term(&ga, self.q, eps).expect("gram is Hermitian");
        let tb = gram_term(&gb, self.q, eps).expect("gram is Hermitian");
        let per = self.rows * self.cols;
        for (k, (ak, bk)) in a.iter().zip(b.iter()).enumerate() {
            let gk = ak * &ta.weight - &tb.weight * bk;
            let base = 2 * k * per;
            for (i, z) in gk.iter().enumerate() {
                g[base + 2 * i] = z.re;
                g[base + 2 * i + 1] = z.im;
            }
        }
    }

    fn exact(&self, x: &[f64]) -> f64 {
        let (a, b) = self.parts(x);
        let at = MatrixTuple::new(a).expect("same shapes");
        let bt = MatrixTuple::new(b).expect("same shapes");
        column_square_norm(&at, self.q).expect("valid q") + row_square_norm(&bt, self.q).expect("valid q")
    }
}

fn tuple_scale(xs: &MatrixTuple) -> f64 {
    xs.iter().map(max_abs_entry).fold(0.0, f64::max)
}

fn zero_tuple_like(xs: &MatrixTuple) -> MatrixTuple {
    let (n, m) = xs.shape().expect("non-empty");
    MatrixTuple::new(vec![CMatrix::zeros(n, m); xs.len()]).expect("same shapes")
}

fn tuple_starts(unit: &[CMatrix], cfg: &SolverConfig) -> Vec<Vec<f64>> {
    let total = cfg.restarts.max(3);
    let (n, m) = unit[0].shape();
    let mut starts = Vec::with_capacity(total);
    starts.push(pack_mats(
        &unit.iter().map(|x| x.scale(0.5)).collect::<Vec<_>>(),
    ));
    starts.push(pack_mats(&vec![CMatrix::zeros(n, m); unit.len()]));
    starts.push(pack_mats(unit));
    for r in 3..total {
        let mut rng = cfg.seed.split(2000 + r as u64).rng();
        let mats: Vec<CMatrix> = unit
            .iter()
            .map(|x| {
                let t: f64 = rng.gen();
                CMatrix::from_fn(n, m, |i, j| {
                    let noise = Complex64::new(
                        0.05 * rng.sample::<f64, _>(StandardNormal),
                        0.05 * rng.sample::<f64, _>(StandardNormal),
                    );
                    x[(i, j)] * t + noise
                })
            })
            .collect();
        starts.push(pack_mats(&mats));
    }
    starts
}

/// Tuple decomposition norm with witness, q >= 1.
pub fn decomposition_norm(xs: &MatrixTuple, q: f64, cfg: &SolverConfig) -> Result<TupleSplit> {
    check_q(q)?;
    cfg.validate()?;
    if xs.is_empty() {
        return Err(Error::invalid("tuple must contain at least one matrix"));
    }
    for x in xs.iter() {
        crate::matcore::check_finite(x)?;
    }
    let (rows, cols) = xs.shape().expect("non-empty");
    let scale = tuple_scale(xs);
    if scale == 0.0 {
        return Ok(TupleSplit {
            value: 0.0,
            part_a: zero_tuple_like(xs),
            part_b: zero_tuple_like(xs),
            converged: true,
            restarts_used: 0,
            gap_estimate: 0.0,
        });
    }
    let unit_mats: Vec<CMatrix> = xs.iter().map(|x| x.scale(1.0 / scale)).collect();
    let unit = MatrixTuple::new(unit_mats.clone()).expect("same shapes");
    let obj = SquareSplit {
        xs: &unit,
        q,
        rows,
        cols,
    };
    let starts = tuple_starts(&unit_mats, cfg);
    let report = solve_multi(&obj, starts, cfg, true, super::optimize::l2);
    let a: Vec<CMatrix> = unpack_mats(&report.x, xs.len(), rows, cols)
        .into_iter()
        .map(|m| m.scale(scale))
        .collect();
    let b: Vec<CMatrix> = a.iter().zip(xs.iter()).map(|(ak, xk)| xk - ak).collect();
    let part_a = MatrixTuple::new(a)?;
    let part_b = MatrixTuple::new(b)?;
    let value = column_square_norm(&part_a, q)? + row_square_norm(&part_b, q)?;
    Ok(TupleSplit {
        value,
        part_a,
        part_b,
        converged: report.converged,
        restarts_used: report.restarts_used,
        gap_estimate: report.gap * scale,
    })
}

struct HermitianSquare<'a> {
    xs: &'a MatrixTuple,
    q: f64,
    n: usize,
}

impl HermitianSquare<'_> {
    fn alphas(&self, x: &[f64]) -> Vec<CMatrix> {
        let s = unpack_mats(x, self.xs.len(), self.n, self.n);
        s.iter()
            .zip(self.xs.iter())
            .map(|(sk, xk)| xk + sk.map(|z| z * Complex64::new(0.0, 1.0)))
            .collect()
    }

    fn gram(&self, alphas: &[CMatrix]) -> CMatrix {
        let mut g = CMatrix::zeros(self.n, self.n);
        for a in alphas {
            g += a.adjoint() * a;
        }
        g
    }
}

impl SplitObjective for HermitianSquare<'_> {
    fn dim(&self) -> usize {
        2 * self.xs.len() * self.n * self.n
    }

    fn value(&self, x: &[f64], eps: f64) -> f64 {
        let alphas = self.alphas(x);
        gram_term(&self.gram(&alphas), self.q, eps)
            .expect("gram is Hermitian")
            .norm
    }

    fn grad(&self, x: &[f64], eps: f64, g: &mut [f64]) {
        let alphas = self.alphas(x);
        let t = gram_term(&self.gram(&alphas), self.q, eps).expect("gram is Hermitian");
        let per = self.n * self.n;
        for (k, ak) in alphas.iter().enumerate() {
            // d alpha / d s = i, and the s-gradient must stay Hermitian.
            let ga = ak * &t.weight;
            let gs = ga.map(|z| z * Complex64::new(0.0, -1.0));
            let herm = (&gs + gs.adjoint()).scale(0.5);
            let base = 2 * k * per;
            for (i, z) in herm.iter().enumerate() {
                g[base + 2 * i] = z.re;
                g[base + 2 * i + 1] = z.im;
            }
        }
    }

    fn project(&self, x: &mut [f64]) {
        let s = unpack_mats(x, self.xs.len(), self.n, self.n);
        let proj: Vec<CMatrix> = s
            .into_iter()
            .map(|m| {
                let adj = m.adjoint();
                (&m + adj).scale(0.5)
            })
            .collect();
        x.copy_from_slice(&pack_mats(&proj));
    }

    fn exact(&self, x: &[f64]) -> f64 {
        let alphas = MatrixTuple::new(self.alphas(x)).expect("same shapes");
        column_square_norm(&alphas, self.q).expect("valid q")
    }
}

/// Self-adjoint decomposition norm: perturb each Hermitian x_k by i s_k
/// (s_k Hermitian) and minimize the column square-function q-norm of the
/// perturbed tuple. Re(alpha_k) = x_k by construction.
pub fn hermitian_decomposition_norm(
    xs: &MatrixTuple,
    q: f64,
    cfg: &SolverConfig,
) -> Result<HermitianWitness> {
    check_q(q)?;
    cfg.validate()?;
    if xs.is_empty() {
        return Err(Error::invalid("tuple must contain at least one matrix"));
    }
    let (rows, cols) = xs.shape().expect("non-empty");
    if rows != cols {
        return Err(Error::shape("self-adjoint variant requires square matrices"));
    }
    for x in xs.iter() {
        crate::matcore::check_finite(x)?;
        let d = hermitian_defect(x);
        if d > HERMITIAN_TOL * max_abs_entry(x).max(1.0) {
            return Err(Error::NotHermitian(d));
        }
    }
    let scale = tuple_scale(xs);
    if scale == 0.0 {
        return Ok(HermitianWitness {
            value: 0.0,
            alphas: zero_tuple_like(xs),
            converged: true,
            restarts_used: 0,
            gap_estimate: 0.0,
        });
    }
    let unit_mats: Vec<CMatrix> = xs.iter().map(|x| x.scale(1.0 / scale)).collect();
    let unit = MatrixTuple::new(unit_mats).expect("same shapes");
    let obj = HermitianSquare {
        xs: &unit,
        q,
        n: rows,
    };
    let total = cfg.restarts.max(2);
    let mut starts = Vec::with_capacity(total);
    starts.push(vec![0.0; obj.dim()]);
    for r in 1..total {
        let mut rng = cfg.seed.split(3000 + r as u64).rng();
        let mats: Vec<CMatrix> = (0..unit.len())
            .map(|_| {
                let g = CMatrix::from_fn(rows, rows, |_, _| {
                    Complex64::new(
                        0.3 * rng.sample::<f64, _>(StandardNormal),
                        0.3 * rng.sample::<f64, _>(StandardNormal),
                    )
                });
                (&g + g.adjoint()).scale(0.5)
            })
            .collect();
        starts.push(pack_mats(&mats));
    }
    let report = solve_multi(&obj, starts, cfg, true, super::optimize::l2);
    let alphas_unit = obj.alphas(&report.x);
    let alphas =
        MatrixTuple::new(alphas_unit.into_iter().map(|a| a.scale(scale)).collect::<Vec<_>>())?;
    let value = column_square_norm(&alphas, q)?;
    Ok(HermitianWitness {
        value,
        alphas,
        converged: report.converged,
        restarts_used: report.restarts_used,
        gap_estimate: report.gap * scale,
    })
}

struct DiagonalSquare<'a> {
    xs: &'a MatrixTuple,
    q: f64,
    rows: usize,
    cols: usize,
}

impl DiagonalSquare<'_> {
    /// Column diagonal d_j = sum_k |col_j(a_k)|^2 and row diagonal
    /// e_i = sum_k |row_i(b_k)|^2.
    fn diags(&self, a: &[CMatrix], b: &[CMatrix]) -> (Vec<f64>, Vec<f64>) {
        let mut d = vec![0.0; self.cols];
        let mut e = vec![0.0; self.rows];
        for (ak, bk) in a.iter().zip(b.iter()) {
            for j in 0..self.cols {
                for i in 0..self.rows {
                    d[j] += ak[(i, j)].norm_sqr();
                    e[i] += bk[(i, j)].norm_sqr();
                }
            }
        }
        (d, e)
    }
}

fn diag_q_norm(vals: &[f64], q: f64, eps: f64) -> f64 {
    let e2 = eps * eps;
    let w: f64 = vals
        .iter()
        .map(|&v| {
            let t = v + e2;
            if t > 0.0 {
                t.powf(q / 2.0)
            } else {
                0.0
            }
        })
        .sum();
    w.powf(1.0 / q)
}

impl SplitObjective for DiagonalSquare<'_> {
    fn dim(&self) -> usize {
        2 * self.xs.len() * self.rows * self.cols
    }

    fn value(&self, x: &[f64], eps: f64) -> f64 {
        let a = unpack_mats(x, self.xs.len(), self.rows, self.cols);
        let b: Vec<CMatrix> = a
            .iter()
            .zip(self.xs.iter())
            .map(|(ak, xk)| xk - ak)
            .collect();
        let (d, e) = self.diags(&a, &b);
        diag_q_norm(&d, self.q, eps) + diag_q_norm(&e, self.q, eps)
    }

    fn grad(&self, x: &[f64], eps: f64, g: &mut [f64]) {
        let a = unpack_mats(x, self.xs.len(), self.rows, self.cols);
        let b: Vec<CMatrix> = a
            .iter()
            .zip(self.xs.iter())
            .map(|(ak, xk)| xk - ak)
            .collect();
        let (d, e) = self.diags(&a, &b);
        let e2 = eps * eps;
        let weight = |vals: &[f64]| -> (f64, Vec<f64>) {
            let w: f64 = vals.iter().map(|&v| (v + e2).powf(self.q / 2.0)).sum();
            let scale = if w > 0.0 { w.powf(1.0 / self.q - 1.0) } else { 0.0 };
            let ws = vals
                .iter()
                .map(|&v| {
                    let t = v + e2;
                    if t <= 0.0 || (eps == 0.0 && v == 0.0) {
                        0.0
                    } else {
                        scale * t.powf(self.q / 2.0 - 1.0)
                    }
                })
                .collect();
            (w, ws)
        };
        let (_, wd) = weight(&d);
        let (_, we) = weight(&e);
        let per = self.rows * self.cols;
        for k in 0..a.len() {
            let base = 2 * k * per;
            for j in 0..self.cols {
                for i in 0..self.rows {
                    let idx = base + 2 * (j * self.rows + i);
                    let av = a[k][(i, j)];
                    let bv = b[k][(i, j)];
                    g[idx] = wd[j] * av.re - we[i] * bv.re;
                    g[idx + 1] = wd[j] * av.im - we[i] * bv.im;
                }
            }
        }
    }

    fn exact(&self, x: &[f64]) -> f64 {
        self.value(x, 0.0)
    }
}

/// Diagonal (conditioned) decomposition norm: square functions replaced by
/// their diagonal parts. Coincides with the entrywise split norm on tuples
/// of the form (lambda_ij e_ij) once indices are disjoint per member.
pub fn diagonal_decomposition_norm(
    xs: &MatrixTuple,
    q: f64,
    cfg: &SolverConfig,
) -> Result<TupleSplit> {
    check_q(q)?;
    cfg.validate()?;
    if xs.is_empty() {
        return Err(Error::invalid("tuple must contain at least one matrix"));
    }
    for x in xs.iter() {
        crate::matcore::check_finite(x)?;
    }
    let (rows, cols) = xs.shape().expect("non-empty");
    let scale = tuple_scale(xs);
    if scale == 0.0 {
        return Ok(TupleSplit {
            value: 0.0,
            part_a: zero_tuple_like(xs),
            part_b: zero_tuple_like(xs),
            converged: true,
            restarts_used: 0,
            gap_estimate: 0.0,
        });
    }
    let unit_mats: Vec<CMatrix> = xs.iter().map(|x| x.scale(1.0 / scale)).collect();
    let unit = MatrixTuple::new(unit_mats.clone()).expect("same shapes");
    let obj = DiagonalSquare {
        xs: &unit,
        q,
        rows,
        cols,
    };
    let starts = tuple_starts(&unit_mats, cfg);
    let report = solve_multi(&obj, starts, cfg, true, super::optimize::l2);
    let a: Vec<CMatrix> = unpack_mats(&report.x, xs.len(), rows, cols)
        .into_iter()
        .map(|m| m.scale(scale))
        .collect();
    let b: Vec<CMatrix> = a.iter().zip(xs.iter()).map(|(ak, xk)| xk - ak).collect();
    let part_a = MatrixTuple::new(a)?;
    let part_b = MatrixTuple::new(b)?;
    let value = report.value * scale;
    Ok(TupleSplit {
        value,
        part_a,
        part_b,
        converged: report.converged,
        restarts_used: report.restarts_used,
        gap_estimate: report.gap * scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{random_hermitian, random_tuple, Ensemble, Seed};
    use approx::assert_relative_eq;

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn rejects_q_below_one() {
        let xs = MatrixTuple::single(CMatrix::identity(2, 2)).unwrap();
        assert!(decomposition_norm(&xs, 0.5, &cfg()).is_err());
        assert!(hermitian_decomposition_norm(&xs, 0.99, &cfg()).is_err());
        assert!(diagonal_decomposition_norm(&xs, 0.3, &cfg()).is_err());
    }

    #[test]
    fn basis_row_tuple_q_one() {
        // x_j = e_{1j}, j = 1..4: all-column split gives 4^{1/2} = 2 via the
        // column square function; the row side alone gives 4^{1/2} too, and
        // the optimum is exactly 2.
        let mut mats = Vec::new();
        for j in 0..4 {
            let mut m = CMatrix::zeros(4, 4);
            m[(0, j)] = Complex64::new(1.0, 0.0);
            mats.push(m);
        }
        let xs = MatrixTuple::new(mats).unwrap();
        let s = decomposition_norm(&xs, 1.0, &cfg()).unwrap();
        assert_relative_eq!(s.value, 2.0, max_relative = 1e-6);
    }

    #[test]
    fn witness_adds_back() {
        let xs = random_tuple(Ensemble::ComplexGaussian, 3, 2, 3, Seed(5)).unwrap();
        let s = decomposition_norm(&xs, 1.5, &cfg()).unwrap();
        for k in 0..xs.len() {
            let resid = (&xs[k] - (&s.part_a[k] + &s.part_b[k]))
                .iter()
                .map(|z| z.norm())
                .fold(0.0f64, f64::max);
            assert!(resid < 1e-12);
        }
        let recomputed = column_square_norm(&s.part_a, 1.5).unwrap()
            + row_square_norm(&s.part_b, 1.5).unwrap();
        assert_relative_eq!(s.value, recomputed, max_relative = 1e-12);
    }

    #[test]
    fn hermitian_variant_keeps_real_part() {
        let mats: Vec<CMatrix> = (0..2)
            .map(|k| random_hermitian(Ensemble::ComplexGaussian, 3, Seed(40 + k)))
            .collect();
        let xs = MatrixTuple::new(mats).unwrap();
        let w = hermitian_decomposition_norm(&xs, 2.0, &cfg()).unwrap();
        for k in 0..2 {
            let re_part = (&w.alphas[k] + w.alphas[k].adjoint()).scale(0.5);
            let resid = (&re_part - &xs[k])
                .iter()
                .map(|z| z.norm())
                .fold(0.0f64, f64::max);
            assert!(resid < 1e-10, "resid {resid}");
        }
    }

    #[test]
    fn triple_vs_hermitian_at_q_two() {
        // At q = 2 both variants have closed behavior on Hermitian tuples;
        // the self-adjoint value matches the plain decomposition value.
        let mats: Vec<CMatrix> = (0..2)
            .map(|k| random_hermitian(Ensemble::ComplexGaussian, 3, Seed(60 + k)))
            .collect();
        let xs = MatrixTuple::new(mats).unwrap();
        let plain = decomposition_norm(&xs, 2.0, &cfg()).unwrap();
        let herm = hermitian_decomposition_norm(&xs, 2.0, &cfg()).unwrap();
        assert_relative_eq!(plain.value, herm.value, max_relative = 1e-6);
    }

    #[test]
    fn square_split_gradient_check() {
        let xs = random_tuple(Ensemble::ComplexGaussian, 2, 3, 3, Seed(9)).unwrap();
        let obj = SquareSplit {
            xs: &xs,
            q: 1.4,
            rows: 3,
            cols: 3,
        };
        let x0: Vec<f64> = pack_mats(&xs.iter().map(|m| m.scale(0.37)).collect::<Vec<_>>());
        let mut g = vec![0.0; x0.len()];
        let eps = 5e-2;
        obj.grad(&x0, eps, &mut g);
        let h = 1e-6;
        for t in [0usize, 7, 13, 25] {
            let mut xp = x0.clone();
            xp[t] += h;
            let mut xm = x0.clone();
            xm[t] -= h;
            let fd = (obj.value(&xp, eps) - obj.value(&xm, eps)) / (2.0 * h);
            assert_relative_eq!(g[t], fd, epsilon = 1e-5, max_relative = 1e-4);
        }
    }

    #[test]
    fn diagonal_gradient_check() {
        let xs = random_tuple(Ensemble::ComplexGaussian, 2, 3, 2, Seed(13)).unwrap();
        let obj = DiagonalSquare {
            xs: &xs,
            q: 1.2,
            rows: 3,
            cols: 2,
        };
        let x0: Vec<f64> = pack_mats(&xs.iter().map(|m| m.scale(0.61)).collect::<Vec<_>>());
        let mut g = vec![0.0; x0.len()];
        let eps = 3e-2;
        obj.grad(&x0, eps, &mut g);
        let h = 1e-6;
        for t in [1usize, 4, 9, 16] {
            let mut xp = x0.clone();
            xp[t] += h;
            let mut xm = x0.clone();
            xm[t] -= h;
            let fd = (obj.value(&xp, eps) - obj.value(&xm, eps)) / (2.0 * h);
            assert_relative_eq!(g[t], fd, epsilon = 1e-5, max_relative = 1e-4);
        }
    }

    #[test]
    fn hermitian_gradient_check() {
        let mats: Vec<CMatrix> = (0..2)
            .map(|k| random_hermitian(Ensemble::ComplexGaussian, 2, Seed(70 + k)))
            .collect();
        let xs = MatrixTuple::new(mats).unwrap();
        let obj = HermitianSquare { xs: &xs, q: 1.7, n: 2 };
        // Start from a Hermitian s (the feasible subspace).
        let s0: Vec<CMatrix> = (0..2).map(|k| random_hermitian(Ensemble::ComplexGaussian, 2, Seed(80 + k)).scale(0.3)).collect();
        let x0 = pack_mats(&s0);
        let mut g = vec![0.0; x0.len()];
        let eps = 4e-2;
        obj.grad(&x0, eps, &mut g);
        // Finite differences along Hermitian directions only: perturb a
        // diagonal entry (real) and a symmetric off-diagonal pair.
        let h = 1e-6;
        let value_at = |s: &[CMatrix]| obj.value(&pack_mats(s), eps);
        {
            let mut sp = s0.clone();
            sp[0][(0, 0)] += Complex64::new(h, 0.0);
            let mut sm = s0.clone();
            sm[0][(0, 0)] -= Complex64::new(h, 0.0);
            let fd = (value_at(&sp) - value_at(&sm)) / (2.0 * h);
            // Packed index of matrix 0 entry (0,0) real part is 0.
            assert_relative_eq!(g[0], fd, epsilon = 1e-5, max_relative = 1e-4);
        }
        {
            // Hermitian direction e_{01} + e_{10}: derivative equals the sum
            // of the two real-part gradient entries.
            let mut sp = s0.clone();
            sp[0][(0, 1)] += Complex64::new(h, 0.0);
            sp[0][(1, 0)] += Complex64::new(h, 0.0);
            let mut sm = s0.clone();
            sm[0][(0, 1)] -= Complex64::new(h, 0.0);
            sm[0][(1, 0)] -= Complex64::new(h, 0.0);
            let fd = (value_at(&sp) - value_at(&sm)) / (2.0 * h);
            // Entry (0,1) is packed at column-major position 2, entry (1,0) at 1.
            let got = g[2 * 2] + g[2 * 1];
            assert_relative_eq!(got, fd, epsilon = 1e-5, max_relative = 1e-4);
        }
    }
}
