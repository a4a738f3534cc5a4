//! Sign-average moments of coefficient matrices: the p-th moment of the
//! Schatten p-norm of sum_ij eps_ij lambda_ij e_ij over independent signs,
//! exhaustively or by seeded Monte Carlo.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matcore::{check_finite, schatten_norm, CMatrix, Seed};

/// Sign patterns only flip entries in the support, so the exhaustive cap
/// is on the number of nonzero entries.
pub const EXHAUSTIVE_SUPPORT_CAP: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignMode {
    /// All 2^support sign patterns.
    Exhaustive,
    /// Seeded sampling with a delta-method standard error.
    MonteCarlo { trials: u64 },
}

impl std::fmt::Display for SignMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SignMode::Exhaustive => write!(f, "exhaustive"),
            SignMode::MonteCarlo { trials } => write!(f, "mc{trials}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MomentReport {
    pub p: f64,
    pub mode: SignMode,
    /// (average of norm^p)^(1/p).
    pub moment: f64,
    /// Standard error of the moment; zero for exhaustive mode.
    pub stderr: f64,
    /// Largest norm seen over the patterns visited.
    pub sup_norm: f64,
    /// Number of sign-flippable entries.
    pub support: usize,
}

/// Nonzero entries in row-major order; these carry the signs.
pub fn sign_support(lambda: &CMatrix) -> Vec<(usize, usize)> {
    let (n, m) = lambda.shape();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..m {
            if lambda[(i, j)].norm() > 0.0 {
                out.push((i, j));
            }
        }
    }
    out
}

fn signed_matrix(lambda: &CMatrix, support: &[(usize, usize)], pattern: u64) -> CMatrix {
    let mut m = lambda.clone();
    for (b, &(i, j)) in support.iter().enumerate() {
        if pattern >> b & 1 == 1 {
            m[(i, j)] = -m[(i, j)];
        }
    }
    m
}

fn mc_matrix(lambda: &CMatrix, support: &[(usize, usize)], seed: Seed) -> CMatrix {
    use rand::Rng;
    let mut rng = seed.rng();
    let mut m = lambda.clone();
    for &(i, j) in support {
        if rng.gen::<bool>() {
            m[(i, j)] = -m[(i, j)];
        }
    }
    m
}

fn check_moment_p(p: f64) -> Result<()> {
    if p.is_nan() || p <= 0.0 {
        return Err(Error::invalid("moment exponent p must be positive"));
    }
    if !p.is_finite() {
        return Err(Error::invalid("finite moment exponent required"));
    }
    Ok(())
}

/// Average p-th moment of the Schatten p-norm over sign flips of lambda.
///
/// Exhaustive mode enumerates all 2^support patterns in fixed chunked
/// order (bitwise deterministic under any thread count). Monte Carlo
/// derives each trial's signs from `seed.split(trial)`, so results are
/// reproducible and worker-count independent.
pub fn sign_moment(lambda: &CMatrix, p: f64, mode: SignMode, seed: Seed) -> Result<MomentReport> {
    check_finite(lambda)?;
    check_moment_p(p)?;
    let support = sign_support(lambda);
    let s = support.len();
    if s == 0 {
        return Ok(MomentReport {
            p,
            mode,
            moment: 0.0,
            stderr: 0.0,
            sup_norm: 0.0,
            support: 0,
        });
    }
    match mode {
        SignMode::Exhaustive => {
            if s > EXHAUSTIVE_SUPPORT_CAP {
                return Err(Error::TooLarge(format!(
                    "support {s} exceeds the exhaustive cap {EXHAUSTIVE_SUPPORT_CAP}"
                )));
            }
            let patterns: u64 = 1 << s;
            let chunk: u64 = 1024;
            let chunks = patterns.div_ceil(chunk);
            let partials: Vec<(f64, f64)> = (0..chunks)
                .into_par_iter()
                .map(|ci| {
                    let lo = ci * chunk;
                    let hi = (lo + chunk).min(patterns);
                    let mut sum = 0.0;
                    let mut sup = 0.0f64;
                    for pat in lo..hi {
                        let norm = schatten_norm(&signed_matrix(lambda, &support, pat), p)
                            .expect("finite input");
                        sum += norm.powf(p);
                        sup = sup.max(norm);
                    }
                    (sum, sup)
                })
                .collect();
            let mut total = 0.0;
            let mut sup = 0.0f64;
            for (s, m) in partials {
                total += s;
                sup = sup.max(m);
            }
            Ok(MomentReport {
                p,
                mode,
                moment: (total / patterns as f64).powf(1.0 / p),
                stderr: 0.0,
                sup_norm: sup,
                support: s,
            })
        }
        SignMode::MonteCarlo { trials } => {
            if trials == 0 {
                return Err(Error::invalid("Monte Carlo needs at least one trial"));
            }
            let vals: Vec<f64> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let norm = schatten_norm(&mc_matrix(lambda, &support, seed.split(t)), p)
                        .expect("finite input");
                    norm.powf(p)
                })
                .collect();
            let n = trials as f64;
            let mean: f64 = vals.iter().sum::<f64>() / n;
            let var: f64 = if trials > 1 {
                vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
            } else {
                0.0
            };
            let stderr_mean = (var / n).sqrt();
            let moment = mean.powf(1.0 / p);
            // Delta method through x -> x^{1/p}.
            let stderr = if mean > 0.0 {
                stderr_mean * (1.0 / p) * mean.powf(1.0 / p - 1.0)
            } else {
                0.0
            };
            let sup = vals
                .iter()
                .map(|v| v.powf(1.0 / p))
                .fold(0.0f64, f64::max);
            Ok(MomentReport {
                p,
                mode,
                moment,
                stderr,
                sup_norm: sup,
                support: s,
            })
        }
    }
}

/// Largest Schatten p-norm over all sign patterns (exhaustive only).
pub fn sign_sup_norm(lambda: &CMatrix, p: f64, seed: Seed) -> Result<f64> {
    Ok(sign_moment(lambda, p, SignMode::Exhaustive, seed)?.sup_norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ones22() -> CMatrix {
        CMatrix::from_element(2, 2, Complex64::new(1.0, 0.0))
    }

    #[test]
    fn all_ones_two_by_two_trace_moment() {
        // Signs split into 8 patterns with singular values (sqrt2, sqrt2)
        // and 8 with (2, 0): average trace norm (2 sqrt2 + 2) / 2.
        let rep = sign_moment(&ones22(), 1.0, SignMode::Exhaustive, Seed(0)).unwrap();
        assert_relative_eq!(rep.moment, 1.0 + 2f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(rep.sup_norm, 2.0 * 2f64.sqrt(), epsilon = 1e-12);
        assert_eq!(rep.support, 4);
    }

    #[test]
    fn diagonal_moment_is_constant() {
        // Signs act diagonally: every pattern has the same singular values.
        let id = CMatrix::identity(2, 2);
        for p in [0.5, 1.0, 1.7] {
            let rep = sign_moment(&id, p, SignMode::Exhaustive, Seed(0)).unwrap();
            assert_relative_eq!(rep.moment, 2f64.powf(1.0 / p), epsilon = 1e-12);
            assert_relative_eq!(rep.sup_norm, rep.moment, epsilon = 1e-12);
        }
    }

    #[test]
    fn monte_carlo_matches_exhaustive_within_three_sigma() {
        let lam = crate::matcore::random_matrix(
            crate::matcore::Ensemble::ComplexGaussian,
            3,
            3,
            Seed(17),
        );
        let exact = sign_moment(&lam, 1.0, SignMode::Exhaustive, Seed(0)).unwrap();
        let mc = sign_moment(&lam, 1.0, SignMode::MonteCarlo { trials: 4000 }, Seed(5)).unwrap();
        assert!(mc.stderr > 0.0);
        assert!(
            (mc.moment - exact.moment).abs() <= 3.0 * mc.stderr + 1e-9,
            "mc {} exact {} stderr {}",
            mc.moment,
            exact.moment,
            mc.stderr
        );
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let lam = ones22();
        let a = sign_moment(&lam, 1.3, SignMode::MonteCarlo { trials: 500 }, Seed(9)).unwrap();
        let b = sign_moment(&lam, 1.3, SignMode::MonteCarlo { trials: 500 }, Seed(9)).unwrap();
        assert_eq!(a.moment.to_bits(), b.moment.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
    }

    #[test]
    fn support_cap_enforced() {
        let big = CMatrix::from_element(5, 5, Complex64::new(1.0, 0.0));
        assert!(matches!(
            sign_moment(&big, 1.0, SignMode::Exhaustive, Seed(0)),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn zero_matrix_moment() {
        let z = CMatrix::zeros(3, 3);
        let rep = sign_moment(&z, 0.8, SignMode::Exhaustive, Seed(0)).unwrap();
        assert_eq!(rep.moment, 0.0);
        assert_eq!(rep.support, 0);
    }
}
