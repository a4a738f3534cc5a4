//! Symbols built from a positive sequence: entry (i, j) compares lambda_i
//! and lambda_j against their sum. The max and min variants are uniformly
//! bounded multipliers on every Schatten class (by 3/2 and 1/2); the
//! one-sided variants degrade as the exponent approaches 1.

use num_complex::Complex64;

use crate::decomp::SolverConfig;
use crate::error::{Error, Result};
use crate::matcore::CMatrix;
use crate::schur::multiplier::multiplier_norm;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatioVariant {
    /// max(l_i, l_j) / (l_i + l_j)
    MaxOverSum,
    /// min(l_i, l_j) / (l_i + l_j)
    MinOverSum,
    /// l_i / (l_i + l_j)
    LeftOverSum,
    /// l_j / (l_i + l_j)
    RightOverSum,
}

#[derive(Clone, Debug)]
pub struct SymbolReport {
    pub symbol: CMatrix,
    /// Entries where both weights vanish and 0/0 was set to 0.
    pub zero_pairs: usize,
}

pub fn spectral_ratio_symbol(lambda: &[f64], variant: RatioVariant) -> Result<SymbolReport> {
    if lambda.is_empty() {
        return Err(Error::invalid("weight sequence must be non-empty"));
    }
    if lambda.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::invalid("weights must be finite and >= 0"));
    }
    let n = lambda.len();
    let mut zero_pairs = 0usize;
    let symbol = CMatrix::from_fn(n, n, |i, j| {
        let (a, b) = (lambda[i], lambda[j]);
        let den = a + b;
        if den == 0.0 {
            zero_pairs += 1;
            return Complex64::new(0.0, 0.0);
        }
        let num = match variant {
            RatioVariant::MaxOverSum => a.max(b),
            RatioVariant::MinOverSum => a.min(b),
            RatioVariant::LeftOverSum => a,
            RatioVariant::RightOverSum => b,
        };
        Complex64::new(num / den, 0.0)
    });
    Ok(SymbolReport { symbol, zero_pairs })
}

/// Lower-bound estimate of the S_q -> S_q norm of the chosen symbol.
pub fn ratio_symbol_norm(
    lambda: &[f64],
    variant: RatioVariant,
    q: f64,
    cfg: &SolverConfig,
) -> Result<f64> {
    let rep = spectral_ratio_symbol(lambda, variant)?;
    multiplier_norm(&rep.symbol, q, q, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::Seed;
    use approx::assert_relative_eq;
    use rand::Rng;

    #[test]
    fn two_point_max_symbol() {
        let rep = spectral_ratio_symbol(&[1.0, 2.0], RatioVariant::MaxOverSum).unwrap();
        assert_relative_eq!(rep.symbol[(0, 0)].re, 0.5, epsilon = 1e-15);
        assert_relative_eq!(rep.symbol[(0, 1)].re, 2.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(rep.symbol[(1, 0)].re, 2.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(rep.symbol[(1, 1)].re, 0.5, epsilon = 1e-15);
        assert_eq!(rep.zero_pairs, 0);
    }

    #[test]
    fn constant_weights_give_half() {
        let rep = spectral_ratio_symbol(&[3.0; 4], RatioVariant::MaxOverSum).unwrap();
        for v in rep.symbol.iter() {
            assert_relative_eq!(v.re, 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn zero_pair_convention() {
        let rep = spectral_ratio_symbol(&[0.0, 1.0], RatioVariant::MinOverSum).unwrap();
        assert_eq!(rep.zero_pairs, 1);
        assert_eq!(rep.symbol[(0, 0)].re, 0.0);
        assert_relative_eq!(rep.symbol[(0, 1)].re, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn min_symbol_two_norm_is_half() {
        // Diagonal entries are exactly 1/2 and off-diagonal ones smaller,
        // so the 2 -> 2 norm (entry sup) is 1/2 for any weights.
        let mut rng = Seed(77).rng();
        let lambda: Vec<f64> = (0..5).map(|_| 0.1 + rng.gen::<f64>()).collect();
        let cfg = SolverConfig::fast(Seed(3));
        let v = ratio_symbol_norm(&lambda, RatioVariant::MinOverSum, 2.0, &cfg).unwrap();
        assert_relative_eq!(v, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn left_right_sum_to_ones() {
        let lambda = [0.5, 1.5, 2.5];
        let l = spectral_ratio_symbol(&lambda, RatioVariant::LeftOverSum).unwrap();
        let r = spectral_ratio_symbol(&lambda, RatioVariant::RightOverSum).unwrap();
        let s = &l.symbol + &r.symbol;
        for v in s.iter() {
            assert_relative_eq!(v.re, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn rejects_negative_weights() {
        assert!(spectral_ratio_symbol(&[1.0, -0.5], RatioVariant::MaxOverSum).is_err());
    }
}
