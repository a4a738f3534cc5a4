//! Support-set sign constants: how much a unimodular coefficient pattern
//! can inflate the Schatten norm of a matrix supported on a fixed index
//! set. Lower bounds come from alternating maximization: best coefficient
//! pattern for the current matrix, then norm-ratio ascent on the matrix.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::decomp::SolverConfig;
use crate::error::{Error, Result};
use crate::matcore::{schatten_norm, schatten_norm_gradient, CMatrix, Seed};

/// Sorted, deduplicated set of matrix positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSet {
    rows: usize,
    cols: usize,
    pairs: Vec<(usize, usize)>,
}

impl IndexSet {
    pub fn new(rows: usize, cols: usize, mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("index set needs positive dimensions"));
        }
        for &(i, j) in &pairs {
            if i >= rows || j >= cols {
                return Err(Error::invalid(format!(
                    "pair ({i}, {j}) outside a {rows} x {cols} grid"
                )));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        Ok(IndexSet { rows, cols, pairs })
    }

    pub fn full(rows: usize, cols: usize) -> Result<Self> {
        let pairs = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .collect();
        IndexSet::new(rows, cols, pairs)
    }

    pub fn diagonal(n: usize) -> Result<Self> {
        IndexSet::new(n, n, (0..n).map(|i| (i, i)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.pairs.binary_search(&(i, j)).is_ok()
    }
}

/// Coefficient search strategy for the inner maximization.
#[derive(Clone, Copy, Debug)]
pub enum CoeffMode {
    /// All 2^|E| real sign patterns (|E| capped).
    ExhaustiveSigns,
    /// Seeded random unimodular phases.
    RandomUnimodular { trials: usize },
}

pub const EXHAUSTIVE_SET_CAP: usize = 20;

#[derive(Clone, Debug)]
pub struct SigmaReport {
    /// Best ratio found: a lower bound on the set constant.
    pub value: f64,
    /// Coefficients aligned with `set.pairs()` order.
    pub coeffs: Vec<Complex64>,
    /// The matrix (unit p-norm) achieving the ratio.
    pub lambda: CMatrix,
    pub restarts_used: usize,
}

fn embed(set: &IndexSet, entries: &[Complex64]) -> CMatrix {
    let mut m = CMatrix::zeros(set.rows, set.cols);
    for (&(i, j), &z) in set.pairs.iter().zip(entries) {
        m[(i, j)] = z;
    }
    m
}

fn apply_coeffs(lambda: &CMatrix, set: &IndexSet, coeffs: &[Complex64]) -> CMatrix {
    let mut m = lambda.clone();
    for (&(i, j), &c) in set.pairs.iter().zip(coeffs) {
        m[(i, j)] *= c;
    }
    m
}

/// Best unimodular pattern for a fixed matrix; returns (coeffs, norm).
fn best_coeffs(
    lambda: &CMatrix,
    set: &IndexSet,
    p: f64,
    mode: CoeffMode,
    seed: Seed,
    incumbent: &[Complex64],
) -> Result<(Vec<Complex64>, f64)> {
    let e = set.len();
    let mut best = incumbent.to_vec();
    let mut best_norm = schatten_norm(&apply_coeffs(lambda, set, incumbent), p)?;
    match mode {
        CoeffMode::ExhaustiveSigns => {
            for pat in 0u64..(1 << e) {
                let coeffs: Vec<Complex64> = (0..e)
                    .map(|b| {
                        if pat >> b & 1 == 1 {
                            Complex64::new(-1.0, 0.0)
                        } else {
                            Complex64::new(1.0, 0.0)
                        }
                    })
                    .collect();
                let norm = schatten_norm(&apply_coeffs(lambda, set, &coeffs), p)?;
                if norm > best_norm {
                    best_norm = norm;
                    best = coeffs;
                }
            }
        }
        CoeffMode::RandomUnimodular { trials } => {
            let mut rng = seed.rng();
            for _ in 0..trials {
                let coeffs: Vec<Complex64> = (0..e)
                    .map(|_| {
                        let th: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
                        Complex64::new(th.cos(), th.sin())
                    })
                    .collect();
                let norm = schatten_norm(&apply_coeffs(lambda, set, &coeffs), p)?;
                if norm > best_norm {
                    best_norm = norm;
                    best = coeffs;
                }
            }
        }
    }
    Ok((best, best_norm))
}

/// Lower bound on the sign constant of an index set at exponent p: the
/// supremum over matrices supported on the set and unimodular coefficient
/// patterns of |coeffs * lambda|_p / |lambda|_p. Always at least 1.
pub fn sigma_constant(
    set: &IndexSet,
    p: f64,
    mode: CoeffMode,
    cfg: &SolverConfig,
) -> Result<SigmaReport> {
    if set.is_empty() {
        return Err(Error::invalid("index set must be non-empty"));
    }
    if p.is_nan() || p <= 0.0 || !p.is_finite() {
        return Err(Error::invalid("exponent p must be positive and finite"));
    }
    if matches!(mode, CoeffMode::ExhaustiveSigns) && set.len() > EXHAUSTIVE_SET_CAP {
        return Err(Error::TooLarge(format!(
            "set size {} exceeds the exhaustive cap {EXHAUSTIVE_SET_CAP}",
            set.len()
        )));
    }
    cfg.validate()?;
    let e = set.len();
    let ones = vec![Complex64::new(1.0, 0.0); e];
    let mut report: Option<SigmaReport> = None;
    for restart in 0..cfg.restarts.max(1) {
        let entries: Vec<Complex64> = if restart == 0 {
            ones.clone()
        } else {
            let mut rng = cfg.seed.split(5000 + restart as u64).rng();
            (0..e)
                .map(|_| {
                    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
                })
                .collect()
        };
        let mut lambda = embed(set, &entries);
        let norm0 = schatten_norm(&lambda, p)?;
        if norm0 == 0.0 {
            continue;
        }
        lambda.scale_mut(1.0 / norm0);
        let mut coeffs = ones.clone();
        let mut ratio = 1.0;
        for round in 0..6 {
            let inner_seed = cfg.seed.split(6000 + 97 * restart as u64 + round as u64);
            let (c, num) = best_coeffs(&lambda, set, p, mode, inner_seed, &coeffs)?;
            coeffs = c;
            let den = schatten_norm(&lambda, p)?;
            ratio = num / den;
            // Ascent on log(num) - log(den) in the entries on the set.
            let mut step = 0.2;
            for _ in 0..40 {
                let num_m = apply_coeffs(&lambda, set, &coeffs);
                let num_v = schatten_norm(&num_m, p)?;
                let den_v = schatten_norm(&lambda, p)?;
                let g_num = schatten_norm_gradient(&num_m, p)?;
                let g_den = schatten_norm_gradient(&lambda, p)?;
                let mut cand = lambda.clone();
                for (k, &(i, j)) in set.pairs.iter().enumerate() {
                    let g = g_num[(i, j)] * coeffs[k].conj() / Complex64::new(num_v, 0.0)
                        - g_den[(i, j)] / Complex64::new(den_v, 0.0);
                    cand[(i, j)] += g * Complex64::new(step, 0.0);
                }
                let cn = schatten_norm(&cand, p)?;
                if cn == 0.0 {
                    step *= 0.5;
                    continue;
                }
                cand.scale_mut(1.0 / cn);
                let new_ratio =
                    schatten_norm(&apply_coeffs(&cand, set, &coeffs), p)? / schatten_norm(&cand, p)?;
                if new_ratio > ratio {
                    lambda = cand;
                    ratio = new_ratio;
                    step *= 1.2;
                } else {
                    step *= 0.5;
                    if step < 1e-6 {
                        break;
                    }
                }
            }
        }
        let better = match &report {
            None => true,
            Some(r) => ratio > r.value,
        };
        if better {
            report = Some(SigmaReport {
                value: ratio,
                coeffs,
                lambda,
                restarts_used: restart + 1,
            });
        }
    }
    let mut rep = report.expect("restart 0 always yields a ratio");
    // The identity pattern gives ratio one; never report below it.
    if rep.value < 1.0 {
        rep.value = 1.0;
        rep.coeffs = ones;
    }
    rep.restarts_used = cfg.restarts.max(1);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg() -> SolverConfig {
        let mut c = SolverConfig::default();
        c.restarts = 3;
        c
    }

    #[test]
    fn diagonal_set_constant_is_one() {
        // Phases on a diagonal support never change singular values.
        let set = IndexSet::diagonal(3).unwrap();
        let rep = sigma_constant(&set, 1.0, CoeffMode::ExhaustiveSigns, &cfg()).unwrap();
        assert_relative_eq!(rep.value, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn full_two_by_two_grid_exceeds_lower_bound() {
        // ones with signs [[1,1],[1,-1]] is sqrt(2) orthogonal: the trace
        // norm doubles from 2 to 2 sqrt(2) after sign tuning.
        let set = IndexSet::full(2, 2).unwrap();
        let rep = sigma_constant(&set, 1.0, CoeffMode::ExhaustiveSigns, &cfg()).unwrap();
        assert!(rep.value >= 2f64.sqrt() - 1e-6, "value {}", rep.value);
        assert!(rep.value >= 1.18);
    }

    #[test]
    fn random_phase_mode_runs() {
        let set = IndexSet::full(2, 2).unwrap();
        let rep =
            sigma_constant(&set, 1.0, CoeffMode::RandomUnimodular { trials: 64 }, &cfg()).unwrap();
        assert!(rep.value >= 1.0);
    }

    #[test]
    fn set_validation() {
        assert!(IndexSet::new(2, 2, vec![(2, 0)]).is_err());
        let s = IndexSet::new(2, 2, vec![(1, 0), (1, 0), (0, 1)]).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.contains(1, 0));
        assert!(!s.contains(1, 1));
    }

    #[test]
    fn exhaustive_cap() {
        let set = IndexSet::full(5, 5).unwrap();
        assert!(matches!(
            sigma_constant(&set, 1.0, CoeffMode::ExhaustiveSigns, &cfg()),
            Err(Error::TooLarge(_))
        ));
    }
}
