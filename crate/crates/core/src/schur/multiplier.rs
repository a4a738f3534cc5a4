//! Entrywise multipliers between Schatten classes. The operator norm of
//! x -> phi.x is estimated from below by structured probes plus ratio
//! ascent on the norm quotient; the 2 -> 2 case is the exact entrywise
//! supremum.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::decomp::SolverConfig;
use crate::error::{Error, Result};
use crate::matcore::{check_finite, schatten_norm, schatten_norm_gradient, CMatrix, Seed};

/// Entrywise product phi . x.
pub fn apply_multiplier(phi: &CMatrix, x: &CMatrix) -> Result<CMatrix> {
    if phi.shape() != x.shape() {
        return Err(Error::shape(format!(
            "symbol is {:?}, input is {:?}",
            phi.shape(),
            x.shape()
        )));
    }
    Ok(CMatrix::from_fn(phi.nrows(), phi.ncols(), |i, j| {
        phi[(i, j)] * x[(i, j)]
    }))
}

fn check_exponent(name: &str, v: f64) -> Result<()> {
    if v.is_nan() || v <= 0.0 {
        return Err(Error::invalid(format!("{name} must be positive")));
    }
    Ok(())
}

/// Ratio |phi.x|_p / |x|_q for a nonzero x.
fn ratio(phi: &CMatrix, x: &CMatrix, q_in: f64, p_out: f64) -> Result<f64> {
    let den = schatten_norm(x, q_in)?;
    if den == 0.0 {
        return Ok(0.0);
    }
    Ok(schatten_norm(&apply_multiplier(phi, x)?, p_out)? / den)
}

/// Ascent on log|phi.x|_p - log|x|_q from a starting point. The gradient
/// of the numerator pulls back through the entrywise product as
/// G(phi.x) . conj(phi).
fn polish(phi: &CMatrix, start: &CMatrix, q_in: f64, p_out: f64) -> Result<(CMatrix, f64)> {
    let mut x = start.clone();
    let nx = schatten_norm(&x, q_in)?;
    if nx == 0.0 {
        return Ok((x, 0.0));
    }
    x.scale_mut(1.0 / nx);
    let mut best = ratio(phi, &x, q_in, p_out)?;
    let mut step = 0.2;
    for _ in 0..60 {
        let y = apply_multiplier(phi, &x)?;
        let num = schatten_norm(&y, p_out)?;
        let den = schatten_norm(&x, q_in)?;
        if num == 0.0 || den == 0.0 {
            break;
        }
        let gn = schatten_norm_gradient(&y, p_out)?;
        let gd = schatten_norm_gradient(&x, q_in)?;
        let g = CMatrix::from_fn(x.nrows(), x.ncols(), |i, j| {
            gn[(i, j)] * phi[(i, j)].conj() / Complex64::new(num, 0.0)
                - gd[(i, j)] / Complex64::new(den, 0.0)
        });
        let mut cand = &x + g.scale(step);
        let cn = schatten_norm(&cand, q_in)?;
        if cn == 0.0 {
            step *= 0.5;
            continue;
        }
        cand.scale_mut(1.0 / cn);
        let r = ratio(phi, &cand, q_in, p_out)?;
        if r > best {
            best = r;
            x = cand;
            step *= 1.2;
        } else {
            step *= 0.5;
            if step < 1e-7 {
                break;
            }
        }
    }
    Ok((x, best))
}

/// Lower-bound estimate of sup |phi.x|_{p_out} over the unit |.|_{q_in}
/// ball. Exact (the entrywise supremum) when q_in = p_out = 2; otherwise
/// the best of elementary, rank-one, dense and ascent-polished probes.
/// The sup is not concave for other exponent pairs, so no upper bound is
/// claimed.
pub fn multiplier_norm(phi: &CMatrix, q_in: f64, p_out: f64, cfg: &SolverConfig) -> Result<f64> {
    check_finite(phi)?;
    check_exponent("input exponent", q_in)?;
    check_exponent("output exponent", p_out)?;
    cfg.validate()?;
    let (n, m) = phi.shape();
    let sup_entry = phi.iter().fold(0.0f64, |a, z| a.max(z.norm()));
    if q_in == 2.0 && p_out == 2.0 {
        return Ok(sup_entry);
    }
    if sup_entry == 0.0 {
        return Ok(0.0);
    }
    // Elementary probes have unit q-norm and give exactly |phi_ij|.
    let mut best = sup_entry;
    let mut starts: Vec<CMatrix> = Vec::new();
    starts.push(CMatrix::from_element(n, m, Complex64::new(1.0, 0.0)));
    starts.push(phi.clone());
    let svd = phi.clone().svd(true, true);
    if let (Some(u), Some(v_t)) = (svd.u.as_ref(), svd.v_t.as_ref()) {
        let top = CMatrix::from_fn(n, m, |i, j| u[(i, 0)] * v_t[(0, j)]);
        starts.push(top);
    }
    for s in 0..cfg.restarts.max(1) {
        let mut rng = cfg.seed.split(8000 + s as u64).rng();
        let mut g = CMatrix::zeros(n, m);
        for v in g.iter_mut() {
            *v = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        }
        starts.push(g);
        // Rank-one seeded probe.
        let a: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let b: Vec<Complex64> = (0..m)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        starts.push(CMatrix::from_fn(n, m, |i, j| a[i] * b[j].conj()));
    }
    for s in &starts {
        let (_, v) = polish(phi, s, q_in, p_out)?;
        if v > best {
            best = v;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{random_matrix, Ensemble};
    use approx::assert_relative_eq;

    fn cfg() -> SolverConfig {
        SolverConfig::fast(Seed(7))
    }

    #[test]
    fn apply_is_entrywise() {
        let phi = CMatrix::from_fn(2, 2, |i, j| Complex64::new((i + 2 * j) as f64, 0.0));
        let x = CMatrix::from_element(2, 2, Complex64::new(1.0, -1.0));
        let y = apply_multiplier(&phi, &x).unwrap();
        assert_eq!(y[(1, 1)], Complex64::new(3.0, -3.0));
        let ones = CMatrix::from_element(2, 2, Complex64::new(1.0, 0.0));
        assert_eq!(apply_multiplier(&ones, &x).unwrap(), x);
    }

    #[test]
    fn two_to_two_is_entry_sup() {
        let phi = random_matrix(Ensemble::ComplexGaussian, 3, 4, Seed(5));
        let sup = phi.iter().fold(0.0f64, |a, z| a.max(z.norm()));
        let v = multiplier_norm(&phi, 2.0, 2.0, &cfg()).unwrap();
        assert_relative_eq!(v, sup, epsilon = 0.0);
    }

    #[test]
    fn single_entry_two_to_one() {
        let mut phi = CMatrix::zeros(2, 2);
        phi[(0, 0)] = Complex64::new(1.0, 0.0);
        let v = multiplier_norm(&phi, 2.0, 1.0, &cfg()).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-9);
    }

    #[test]
    fn ascent_beats_elementary_probes_when_profitable() {
        // The identity symbol from S_2 to S_1 is unbounded in dimension;
        // on 3x3 the diagonal probe x = I/sqrt(3) already gives sqrt(3),
        // well above any single-entry probe.
        let phi = CMatrix::identity(3, 3);
        let v = multiplier_norm(&phi, 2.0, 1.0, &cfg()).unwrap();
        assert!(v >= 3f64.sqrt() - 1e-6, "v {v}");
    }

    #[test]
    fn shape_mismatch_rejected() {
        let phi = CMatrix::zeros(2, 2);
        let x = CMatrix::zeros(2, 3);
        assert!(apply_multiplier(&phi, &x).is_err());
    }
}
