//! Shared minimization engine for the split-norm solvers.
//!
//! Every decomposition norm in this module is an infimum of a piecewise
//! smooth objective over a flat real vector (the packed split variable).
//! The engine runs, per start:
//!
//! 1. a plain subgradient phase with diminishing step c/sqrt(t) and
//!    best-iterate tracking (the convex regime's base method), then
//! 2. smoothing continuation: backtracking descent on the eps-smoothed
//!    objective along a strictly decreasing eps schedule, warm-started
//!    stage to stage.
//!
//! Smoothed stage values are non-increasing by construction (each smoothing
//! is monotone in eps and stages are warm-started), which tests assert.
//! Multi-start selection is deterministic: restarts are indexed, reduced in
//! index order, and ties within tolerance break by a caller-supplied key.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matcore::Seed;

/// Configuration shared by all split solvers.
#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Number of starts (first few are deterministic, the rest seeded).
    pub restarts: usize,
    /// Iteration cap per continuation stage.
    pub max_iters: usize,
    /// Strictly decreasing smoothing schedule; last value at most 1e-8.
    pub eps_schedule: Vec<f64>,
    /// Relative stall tolerance for stage termination and tie-breaking.
    pub tolerance: f64,
    /// Master seed for randomized starts.
    pub seed: Seed,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            restarts: 6,
            max_iters: 500,
            eps_schedule: vec![1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8],
            tolerance: 1e-10,
            seed: Seed(0x6e_63_6c_61),
        }
    }
}

impl SolverConfig {
    /// Cheaper preset for batch sweeps.
    pub fn fast(seed: Seed) -> Self {
        SolverConfig {
            restarts: 3,
            max_iters: 250,
            eps_schedule: vec![1e-1, 1e-2, 1e-3, 1e-5, 1e-8],
            tolerance: 1e-9,
            seed,
        }
    }

    pub fn with_seed(mut self, seed: Seed) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::invalid("restarts must be at least 1"));
        }
        if self.max_iters < 10 {
            return Err(Error::invalid("max_iters must be at least 10"));
        }
        if !(self.tolerance > 0.0 && self.tolerance <= 1e-2) {
            return Err(Error::invalid("tolerance must lie in (0, 1e-2]"));
        }
        if self.eps_schedule.is_empty() {
            return Err(Error::invalid("eps schedule must be non-empty"));
        }
        for w in self.eps_schedule.windows(2) {
            if !(w[1] < w[0]) {
                return Err(Error::invalid("eps schedule must be strictly decreasing"));
            }
        }
        let last = *self.eps_schedule.last().expect("non-empty");
        if !(last > 0.0 && last <= 1e-8) {
            return Err(Error::invalid("eps schedule must end in (0, 1e-8]"));
        }
        Ok(())
    }
}

/// A piecewise-smooth objective with an eps-smoothed family.
///
/// `value`/`grad` at eps = 0 must be safe (kinks return any subgradient,
/// typically 0). `exact` is the reported quantity, not necessarily the
/// minimized one (solvers often minimize a monotone transform).
pub(crate) trait SplitObjective: Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64], eps: f64) -> f64;
    fn grad(&self, x: &[f64], eps: f64, g: &mut [f64]);
    /// Projection onto the feasible affine set or cone; default none.
    fn project(&self, _x: &mut [f64]) {}
    fn exact(&self, x: &[f64]) -> f64 {
        self.value(x, 0.0)
    }
}

pub(crate) fn l2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Subgradient descent with diminishing steps; returns the best iterate.
pub(crate) fn subgradient_phase<O: SplitObjective + ?Sized>(
    obj: &O,
    mut x: Vec<f64>,
    iters: usize,
) -> (Vec<f64>, f64) {
    let mut g = vec![0.0; x.len()];
    let mut best = x.clone();
    let mut best_v = obj.value(&x, 0.0);
    let c = 0.3 * (1.0 + l2(&x));
    for t in 0..iters {
        obj.grad(&x, 0.0, &mut g);
        let gn = l2(&g);
        if gn <= 1e-15 {
            break;
        }
        let step = c / ((t + 1) as f64).sqrt() / gn;
        for (xi, gi) in x.iter_mut().zip(&g) {
            *xi -= step * gi;
        }
        obj.project(&mut x);
        let v = obj.value(&x, 0.0);
        if v < best_v {
            best_v = v;
            best = x.clone();
        }
    }
    (best, best_v)
}

/// Backtracking (Armijo) descent at a fixed smoothing level.
/// Returns (point, value, converged-before-iteration-cap).
pub(crate) fn armijo_descent<O: SplitObjective + ?Sized>(
    obj: &O,
    mut x: Vec<f64>,
    eps: f64,
    max_iters: usize,
    tol: f64,
) -> (Vec<f64>, f64, bool) {
    let n = x.len();
    let mut g = vec![0.0; n];
    let mut t = 1.0f64;
    let mut f0 = obj.value(&x, eps);
    let mut stall = 0usize;
    let mut converged = false;
    for _ in 0..max_iters {
        obj.grad(&x, eps, &mut g);
        let gn2: f64 = g.iter().map(|v| v * v).sum();
        if gn2.sqrt() <= 1e-14 * (1.0 + f0.abs()) {
            converged = true;
            break;
        }
        t = (t * 2.0).min(1e12);
        let mut accepted = false;
        while t >= 1e-18 {
            let mut xt: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi - t * gi).collect();
            obj.project(&mut xt);
            let ft = obj.value(&xt, eps);
            // Projection can bend the step, so accept plain decrease once
            // the step is already tiny.
            if ft <= f0 - 0.25 * t * gn2 || (ft < f0 && t <= 1e-16) {
                let rel = (f0 - ft) / f0.abs().max(1e-300);
                x = xt;
                f0 = ft;
                accepted = true;
                if rel < tol {
                    stall += 1;
                } else {
                    stall = 0;
                }
                break;
            }
            t *= 0.5;
        }
        if !accepted || stall >= 8 {
            converged = true;
            break;
        }
    }
    (x, f0, converged)
}

#[derive(Clone, Debug)]
pub(crate) struct RestartOutcome {
    pub x: Vec<f64>,
    pub exact: f64,
    pub converged: bool,
    /// Smoothed objective at the end of each continuation stage.
    pub stage_values: Vec<f64>,
}

fn run_restart<O: SplitObjective + ?Sized>(
    obj: &O,
    x0: Vec<f64>,
    cfg: &SolverConfig,
    convex: bool,
) -> RestartOutcome {
    let mut x = x0;
    obj.project(&mut x);
    if convex {
        let (bx, _) = subgradient_phase(obj, x, cfg.max_iters.min(300));
        x = bx;
    }
    let mut stage_values = Vec::with_capacity(cfg.eps_schedule.len());
    let mut converged = false;
    for &eps in &cfg.eps_schedule {
        let (nx, v, conv) = armijo_descent(obj, x, eps, cfg.max_iters, cfg.tolerance);
        x = nx;
        stage_values.push(v);
        converged = conv;
    }
    RestartOutcome {
        exact: obj.exact(&x),
        x,
        converged,
        stage_values,
    }
}

#[derive(Clone, Debug)]
pub(crate) struct SolveReport {
    pub x: Vec<f64>,
    pub value: f64,
    pub converged: bool,
    pub restarts_used: usize,
    /// Spread of exact values across starts (restart agreement).
    pub gap: f64,
    pub stage_values: Vec<f64>,
}

/// Runs all starts (in parallel, reduced in index order) and selects the
/// best outcome. Ties within tolerance break by `tie_key`, then by index.
pub(crate) fn solve_multi<O, K>(
    obj: &O,
    starts: Vec<Vec<f64>>,
    cfg: &SolverConfig,
    convex: bool,
    tie_key: K,
) -> SolveReport
where
    O: SplitObjective,
    K: Fn(&[f64]) -> f64 + Sync,
{
    assert!(!starts.is_empty(), "at least one start required");
    let outcomes: Vec<RestartOutcome> = starts
        .into_par_iter()
        .map(|s| run_restart(obj, s, cfg, convex))
        .collect();
    let restarts_used = outcomes.len();
    let best_val = outcomes
        .iter()
        .map(|o| o.exact)
        .fold(f64::INFINITY, f64::min);
    let worst_val = outcomes
        .iter()
        .map(|o| o.exact)
        .fold(f64::NEG_INFINITY, f64::max);
    let tie_tol = cfg.tolerance.max(1e-9) * best_val.abs().max(1.0);
    let mut chosen = 0usize;
    let mut chosen_key = f64::INFINITY;
    for (i, o) in outcomes.iter().enumerate() {
        if o.exact <= best_val + tie_tol {
            let key = tie_key(&o.x);
            if key < chosen_key - 1e-15 {
                chosen = i;
                chosen_key = key;
            }
        }
    }
    let gap = worst_val - best_val;
    let agreement_ok = if convex {
        gap <= 1e-6 * best_val.abs().max(1.0)
    } else {
        true
    };
    let picked = &outcomes[chosen];
    SolveReport {
        value: picked.exact,
        converged: picked.converged && agreement_ok,
        restarts_used,
        gap,
        x: picked.x.clone(),
        stage_values: picked.stage_values.clone(),
    }
}

// Packing helpers: complex matrices flatten to interleaved (re, im) in
// nalgebra's column-major entry order.

pub(crate) fn pack_mats(mats: &[crate::matcore::CMatrix]) -> Vec<f64> {
    let mut out = Vec::new();
    for m in mats {
        for z in m.iter() {
            out.push(z.re);
            out.push(z.im);
        }
    }
    out
}

pub(crate) fn unpack_mats(
    x: &[f64],
    k: usize,
    rows: usize,
    cols: usize,
) -> Vec<crate::matcore::CMatrix> {
    let per = rows * cols;
    assert_eq!(x.len(), 2 * k * per, "packed length mismatch");
    (0..k)
        .map(|t| {
            let base = 2 * t * per;
            crate::matcore::CMatrix::from_iterator(
                rows,
                cols,
                (0..per).map(|i| num_complex::Complex64::new(x[base + 2 * i], x[base + 2 * i + 1])),
            )
        })
        .collect()
}
