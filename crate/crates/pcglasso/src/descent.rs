//! Blockwise coordinate descent and the warm-started regularisation path.
//!
//! One sweep visits every unordered pair `(i, j)` exactly once in a freshly
//! shuffled order and replaces `(Delta_ij, theta_ii, theta_jj)` with the exact
//! block maximiser. After each sweep the stopping rule compares the sweep's
//! objective gain against `q * epsilon`, where `q` is the proportion of
//! nonzero off-diagonal entries going into the sweep (never below one pair's
//! worth); sparse states are expected to move less per sweep, so the
//! threshold shrinks with them.

use crate::block_solver::solve_block;
use crate::cov::{standardize, CovMatrix};
use crate::decomp::{decompose, PrecisionDecomposition};
use crate::error::{Error, Result};
use crate::mat::SymMat;
use crate::objective::{block_coefficients_raw, block_objective_raw, pcglasso_objective_raw};
use crate::rng::DetRng;
use crate::scalar::{fl, fl_usize, Scalar};

/// Tuning knobs for the coordinate descent.
#[derive(Debug, Clone, PartialEq)]
pub struct DescentConfig<T> {
    /// Convergence threshold on the per-sweep objective gain (scaled by the
    /// nonzero proportion `q`).
    pub epsilon: T,
    /// Sweep budget per penalty value; exceeding it is reported, not fatal.
    pub max_sweeps: usize,
    /// Ridge constant for the `(S + alpha I)^{-1}` fallback initialisation.
    /// `None` picks `1e-3 * trace(S) / p`.
    pub alpha: Option<T>,
    /// Seed for the sweep-order shuffle (and nothing else).
    pub rng_seed: u64,
}

impl<T: Scalar> Default for DescentConfig<T> {
    fn default() -> Self {
        DescentConfig { epsilon: fl(1e-8), max_sweeps: 500, alpha: None, rng_seed: 0 }
    }
}

impl<T: Scalar> DescentConfig<T> {
    fn validate(&self) -> Result<()> {
        if !(self.epsilon > T::zero()) {
            return Err(Error::invalid("epsilon must be positive"));
        }
        if self.max_sweeps < 1 {
            return Err(Error::invalid("max_sweeps must be at least 1"));
        }
        if let Some(a) = self.alpha {
            if !(a > T::zero()) {
                return Err(Error::invalid("alpha must be positive when given"));
            }
        }
        Ok(())
    }
}

/// Outcome of one coordinate-descent run.
#[derive(Debug, Clone)]
pub struct DescentRun<T> {
    pub estimate: PrecisionDecomposition<T>,
    /// Objective value before any sweep and after each completed sweep.
    pub objective_trace: Vec<T>,
    /// False when the sweep budget ran out before the stopping rule fired.
    pub converged: bool,
    pub sweeps: usize,
    /// Largest per-update objective decrease observed (0 when ascent was
    /// perfectly monotone); diagnostic only.
    pub worst_update_drop: T,
}

/// Regularisation-path output. Estimates are on the original scale of `S`;
/// objectives are those of the standardised problem actually optimised.
#[derive(Debug, Clone)]
pub struct PathResult<T> {
    pub rhos: Vec<T>,
    pub estimates: Vec<PrecisionDecomposition<T>>,
    pub objectives: Vec<T>,
    pub nonzero_counts: Vec<usize>,
    pub converged: Vec<bool>,
}

impl<T: Scalar> PathResult<T> {
    pub fn len(&self) -> usize {
        self.rhos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rhos.is_empty()
    }
}

/// Log-spaced penalty grid starting at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoGrid<T> {
    pub rhos: Vec<T>,
    /// Set when the input had no off-diagonal signal (all-diagonal `S`), in
    /// which case the nonzero part of the grid is an arbitrary small ramp.
    pub degenerate: bool,
}

/// Blockwise coordinate descent at a single penalty value on a unit-diagonal
/// covariance.
pub fn coordinate_descent<T: Scalar>(
    s_unit: &CovMatrix<T>,
    rho: T,
    start: &PrecisionDecomposition<T>,
    cfg: &DescentConfig<T>,
) -> Result<DescentRun<T>> {
    cfg.validate()?;
    let p = s_unit.dim();
    if start.dim() != p {
        return Err(Error::DimensionMismatch { expected: p, got: start.dim() });
    }
    if rho < T::zero() {
        return Err(Error::invalid("rho must be nonnegative"));
    }
    if s_unit.n() < 5 {
        return Err(Error::invalid(format!(
            "coordinate descent needs n >= 5 so that 1 - 4/n > 0; got n = {}",
            s_unit.n()
        )));
    }
    let unit_tol = fl::<T>(1e-10);
    for i in 0..p {
        if (s_unit.get(i, i) - T::one()).abs() > unit_tol {
            return Err(Error::invalid(format!(
                "coordinate descent expects a unit-diagonal covariance; entry ({i},{i}) is {}",
                s_unit.get(i, i)
            )));
        }
    }

    // One variable: the objective c_n ln(theta) - S11 theta peaks in closed form.
    if p == 1 {
        let theta = s_unit.c_n() / s_unit.get(0, 0);
        let est = PrecisionDecomposition::new(vec![theta], SymMat::identity(1))?;
        let obj = pcglasso_objective_raw(est.theta(), est.delta(), s_unit, rho)?;
        return Ok(DescentRun {
            estimate: est,
            objective_trace: vec![obj],
            converged: true,
            sweeps: 0,
            worst_update_drop: T::zero(),
        });
    }

    let mut theta = start.theta().to_vec();
    let mut sqrt_theta: Vec<T> = theta.iter().map(|t| t.sqrt()).collect();
    let mut delta = start.delta().clone();

    let mut rng = DetRng::new(cfg.rng_seed);
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(p * (p - 1) / 2);
    for i in 0..p {
        for j in (i + 1)..p {
            pairs.push((i, j));
        }
    }

    let mut obj = pcglasso_objective_raw(&theta, &delta, s_unit, rho)?;
    let mut trace = vec![obj];
    let mut converged = false;
    let mut sweeps = 0;
    let mut worst_drop = T::zero();
    let pair_count = fl_usize::<T>(p * (p - 1) / 2);

    for _ in 0..cfg.max_sweeps {
        // Nonzero proportion of the pre-sweep estimate, floored at one pair.
        let nnz = {
            let mut c = 0usize;
            for &(i, j) in &pairs {
                if delta.get(i, j) != T::zero() {
                    c += 1;
                }
            }
            c
        };
        let q = (fl_usize::<T>(nnz.max(1))) / pair_count;

        rng.shuffle(&mut pairs);
        for &(i, j) in &pairs {
            let coef = block_coefficients_raw(&sqrt_theta, &delta, s_unit, i, j, rho)?;
            let incumbent = block_objective_raw(&coef, delta.get(i, j), sqrt_theta[i], sqrt_theta[j]);
            let sol = solve_block(&coef)?;
            let drop = incumbent - sol.f_value;
            if drop > worst_drop {
                worst_drop = drop;
            }
            delta.set(i, j, sol.x);
            theta[i] = sol.y1 * sol.y1;
            theta[j] = sol.y2 * sol.y2;
            sqrt_theta[i] = sol.y1;
            sqrt_theta[j] = sol.y2;
        }
        sweeps += 1;

        let new_obj = pcglasso_objective_raw(&theta, &delta, s_unit, rho)?;
        trace.push(new_obj);
        let gain = new_obj - obj;
        obj = new_obj;
        if gain < q * cfg.epsilon {
            converged = true;
            break;
        }
    }

    Ok(DescentRun {
        estimate: PrecisionDecomposition::new(theta, delta)?,
        objective_trace: trace,
        converged,
        sweeps,
        worst_update_drop: worst_drop.max(T::zero()),
    })
}

/// Starting point for the path: `decompose(S^{-1})` when `S` is invertible,
/// acceptably conditioned and `n >= p`; otherwise the ridge fallback
/// `decompose((S + alpha I)^{-1})`, escalating `alpha` until the Cholesky
/// succeeds so the fallback cannot fail on symmetric input.
pub fn initial_estimate<T: Scalar>(
    s: &CovMatrix<T>,
    cfg: &DescentConfig<T>,
) -> Result<PrecisionDecomposition<T>> {
    cfg.validate()?;
    let p = s.dim();
    if s.n() >= p {
        if let Ok(ch) = s.mat().cholesky() {
            let inv = ch.inverse();
            let cond = s.mat().norm_one() * inv.norm_one();
            if cond < fl::<T>(1e12) {
                if let Ok(d) = decompose(&inv) {
                    return Ok(d);
                }
            }
        }
    }
    let mut alpha = cfg
        .alpha
        .unwrap_or_else(|| fl::<T>(1e-3) * s.mat().trace() / fl_usize::<T>(p));
    if !(alpha > T::zero()) {
        alpha = fl::<T>(1e-3);
    }
    for _ in 0..60 {
        let ridged = s.mat().add_ridge(alpha);
        if let Ok(ch) = ridged.cholesky() {
            if let Ok(d) = decompose(&ch.inverse()) {
                return Ok(d);
            }
        }
        alpha = alpha * fl::<T>(10.0);
    }
    Err(Error::invalid("ridge initialisation failed for a badly scaled matrix"))
}

/// Warm-started regularisation path over an ascending penalty grid starting
/// at zero. Standardises to unit diagonal, runs the descent per penalty from
/// the previous solution, and maps every estimate back to the original scale.
pub fn regularization_path<T: Scalar>(
    s: &CovMatrix<T>,
    rhos: &[T],
    cfg: &DescentConfig<T>,
) -> Result<PathResult<T>> {
    cfg.validate()?;
    if rhos.is_empty() {
        return Err(Error::invalid("the penalty grid is empty"));
    }
    if rhos[0] != T::zero() {
        return Err(Error::invalid("the penalty grid must start at 0"));
    }
    for w in rhos.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::invalid("the penalty grid must be strictly increasing"));
        }
    }

    let (s_unit, d) = standardize(s)?;
    let mut current = initial_estimate(&s_unit, cfg)?;
    let mut out = PathResult {
        rhos: rhos.to_vec(),
        estimates: Vec::with_capacity(rhos.len()),
        objectives: Vec::with_capacity(rhos.len()),
        nonzero_counts: Vec::with_capacity(rhos.len()),
        converged: Vec::with_capacity(rhos.len()),
    };
    for &rho in rhos {
        let run = coordinate_descent(&s_unit, rho, &current, cfg)?;
        current = run.estimate;
        out.objectives.push(*run.objective_trace.last().expect("trace never empty"));
        out.converged.push(run.converged);
        out.nonzero_counts.push(current.nonzero_pairs());
        out.estimates.push(current.rescale(&d)?);
    }
    Ok(out)
}

/// `[0]` followed by `count - 1` log-spaced penalties from
/// `ratio * rho_max` up to `rho_max = max |R_ij|` of the sample correlation.
pub fn rho_grid<T: Scalar>(s: &CovMatrix<T>, count: usize, min_ratio: T) -> Result<RhoGrid<T>> {
    if count < 2 {
        return Err(Error::invalid("the penalty grid needs at least two points"));
    }
    if !(min_ratio > T::zero()) || !(min_ratio < T::one()) {
        return Err(Error::invalid("min_ratio must lie in (0, 1)"));
    }
    let rho_max = if s.dim() > 1 { s.max_abs_correlation()? } else { T::zero() };
    let (rho_max, degenerate) = if rho_max > T::zero() {
        (rho_max, false)
    } else {
        // No off-diagonal signal; any small ramp keeps downstream code running.
        (fl::<T>(1e-4), true)
    };
    let mut rhos = Vec::with_capacity(count);
    rhos.push(T::zero());
    let k = count - 1;
    if k == 1 {
        rhos.push(rho_max);
    } else {
        let rho_min = min_ratio * rho_max;
        let log_min = rho_min.ln();
        let log_max = rho_max.ln();
        for idx in 0..k {
            let t = fl_usize::<T>(idx) / fl_usize::<T>(k - 1);
            rhos.push((log_min + (log_max - log_min) * t).exp());
        }
        // Guard against FP wobble at the top end.
        let last = rhos.len() - 1;
        rhos[last] = rho_max;
    }
    Ok(RhoGrid { rhos, degenerate })
}

/// [`rho_grid`] with the default 0.01 minimum ratio.
pub fn default_rho_grid<T: Scalar>(s: &CovMatrix<T>, count: usize) -> Result<RhoGrid<T>> {
    rho_grid(s, count, fl::<T>(0.01))
}
