//! Gaussian log-likelihood, the penalised objective, and its restriction to a
//! single block update.
//!
//! The penalised objective (after unit-diagonal standardisation, up to an
//! additive constant) restricted to one off-diagonal entry `x = Delta_ij` and
//! the two diagonal roots `y1 = sqrt(theta_ii)`, `y2 = sqrt(theta_jj)` is
//!
//! ```text
//! f(x, y1, y2) = ln(a x^2 + b x + c) + 2 c_n (ln y1 + ln y2)
//!                - y1^2 - y2^2 - 2 c12 x y1 y2 - 2 c1 y1 - 2 c2 y2
//!                - 2 rho |x|
//! ```
//!
//! with `c_n = 1 - 4/n`, `c12 = S_ij`, and `c1`, `c2` collecting the cross
//! terms against the fixed rows.

use crate::cov::CovMatrix;
use crate::decomp::{det_quadratic_raw, DetQuadratic, PrecisionDecomposition};
use crate::error::{Error, Result};
use crate::mat::{log_det, SymMat};
use crate::scalar::{fl, fl_usize, Scalar};

/// Coefficients of the single-block restriction of the penalised objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockCoefficients<T> {
    pub n: usize,
    /// `1 - 4/n`.
    pub c_n: T,
    /// `S_ij`.
    pub c12: T,
    /// `sum_{k != i,j} S_ik Delta_ik sqrt(theta_kk)`.
    pub c1: T,
    /// `sum_{k != i,j} S_jk Delta_jk sqrt(theta_kk)`.
    pub c2: T,
    pub quad: DetQuadratic<T>,
    pub rho: T,
}

/// Gaussian log-likelihood `(n/2) [ln det Theta - tr(S Theta) - p ln 2π]`.
pub fn log_likelihood<T: Scalar>(theta_hat: &SymMat<T>, s: &CovMatrix<T>) -> Result<T> {
    let p = s.dim();
    if theta_hat.dim() != p {
        return Err(Error::DimensionMismatch { expected: p, got: theta_hat.dim() });
    }
    let ld = log_det(theta_hat)?;
    let tr = s.mat().trace_product(theta_hat);
    let log_two_pi = fl::<T>(std::f64::consts::TAU).ln();
    let half_n = fl_usize::<T>(s.n()) / fl::<T>(2.0);
    Ok(half_n * (ld - tr - fl_usize::<T>(p) * log_two_pi))
}

/// Penalised objective
/// `ln det Delta + (1 - 4/n) Σ ln theta_ii - tr(S Theta) - rho Σ_{i≠j} |Delta_ij|`.
///
/// The penalty sums over ordered pairs, i.e. each unordered pair counts twice.
pub fn pcglasso_objective<T: Scalar>(
    d: &PrecisionDecomposition<T>,
    s: &CovMatrix<T>,
    rho: T,
) -> Result<T> {
    if rho < T::zero() {
        return Err(Error::invalid("rho must be nonnegative"));
    }
    if s.dim() != d.dim() {
        return Err(Error::DimensionMismatch { expected: d.dim(), got: s.dim() });
    }
    pcglasso_objective_raw(d.theta(), d.delta(), s, rho)
}

pub(crate) fn pcglasso_objective_raw<T: Scalar>(
    theta: &[T],
    delta: &SymMat<T>,
    s: &CovMatrix<T>,
    rho: T,
) -> Result<T> {
    let p = theta.len();
    let ld = log_det(delta)?;
    let c_n = s.c_n();
    let sqrt_theta: Vec<T> = theta.iter().map(|t| t.sqrt()).collect();

    let mut log_theta_sum = T::zero();
    for &t in theta {
        log_theta_sum += t.ln();
    }
    let mut trace = T::zero();
    let mut penalty = T::zero();
    let two = fl::<T>(2.0);
    for i in 0..p {
        trace += s.get(i, i) * theta[i];
        for j in (i + 1)..p {
            trace += two * s.get(i, j) * delta.get(i, j) * sqrt_theta[i] * sqrt_theta[j];
            penalty += delta.get(i, j).abs();
        }
    }
    Ok(ld + c_n * log_theta_sum - trace - two * rho * penalty)
}

/// Coefficients of the block restriction at the current state of `d`.
///
/// `s` is expected in unit-diagonal (standardised) form; the `-y1^2 - y2^2`
/// terms of the block objective assume `S_ii = S_jj = 1`.
pub fn block_coefficients<T: Scalar>(
    d: &PrecisionDecomposition<T>,
    s: &CovMatrix<T>,
    i: usize,
    j: usize,
    rho: T,
) -> Result<BlockCoefficients<T>> {
    if s.dim() != d.dim() {
        return Err(Error::DimensionMismatch { expected: d.dim(), got: s.dim() });
    }
    let sqrt_theta: Vec<T> = d.theta().iter().map(|t| t.sqrt()).collect();
    block_coefficients_raw(&sqrt_theta, d.delta(), s, i, j, rho)
}

pub(crate) fn block_coefficients_raw<T: Scalar>(
    sqrt_theta: &[T],
    delta: &SymMat<T>,
    s: &CovMatrix<T>,
    i: usize,
    j: usize,
    rho: T,
) -> Result<BlockCoefficients<T>> {
    let p = delta.dim();
    if i >= j || j >= p {
        return Err(Error::invalid(format!("block indices must satisfy i < j < p, got ({i},{j})")));
    }
    if rho < T::zero() {
        return Err(Error::invalid("rho must be nonnegative"));
    }
    let quad = det_quadratic_raw(delta, i, j)?;
    let mut c1 = T::zero();
    let mut c2 = T::zero();
    for k in 0..p {
        if k == i || k == j {
            continue;
        }
        c1 += s.get(i, k) * delta.get(i, k) * sqrt_theta[k];
        c2 += s.get(j, k) * delta.get(j, k) * sqrt_theta[k];
    }
    Ok(BlockCoefficients { n: s.n(), c_n: s.c_n(), c12: s.get(i, j), c1, c2, quad, rho })
}

/// Evaluate the block objective `f(x, y1, y2)`.
pub fn block_objective<T: Scalar>(coef: &BlockCoefficients<T>, x: T, y1: T, y2: T) -> Result<T> {
    let det = coef.quad.value(x);
    if !(det > T::zero()) {
        return Err(Error::EmptyFeasibleInterval);
    }
    if !(y1 > T::zero()) || !(y2 > T::zero()) {
        return Err(Error::invalid("diagonal roots must be positive"));
    }
    Ok(block_objective_raw(coef, x, y1, y2))
}

#[inline]
pub(crate) fn block_objective_raw<T: Scalar>(coef: &BlockCoefficients<T>, x: T, y1: T, y2: T) -> T {
    let two = fl::<T>(2.0);
    let det = coef.quad.value(x);
    det.ln() + two * coef.c_n * (y1.ln() + y2.ln())
        - y1 * y1
        - y2 * y2
        - two * coef.c12 * x * y1 * y2
        - two * coef.c1 * y1
        - two * coef.c2 * y2
        - two * coef.rho * x.abs()
}

/// Partial derivatives `(f_x, f_y1, f_y2)` of the block objective.
///
/// `f_x` involves `sign(x)` through the penalty, so `x = 0` is rejected.
pub fn block_gradient<T: Scalar>(
    coef: &BlockCoefficients<T>,
    x: T,
    y1: T,
    y2: T,
) -> Result<(T, T, T)> {
    if x == T::zero() {
        return Err(Error::invalid("f_x is undefined at x = 0"));
    }
    let det = coef.quad.value(x);
    if !(det > T::zero()) {
        return Err(Error::EmptyFeasibleInterval);
    }
    let two = fl::<T>(2.0);
    let fx = (two * coef.quad.a * x + coef.quad.b) / det
        - two * coef.c12 * y1 * y2
        - two * coef.rho * x.signum();
    let fy1 = two * coef.c_n / y1 - two * y1 - two * coef.c12 * x * y2 - two * coef.c1;
    let fy2 = two * coef.c_n / y2 - two * y2 - two * coef.c12 * x * y1 - two * coef.c2;
    Ok((fx, fy1, fy2))
}
