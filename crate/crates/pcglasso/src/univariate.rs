//! Closed-form analysis of the log-penalised precision estimator in one
//! dimension: the estimator `(1 - 2c/n)/s` and its exact mean squared error
//! under Gaussian sampling, used to pin down the diagonal penalty weight.

use crate::error::{Error, Result};
use crate::scalar::{fl, fl_usize, Scalar};

/// Penalised precision estimate `(1 - 2c/n) / s` from the unbiased
/// ((n-1)-divisor) sample variance `s`.
pub fn penalized_estimator<T: Scalar>(s: T, n: usize, c: T) -> Result<T> {
    if !(s > T::zero()) {
        return Err(Error::invalid("sample variance must be positive"));
    }
    let shrink = T::one() - fl::<T>(2.0) * c / fl_usize::<T>(n);
    if !(shrink > T::zero()) {
        return Err(Error::invalid(format!(
            "penalty coefficient too large: 2c >= n leaves a nonpositive estimate (n = {n})"
        )));
    }
    Ok(shrink / s)
}

/// Exact MSE of the penalised estimator at true precision `theta`:
///
/// ```text
/// theta^2 [ 2 (1-2c/n)^2 (n-1)^2 / ((n-3)^2 (n-5))
///           + ((1-2c/n)(n-1)/(n-3) - 1)^2 ]
/// ```
pub fn mse_closed_form<T: Scalar>(n: usize, c: T, theta: T) -> Result<T> {
    if n <= 5 {
        return Err(Error::invalid(format!("the MSE formula needs n > 5, got {n}")));
    }
    let nf = fl_usize::<T>(n);
    let shrink = T::one() - fl::<T>(2.0) * c / nf;
    let n1 = nf - T::one();
    let n3 = nf - fl::<T>(3.0);
    let n5 = nf - fl::<T>(5.0);
    let var = fl::<T>(2.0) * shrink * shrink * n1 * n1 / (n3 * n3 * n5);
    let bias = shrink * n1 / n3 - T::one();
    Ok(theta * theta * (var + bias * bias))
}

/// The penalty coefficient minimising the exact MSE: `2n / (n - 1)`.
pub fn min_mse_coefficient<T: Scalar>(n: usize) -> T {
    fl::<T>(2.0) * fl_usize::<T>(n) / (fl_usize::<T>(n) - T::one())
}
