//! Sample covariance container and unit-diagonal standardisation.

use crate::error::{Error, Result};
use crate::mat::SymMat;
use crate::scalar::{fl, Scalar};

/// Symmetric sample covariance together with the sample size it came from.
///
/// `new` enforces a strictly positive diagonal. Covariances produced by
/// [`crate::simgen::sample_cov`] relax that one check so that degenerate data
/// (a constant column) can still be represented; such matrices are rejected at
/// the point of use by [`standardize`].
#[derive(Debug, Clone, PartialEq)]
pub struct CovMatrix<T> {
    s: SymMat<T>,
    n: usize,
}

impl<T: Scalar> CovMatrix<T> {
    /// Wrap an exactly-symmetric matrix. Errors if `n < 2` or any diagonal
    /// entry is not strictly positive.
    pub fn new(s: SymMat<T>, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("sample size must be at least 2, got {n}")));
        }
        for i in 0..s.dim() {
            let d = s.get(i, i);
            if !(d > T::zero()) || !d.is_finite() {
                return Err(Error::NonPositiveDiagonal {
                    index: i,
                    value: d.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(CovMatrix { s, n })
    }

    /// Wrap raw sample moments, allowing zero diagonal entries (positive
    /// semi-definite input from degenerate data). Symmetry is still exact.
    pub(crate) fn new_psd(s: SymMat<T>, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("sample size must be at least 2, got {n}")));
        }
        Ok(CovMatrix { s, n })
    }

    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mat(&self) -> &SymMat<T> {
        &self.s
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.s.get(i, j)
    }

    /// `1 - 4/n`, the diagonal-penalty coefficient induced by the sample size.
    pub fn c_n(&self) -> T {
        T::one() - fl::<T>(4.0) / crate::scalar::fl_usize::<T>(self.n)
    }

    /// Largest absolute off-diagonal sample correlation.
    pub fn max_abs_correlation(&self) -> Result<T> {
        let p = self.dim();
        let mut m = T::zero();
        for i in 0..p {
            for j in (i + 1)..p {
                let denom = (self.get(i, i) * self.get(j, j)).sqrt();
                if !(denom > T::zero()) {
                    return Err(Error::NonPositiveDiagonal {
                        index: i,
                        value: self.get(i, i).to_f64().unwrap_or(f64::NAN),
                    });
                }
                m = m.max((self.get(i, j) / denom).abs());
            }
        }
        Ok(m)
    }
}

/// Rescale a covariance to unit diagonal.
///
/// Returns the correlation-form matrix `R = diag(S)^{-1/2} S diag(S)^{-1/2}`
/// (with the diagonal set to one exactly) and the scaling vector
/// `d_i = sqrt(S_ii)`; estimates computed on `R` map back to the original
/// scale through `theta_i -> theta_i / d_i^2`.
pub fn standardize<T: Scalar>(s: &CovMatrix<T>) -> Result<(CovMatrix<T>, Vec<T>)> {
    let p = s.dim();
    let mut d = Vec::with_capacity(p);
    for i in 0..p {
        let v = s.get(i, i);
        if !(v > T::zero()) || !v.is_finite() {
            return Err(Error::NonPositiveDiagonal { index: i, value: v.to_f64().unwrap_or(f64::NAN) });
        }
        d.push(v.sqrt());
    }
    let r = SymMat::from_fn(p, |i, j| {
        if i == j {
            T::one()
        } else {
            s.get(i, j) / (d[i] * d[j])
        }
    });
    Ok((CovMatrix { s: r, n: s.n }, d))
}
