//! BIC / EBIC model selection over a regularisation path.

use crate::cov::CovMatrix;
use crate::decomp::{recompose, PrecisionDecomposition};
use crate::descent::PathResult;
use crate::error::{Error, Result};
use crate::objective::log_likelihood;
use crate::scalar::{fl, fl_usize, Scalar};

/// Per-path-entry selection scores.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionScore<T> {
    pub rho: T,
    pub bic: T,
    pub ebic: T,
    pub edges: usize,
    pub loglik: T,
}

/// `BIC = ln(n) * #edges - 2 * loglik`, edges counted over exact-zero support
/// of the off-diagonal entries.
pub fn bic<T: Scalar>(estimate: &PrecisionDecomposition<T>, s: &CovMatrix<T>) -> Result<T> {
    let (b, _, _) = scores_for(estimate, s, T::zero())?;
    Ok(b)
}

/// `EBIC = BIC + 4 * gamma * ln(p) * #edges` with `gamma` in [0, 1].
pub fn ebic<T: Scalar>(
    estimate: &PrecisionDecomposition<T>,
    s: &CovMatrix<T>,
    gamma: T,
) -> Result<T> {
    let (_, e, _) = scores_for(estimate, s, gamma)?;
    Ok(e)
}

fn scores_for<T: Scalar>(
    estimate: &PrecisionDecomposition<T>,
    s: &CovMatrix<T>,
    gamma: T,
) -> Result<(T, T, SelectionScore<T>)> {
    if gamma < T::zero() || gamma > T::one() {
        return Err(Error::invalid("gamma must lie in [0, 1]"));
    }
    if estimate.dim() != s.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), got: estimate.dim() });
    }
    let edges = estimate.nonzero_pairs();
    let ll = log_likelihood(&recompose(estimate), s)?;
    let log_n = fl_usize::<T>(s.n()).ln();
    let two = fl::<T>(2.0);
    let b = log_n * fl_usize::<T>(edges) - two * ll;
    let e = b + fl::<T>(4.0) * gamma * fl_usize::<T>(s.dim()).ln() * fl_usize::<T>(edges);
    Ok((b, e, SelectionScore { rho: T::zero(), bic: b, ebic: e, edges, loglik: ll }))
}

/// Scores for every entry of a path.
pub fn score_path<T: Scalar>(
    path: &PathResult<T>,
    s: &CovMatrix<T>,
    gamma: T,
) -> Result<Vec<SelectionScore<T>>> {
    let mut out = Vec::with_capacity(path.len());
    for (est, &rho) in path.estimates.iter().zip(&path.rhos) {
        let (_, _, mut score) = scores_for(est, s, gamma)?;
        score.rho = rho;
        out.push(score);
    }
    Ok(out)
}

/// Indices of the BIC- and EBIC-minimising path entries. Ties break toward
/// larger penalties (the sparser side).
pub fn select<T: Scalar>(path: &PathResult<T>, s: &CovMatrix<T>, gamma: T) -> Result<(usize, usize)> {
    if path.is_empty() {
        return Err(Error::invalid("cannot select from an empty path"));
    }
    let scores = score_path(path, s, gamma)?;
    let mut best_bic = 0usize;
    let mut best_ebic = 0usize;
    for (k, sc) in scores.iter().enumerate() {
        if sc.bic <= scores[best_bic].bic {
            best_bic = k;
        }
        if sc.ebic <= scores[best_ebic].ebic {
            best_ebic = k;
        }
    }
    Ok((best_bic, best_ebic))
}
