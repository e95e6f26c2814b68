//! Evaluation against a known truth (KL loss, Frobenius distance, confusion
//! counts, MCC) and held-out likelihood for real data.

use crate::decomp::{recompose, PrecisionDecomposition};
use crate::error::{Error, Result};
use crate::mat::{DataMat, SymMat};
use crate::objective::log_likelihood;
use crate::cov::CovMatrix;
use crate::scalar::{fl_usize, Scalar};

/// Edge-selection confusion counts over unordered pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Confusion {
    pub tp: usize,
    pub tn: usize,
    pub fp: usize,
    pub fneg: usize,
}

/// Bundle of the evaluation metrics for one estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsRecord<T> {
    pub kl: T,
    pub fnorm: T,
    pub mcc: T,
    pub sensitivity: T,
    pub specificity: T,
    pub counts: Confusion,
}

/// Gaussian KL loss `-ln det E + tr(E T^{-1}) + ln det T - p` between the true
/// precision `T` and the estimate `E`; zero exactly when they coincide.
pub fn kl_loss<T: Scalar>(truth: &SymMat<T>, est: &SymMat<T>) -> Result<T> {
    let p = truth.dim();
    if est.dim() != p {
        return Err(Error::DimensionMismatch { expected: p, got: est.dim() });
    }
    let truth_inv = truth.cholesky()?.inverse();
    let ld_est = est.cholesky()?.log_det();
    let ld_truth = truth.cholesky()?.log_det();
    Ok(-ld_est + est.trace_product(&truth_inv) + ld_truth - fl_usize::<T>(p))
}

/// Confusion counts reading both supports from exact zeros.
pub fn confusion<T: Scalar>(truth: &SymMat<T>, est: &PrecisionDecomposition<T>) -> Result<Confusion> {
    let p = truth.dim();
    if est.dim() != p {
        return Err(Error::DimensionMismatch { expected: p, got: est.dim() });
    }
    let mut c = Confusion { tp: 0, tn: 0, fp: 0, fneg: 0 };
    for i in 0..p {
        for j in (i + 1)..p {
            let edge_true = truth.get(i, j) != T::zero();
            let edge_est = est.delta().get(i, j) != T::zero();
            match (edge_true, edge_est) {
                (true, true) => c.tp += 1,
                (false, false) => c.tn += 1,
                (false, true) => c.fp += 1,
                (true, false) => c.fneg += 1,
            }
        }
    }
    Ok(c)
}

/// Matthews correlation coefficient; 0 whenever a denominator factor
/// vanishes.
pub fn mcc<T: Scalar>(tp: usize, tn: usize, fp: usize, fneg: usize) -> T {
    let [tp, tn, fp, fneg] = [tp, tn, fp, fneg].map(fl_usize::<T>);
    let denom = (tp + fp) * (tp + fneg) * (tn + fp) * (tn + fneg);
    if denom == T::zero() {
        return T::zero();
    }
    (tp * tn - fp * fneg) / denom.sqrt()
}

pub fn sensitivity<T: Scalar>(c: &Confusion) -> T {
    ratio(c.tp, c.tp + c.fneg)
}

pub fn specificity<T: Scalar>(c: &Confusion) -> T {
    ratio(c.tn, c.tn + c.fp)
}

fn ratio<T: Scalar>(num: usize, den: usize) -> T {
    if den == 0 {
        T::zero()
    } else {
        fl_usize::<T>(num) / fl_usize::<T>(den)
    }
}

/// Frobenius distance between two matrices of equal shape.
pub fn frobenius<T: Scalar>(a: &SymMat<T>, b: &SymMat<T>) -> Result<T> {
    let p = a.dim();
    if b.dim() != p {
        return Err(Error::DimensionMismatch { expected: p, got: b.dim() });
    }
    let mut acc = T::zero();
    for i in 0..p {
        for j in 0..p {
            let d = a.get(i, j) - b.get(i, j);
            acc += d * d;
        }
    }
    Ok(acc.sqrt())
}

/// Held-out log-likelihood: the Gaussian log-likelihood with the covariance
/// replaced by the test second-moment matrix about `center` (the training
/// mean) and the sample size replaced by the number of test rows.
pub fn holdout_loglik<T: Scalar>(
    est: &PrecisionDecomposition<T>,
    test_data: &DataMat<T>,
    center: &[T],
) -> Result<T> {
    let p = est.dim();
    if test_data.cols() != p {
        return Err(Error::DimensionMismatch { expected: p, got: test_data.cols() });
    }
    if center.len() != p {
        return Err(Error::DimensionMismatch { expected: p, got: center.len() });
    }
    let k = test_data.rows();
    let mut second = SymMat::<T>::zeros(p);
    for r in 0..k {
        let row = test_data.row(r);
        for i in 0..p {
            let xi = row[i] - center[i];
            for j in i..p {
                let xj = row[j] - center[j];
                let cur = second.get(i, j);
                second.set(i, j, cur + xi * xj);
            }
        }
    }
    let inv_k = T::one() / fl_usize::<T>(k);
    let second = SymMat::from_fn(p, |i, j| second.get(i, j) * inv_k);
    let s = CovMatrix::new_psd(second, k.max(2))?;
    // log_likelihood carries n/2 from the covariance container; evaluate with
    // the true row count, including the k = 1 edge case.
    let ll_per_two = log_likelihood(&recompose(est), &s)? / fl_usize::<T>(s.n());
    Ok(ll_per_two * fl_usize::<T>(k))
}

impl<T: Scalar> MetricsRecord<T> {
    /// Evaluate all truth-based metrics for one estimate.
    pub fn compute(truth: &SymMat<T>, est: &PrecisionDecomposition<T>) -> Result<Self> {
        let est_mat = recompose(est);
        let counts = confusion(truth, est)?;
        Ok(MetricsRecord {
            kl: kl_loss(truth, &est_mat)?,
            fnorm: frobenius(truth, &est_mat)?,
            mcc: mcc(counts.tp, counts.tn, counts.fp, counts.fneg),
            sensitivity: sensitivity(&counts),
            specificity: specificity(&counts),
            counts,
        })
    }
}
