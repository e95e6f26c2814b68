//! Synthetic precision-matrix scenarios and Gaussian data generation.
//!
//! Sampling is deterministic per seed: normals come from a ChaCha20 stream
//! through the Box–Muller transform (see [`crate::rng`]).

use crate::cov::CovMatrix;
use crate::error::{Error, Result};
use crate::mat::{DataMat, SymMat};
use crate::rng::DetRng;
use crate::scalar::{fl, fl_usize, Scalar};

/// The four synthetic graph shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    /// Every variable tied to the first: `theta_1j = -1/sqrt(p)`.
    Star,
    /// Four equal groups, members tied to their group hub with `-2/sqrt(p)`.
    Hub,
    /// Bands at lags one and two with weights 1/2 and 1/4.
    Ar2,
    /// `floor(3p/2)` random edges, rescaled to diagonal dominance.
    Random,
}

impl ScenarioKind {
    pub fn parse(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "star" => Some(ScenarioKind::Star),
            "hub" => Some(ScenarioKind::Hub),
            "ar2" => Some(ScenarioKind::Ar2),
            "random" => Some(ScenarioKind::Random),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::Star => "star",
            ScenarioKind::Hub => "hub",
            ScenarioKind::Ar2 => "ar2",
            ScenarioKind::Random => "random",
        }
    }
}

/// A scenario instance; `seed` only matters for [`ScenarioKind::Random`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub p: usize,
    pub seed: u64,
}

impl Scenario {
    pub fn edge_count_random(&self) -> usize {
        3 * self.p / 2
    }
}

/// Build the scenario's true precision matrix (unit diagonal, exact zeros off
/// the designed support).
pub fn make_truth<T: Scalar>(sc: &Scenario) -> Result<SymMat<T>> {
    let p = sc.p;
    if p < 4 {
        return Err(Error::invalid(format!("scenarios need p >= 4, got {p}")));
    }
    match sc.kind {
        ScenarioKind::Star => {
            let w = -T::one() / fl_usize::<T>(p).sqrt();
            Ok(SymMat::from_fn(p, |i, j| {
                if i == j {
                    T::one()
                } else if i == 0 || j == 0 {
                    w
                } else {
                    T::zero()
                }
            }))
        }
        ScenarioKind::Hub => {
            if p % 4 != 0 {
                return Err(Error::invalid(format!(
                    "the hub scenario needs p divisible by 4, got {p}"
                )));
            }
            let group = p / 4;
            let w = fl::<T>(-2.0) / fl_usize::<T>(p).sqrt();
            Ok(SymMat::from_fn(p, |i, j| {
                if i == j {
                    return T::one();
                }
                let (gi, gj) = (i / group, j / group);
                let hub = gi * group;
                if gi == gj && (i == hub || j == hub) {
                    w
                } else {
                    T::zero()
                }
            }))
        }
        ScenarioKind::Ar2 => Ok(SymMat::from_fn(p, |i, j| {
            let lag = i.abs_diff(j);
            match lag {
                0 => T::one(),
                1 => fl(0.5),
                2 => fl(0.25),
                _ => T::zero(),
            }
        })),
        ScenarioKind::Random => random_truth(sc),
    }
}

/// Random scenario: pick `floor(3p/2)` unordered pairs, give them symmetric
/// weights uniform on `[-1, -0.4] ∪ [0.4, 1]`, divide each off-diagonal entry
/// by 1.1 times its column's absolute off-diagonal sum, then symmetrise by
/// averaging with the transpose.
///
/// The rescale pushes the matrix toward diagonal dominance but does not
/// guarantee it (a vertex whose neighbours all have degree one can defeat
/// it), so draws are repeated from the continuing seeded stream until the
/// Cholesky succeeds; output stays deterministic per seed.
fn random_truth<T: Scalar>(sc: &Scenario) -> Result<SymMat<T>> {
    let p = sc.p;
    let mut rng = DetRng::new(sc.seed);
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(p * (p - 1) / 2);
    for i in 0..p {
        for j in (i + 1)..p {
            pairs.push((i, j));
        }
    }
    let picked = sc.edge_count_random().min(pairs.len());

    for _ in 0..64 {
        rng.shuffle(&mut pairs);
        // Dense working copy in f64; only the final matrix is lifted to T.
        let mut w = vec![0.0f64; p * p];
        for &(i, j) in pairs.iter().take(picked) {
            let v = rng.sign() * rng.uniform_in(0.4, 1.0);
            w[i * p + j] = v;
            w[j * p + i] = v;
        }
        let mut col_sums = vec![0.0f64; p];
        for j in 0..p {
            let mut acc = 0.0;
            for i in 0..p {
                if i != j {
                    acc += w[i * p + j].abs();
                }
            }
            col_sums[j] = acc;
        }
        for i in 0..p {
            for j in 0..p {
                if i != j && col_sums[j] > 0.0 {
                    w[i * p + j] /= 1.1 * col_sums[j];
                }
            }
        }
        let candidate = SymMat::from_fn(p, |i, j| {
            if i == j {
                T::one()
            } else {
                fl(0.5 * (w[i * p + j] + w[j * p + i]))
            }
        });
        if candidate.cholesky().is_ok() {
            return Ok(candidate);
        }
    }
    Err(Error::invalid(
        "could not draw a positive-definite random scenario; dimension too adversarial",
    ))
}

/// Draw `n` i.i.d. rows from `N(0, truth^{-1})`.
pub fn sample_gaussian<T: Scalar>(truth: &SymMat<T>, n: usize, seed: u64) -> Result<DataMat<T>> {
    if n < 2 {
        return Err(Error::invalid(format!("need at least two samples, got {n}")));
    }
    let p = truth.dim();
    let sigma = truth.cholesky()?.inverse();
    let lfac = sigma.cholesky()?;
    // Lower factor of Sigma as plain f64 for the sampling loop.
    let mut l = vec![0.0f64; p * p];
    for i in 0..p {
        for j in 0..=i {
            l[i * p + j] = lfac.entry(i, j).to_f64().unwrap_or(0.0);
        }
    }
    let mut rng = DetRng::new(seed);
    let mut data = Vec::with_capacity(n * p);
    let mut z = vec![0.0f64; p];
    for _ in 0..n {
        rng.fill_normals(&mut z);
        for i in 0..p {
            let mut acc = 0.0;
            for j in 0..=i {
                acc += l[i * p + j] * z[j];
            }
            data.push(fl::<T>(acc));
        }
    }
    Ok(DataMat::from_raw(n, p, data))
}

/// Maximum-likelihood sample covariance `S = (1/n) Σ (x_t - x̄)(x_t - x̄)^T`.
///
/// The result is positive semi-definite; a constant column yields a zero
/// diagonal entry, which downstream standardisation rejects explicitly.
pub fn sample_cov<T: Scalar>(data: &DataMat<T>) -> Result<CovMatrix<T>> {
    let n = data.rows();
    if n < 2 {
        return Err(Error::invalid(format!("need at least two rows, got {n}")));
    }
    let p = data.cols();
    let means = data.column_means();
    let mut acc = SymMat::<T>::zeros(p);
    for r in 0..n {
        let row = data.row(r);
        for i in 0..p {
            let xi = row[i] - means[i];
            for j in i..p {
                let xj = row[j] - means[j];
                let cur = acc.get(i, j);
                acc.set(i, j, cur + xi * xj);
            }
        }
    }
    let inv_n = T::one() / fl_usize::<T>(n);
    CovMatrix::new_psd(SymMat::from_fn(p, |i, j| acc.get(i, j) * inv_n), n)
}
