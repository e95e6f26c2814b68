//! Seeded random instances: correlation matrices, decomposition states and
//! block-coefficient instances spanning the solver's regimes.

use super::TestRng;
use pcglasso::cov::{standardize, CovMatrix};
use pcglasso::decomp::{decompose, PrecisionDecomposition};
use pcglasso::mat::SymMat;
use pcglasso::objective::{block_coefficients, BlockCoefficients};

/// The 4x4 covariance whose correlation matrix is exchangeable in variables
/// 2..4: off-diagonals (1/sqrt2, 1/sqrt2, 1/sqrt2, 0.5, 0.5, 0.5), the inverse
/// being a star precision with theta = (1, 1, 4, 1).
pub fn exchangeable_cov(n: usize) -> CovMatrix<f64> {
    let rows = vec![
        vec![4.0, 2.0, 1.0, 2.0],
        vec![2.0, 2.0, 0.5, 1.0],
        vec![1.0, 0.5, 0.5, 0.5],
        vec![2.0, 1.0, 0.5, 2.0],
    ];
    CovMatrix::new(SymMat::try_from_rows(&rows, 1e-10).unwrap(), n).unwrap()
}

/// Random symmetric positive-definite matrix `A^T A / k + eps I`.
pub fn random_spd(rng: &mut TestRng, p: usize, eps: f64) -> SymMat<f64> {
    let k = p + 3;
    let a: Vec<Vec<f64>> = (0..k)
        .map(|_| (0..p).map(|_| rng.normal()).collect())
        .collect();
    SymMat::from_fn(p, |i, j| {
        let mut s = if i == j { eps } else { 0.0 };
        for row in &a {
            s += row[i] * row[j] / k as f64;
        }
        s
    })
}

/// Random unit-diagonal covariance (a correlation matrix), with off-diagonal
/// magnitudes softly capped by shrinking toward the identity.
pub fn random_correlation(rng: &mut TestRng, p: usize, n: usize, cap: f64) -> CovMatrix<f64> {
    let spd = random_spd(rng, p, 0.15);
    let cov = CovMatrix::new(spd, n).unwrap();
    let (r, _) = standardize(&cov).unwrap();
    let mut max_off: f64 = 0.0;
    for i in 0..p {
        for j in (i + 1)..p {
            max_off = max_off.max(r.get(i, j).abs());
        }
    }
    let lambda = if max_off > cap { cap / max_off } else { 1.0 };
    let shrunk = SymMat::from_fn(p, |i, j| if i == j { 1.0 } else { lambda * r.get(i, j) });
    CovMatrix::new(shrunk, n).unwrap()
}

/// Random decomposition state with unit-diagonal Delta from a random SPD
/// matrix and log-uniform diagonal precisions.
pub fn random_state(rng: &mut TestRng, p: usize) -> PrecisionDecomposition<f64> {
    let spd = random_spd(rng, p, 0.2);
    let base = decompose(&spd).unwrap();
    let theta: Vec<f64> = (0..p).map(|_| (rng.range(-1.2, 1.2)).exp()).collect();
    PrecisionDecomposition::new(theta, base.delta().clone()).unwrap()
}

/// Which corner of the solver a generated instance should exercise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockRegime {
    /// Zero feasible (`c > 0`), generic coupling.
    Interior,
    /// Feasible interval excludes zero (`c <= 0`).
    ShiftedInterval,
    /// Exactly decoupled covariance entry (`c12 = 0`).
    Separable,
}

/// One block-coefficient instance built from a genuine decomposition state,
/// so the determinant quadratic is always coherent.
pub fn random_block_instance(
    rng: &mut TestRng,
    regime: BlockRegime,
    rho: f64,
) -> BlockCoefficients<f64> {
    match regime {
        BlockRegime::Interior | BlockRegime::Separable => {
            let p = 3 + rng.below(3);
            let d = random_state(rng, p);
            let n = 6 + rng.below(5000);
            let mut s = random_correlation(rng, p, n, 0.9);
            if regime == BlockRegime::Separable {
                let mut m = SymMat::from_fn(p, |i, j| s.get(i, j));
                m.set(0, 1, 0.0);
                s = CovMatrix::new(m, n).unwrap();
            }
            block_coefficients(&d, &s, 0, 1, rho).unwrap()
        }
        BlockRegime::ShiftedInterval => {
            // p = 3 with strong common coupling: det(x) at x = 0 equals
            // 1 - 2 nu^2 < 0 once nu > 1/sqrt(2).
            let nu = rng.range(0.75, 0.92);
            let lo = 2.0 * nu * nu - 1.0; // smaller root of -x^2 + 2nu^2 x - (2nu^2 - 1)
            let x0 = rng.range(lo + 0.05 * (1.0 - lo), 0.95); // interior current value
            let delta = SymMat::from_fn(3, |i, j| match (i, j) {
                _ if i == j => 1.0,
                (0, 1) | (1, 0) => x0,
                _ => nu,
            });
            let theta: Vec<f64> = (0..3).map(|_| (rng.range(-0.8, 0.8)).exp()).collect();
            let d = PrecisionDecomposition::new(theta, delta).unwrap();
            let n = 6 + rng.below(5000);
            let s = random_correlation(rng, 3, n, 0.9);
            block_coefficients(&d, &s, 0, 1, rho).unwrap()
        }
    }
}

/// A deterministic mixed batch covering all regimes and both penalty ranges.
pub fn block_instance_batch(seed: u64, count: usize) -> Vec<BlockCoefficients<f64>> {
    let mut rng = TestRng::new(seed);
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let regime = match k % 5 {
            0 | 1 => BlockRegime::Interior,
            2 => BlockRegime::ShiftedInterval,
            3 => BlockRegime::Separable,
            _ => BlockRegime::Interior,
        };
        let rho = match k % 4 {
            0 => 0.0,
            1 => rng.range(0.01, 0.3),
            2 => rng.range(0.3, 1.2),
            _ => rng.range(2.0, 8.0),
        };
        out.push(random_block_instance(&mut rng, regime, rho));
    }
    out
}

/// Random diagonal with magnitudes in [0.2, 5] and at least one negative
/// entry.
pub fn random_signed_diagonal(rng: &mut TestRng, p: usize) -> Vec<f64> {
    let mut d: Vec<f64> = (0..p)
        .map(|_| rng.sign() * (rng.range(0.2f64.ln(), 5.0f64.ln())).exp())
        .collect();
    if d.iter().all(|&v| v > 0.0) {
        let k = rng.below(p);
        d[k] = -d[k];
    }
    d
}
