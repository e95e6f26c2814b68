//! Decomposition of a precision matrix into diagonal precisions and partial
//! correlations, plus the determinant quadratic used by the block solver.
//!
//! A positive-definite precision matrix `Theta` factors as
//! `Theta = diag(theta)^{1/2} * Delta * diag(theta)^{1/2}` where `Delta` has
//! unit diagonal and off-diagonal entries equal to the negated partial
//! correlations. The solver's state is kept in this `(theta, Delta)` form.

use crate::error::{Error, Result};
use crate::mat::SymMat;
use crate::scalar::{fl, Scalar};

/// Diagonal precisions plus the unit-diagonal partial-correlation matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionDecomposition<T> {
    theta: Vec<T>,
    delta: SymMat<T>,
}

impl<T: Scalar> PrecisionDecomposition<T> {
    /// Validates positivity of `theta`, an exact unit diagonal and strict
    /// `|Delta_ij| < 1`, and positive definiteness of `delta`.
    pub fn new(theta: Vec<T>, delta: SymMat<T>) -> Result<Self> {
        let p = theta.len();
        if delta.dim() != p {
            return Err(Error::DimensionMismatch { expected: p, got: delta.dim() });
        }
        for (i, &t) in theta.iter().enumerate() {
            if !(t > T::zero()) || !t.is_finite() {
                return Err(Error::NonPositiveDiagonal {
                    index: i,
                    value: t.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        for i in 0..p {
            if delta.get(i, i) != T::one() {
                return Err(Error::invalid(format!("delta diagonal entry {i} is not exactly 1")));
            }
            for j in (i + 1)..p {
                if !(delta.get(i, j).abs() < T::one()) {
                    return Err(Error::invalid(format!(
                        "partial correlation ({i},{j}) is not inside (-1, 1)"
                    )));
                }
            }
        }
        delta.cholesky()?;
        Ok(PrecisionDecomposition { theta, delta })
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    pub fn theta(&self) -> &[T] {
        &self.theta
    }

    pub fn delta(&self) -> &SymMat<T> {
        &self.delta
    }

    pub fn into_parts(self) -> (Vec<T>, SymMat<T>) {
        (self.theta, self.delta)
    }

    /// Number of structurally nonzero off-diagonal pairs (i < j). Entries
    /// zeroed by the solver are stored as exact `0.0`, so no threshold is
    /// involved.
    pub fn nonzero_pairs(&self) -> usize {
        let p = self.dim();
        let mut count = 0;
        for i in 0..p {
            for j in (i + 1)..p {
                if self.delta.get(i, j) != T::zero() {
                    count += 1;
                }
            }
        }
        count
    }

    /// Exact-zero support pattern over pairs i < j, row-major.
    pub fn support(&self) -> Vec<bool> {
        let p = self.dim();
        let mut s = Vec::with_capacity(p * (p - 1) / 2);
        for i in 0..p {
            for j in (i + 1)..p {
                s.push(self.delta.get(i, j) != T::zero());
            }
        }
        s
    }

    /// Map an estimate on standardised data back to the original scale:
    /// `Theta -> diag(d)^{-1} Theta diag(d)^{-1}` leaves `Delta` unchanged and
    /// divides each `theta_i` by `d_i^2`.
    pub fn rescale(&self, d: &[T]) -> Result<Self> {
        if d.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: d.len() });
        }
        let theta = self
            .theta
            .iter()
            .zip(d)
            .map(|(&t, &di)| t / (di * di))
            .collect();
        PrecisionDecomposition::new(theta, self.delta.clone())
    }
}

/// Split a symmetric positive-definite matrix into its decomposition.
pub fn decompose<T: Scalar>(theta_matrix: &SymMat<T>) -> Result<PrecisionDecomposition<T>> {
    let p = theta_matrix.dim();
    let mut theta = Vec::with_capacity(p);
    for i in 0..p {
        let d = theta_matrix.get(i, i);
        if !(d > T::zero()) || !d.is_finite() {
            return Err(Error::NotPositiveDefinite { pivot: i });
        }
        theta.push(d);
    }
    let delta = SymMat::from_fn(p, |i, j| {
        if i == j {
            T::one()
        } else {
            theta_matrix.get(i, j) / (theta[i] * theta[j]).sqrt()
        }
    });
    // Report indefiniteness with the failing pivot rather than tripping the
    // |Delta| < 1 validation, which is the same defect in another guise.
    delta.cholesky()?;
    PrecisionDecomposition::new(theta, delta)
}

/// Reassemble the precision matrix `Theta_ij = Delta_ij sqrt(theta_i theta_j)`.
pub fn recompose<T: Scalar>(d: &PrecisionDecomposition<T>) -> SymMat<T> {
    let sqrt_theta: Vec<T> = d.theta().iter().map(|t| t.sqrt()).collect();
    SymMat::from_fn(d.dim(), |i, j| {
        if i == j {
            d.theta()[i]
        } else {
            d.delta().get(i, j) * sqrt_theta[i] * sqrt_theta[j]
        }
    })
}

/// `det Delta` as a quadratic in one off-diagonal entry, with the feasible
/// interval on which the matrix stays positive definite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetQuadratic<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    /// Feasible interval endpoints; open interval, already shrunk by a small
    /// margin so that iterates stay strictly interior.
    pub l: T,
    pub u: T,
}

impl<T: Scalar> DetQuadratic<T> {
    #[inline]
    pub fn value(&self, x: T) -> T {
        (self.a * x + self.b) * x + self.c
    }

    #[inline]
    pub fn contains(&self, x: T) -> bool {
        x > self.l && x < self.u
    }
}

/// Endpoint margin keeping iterates strictly inside the feasible interval.
const INTERVAL_MARGIN: f64 = 1e-9;

/// Fit `det Delta` as a quadratic in the (i, j) entry and derive the feasible
/// interval `{x : det > 0} ∩ (-1, 1)`.
///
/// Determinants are evaluated by Cholesky at three symmetric probe points
/// (centered at 0 when feasible, otherwise at the current entry), the
/// coefficients recovered from the centered differences, and the fit checked
/// against a fourth probe.
pub fn det_quadratic<T: Scalar>(
    d: &PrecisionDecomposition<T>,
    i: usize,
    j: usize,
) -> Result<DetQuadratic<T>> {
    det_quadratic_raw(d.delta(), i, j)
}

pub(crate) fn det_quadratic_raw<T: Scalar>(
    delta: &SymMat<T>,
    i: usize,
    j: usize,
) -> Result<DetQuadratic<T>> {
    let p = delta.dim();
    if i >= j || j >= p {
        return Err(Error::invalid(format!("block indices must satisfy i < j < p, got ({i},{j})")));
    }
    let x0 = delta.get(i, j);
    let mut work = delta.clone();
    let probe = |x: T, work: &mut SymMat<T>| -> Option<T> {
        work.set(i, j, x);
        work.cholesky().ok().map(|ch| ch.det())
    };

    // Probe around 0 first; fall back to the current entry (always feasible)
    // with a shrinking half-width.
    let mut chosen: Option<(T, T, [T; 3])> = None; // (center, h, [d-, d0, d+])
    'outer: for center in [T::zero(), x0] {
        let d0 = match probe(center, &mut work) {
            Some(v) => v,
            None => continue,
        };
        let mut h = fl::<T>(0.5);
        for _ in 0..40 {
            if let (Some(dm), Some(dp)) =
                (probe(center - h, &mut work), probe(center + h, &mut work))
            {
                chosen = Some((center, h, [dm, d0, dp]));
                break 'outer;
            }
            h = h * fl::<T>(0.5);
            if h < fl::<T>(1e-7) {
                break;
            }
        }
    }
    let (center, h, dets) = chosen.ok_or(Error::DegenerateQuadratic { i, j })?;
    let [dm, d0, dp] = dets;
    let two = fl::<T>(2.0);

    // Centered-difference fit: det(center + t) = a t^2 + bc t + d0.
    let a = (dp + dm - two * d0) / (two * h * h);
    let bc = (dp - dm) / (two * h);
    let b = bc - two * a * center;
    let c = d0 - bc * center + a * center * center;

    let scale = d0.abs().max(dm.abs()).max(dp.abs());
    // The x^2 coefficient equals minus the determinant of the complementary
    // principal minor, so it must be clearly negative for a healthy state.
    if !(a < -fl::<T>(1e-13) * scale.max(T::one())) {
        return Err(Error::DegenerateQuadratic { i, j });
    }

    // Check the fit at a fourth probe point between the center and +h probes.
    let x4 = center + h * fl::<T>(0.5);
    let d4 = probe(x4, &mut work).ok_or(Error::DegenerateQuadratic { i, j })?;
    let pred = (a * x4 + b) * x4 + c;
    let tol = (fl::<T>(1e-9) * d4.abs()).max(fl::<T>(1e-12) * scale);
    if (pred - d4).abs() > tol {
        return Err(Error::DegenerateQuadratic { i, j });
    }

    // Roots of a concave quadratic that is positive somewhere are always real.
    let disc = b * b - fl::<T>(4.0) * a * c;
    if !(disc > T::zero()) {
        return Err(Error::DegenerateQuadratic { i, j });
    }
    let sq = disc.sqrt();
    let r1 = (-b + sq) / (two * a);
    let r2 = (-b - sq) / (two * a);
    let (rlo, rhi) = if r1 < r2 { (r1, r2) } else { (r2, r1) };

    let margin = fl::<T>(INTERVAL_MARGIN);
    let l = rlo.max(-T::one()) + margin;
    let u = rhi.min(T::one()) - margin;
    if !(l < u) {
        return Err(Error::EmptyFeasibleInterval);
    }
    Ok(DetQuadratic { a, b, c, l, u })
}
