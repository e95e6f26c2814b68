//! Dense symmetric matrices and the Cholesky-based kernels built on them.
//!
//! Dimensions here are small (tens of variables), so everything is stored
//! densely and factorisations are recomputed rather than updated.

use crate::error::{Error, Result};
use crate::scalar::{fl, Scalar};

/// Dense symmetric matrix. `set` writes both mirror entries, so the stored
/// data is symmetric exactly, not merely within a tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMat<T> {
    p: usize,
    data: Vec<T>,
}

impl<T: Scalar> SymMat<T> {
    pub fn zeros(p: usize) -> Self {
        SymMat { p, data: vec![T::zero(); p * p] }
    }

    pub fn identity(p: usize) -> Self {
        let mut m = Self::zeros(p);
        for i in 0..p {
            m.data[i * p + i] = T::one();
        }
        m
    }

    pub fn from_fn(p: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(p);
        for i in 0..p {
            m.data[i * p + i] = f(i, i);
            for j in (i + 1)..p {
                let v = f(i, j);
                m.data[i * p + j] = v;
                m.data[j * p + i] = v;
            }
        }
        m
    }

    /// Build from row-major dense input, checking squareness and symmetry
    /// within `tol` (absolute). Mirror entries are averaged so the stored
    /// matrix is exactly symmetric.
    pub fn try_from_rows(rows: &[Vec<T>], tol: T) -> Result<Self> {
        let p = rows.len();
        for r in rows {
            if r.len() != p {
                return Err(Error::NotSquare { rows: p, cols: r.len() });
            }
        }
        let half = fl::<T>(0.5);
        let mut m = Self::zeros(p);
        for i in 0..p {
            if !rows[i][i].is_finite() {
                return Err(Error::invalid(format!("non-finite entry at ({i},{i})")));
            }
            m.data[i * p + i] = rows[i][i];
            for j in (i + 1)..p {
                let (a, b) = (rows[i][j], rows[j][i]);
                if !a.is_finite() || !b.is_finite() {
                    return Err(Error::invalid(format!("non-finite entry at ({i},{j})")));
                }
                let dev = (a - b).abs();
                if dev > tol {
                    return Err(Error::NotSymmetric {
                        i,
                        j,
                        deviation: dev.to_f64().unwrap_or(f64::NAN),
                    });
                }
                let v = (a + b) * half;
                m.data[i * p + j] = v;
                m.data[j * p + i] = v;
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.p + j]
    }

    /// Set the (i, j) and (j, i) entries.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.p + j] = v;
        self.data[j * self.p + i] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.p..(i + 1) * self.p]
    }

    pub fn add_ridge(&self, alpha: T) -> Self {
        let mut out = self.clone();
        for i in 0..self.p {
            out.data[i * self.p + i] += alpha;
        }
        out
    }

    /// Congruence with a diagonal matrix: `diag(d) * self * diag(d)`.
    pub fn scale_by_diag(&self, d: &[T]) -> Self {
        assert_eq!(d.len(), self.p);
        Self::from_fn(self.p, |i, j| self.get(i, j) * d[i] * d[j])
    }

    pub fn trace(&self) -> T {
        (0..self.p).map(|i| self.get(i, i)).sum()
    }

    /// Trace of the product of two symmetric matrices: `tr(A B)`.
    pub fn trace_product(&self, other: &Self) -> T {
        assert_eq!(self.p, other.p);
        let mut acc = T::zero();
        for (a, b) in self.data.iter().zip(other.data.iter()) {
            acc += *a * *b;
        }
        acc
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Maximum absolute column sum (the induced 1-norm).
    pub fn norm_one(&self) -> T {
        (0..self.p)
            .map(|j| (0..self.p).map(|i| self.get(i, j).abs()).sum::<T>())
            .fold(T::zero(), |m, v| m.max(v))
    }

    /// Cholesky factorisation `A = L L^T`. Fails with the index of the first
    /// pivot at or below `1e-12 * max(diag)`, the positive-definiteness
    /// tolerance used throughout the crate.
    pub fn cholesky(&self) -> Result<Cholesky<T>> {
        let p = self.p;
        let max_diag = (0..p).map(|i| self.get(i, i)).fold(T::zero(), |m, v| m.max(v.abs()));
        let tol = fl::<T>(1e-12) * max_diag;
        let mut l = vec![T::zero(); p * p];
        for j in 0..p {
            let mut d = self.get(j, j);
            for k in 0..j {
                d -= l[j * p + k] * l[j * p + k];
            }
            if !(d > tol) || !d.is_finite() {
                return Err(Error::NotPositiveDefinite { pivot: j });
            }
            let ljj = d.sqrt();
            l[j * p + j] = ljj;
            for i in (j + 1)..p {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= l[i * p + k] * l[j * p + k];
                }
                l[i * p + j] = s / ljj;
            }
        }
        Ok(Cholesky { p, l })
    }

    /// Determinant via Cholesky; errors when the matrix is not positive
    /// definite.
    pub fn det_pd(&self) -> Result<T> {
        Ok(self.cholesky()?.det())
    }
}

/// Lower-triangular Cholesky factor.
#[derive(Debug, Clone)]
pub struct Cholesky<T> {
    p: usize,
    l: Vec<T>,
}

impl<T: Scalar> Cholesky<T> {
    #[inline]
    fn at(&self, i: usize, j: usize) -> T {
        self.l[i * self.p + j]
    }

    /// Entry of the lower factor (zero above the diagonal).
    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> T {
        if j > i {
            T::zero()
        } else {
            self.at(i, j)
        }
    }

    pub fn log_det(&self) -> T {
        let two = fl::<T>(2.0);
        (0..self.p).map(|i| self.at(i, i).ln()).sum::<T>() * two
    }

    pub fn det(&self) -> T {
        let mut d = T::one();
        for i in 0..self.p {
            let v = self.at(i, i);
            d = d * v * v;
        }
        d
    }

    /// Inverse of the factored matrix, assembled symmetrically.
    pub fn inverse(&self) -> SymMat<T> {
        let p = self.p;
        // Invert L by forward substitution, column by column.
        let mut linv = vec![T::zero(); p * p];
        for j in 0..p {
            linv[j * p + j] = T::one() / self.at(j, j);
            for i in (j + 1)..p {
                let mut s = T::zero();
                for k in j..i {
                    s -= self.at(i, k) * linv[k * p + j];
                }
                linv[i * p + j] = s / self.at(i, i);
            }
        }
        // A^{-1} = L^{-T} L^{-1}; entry (i,j) = sum_k linv[k,i] * linv[k,j].
        SymMat::from_fn(p, |i, j| {
            let mut s = T::zero();
            for k in i.max(j)..p {
                s += linv[k * p + i] * linv[k * p + j];
            }
            s
        })
    }
}

/// Log-determinant of a symmetric positive-definite matrix, computed as twice
/// the log-sum of the Cholesky pivots.
pub fn log_det<T: Scalar>(m: &SymMat<T>) -> Result<T> {
    Ok(m.cholesky()?.log_det())
}

/// Row-major rectangular data matrix (observations by variables).
#[derive(Debug, Clone, PartialEq)]
pub struct DataMat<T> {
    n: usize,
    p: usize,
    data: Vec<T>,
}

impl<T: Scalar> DataMat<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::invalid("data matrix has no rows"));
        }
        let p = rows[0].len();
        if p == 0 {
            return Err(Error::invalid("data matrix has no columns"));
        }
        let mut data = Vec::with_capacity(n * p);
        for (idx, r) in rows.into_iter().enumerate() {
            if r.len() != p {
                return Err(Error::invalid(format!(
                    "row {idx} has {} fields, expected {p}",
                    r.len()
                )));
            }
            data.extend(r);
        }
        Ok(DataMat { n, p, data })
    }

    pub(crate) fn from_raw(n: usize, p: usize, data: Vec<T>) -> Self {
        debug_assert_eq!(data.len(), n * p);
        DataMat { n, p, data }
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.p..(i + 1) * self.p]
    }

    pub fn column_means(&self) -> Vec<T> {
        let mut means = vec![T::zero(); self.p];
        for i in 0..self.n {
            for (m, v) in means.iter_mut().zip(self.row(i)) {
                *m += *v;
            }
        }
        let inv_n = T::one() / crate::scalar::fl_usize::<T>(self.n);
        for m in &mut means {
            *m *= inv_n;
        }
        means
    }

    /// Scale column `j` of every row by `d[j]`.
    pub fn scale_columns(&self, d: &[T]) -> Self {
        assert_eq!(d.len(), self.p);
        let mut out = self.clone();
        for i in 0..self.n {
            for j in 0..self.p {
                out.data[i * self.p + j] *= d[j];
            }
        }
        out
    }
}
