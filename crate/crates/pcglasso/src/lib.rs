//! Scale-invariant sparse estimation of Gaussian precision matrices.
//!
//! This crate implements the partial-correlation graphical lasso (PC-GLASSO):
//! a penalised-likelihood estimator that puts an L1 penalty on the partial
//! correlations `Delta_ij = theta_ij / sqrt(theta_ii theta_jj)` and a
//! logarithmic penalty on the precision diagonal. Unlike penalties on the raw
//! precision entries, the resulting estimator commutes with rescaling of the
//! variables: `estimate(D S D) = D^{-1} estimate(S) D^{-1}` for any nonzero
//! diagonal `D`, with identical zero patterns.
//!
//! The optimisation is blockwise coordinate descent: each step exactly
//! maximises the objective over one triple `(Delta_ij, theta_ii, theta_jj)`
//! using the closed-form and stationary-point analysis in [`block_solver`],
//! with feasibility maintained through the determinant quadratic of
//! [`decomp::det_quadratic`]. Penalty paths are warm-started from the previous
//! solution ([`descent::regularization_path`]) and scored by BIC/EBIC
//! ([`selection`]). [`simgen`] generates the synthetic star/hub/AR2/random
//! scenarios used by the simulation harness, and [`metrics`] evaluates
//! estimates against a known truth.
//!
//! All numeric code is generic over the [`Scalar`] floating-point type;
//! `f64` aliases for the main types are exported at the crate root.

pub mod block_solver;
pub mod cov;
pub mod decomp;
pub mod descent;
pub mod error;
pub mod io;
pub mod mat;
pub mod metrics;
pub mod objective;
mod rng;
mod scalar;
pub mod selection;
pub mod simgen;
pub mod univariate;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Double-precision aliases for the main types.
pub type SymMat64 = mat::SymMat<f64>;
pub type DataMat64 = mat::DataMat<f64>;
pub type CovMatrix64 = cov::CovMatrix<f64>;
pub type PrecisionDecomposition64 = decomp::PrecisionDecomposition<f64>;
pub type DetQuadratic64 = decomp::DetQuadratic<f64>;
pub type BlockCoefficients64 = objective::BlockCoefficients<f64>;
pub type BlockSolution64 = block_solver::BlockSolution<f64>;
pub type DescentConfig64 = descent::DescentConfig<f64>;
pub type PathResult64 = descent::PathResult<f64>;
pub type MetricsRecord64 = metrics::MetricsRecord<f64>;

/// Single-precision aliases; provided for completeness, tolerances throughout
/// the crate target `f64`.
pub type SymMat32 = mat::SymMat<f32>;
pub type CovMatrix32 = cov::CovMatrix<f32>;
pub type PrecisionDecomposition32 = decomp::PrecisionDecomposition<f32>;
