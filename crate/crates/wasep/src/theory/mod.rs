//! Closed-form and quadrature-based evaluation of the Gaussian limit
//! objects: covariance functions, the fractional-Brownian Volterra kernel,
//! heat-semigroup pairings, limiting field covariances and the macroscopic
//! transport functionals.

pub mod covmat;
pub mod grid;
pub mod quad;
pub mod semigroup;
pub mod special;
pub mod transport;
pub mod variance;
pub mod volterra;

pub use covmat::{CovMatrix, Factor};
pub use grid::{GridFunction, SpaceTimeGridFunction};
pub use variance::{current_cov, f_drift, fbm_cov, Regime, VarianceSpec};
