//! Exact stochastic simulation of the one-dimensional weakly asymmetric
//! simple exclusion process (WASEP) on a periodic ring, together with the
//! closed-form Gaussian fluctuation theory of its current, tagged particle
//! and density field, and the moderate-deviation rate functionals that
//! govern them.
//!
//! The crate is organised in four layers:
//!
//! * [`process`] — kinetic Monte Carlo dynamics with bit-exact bookkeeping
//!   of bond currents, the tagged particle and density fields;
//! * [`theory`] — special functions, the fractional-Brownian Volterra
//!   kernel, limiting covariance functions and Gaussian samplers;
//! * [`rates`] — quadratic-form and path-space rate functionals;
//! * [`harness`] — ensemble orchestration, statistics, verification suites
//!   and file output.

pub mod error;
pub mod harness;
pub mod process;
pub mod rates;
pub mod rng;
pub mod theory;

pub use error::{Error, Result};
