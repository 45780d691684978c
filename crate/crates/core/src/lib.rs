//! Finite-sample behaviour of the Pearson sample correlation coefficient `R`
//! computed from `n` bivariate Gaussian pairs with population correlation `ρ`.
//!
//! - [`gammakit`]: log-gamma, gamma ratios, κ(z).
//! - [`exactdist`]: exact density and moments via the Fisher series, with an
//!   independent quadrature oracle.
//! - [`approx`]: closed-form mean/variance approximations and bounds.
//! - [`conc`]: Bernstein and sub-Gaussian tail bounds, coverage intervals.
//! - [`mcsim`]: deterministic Monte Carlo validation.

pub mod approx;
pub mod conc;
pub mod error;
pub mod exactdist;
pub mod gammakit;
pub mod mcsim;
mod params;
pub mod quadrature;

pub use error::{Error, Result};
pub use params::ModelParams;
