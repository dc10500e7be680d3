//! Simulation and estimation toolkit for master/slave coupled quadratic maps:
//! closed-form synchronization bounds, Lyapunov-exponent and empirical-measure
//! diagnostics, correlation-integral dimension estimation, and closed-form
//! multifractal models.

pub mod dimension;
pub mod ergodic;
pub mod error;
pub mod maps;
pub mod mfmodels;
pub mod randan;
pub mod sync;

pub use error::{Error, Result};
