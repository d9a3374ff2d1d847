//! Littlewood–Paley analysis, pseudo-spectral solvers and estimate checks for
//! the inviscid Boussinesq system on the periodic square.
//!
//! Module map:
//! - [`spectral`]: grids, transforms, Fourier multipliers, norms.
//! - [`littlewood_paley`]: dyadic partition, Besov/Hölder norms, Bony
//!   decomposition, commutators, Bernstein ratios.
//! - [`transport`]: RK4 pseudo-spectral solver for `∂ₜf + v·∇f = g`.
//! - [`boussinesq`]: direct integration, successive approximations, blow-up
//!   monitoring, test-data synthesis.
//! - [`harness`]: empirical constants, existence-time formulas, contraction
//!   and envelope checks.

pub mod boussinesq;
pub mod error;
pub mod harness;
pub mod littlewood_paley;
pub mod spectral;
pub mod transport;

pub use error::{Error, Result};
