//! Periodic-domain field arithmetic on the 2-torus `[0, L)²`.
//!
//! Fields are stored as full `n × n` arrays of Fourier coefficients using the
//! mean-normalized convention documented on [`SpectralField`]. All Fourier
//! multipliers here are exact on the torus; the zero mode of every inverse
//! Laplacian is set to 0.

mod field;
mod grid;
mod ops;
mod snapshot;
mod vector;

pub use field::{Axis, SpectralField};
pub use grid::{make_grid, Grid};
pub use ops::{
    coefficient_l2_norm, dealias, derivative, is_dealiased, is_resolved, linf_norm, lp_norm,
    lp_norm_of_values, max_abs, product,
};
pub use snapshot::{load_snapshot, read_snapshot, save_snapshot, write_snapshot, SnapshotHeader};
pub use vector::{
    advect, advect_values, advect_vector, grad_inv_laplacian_div, grad_inv_laplacian_partial,
    leray_project, VectorField, VectorValues, DIVERGENCE_ABSOLUTE_TOL, DIVERGENCE_RELATIVE_TOL,
};
