//! Dyadic frequency decomposition on the periodic square.
//!
//! `χ` and `φ` are radial smooth bumps with `χ + Σ_{q≥0} φ(2^{-q}·) = 1`.
//! `Δ_{-1} = χ(D)`, `Δ_q = φ(2^{-q}D)` for `q ≥ 0`, and `S_q = χ(2^{-q}D)`.
//! Frequencies are physical wavenumbers `k = 2π m / L`.

mod bernstein;
mod besov;
mod bony;
mod kernel;
mod partition;

pub use bernstein::{bernstein_report, BernsteinRecord};
pub use besov::{
    assemble, b1_inf_1_norm, besov_norm, holder_norm, holder_norm_vector, holder_value, maybe_inf,
    holder_value_vector, homogeneous_besov_norm, BesovReport, BlockNorm, Exponent,
};
pub use bony::{bony_decompose, commutator, BonyDecomposition};
pub use kernel::{a0_constant, a0_constant_with, A0Constant, A0_DEFAULT_BOX, A0_DEFAULT_N};
pub use partition::{
    build_partition, chi, phi, q_max_for, q_min_for, DyadicPartition, ANNULUS_INNER,
    ANNULUS_OUTER, CHI_SUPPORT,
};
