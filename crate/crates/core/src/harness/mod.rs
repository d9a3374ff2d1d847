//! Numerical checks of the analytic estimates.
//!
//! Each registered inequality is measured over a seeded corpus of
//! Hölder-class fields; the largest observed `lhs / rhs` is its empirical
//! constant. Frozen constants feed the existence-time formulas and the
//! Gronwall envelopes replayed along solver runs.

mod contraction;
mod estimates;
mod thresholds;

pub use contraction::{
    blowup_envelope_check, contraction_report, temperature_bound_check, ContractionSummary,
    CONVERGED_GAP, MIN_RECORDS, RHO_LIMIT,
};
pub use estimates::{
    corpus_scalar, corpus_velocity, lipschitz_norm, measure_advection, measure_commutator,
    measure_holder_in_b1, measure_holder_in_linf, measure_linf_in_b0, measure_pressure,
    measure_product, measure_riesz, measure_sample, measure_temperature_gronwall,
    measure_transport_growth, measure_velocity_growth, scale_invariance, verify, verify_many,
    write_summary_csv, CorpusSpec, Estimate, EstimateReport, Measurement, ResolutionConstant,
    Sample, DEGENERATE_LHS, DYNAMIC_HORIZON, DYNAMIC_THETA_FRACTION, ESTIMATES, FROZEN_FACTOR, STABILITY_DRIFT,
};
pub use thresholds::{
    solve_implicit_time, threshold_formulas, Threshold, ThresholdConstants, ThresholdReport,
    DEFAULT_P, DEFAULT_Q, DEFAULT_S_FACTOR, ROOT_TOLERANCE,
};

use crate::error::{Error, Result};
use crate::littlewood_paley::{a0_constant, holder_value, holder_value_vector, DyadicPartition};
use crate::spectral::{SpectralField, VectorField};

/// Estimates whose frozen constants enter [`gronwall_constant`].
pub const GRONWALL_ESTIMATES: [Estimate; 3] = [
    Estimate::TransportGrowth,
    Estimate::TemperatureGronwall,
    Estimate::VelocityGrowth,
];

/// `C(r)` of the a priori bounds: the largest of the frozen transport and
/// temperature constants and twice the frozen velocity constant, the factor
/// absorbing the `2C` of the velocity growth bound. Constants are taken over
/// the samples at `r` when the corpus has any.
pub fn gronwall_constant(reports: &[EstimateReport], r: f64) -> Result<f64> {
    let frozen = |e: Estimate| {
        reports
            .iter()
            .find(|rep| rep.name == e)
            .map(|rep| rep.c_frozen_at(r))
            .ok_or_else(|| Error::InvalidParameter {
                name: "reports",
                reason: format!("missing report for {e}"),
            })
    };
    Ok(frozen(Estimate::TransportGrowth)?
        .max(frozen(Estimate::TemperatureGronwall)?)
        .max(2.0 * frozen(Estimate::VelocityGrowth)?))
}

/// Existence times for `(θ₀, u₀)` at regularity `r`, with `C(r)` taken from
/// `reports` and `a₀ = ‖F⁻¹χ‖_{L¹}`.
pub fn compute_thresholds(
    partition: &DyadicPartition,
    theta0: &SpectralField,
    u0: &VectorField,
    r: f64,
    reports: &[EstimateReport],
    constants: ThresholdConstants,
) -> Result<ThresholdReport> {
    threshold_formulas(
        holder_value(partition, theta0, r),
        holder_value_vector(partition, u0, r),
        r,
        gronwall_constant(reports, r)?,
        a0_constant().a0,
        constants,
    )
}
