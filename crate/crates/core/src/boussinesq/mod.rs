//! The inviscid Boussinesq system on the periodic square:
//!
//! `∂ₜθ + u·∇θ = 0`, `∂ₜu + u·∇u + ∇Π = θe₂`, `div u = 0`.
//!
//! Direct RK4 integration, successive approximations by linear transport
//! solves, blow-up monitoring, twin-run perturbation probes, and seeded
//! generators for Hölder-class test data.

mod iterate;
mod monitor;
mod presets;
mod probe;
mod state;
mod synth;

pub use iterate::{
    iterate_scheme, write_iterations_csv, IterationConfig, IterationOutcome, IterationRecord,
    IterationStatus, ThetaIndex,
};
pub use monitor::{
    blowup_integral, continuation_check, doubling_times, envelope_check, velocity_envelope,
    ContinuationReport, EnvelopeCheck, Verdict,
};
pub use presets::{Preset, PresetDefaults, PRESETS};
pub use probe::{uniqueness_probe, write_probe_csv, ProbeCurve};
pub use state::{
    direct_step, pressure_gradient, run_direct, BoussinesqState, DirectConfig, DirectRun, Kernel,
    MonitorRecord, MonitorSample,
};
pub use synth::{synthesize_holder_field, synthesize_velocity_field};
