use std::io::Write;

use serde::{Deserialize, Serialize};

use super::state::{direct_step, BoussinesqState, Kernel};
use crate::error::{Error, Result};
use crate::littlewood_paley::{holder_value, holder_value_vector, DyadicPartition};
use crate::spectral::SpectralField;
use crate::transport::step_sizes;

/// Gap between a reference run and one run with `θ₀ + ε δθ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeCurve {
    pub eps: f64,
    pub t: Vec<f64>,
    /// `‖θ¹ − θ²‖_{C^{r−1}}(t)`.
    pub theta_gap: Vec<f64>,
    /// `‖u¹ − u²‖_{C^{r−1}}(t)`.
    pub u_gap: Vec<f64>,
    /// `‖u¹(t)‖_r` of the reference run.
    pub u_r: Vec<f64>,
}

impl ProbeCurve {
    pub fn terminal_gap(&self) -> f64 {
        let i = self.t.len() - 1;
        self.theta_gap[i].max(self.u_gap[i])
    }
}

/// Runs the reference state and one perturbed twin per `eps` in lockstep.
/// `direction` is rescaled to unit `C^{r−1}` norm.
pub fn uniqueness_probe(
    partition: &DyadicPartition,
    state0: &BoussinesqState,
    direction: &SpectralField,
    eps: &[f64],
    r: f64,
    horizon: f64,
    dt: f64,
) -> Result<Vec<ProbeCurve>> {
    let s = r - 1.0;
    let size = holder_value(partition, direction, s);
    if size.is_nan() || size <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "direction",
            reason: "perturbation direction is zero".into(),
        });
    }
    let unit = direction.scale(1.0 / size);
    let steps = step_sizes(horizon, dt)?;
    let mut base = state0.clone();
    let mut twins: Vec<BoussinesqState> = eps
        .iter()
        .map(|&e| BoussinesqState {
            theta: state0.theta.axpy(e, &unit),
            u: state0.u.clone(),
            t: state0.t,
        })
        .collect();
    let mut curves: Vec<ProbeCurve> = eps
        .iter()
        .map(|&e| ProbeCurve {
            eps: e,
            t: Vec::new(),
            theta_gap: Vec::new(),
            u_gap: Vec::new(),
            u_r: Vec::new(),
        })
        .collect();
    let mut record = |base: &BoussinesqState, twins: &[BoussinesqState]| {
        let u_r = holder_value_vector(partition, &base.u, r);
        for (curve, twin) in curves.iter_mut().zip(twins) {
            curve.t.push(base.t);
            curve.theta_gap.push(holder_value(partition, &(&twin.theta - &base.theta), s));
            curve.u_gap.push(holder_value_vector(partition, &twin.u.axpy(-1.0, &base.u), s));
            curve.u_r.push(u_r);
        }
    };
    record(&base, &twins);
    for dt in steps {
        base = direct_step(&base, dt, Kernel::Boussinesq)?;
        for twin in twins.iter_mut() {
            *twin = direct_step(twin, dt, Kernel::Boussinesq)?;
        }
        record(&base, &twins);
    }
    Ok(curves)
}

/// Writes one row per time and perturbation size.
pub fn write_probe_csv(curves: &[ProbeCurve], mut out: impl Write) -> Result<()> {
    writeln!(out, "eps,t,theta_gap,u_gap,u_r")?;
    for c in curves {
        for i in 0..c.t.len() {
            writeln!(out, "{},{},{},{},{}", c.eps, c.t[i], c.theta_gap[i], c.u_gap[i], c.u_r[i])?;
        }
    }
    Ok(())
}
