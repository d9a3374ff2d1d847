use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::littlewood_paley::{holder_value, holder_value_vector, DyadicPartition};
use crate::spectral::{
    advect_values, advect_vector, coefficient_l2_norm, grad_inv_laplacian_div,
    grad_inv_laplacian_partial, leray_project, Axis, SpectralField, VectorField, VectorValues,
};
use crate::transport::{check_cfl, rk4_step, step_sizes, Linear};

/// Temperature `θ`, divergence-free velocity `u` and time `t`.
#[derive(Clone, Debug)]
pub struct BoussinesqState {
    pub theta: SpectralField,
    pub u: VectorField,
    pub t: f64,
}

impl BoussinesqState {
    pub fn new(theta: SpectralField, u: VectorField) -> Result<Self> {
        theta.check_grid(&u.u1)?;
        u.ensure_divergence_free()?;
        Ok(Self { theta, u, t: 0.0 })
    }

    pub fn is_finite(&self) -> bool {
        self.theta.is_finite() && self.u.is_finite()
    }

    /// `(θ, u, t) ↦ (θ, −u, t)`.
    pub fn reversed(&self) -> Self {
        Self {
            theta: self.theta.clone(),
            u: self.u.scale(-1.0),
            t: self.t,
        }
    }
}

impl Linear for BoussinesqState {
    fn axpy(&self, alpha: f64, other: &Self) -> Self {
        Self {
            theta: self.theta.axpy(alpha, &other.theta),
            u: self.u.axpy(alpha, &other.u),
            t: self.t,
        }
    }
}

/// Which terms of the system are active.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kernel {
    /// Transported temperature with buoyancy `θe₂`.
    #[default]
    Boussinesq,
    /// Incompressible Euler: `θ` frozen, no buoyancy.
    Euler,
}

/// `∇Π = −∇Δ⁻¹div(u·∇u) + ∇Δ⁻¹∂₂θ`, with a dealiased advection term.
pub fn pressure_gradient(u: &VectorField, theta: &SpectralField) -> VectorField {
    let nonlinear = advect_vector(&u.to_values(), u);
    grad_inv_laplacian_div(&nonlinear)
        .scale(-1.0)
        .axpy(1.0, &grad_inv_laplacian_partial(theta, Axis::X2))
}

/// `(θ', u')` for velocity values `velocity` transporting `(θ, u)`, with
/// buoyancy from `buoyancy` (`None` disables it).
pub(crate) fn rates(
    velocity: &VectorValues,
    theta: &SpectralField,
    u: &VectorField,
    buoyancy: Option<&SpectralField>,
    kernel: Kernel,
) -> BoussinesqState {
    let mut forcing = advect_vector(velocity, u).scale(-1.0);
    let theta_rate = match kernel {
        Kernel::Boussinesq => {
            if let Some(b) = buoyancy {
                forcing.u2 += b;
            }
            advect_values(velocity, theta).scale(-1.0)
        }
        Kernel::Euler => SpectralField::zeros(theta.grid()),
    };
    BoussinesqState {
        theta: theta_rate,
        u: leray_project(&forcing),
        t: 0.0,
    }
}

/// One RK4 step of the coupled system, Leray-projected at every substage.
pub fn direct_step(state: &BoussinesqState, dt: f64, kernel: Kernel) -> Result<BoussinesqState> {
    let grid = state.theta.grid().clone();
    let mut next = rk4_step(state, state.t, dt, |_, ts, y| {
        let v = y.u.to_values();
        check_cfl(&grid, ts, dt, v.linf_norm())?;
        Ok(rates(&v, &y.theta, &y.u, Some(&y.theta), kernel))
    })?;
    next.t = state.t + dt;
    if !next.theta.is_finite() {
        return Err(Error::NonFinite { field: "theta", t: next.t });
    }
    if !next.u.is_finite() {
        return Err(Error::NonFinite { field: "u", t: next.t });
    }
    Ok(next)
}

/// One row of the run monitor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonitorSample {
    pub t: f64,
    /// `‖∇u‖_∞`.
    pub grad_u_inf: f64,
    /// Trapezoidal `∫₀ᵗ ‖∇u‖_∞`.
    pub bkm_integral: f64,
    pub theta_r: f64,
    pub u_r: f64,
    pub div_residual: f64,
    pub theta_linf: f64,
    /// `½‖u‖²_{L²}`.
    pub kinetic_energy: f64,
    /// `∫ θ u₂`.
    pub buoyancy_flux: f64,
}

/// Time series of the blow-up and regularity diagnostics of one run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MonitorRecord {
    pub r: f64,
    pub samples: Vec<MonitorSample>,
}

impl MonitorRecord {
    pub fn new(r: f64) -> Self {
        Self {
            r,
            samples: Vec::new(),
        }
    }

    /// Appends diagnostics of `state`, extending the trapezoid integral.
    pub fn push(&mut self, partition: &DyadicPartition, state: &BoussinesqState) {
        let grad = state.u.grad_linf_norm();
        let bkm = match self.samples.last() {
            Some(prev) => prev.bkm_integral + 0.5 * (state.t - prev.t) * (grad + prev.grad_u_inf),
            None => 0.0,
        };
        let theta_values = state.theta.to_values();
        let u2_values = state.u.u2.to_values();
        let h = state.theta.grid().spacing();
        let flux: f64 = theta_values.iter().zip(&u2_values).map(|(a, b)| a * b).sum::<f64>() * h * h;
        let l2 = coefficient_l2_norm(&state.u.u1).hypot(coefficient_l2_norm(&state.u.u2));
        self.samples.push(MonitorSample {
            t: state.t,
            grad_u_inf: grad,
            bkm_integral: bkm,
            theta_r: holder_value(partition, &state.theta, self.r),
            u_r: holder_value_vector(partition, &state.u, self.r),
            div_residual: state.u.divergence_residual(),
            theta_linf: theta_values.iter().fold(0.0, |m, v| m.max(v.abs())),
            kinetic_energy: 0.5 * l2 * l2,
            buoyancy_flux: flux,
        });
    }

    pub fn last(&self) -> Option<&MonitorSample> {
        self.samples.last()
    }

    pub fn write_csv(&self, mut out: impl Write) -> Result<()> {
        writeln!(
            out,
            "t,grad_u_inf,bkm_integral,theta_r,u_r,div_residual,theta_linf,kinetic_energy,buoyancy_flux"
        )?;
        for s in &self.samples {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                s.t,
                s.grad_u_inf,
                s.bkm_integral,
                s.theta_r,
                s.u_r,
                s.div_residual,
                s.theta_linf,
                s.kinetic_energy,
                s.buoyancy_flux
            )?;
        }
        Ok(())
    }
}

/// Parameters of a direct run.
#[derive(Clone, Debug)]
pub struct DirectConfig {
    pub horizon: f64,
    pub dt: f64,
    pub r: f64,
    pub kernel: Kernel,
    /// Keep every `k`-th state and the last one; `0` keeps none.
    pub snapshot_every: usize,
}

impl DirectConfig {
    pub fn new(horizon: f64, dt: f64, r: f64) -> Self {
        Self {
            horizon,
            dt,
            r,
            kernel: Kernel::Boussinesq,
            snapshot_every: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DirectRun {
    pub final_state: BoussinesqState,
    pub monitor: MonitorRecord,
    /// Kept states, starting with the initial one when `snapshot_every > 0`.
    pub snapshots: Vec<BoussinesqState>,
}

/// Integrates from `state0` to `state0.t + horizon`, monitoring every step.
pub fn run_direct(
    partition: &DyadicPartition,
    state0: &BoussinesqState,
    config: &DirectConfig,
) -> Result<DirectRun> {
    if **state0.theta.grid() != **partition.grid() {
        return Err(Error::GridMismatch);
    }
    let steps = step_sizes(config.horizon, config.dt)?;
    let mut monitor = MonitorRecord::new(config.r);
    let mut snapshots = Vec::new();
    let mut state = state0.clone();
    monitor.push(partition, &state);
    if config.snapshot_every > 0 {
        snapshots.push(state.clone());
    }
    let count = steps.len();
    for (i, dt) in steps.into_iter().enumerate() {
        state = direct_step(&state, dt, config.kernel)?;
        monitor.push(partition, &state);
        let keep = config.snapshot_every > 0 && (i + 1) % config.snapshot_every == 0;
        if keep || (config.snapshot_every > 0 && i + 1 == count) {
            snapshots.push(state.clone());
        }
    }
    Ok(DirectRun {
        final_state: state,
        monitor,
        snapshots,
    })
}
