use serde::{Deserialize, Serialize};

use super::state::{rates, BoussinesqState, Kernel};
use crate::error::{Error, Result};
use crate::littlewood_paley::{holder_value, holder_value_vector, DyadicPartition};
use crate::spectral::{SpectralField, VectorField, VectorValues};
use crate::transport::{check_cfl, rk4_step, step_sizes};

/// Which temperature iterate drives the buoyancy in the velocity equation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThetaIndex {
    /// `θ_{n+1}e₂`, stepped jointly with `u_{n+1}`.
    #[default]
    Next,
    /// `θ_n e₂` from the previous iterate.
    Previous,
}

#[derive(Clone, Debug)]
pub struct IterationConfig {
    pub r: f64,
    /// Largest iterate index computed.
    pub n_max: usize,
    pub horizon: f64,
    pub dt: f64,
    /// Stop once `max(gap_θ, gap_u) < tol`.
    pub tol: f64,
    pub theta_index: ThetaIndex,
}

/// Cauchy gaps between consecutive iterates, measured as the sup over step
/// times of the `C^{r−1}` norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    /// The gap compares iterates `n + 1` and `n`.
    pub n: usize,
    pub cauchy_gap_theta: f64,
    pub cauchy_gap_u: f64,
    /// `gap_n / gap_{n−1}` of `max(gap_θ, gap_u)`, when the previous gap exceeds `1e-14`.
    pub ratio: Option<f64>,
    /// `‖θ_{n+1}(T)‖_r`.
    pub theta_r: f64,
    /// `‖u_{n+1}(T)‖_r`.
    pub u_r: f64,
}

impl IterationRecord {
    pub fn gap(&self) -> f64 {
        self.cauchy_gap_theta.max(self.cauchy_gap_u)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IterationStatus {
    Converged,
    /// Ratio above 1 for three consecutive iterations.
    NonContraction,
    /// `n_max` reached with the gap still above tolerance.
    Exhausted,
}

#[derive(Clone, Debug)]
pub struct IterationOutcome {
    pub records: Vec<IterationRecord>,
    pub status: IterationStatus,
    /// Last iterate at every step time, starting at `t = 0`.
    pub limit: Vec<BoussinesqState>,
}

/// Ratio threshold for the prior-gap guard.
const GAP_FLOOR: f64 = 1e-14;

/// One iterate sampled at step times and RK4 substages.
struct Iterate {
    /// `(θ, u)` at `t_0 = 0, t_1, …, t_K`.
    states: Vec<BoussinesqState>,
    /// Velocity values at the four substages of each step.
    stage_u: Vec<[VectorValues; 4]>,
    /// Temperature at the four substages of each step.
    stage_theta: Vec<[SpectralField; 4]>,
}

impl Iterate {
    fn constant(theta: &SpectralField, u: &VectorField, steps: &[f64]) -> Self {
        let mut states = Vec::with_capacity(steps.len() + 1);
        let mut t = 0.0;
        states.push(BoussinesqState { theta: theta.clone(), u: u.clone(), t });
        for dt in steps {
            t += dt;
            states.push(BoussinesqState { theta: theta.clone(), u: u.clone(), t });
        }
        let values = u.to_values();
        Self {
            states,
            stage_u: vec![std::array::from_fn(|_| values.clone()); steps.len()],
            stage_theta: vec![std::array::from_fn(|_| theta.clone()); steps.len()],
        }
    }
}

/// Solves the linear problems for iterate `n + 1` given iterate `n`:
/// `θ_{n+1}` and `u_{n+1}` transported by `u_n`, the velocity forced by the
/// Leray-projected buoyancy.
fn next_iterate(
    prev: &Iterate,
    theta0: SpectralField,
    u0: VectorField,
    steps: &[f64],
    theta_index: ThetaIndex,
) -> Result<Iterate> {
    let grid = theta0.grid().clone();
    let mut state = BoussinesqState { theta: theta0, u: u0, t: 0.0 };
    let mut states = Vec::with_capacity(steps.len() + 1);
    let mut stage_u = Vec::with_capacity(steps.len());
    let mut stage_theta = Vec::with_capacity(steps.len());
    states.push(state.clone());
    for (k, &dt) in steps.iter().enumerate() {
        let mut u_here: [Option<VectorValues>; 4] = Default::default();
        let mut theta_here: [Option<SpectralField>; 4] = Default::default();
        let mut next = rk4_step(&state, state.t, dt, |stage, ts, y| {
            let velocity = &prev.stage_u[k][stage];
            check_cfl(&grid, ts, dt, velocity.linf_norm())?;
            u_here[stage] = Some(y.u.to_values());
            theta_here[stage] = Some(y.theta.clone());
            let buoyancy = match theta_index {
                ThetaIndex::Next => &y.theta,
                ThetaIndex::Previous => &prev.stage_theta[k][stage],
            };
            Ok(rates(velocity, &y.theta, &y.u, Some(buoyancy), Kernel::Boussinesq))
        })?;
        next.t = state.t + dt;
        if !next.is_finite() {
            return Err(Error::NonFinite { field: "iterate", t: next.t });
        }
        stage_u.push(u_here.map(|v| v.expect("all stages visited")));
        stage_theta.push(theta_here.map(|v| v.expect("all stages visited")));
        states.push(next.clone());
        state = next;
    }
    Ok(Iterate { states, stage_u, stage_theta })
}

/// Successive approximations with truncated initial data `S_{n+2}θ₀`,
/// `S_{n+2}u₀`, starting from the time-constant iterate `(S₂θ₀, S₂u₀)`.
///
/// The `n`-th linear solve samples the previous velocity at the same RK4
/// substages it was computed on, so a fixed point of the scheme is exactly
/// the direct RK4 trajectory.
pub fn iterate_scheme(
    partition: &DyadicPartition,
    theta0: &SpectralField,
    u0: &VectorField,
    config: &IterationConfig,
) -> Result<IterationOutcome> {
    if !(config.r > 1.0 && config.r.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "r",
            reason: format!("iteration needs r > 1 (got {})", config.r),
        });
    }
    if config.tol.is_nan() || config.tol <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: format!("must be positive (got {})", config.tol),
        });
    }
    if config.n_max < 2 {
        return Err(Error::InvalidParameter {
            name: "n_max",
            reason: format!("need at least two iterates (got {})", config.n_max),
        });
    }
    theta0.check_grid(&u0.u1)?;
    u0.ensure_divergence_free()?;
    let steps = step_sizes(config.horizon, config.dt)?;
    let s = config.r - 1.0;

    let mut prev = Iterate::constant(
        &partition.low_pass_clamped(2, theta0),
        &u0.map(|c| partition.low_pass_clamped(2, c)),
        &steps,
    );
    let mut records: Vec<IterationRecord> = Vec::new();
    let mut rising = 0;
    let mut status = IterationStatus::Exhausted;
    for n in 1..config.n_max {
        let level = n as i32 + 2;
        let next = next_iterate(
            &prev,
            partition.low_pass_clamped(level, theta0),
            u0.map(|c| partition.low_pass_clamped(level, c)),
            &steps,
            config.theta_index,
        )?;
        let mut gap_theta = 0.0f64;
        let mut gap_u = 0.0f64;
        for (a, b) in next.states.iter().zip(&prev.states) {
            gap_theta = gap_theta.max(holder_value(partition, &(&a.theta - &b.theta), s));
            gap_u = gap_u.max(holder_value_vector(partition, &a.u.axpy(-1.0, &b.u), s));
        }
        let last = next.states.last().expect("nonempty");
        let gap = gap_theta.max(gap_u);
        let ratio = records
            .last()
            .map(IterationRecord::gap)
            .filter(|&g| g > GAP_FLOOR)
            .map(|g| gap / g);
        records.push(IterationRecord {
            n,
            cauchy_gap_theta: gap_theta,
            cauchy_gap_u: gap_u,
            ratio,
            theta_r: holder_value(partition, &last.theta, config.r),
            u_r: holder_value_vector(partition, &last.u, config.r),
        });
        prev = next;
        if gap < config.tol {
            status = IterationStatus::Converged;
            break;
        }
        rising = if ratio.is_some_and(|q| q > 1.0) { rising + 1 } else { 0 };
        if rising >= 3 {
            status = IterationStatus::NonContraction;
            break;
        }
    }
    Ok(IterationOutcome {
        records,
        status,
        limit: prev.states,
    })
}

/// Writes iteration records as CSV.
pub fn write_iterations_csv(records: &[IterationRecord], mut out: impl std::io::Write) -> Result<()> {
    writeln!(out, "n,cauchy_gap_theta,cauchy_gap_u,ratio,theta_r,u_r")?;
    for r in records {
        let ratio = r.ratio.map(|q| q.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.n, r.cauchy_gap_theta, r.cauchy_gap_u, ratio, r.theta_r, r.u_r
        )?;
    }
    Ok(())
}
