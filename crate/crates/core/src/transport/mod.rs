//! Pseudo-spectral RK4 solver for `∂ₜf + v·∇f = g` on the periodic square.
//!
//! The advection term is dealiased with the 2/3 rule. Velocity and forcing
//! providers are sampled at the four RK substage times `t, t+dt/2, t+dt/2,
//! t+dt`.

use std::io::Write;

use crate::error::{Error, Result};
use crate::littlewood_paley::{holder_value, DyadicPartition};
use crate::spectral::{advect_values, max_abs, Grid, SpectralField, VectorField, VectorValues};

/// Courant number used for every explicit step.
pub const CFL: f64 = 0.5;

/// Substage offsets of classical RK4 as fractions of `dt`.
pub const RK4_NODES: [f64; 4] = [0.0, 0.5, 0.5, 1.0];

/// States that RK4 can combine linearly.
pub trait Linear: Clone {
    /// `self + alpha * other`.
    fn axpy(&self, alpha: f64, other: &Self) -> Self;
}

impl Linear for SpectralField {
    fn axpy(&self, alpha: f64, other: &Self) -> Self {
        SpectralField::axpy(self, alpha, other)
    }
}

impl Linear for VectorField {
    fn axpy(&self, alpha: f64, other: &Self) -> Self {
        VectorField::axpy(self, alpha, other)
    }
}

/// One classical RK4 step. `rhs(stage, t_stage, y_stage)` is called for
/// stages 0..4 in order.
pub fn rk4_step<S: Linear>(
    y: &S,
    t: f64,
    dt: f64,
    mut rhs: impl FnMut(usize, f64, &S) -> Result<S>,
) -> Result<S> {
    let k1 = rhs(0, t, y)?;
    let k2 = rhs(1, t + 0.5 * dt, &y.axpy(0.5 * dt, &k1))?;
    let k3 = rhs(2, t + 0.5 * dt, &y.axpy(0.5 * dt, &k2))?;
    let k4 = rhs(3, t + dt, &y.axpy(dt, &k3))?;
    Ok(y
        .axpy(dt / 6.0, &k1)
        .axpy(dt / 3.0, &k2)
        .axpy(dt / 3.0, &k3)
        .axpy(dt / 6.0, &k4))
}

/// Largest admissible `dt` for sup velocity `v_max`.
pub fn cfl_limit(grid: &Grid, v_max: f64) -> f64 {
    if v_max > 0.0 {
        CFL * grid.spacing() / v_max
    } else {
        f64::INFINITY
    }
}

/// Errors unless `dt ≤ CFL·(L/n)/v_max`.
pub fn check_cfl(grid: &Grid, t: f64, dt: f64, v_max: f64) -> Result<()> {
    let limit = cfl_limit(grid, v_max);
    if dt <= limit {
        Ok(())
    } else {
        Err(Error::Cfl { t, dt, limit })
    }
}

/// Step sizes covering `[0, horizon]`: full steps of `dt` and a shorter last
/// step when `horizon/dt` is not an integer.
pub fn step_sizes(horizon: f64, dt: f64) -> Result<Vec<f64>> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParameter {
            name: "dt",
            reason: format!("must be positive and finite (got {dt})"),
        });
    }
    if !(horizon.is_finite() && horizon >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "T",
            reason: format!("must be nonnegative and finite (got {horizon})"),
        });
    }
    let ratio = horizon / dt;
    let full = (ratio + 1e-9).floor() as usize;
    let mut steps = vec![dt; full];
    let rest = horizon - full as f64 * dt;
    if rest > 1e-12 * dt.max(horizon) {
        steps.push(rest);
    }
    Ok(steps)
}

/// One RK4 step with velocity and forcing frozen over the step.
pub fn step(f: &SpectralField, v: &VectorField, g: &SpectralField, dt: f64) -> Result<SpectralField> {
    f.check_grid(&v.u1)?;
    f.check_grid(g)?;
    v.ensure_divergence_free()?;
    let values = v.to_values();
    check_cfl(f.grid(), 0.0, dt, values.linf_norm())?;
    rk4_step(f, 0.0, dt, |_, _, y| Ok(advect_values(&values, y).axpy(-1.0, g).scale(-1.0)))
}

type VelocityFn<'a> = Box<dyn Fn(f64) -> VectorField + 'a>;
type ForcingFn<'a> = Box<dyn Fn(f64) -> SpectralField + 'a>;

/// Initial data, time-dependent velocity and forcing, horizon and step.
pub struct TransportProblem<'a> {
    pub f0: SpectralField,
    pub velocity: VelocityFn<'a>,
    /// `None` means `g ≡ 0`.
    pub forcing: Option<ForcingFn<'a>>,
    pub horizon: f64,
    pub dt: f64,
}

impl<'a> TransportProblem<'a> {
    /// Transport by a velocity constant in time, no forcing.
    pub fn frozen(f0: SpectralField, v: VectorField, horizon: f64, dt: f64) -> Self {
        Self {
            f0,
            velocity: Box::new(move |_| v.clone()),
            forcing: None,
            horizon,
            dt,
        }
    }

    pub fn with_forcing(mut self, g: impl Fn(f64) -> SpectralField + 'a) -> Self {
        self.forcing = Some(Box::new(g));
        self
    }
}

/// Integrates the problem. `observer(t, f, v)` sees the initial state and the
/// state after every step, with `v` the velocity at that time.
pub fn solve(
    problem: &TransportProblem<'_>,
    mut observer: impl FnMut(f64, &SpectralField, &VectorField) -> Result<()>,
) -> Result<SpectralField> {
    let steps = step_sizes(problem.horizon, problem.dt)?;
    let grid = problem.f0.grid().clone();
    let mut f = problem.f0.clone();
    let mut t = 0.0;
    let mut v_now = (problem.velocity)(0.0);
    f.check_grid(&v_now.u1)?;
    v_now.ensure_divergence_free()?;
    observer(t, &f, &v_now)?;
    for dt in steps {
        let mut fields = Vec::with_capacity(4);
        for node in RK4_NODES {
            let v = if node == 0.0 {
                v_now.clone()
            } else {
                let v = (problem.velocity)(t + node * dt);
                v.ensure_divergence_free()?;
                v
            };
            fields.push(v);
        }
        let values: Vec<VectorValues> = fields.iter().map(VectorField::to_values).collect();
        for (node, v) in RK4_NODES.iter().zip(&values) {
            check_cfl(&grid, t + node * dt, dt, v.linf_norm())?;
        }
        f = rk4_step(&f, t, dt, |stage, ts, y| {
            let mut rate = advect_values(&values[stage], y).scale(-1.0);
            if let Some(g) = &problem.forcing {
                rate += &g(ts);
            }
            Ok(rate)
        })?;
        t += dt;
        if !f.is_finite() {
            return Err(Error::NonFinite { field: "f", t });
        }
        v_now = fields.pop().expect("four stages");
        observer(t, &f, &v_now)?;
    }
    Ok(f)
}

/// One trajectory sample: `(t, ‖f‖_∞, ‖f‖_r, mean)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRow {
    pub t: f64,
    pub linf: f64,
    pub holder: f64,
    pub mean: f64,
}

/// Norm history of a transported scalar.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub r: f64,
    pub rows: Vec<TrajectoryRow>,
    /// `‖∇v(t)‖_∞` at each row, for Gronwall replays.
    pub grad_v: Vec<f64>,
}

impl Trajectory {
    pub fn new(r: f64) -> Self {
        Self {
            r,
            rows: Vec::new(),
            grad_v: Vec::new(),
        }
    }

    pub fn record(
        &mut self,
        partition: &DyadicPartition,
        t: f64,
        f: &SpectralField,
        v: &VectorField,
    ) {
        self.rows.push(TrajectoryRow {
            t,
            linf: max_abs(&f.to_values()),
            holder: holder_value(partition, f, self.r),
            mean: f.mean(),
        });
        self.grad_v.push(v.grad_linf_norm());
    }

    pub fn write_csv(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "t,linf,holder_r,mean")?;
        for row in &self.rows {
            writeln!(out, "{},{},{},{}", row.t, row.linf, row.holder, row.mean)?;
        }
        Ok(())
    }
}

/// Solves and records the norm history at every step.
pub fn solve_with_trajectory(
    problem: &TransportProblem<'_>,
    partition: &DyadicPartition,
    r: f64,
) -> Result<(SpectralField, Trajectory)> {
    let mut traj = Trajectory::new(r);
    let f = solve(problem, |t, f, v| {
        traj.record(partition, t, f, v);
        Ok(())
    })?;
    Ok((f, traj))
}
