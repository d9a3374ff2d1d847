use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boussinesq::{
    run_direct, synthesize_holder_field, synthesize_velocity_field, BoussinesqState, DirectConfig,
    MonitorRecord,
};
use crate::error::{Error, Result};
use crate::littlewood_paley::{
    b1_inf_1_norm, build_partition, commutator, holder_value, holder_value_vector,
    homogeneous_besov_norm, maybe_inf, DyadicPartition, Exponent,
};
use crate::spectral::{
    advect, advect_vector, grad_inv_laplacian_div, linf_norm, make_grid, product, SpectralField,
    VectorField,
};
use crate::transport::{solve_with_trajectory, Trajectory, TransportProblem};

/// Samples with `rhs = 0` and `lhs` above this are degenerate.
pub const DEGENERATE_LHS: f64 = 1e-13;
/// `c_frozen = FROZEN_FACTOR · c_emp`.
pub const FROZEN_FACTOR: f64 = 2.0;
/// Largest relative spread of per-resolution `c_emp` deemed stable.
pub const STABILITY_DRIFT: f64 = 0.5;
/// Horizon of the trajectories behind the dynamic estimates.
pub const DYNAMIC_HORIZON: f64 = 0.5;
/// `‖θ₀‖_r / ‖u₀‖_r` of the coupled corpus runs; a weak temperature keeps the
/// velocity growth visible above the buoyancy allowance.
pub const DYNAMIC_THETA_FRACTION: f64 = 0.1;
/// Seed offset separating the second field of a sample from the first.
const PARTNER_SEED: u64 = 0x9E37_79B9;

/// Registered inequalities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Estimate {
    /// `sup_q 2^{qr}‖[v·∇, Δ_q]f‖_∞ ≤ C ‖f‖_r ‖∇v‖_∞`.
    #[serde(rename = "lemma2.1")]
    Commutator,
    /// `‖f‖_∞ ≤ C ‖f‖_r`.
    #[serde(rename = "lemma2.2.1")]
    HolderInLinf,
    /// `‖f‖_{Ḃ¹_{∞,1}} ≤ C ‖f‖_r`, `r > 1`.
    #[serde(rename = "lemma2.2.3")]
    HolderInB1,
    /// `‖fg‖_r ≤ C (‖f‖_∞‖g‖_r + ‖g‖_∞‖f‖_r)`.
    #[serde(rename = "lemma2.3")]
    Product,
    /// `‖u·∇v‖_r ≤ C ‖u‖_r ‖v‖_{B¹_{∞,1}}`.
    #[serde(rename = "lemma2.4")]
    Advection,
    /// `‖∇Δ⁻¹div w‖_r ≤ C ‖w‖_r`.
    #[serde(rename = "lemma2.5")]
    Riesz,
    /// `‖∇Δ⁻¹div(v·∇w)‖_s ≤ C (1/(1+s) + 1/(1−s)) min(‖v‖_Lip‖w‖_s, ‖v‖_s‖w‖_Lip)`
    /// with `s = r − ⌊r⌋`.
    #[serde(rename = "eq4.18")]
    Pressure,
    /// Transport growth `‖f(t)‖_r ≤ ‖f₀‖_r + C ∫‖∇v‖_∞‖f‖_r`.
    #[serde(rename = "lemma3.1")]
    TransportGrowth,
    /// `‖θ(t)‖_r ≤ ‖θ₀‖_r exp(C ∫‖∇u‖_∞)`.
    #[serde(rename = "eq3.3")]
    TemperatureGronwall,
    /// `‖u(t)‖_r ≤ ‖u₀‖_r + 2C ∫‖u‖_r‖∇u‖_∞ + (2 + 2^{−r}) ∫‖θ‖_r`.
    #[serde(rename = "eq3.4")]
    VelocityGrowth,
}

pub const ESTIMATES: [Estimate; 10] = [
    Estimate::Commutator,
    Estimate::HolderInLinf,
    Estimate::HolderInB1,
    Estimate::Product,
    Estimate::Advection,
    Estimate::Riesz,
    Estimate::Pressure,
    Estimate::TransportGrowth,
    Estimate::TemperatureGronwall,
    Estimate::VelocityGrowth,
];

impl Estimate {
    pub fn id(self) -> &'static str {
        match self {
            Estimate::Commutator => "lemma2.1",
            Estimate::HolderInLinf => "lemma2.2.1",
            Estimate::HolderInB1 => "lemma2.2.3",
            Estimate::Product => "lemma2.3",
            Estimate::Advection => "lemma2.4",
            Estimate::Riesz => "lemma2.5",
            Estimate::Pressure => "eq4.18",
            Estimate::TransportGrowth => "lemma3.1",
            Estimate::TemperatureGronwall => "eq3.3",
            Estimate::VelocityGrowth => "eq3.4",
        }
    }

    /// Measured along solved trajectories rather than on fixed fields.
    pub fn is_dynamic(self) -> bool {
        matches!(
            self,
            Estimate::TransportGrowth | Estimate::TemperatureGronwall | Estimate::VelocityGrowth
        )
    }

    /// Both sides scale by the same power of the sample amplitude.
    pub fn is_homogeneous(self) -> bool {
        !self.is_dynamic()
    }
}

impl fmt::Display for Estimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Estimate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ESTIMATES
            .into_iter()
            .find(|e| e.id() == s)
            .ok_or_else(|| Error::UnknownEstimate(s.to_string()))
    }
}

/// The two sides of one inequality instance, constants excluded.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub lhs: f64,
    pub rhs: f64,
}

impl Measurement {
    /// `lhs / rhs`, `0` when both vanish, `None` when only `rhs` does.
    pub fn ratio(&self) -> Option<f64> {
        if self.rhs > 0.0 {
            Some(self.lhs / self.rhs)
        } else if self.lhs > DEGENERATE_LHS {
            None
        } else {
            Some(0.0)
        }
    }
}

/// `sup_q 2^{qr}‖[v·∇, Δ_q]f‖_∞` against `‖f‖_r ‖∇v‖_∞`.
pub fn measure_commutator(
    partition: &DyadicPartition,
    v: &VectorField,
    f: &SpectralField,
    r: f64,
) -> Result<Measurement> {
    let mut lhs = 0.0f64;
    for q in partition.blocks() {
        let c = commutator(partition, v, q, f)?;
        lhs = lhs.max(2f64.powf(q as f64 * r) * linf_norm(&c));
    }
    Ok(Measurement {
        lhs,
        rhs: holder_value(partition, f, r) * v.grad_linf_norm(),
    })
}

/// `‖f‖_∞` against `‖f‖_r`.
pub fn measure_holder_in_linf(partition: &DyadicPartition, f: &SpectralField, r: f64) -> Measurement {
    Measurement {
        lhs: linf_norm(f),
        rhs: holder_value(partition, f, r),
    }
}

/// `‖f‖_{Ḃ⁰_{∞,∞}}` against `‖f‖_∞`, the first link of the embedding chain.
pub fn measure_linf_in_b0(partition: &DyadicPartition, f: &SpectralField) -> Result<Measurement> {
    Ok(Measurement {
        lhs: homogeneous_besov_norm(partition, f, 0.0, Exponent::Infinite, Exponent::Infinite)?,
        rhs: linf_norm(f),
    })
}

/// `‖f‖_{Ḃ¹_{∞,1}}` against `‖f‖_r`.
pub fn measure_holder_in_b1(partition: &DyadicPartition, f: &SpectralField, r: f64) -> Result<Measurement> {
    Ok(Measurement {
        lhs: homogeneous_besov_norm(partition, f, 1.0, Exponent::Infinite, Exponent::Finite(1.0))?,
        rhs: holder_value(partition, f, r),
    })
}

/// `‖fg‖_r` (dealiased product) against `‖f‖_∞‖g‖_r + ‖g‖_∞‖f‖_r`.
pub fn measure_product(
    partition: &DyadicPartition,
    f: &SpectralField,
    g: &SpectralField,
    r: f64,
) -> Measurement {
    Measurement {
        lhs: holder_value(partition, &product(f, g), r),
        rhs: linf_norm(f) * holder_value(partition, g, r)
            + linf_norm(g) * holder_value(partition, f, r),
    }
}

/// `‖u·∇v‖_r` against `‖u‖_r ‖v‖_{B¹_{∞,1}}`.
pub fn measure_advection(
    partition: &DyadicPartition,
    u: &VectorField,
    v: &SpectralField,
    r: f64,
) -> Measurement {
    Measurement {
        lhs: holder_value(partition, &advect(u, v), r),
        rhs: holder_value_vector(partition, u, r) * b1_inf_1_norm(partition, v),
    }
}

/// `‖∇Δ⁻¹div w‖_r` against `‖w‖_r`.
pub fn measure_riesz(partition: &DyadicPartition, w: &VectorField, r: f64) -> Measurement {
    Measurement {
        lhs: holder_value_vector(partition, &grad_inv_laplacian_div(w), r),
        rhs: holder_value_vector(partition, w, r),
    }
}

/// `‖v‖_∞ + ‖∇v‖_∞`.
pub fn lipschitz_norm(v: &VectorField) -> f64 {
    v.linf_norm() + v.grad_linf_norm()
}

/// `‖∇Δ⁻¹div(v·∇w)‖_s` against
/// `(1/(1+s) + 1/(1−s)) min(‖v‖_Lip‖w‖_s, ‖v‖_s‖w‖_Lip)`, `s ∈ (−1, 1)`.
pub fn measure_pressure(
    partition: &DyadicPartition,
    v: &VectorField,
    w: &VectorField,
    s: f64,
) -> Result<Measurement> {
    if !(s > -1.0 && s < 1.0) {
        return Err(Error::InvalidParameter {
            name: "s",
            reason: format!("pressure estimate needs s in (-1, 1) (got {s})"),
        });
    }
    let pi = grad_inv_laplacian_div(&advect_vector(&v.to_values(), w));
    let weight = 1.0 / (1.0 + s) + 1.0 / (1.0 - s);
    let first = lipschitz_norm(v) * holder_value_vector(partition, w, s);
    let second = holder_value_vector(partition, v, s) * lipschitz_norm(w);
    Ok(Measurement {
        lhs: holder_value_vector(partition, &pi, s),
        rhs: weight * first.min(second),
    })
}

/// Worst instant of a transport trajectory:
/// `(‖f(t)‖_r − ‖f₀‖_r)₊` against `∫₀ᵗ ‖∇v‖_∞‖f‖_r`.
pub fn measure_transport_growth(traj: &Trajectory) -> Measurement {
    let rows = &traj.rows;
    let weight: Vec<f64> = rows.iter().zip(&traj.grad_v).map(|(row, g)| row.holder * g).collect();
    let f0 = rows.first().map_or(0.0, |row| row.holder);
    let growth = rows.iter().map(|row| (row.holder - f0).max(0.0));
    worst_instant(&rows.iter().map(|row| row.t).collect::<Vec<_>>(), &weight, growth)
}

/// Worst sample of `ln(‖θ(t)‖_r / ‖θ₀‖_r)₊` against `∫₀ᵗ ‖∇u‖_∞`.
pub fn measure_temperature_gronwall(record: &MonitorRecord) -> Measurement {
    let s = &record.samples;
    let theta0 = s.first().map_or(0.0, |x| x.theta_r);
    let mut best = Measurement { lhs: 0.0, rhs: 0.0 };
    let mut best_ratio = -1.0;
    for x in s.iter().skip(1) {
        let lhs = if theta0 > 0.0 { (x.theta_r / theta0).ln().max(0.0) } else { 0.0 };
        let m = Measurement { lhs, rhs: x.bkm_integral };
        if let Some(q) = m.ratio() {
            if q > best_ratio {
                best_ratio = q;
                best = m;
            }
        } else {
            return m;
        }
    }
    best
}

/// Worst sample of `(‖u(t)‖_r − ‖u₀‖_r − (2 + 2^{−r})∫‖θ‖_r)₊` against
/// `2∫‖u‖_r‖∇u‖_∞`.
pub fn measure_velocity_growth(record: &MonitorRecord) -> Measurement {
    let s = &record.samples;
    let coupling = 2.0 + 2f64.powf(-record.r);
    let t: Vec<f64> = s.iter().map(|x| x.t).collect();
    let u0 = s.first().map_or(0.0, |x| x.u_r);
    let theta_int = cumulative_trapezoid(&t, &s.iter().map(|x| x.theta_r).collect::<Vec<_>>());
    let growth = s
        .iter()
        .zip(&theta_int)
        .map(|(x, i)| (x.u_r - u0 - coupling * i).max(0.0));
    let weight: Vec<f64> = s.iter().map(|x| 2.0 * x.u_r * x.grad_u_inf).collect();
    worst_instant(&t, &weight, growth)
}

fn cumulative_trapezoid(t: &[f64], y: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(t.len());
    for i in 0..t.len() {
        if i > 0 {
            acc += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
        }
        out.push(acc);
    }
    out
}

/// Sample maximizing `growth(t) / ∫₀ᵗ weight`, skipping `t = 0`.
fn worst_instant(t: &[f64], weight: &[f64], growth: impl Iterator<Item = f64>) -> Measurement {
    let integral = cumulative_trapezoid(t, weight);
    let mut best = Measurement { lhs: 0.0, rhs: integral.last().copied().unwrap_or(0.0) };
    let mut best_ratio = -1.0;
    for (lhs, rhs) in growth.zip(integral).skip(1) {
        let m = Measurement { lhs, rhs };
        match m.ratio() {
            Some(q) if q > best_ratio => {
                best_ratio = q;
                best = m;
            }
            Some(_) => {}
            None => return m,
        }
    }
    best
}

/// Corpus of seeded Hölder-class samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub r_values: Vec<f64>,
    pub seeds: Vec<u64>,
    pub resolutions: Vec<usize>,
    #[serde(rename = "L")]
    pub box_length: f64,
    /// `C^r` norm of every synthesized field.
    pub amplitude: f64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        Self {
            r_values: vec![1.1, 1.5, 2.0, 2.5, 3.0],
            seeds: (0..10).collect(),
            resolutions: vec![64, 128],
            box_length: 2.0 * std::f64::consts::PI,
            amplitude: 1.0,
        }
    }
}

impl CorpusSpec {
    pub fn len(&self) -> usize {
        self.r_values.len() * self.seeds.len() * self.resolutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Scalar field of the sample.
pub fn corpus_scalar(partition: &DyadicPartition, r: f64, amplitude: f64, seed: u64) -> SpectralField {
    synthesize_holder_field(partition, r, amplitude, seed)
}

/// Divergence-free velocity of the sample, independent of its scalar.
pub fn corpus_velocity(partition: &DyadicPartition, r: f64, amplitude: f64, seed: u64) -> VectorField {
    synthesize_velocity_field(partition, r, amplitude, seed.wrapping_add(PARTNER_SEED))
}

/// Step for the corpus trajectories: a quarter of the CFL limit at `‖v‖_∞`,
/// capped at `0.01`.
fn corpus_dt(partition: &DyadicPartition, v_max: f64) -> f64 {
    let h = partition.grid().spacing();
    (0.25 * h / v_max.max(1e-300)).min(0.01)
}

fn transport_run(partition: &DyadicPartition, r: f64, amplitude: f64, seed: u64) -> Result<Trajectory> {
    let f0 = corpus_scalar(partition, r, amplitude, seed);
    let v = corpus_velocity(partition, r, amplitude, seed);
    let dt = corpus_dt(partition, v.linf_norm());
    let problem = TransportProblem::frozen(f0, v, DYNAMIC_HORIZON, dt);
    Ok(solve_with_trajectory(&problem, partition, r)?.1)
}

fn boussinesq_run(partition: &DyadicPartition, r: f64, amplitude: f64, seed: u64) -> Result<MonitorRecord> {
    let state = BoussinesqState::new(
        corpus_scalar(partition, r, DYNAMIC_THETA_FRACTION * amplitude, seed),
        corpus_velocity(partition, r, amplitude, seed),
    )?;
    // the velocity sup may grow along the run
    let dt = 0.5 * corpus_dt(partition, state.u.linf_norm());
    Ok(run_direct(partition, &state, &DirectConfig::new(DYNAMIC_HORIZON, dt, r))?.monitor)
}

/// Measures every estimate in `estimates` on one corpus sample, sharing
/// trajectories between the dynamic ones.
pub fn measure_sample(
    partition: &DyadicPartition,
    estimates: &[Estimate],
    r: f64,
    amplitude: f64,
    seed: u64,
) -> Result<Vec<Measurement>> {
    let f = corpus_scalar(partition, r, amplitude, seed);
    let needs_run = estimates
        .iter()
        .any(|e| matches!(e, Estimate::TemperatureGronwall | Estimate::VelocityGrowth));
    let record = if needs_run {
        Some(boussinesq_run(partition, r, amplitude, seed)?)
    } else {
        None
    };
    estimates
        .iter()
        .map(|e| {
            Ok(match e {
                Estimate::Commutator => {
                    measure_commutator(partition, &corpus_velocity(partition, r, amplitude, seed), &f, r)?
                }
                Estimate::HolderInLinf => measure_holder_in_linf(partition, &f, r),
                Estimate::HolderInB1 => measure_holder_in_b1(partition, &f, r)?,
                Estimate::Product => {
                    let g = corpus_scalar(partition, r, amplitude, seed.wrapping_add(PARTNER_SEED));
                    measure_product(partition, &f, &g, r)
                }
                Estimate::Advection => {
                    measure_advection(partition, &corpus_velocity(partition, r, amplitude, seed), &f, r)
                }
                Estimate::Riesz => {
                    let g = corpus_scalar(partition, r, amplitude, seed.wrapping_add(PARTNER_SEED));
                    measure_riesz(partition, &VectorField { u1: f.clone(), u2: g }, r)
                }
                Estimate::Pressure => {
                    let v = corpus_velocity(partition, r, amplitude, seed);
                    let w = corpus_velocity(partition, r, amplitude, seed.wrapping_add(PARTNER_SEED));
                    measure_pressure(partition, &v, &w, r.fract())?
                }
                Estimate::TransportGrowth => {
                    measure_transport_growth(&transport_run(partition, r, amplitude, seed)?)
                }
                Estimate::TemperatureGronwall => {
                    measure_temperature_gronwall(record.as_ref().expect("run computed"))
                }
                Estimate::VelocityGrowth => {
                    measure_velocity_growth(record.as_ref().expect("run computed"))
                }
            })
        })
        .collect()
}

/// One corpus sample of an estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub id: String,
    pub n: usize,
    pub r: f64,
    pub seed: u64,
    pub lhs: f64,
    pub rhs: f64,
    /// `None` for degenerate samples.
    pub ratio: Option<f64>,
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolutionConstant {
    pub n: usize,
    pub c_emp: f64,
}

/// Empirical constant of one estimate over a corpus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub name: Estimate,
    pub samples: Vec<Sample>,
    /// Max ratio over nondegenerate samples.
    pub c_emp: f64,
    pub c_frozen: f64,
    pub resolutions: Vec<usize>,
    pub c_emp_by_resolution: Vec<ResolutionConstant>,
    /// `(max − min) / min` of the per-resolution constants.
    #[serde(with = "maybe_inf")]
    pub drift: f64,
    pub stable: bool,
    pub degenerate: usize,
}

impl EstimateReport {
    fn from_samples(name: Estimate, samples: Vec<Sample>) -> Self {
        let mut by_n: BTreeMap<usize, f64> = BTreeMap::new();
        for s in &samples {
            let c = by_n.entry(s.n).or_insert(0.0);
            if let Some(q) = s.ratio {
                *c = c.max(q);
            }
        }
        let c_emp = by_n.values().copied().fold(0.0, f64::max);
        let lo = by_n.values().copied().fold(f64::INFINITY, f64::min);
        let drift = if c_emp == 0.0 {
            0.0
        } else if lo > 0.0 {
            (c_emp - lo) / lo
        } else {
            f64::INFINITY
        };
        Self {
            name,
            degenerate: samples.iter().filter(|s| s.degenerate).count(),
            c_emp,
            c_frozen: FROZEN_FACTOR * c_emp,
            resolutions: by_n.keys().copied().collect(),
            c_emp_by_resolution: by_n.iter().map(|(&n, &c)| ResolutionConstant { n, c_emp: c }).collect(),
            drift,
            stable: drift <= STABILITY_DRIFT,
            samples,
        }
    }

    /// Max ratio over the samples at regularity `r`, or over all samples
    /// when the corpus has none at `r`.
    pub fn c_emp_at(&self, r: f64) -> f64 {
        let at = |pick: &dyn Fn(&Sample) -> bool| {
            self.samples.iter().filter(|s| pick(s)).filter_map(|s| s.ratio).fold(0.0, f64::max)
        };
        if self.samples.iter().any(|s| s.r == r) {
            at(&|s| s.r == r)
        } else {
            self.c_emp
        }
    }

    pub fn c_frozen_at(&self, r: f64) -> f64 {
        FROZEN_FACTOR * self.c_emp_at(r)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }
}

fn validate_corpus(corpus: &CorpusSpec) -> Result<()> {
    if corpus.is_empty() {
        return Err(Error::InvalidParameter {
            name: "corpus",
            reason: "needs at least one r, seed and resolution".into(),
        });
    }
    if let Some(r) = corpus.r_values.iter().find(|&&r| !(r > 1.0 && r.is_finite())) {
        return Err(Error::InvalidParameter {
            name: "r",
            reason: format!("corpus regularities must exceed 1 (got {r})"),
        });
    }
    if !(corpus.amplitude > 0.0 && corpus.amplitude.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "amplitude",
            reason: format!("must be positive (got {})", corpus.amplitude),
        });
    }
    Ok(())
}

/// Runs several estimates over one corpus. Samples are independent and
/// measured in parallel; each report lists them sorted by `(n, r, seed)`.
pub fn verify_many(estimates: &[Estimate], corpus: &CorpusSpec) -> Result<Vec<EstimateReport>> {
    validate_corpus(corpus)?;
    let partitions: Vec<(usize, DyadicPartition)> = corpus
        .resolutions
        .iter()
        .map(|&n| Ok((n, build_partition(&make_grid(n, corpus.box_length)?)?)))
        .collect::<Result<_>>()?;
    let mut jobs = Vec::with_capacity(corpus.len());
    for (pi, (n, _)) in partitions.iter().enumerate() {
        for &r in &corpus.r_values {
            for &seed in &corpus.seeds {
                jobs.push((pi, *n, r, seed));
            }
        }
    }
    let measured: Vec<((usize, f64, u64), Vec<Measurement>)> = jobs
        .par_iter()
        .map(|&(pi, n, r, seed)| {
            let m = measure_sample(&partitions[pi].1, estimates, r, corpus.amplitude, seed)?;
            Ok(((n, r, seed), m))
        })
        .collect::<Result<_>>()?;
    let mut measured = measured;
    measured.sort_by(|a, b| {
        let (ka, kb) = (a.0, b.0);
        ka.0.cmp(&kb.0).then(ka.1.total_cmp(&kb.1)).then(ka.2.cmp(&kb.2))
    });
    Ok(estimates
        .iter()
        .enumerate()
        .map(|(i, &e)| {
            let samples = measured
                .iter()
                .map(|&((n, r, seed), ref m)| {
                    let ratio = m[i].ratio();
                    Sample {
                        id: format!("{e}/n{n}/r{r}/seed{seed}"),
                        n,
                        r,
                        seed,
                        lhs: m[i].lhs,
                        rhs: m[i].rhs,
                        ratio,
                        degenerate: ratio.is_none(),
                    }
                })
                .collect();
            EstimateReport::from_samples(e, samples)
        })
        .collect())
}

/// Runs one estimate over the corpus.
pub fn verify(estimate: Estimate, corpus: &CorpusSpec) -> Result<EstimateReport> {
    Ok(verify_many(&[estimate], corpus)?.remove(0))
}

/// Ratio of one sample at amplitudes `1` and `alpha`, for homogeneous estimates.
pub fn scale_invariance(
    partition: &DyadicPartition,
    estimate: Estimate,
    r: f64,
    seed: u64,
    alpha: f64,
) -> Result<(f64, f64)> {
    if !estimate.is_homogeneous() {
        return Err(Error::InvalidParameter {
            name: "estimate",
            reason: format!("{estimate} is not homogeneous in the data amplitude"),
        });
    }
    let ratio = |amp: f64| -> Result<f64> {
        let m = measure_sample(partition, &[estimate], r, amp, seed)?[0];
        m.ratio().ok_or_else(|| Error::InvalidParameter {
            name: "seed",
            reason: "degenerate sample".into(),
        })
    };
    Ok((ratio(1.0)?, ratio(alpha)?))
}

/// Writes `estimate,c_emp,resolutions,stable`, one row per report.
pub fn write_summary_csv(reports: &[EstimateReport], mut out: impl Write) -> Result<()> {
    writeln!(out, "estimate,c_emp,resolutions,stable")?;
    for rep in reports {
        let res: Vec<String> = rep.resolutions.iter().map(usize::to_string).collect();
        writeln!(out, "{},{},{},{}", rep.name, rep.c_emp, res.join(";"), rep.stable)?;
    }
    Ok(())
}
