use std::fs;
use std::path::Path;

use serde::Serialize;

use boussinesq_core::boussinesq::{
    continuation_check, iterate_scheme, run_direct, synthesize_holder_field, uniqueness_probe,
    write_iterations_csv, write_probe_csv, BoussinesqState, ContinuationReport, DirectConfig,
    EnvelopeCheck, IterationConfig, IterationRecord, IterationStatus,
};
use boussinesq_core::harness::{
    contraction_report, gronwall_constant, temperature_bound_check, threshold_formulas,
    verify_many, write_summary_csv, ContractionSummary, CorpusSpec, EstimateReport,
    GRONWALL_ESTIMATES, MIN_RECORDS,
};
use boussinesq_core::littlewood_paley::{
    a0_constant, b1_inf_1_norm, build_partition, holder_norm, holder_value, holder_value_vector,
    BesovReport, DyadicPartition,
};
use boussinesq_core::spectral::{linf_norm, load_snapshot, make_grid, save_snapshot, SpectralField};
use boussinesq_core::{Error, Result};

use crate::config::{Command, RunConfig, Scheme};

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn write_csv(path: &Path, emit: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<()> {
    let mut buf = Vec::new();
    emit(&mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

fn partition(cfg: &RunConfig) -> Result<DyadicPartition> {
    build_partition(&make_grid(cfg.n, cfg.length)?)
}

fn initial_state(cfg: &RunConfig, p: &DyadicPartition) -> Result<BoussinesqState> {
    cfg.preset.initial_state(p, cfg.r, cfg.seed, cfg.theta_amplitude, cfg.u_amplitude)
}

fn save_state(dir: &Path, tag: &str, state: &BoussinesqState) -> Result<()> {
    save_snapshot(&dir.join(format!("theta_{tag}.snap")), &state.theta, "theta", state.t)?;
    save_snapshot(&dir.join(format!("u1_{tag}.snap")), &state.u.u1, "u1", state.t)?;
    save_snapshot(&dir.join(format!("u2_{tag}.snap")), &state.u.u2, "u2", state.t)
}

/// `C(r)` and where it came from: the override, a reports file, or a fresh
/// measurement of the Gronwall estimates on the `r` slice of the corpus.
fn resolve_c(cfg: &RunConfig) -> Result<(f64, String)> {
    if let Some(c) = cfg.c {
        return Ok((c, "override".into()));
    }
    if let Some(path) = &cfg.reports {
        let text = fs::read_to_string(path)?;
        let reports: Vec<EstimateReport> = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidParameter { name: "reports", reason: e.to_string() })?;
        return Ok((gronwall_constant(&reports, cfg.r)?, path.display().to_string()));
    }
    let corpus = CorpusSpec { r_values: vec![cfg.r], ..cfg.corpus.clone() };
    let reports = verify_many(&GRONWALL_ESTIMATES, &corpus)?;
    Ok((gronwall_constant(&reports, cfg.r)?, "measured".into()))
}

/// Runs the configured command, writing its artifacts under `out_dir`, and
/// returns the one-line summary.
pub fn run(cfg: &RunConfig) -> Result<String> {
    fs::create_dir_all(&cfg.out_dir)?;
    write_json(&cfg.out_dir.join("config.json"), cfg)?;
    match cfg.command {
        Command::LpAnalyze => lp_analyze(cfg),
        Command::Solve if cfg.scheme == Scheme::Iterate => iterate(cfg),
        Command::Solve => solve(cfg),
        Command::Iterate => iterate(cfg),
        Command::Verify => verify(cfg),
        Command::Thresholds => thresholds(cfg),
        Command::Probe => probe(cfg),
    }
}

#[derive(Serialize)]
struct FieldAnalysis {
    name: String,
    linf: f64,
    b1_inf_1: f64,
    holder: BesovReport,
}

#[derive(Serialize)]
struct LpAnalysis {
    n: usize,
    #[serde(rename = "L")]
    length: f64,
    r: f64,
    q_min: i32,
    q_max: i32,
    a0: f64,
    fields: Vec<FieldAnalysis>,
}

fn lp_analyze(cfg: &RunConfig) -> Result<String> {
    let fields: Vec<(String, SpectralField)> = match &cfg.input {
        Some(path) => {
            let (header, f) = load_snapshot(path)?;
            vec![(header.name, f)]
        }
        None => {
            let p = partition(cfg)?;
            let s = initial_state(cfg, &p)?;
            vec![("theta".into(), s.theta), ("u1".into(), s.u.u1), ("u2".into(), s.u.u2)]
        }
    };
    let p = build_partition(fields[0].1.grid())?;
    let analysis = LpAnalysis {
        n: p.grid().n(),
        length: p.grid().length(),
        r: cfg.r,
        q_min: p.q_min(),
        q_max: p.q_max(),
        a0: a0_constant().a0,
        fields: fields
            .iter()
            .map(|(name, f)| {
                Ok(FieldAnalysis {
                    name: name.clone(),
                    linf: linf_norm(f),
                    b1_inf_1: b1_inf_1_norm(&p, f),
                    holder: holder_norm(&p, f, cfg.r)?,
                })
            })
            .collect::<Result<_>>()?,
    };
    write_json(&cfg.out_dir.join("lp_analysis.json"), &analysis)?;
    let norms: Vec<String> = analysis
        .fields
        .iter()
        .map(|f| format!("|{}|_C^{}={:.6e}", f.name, cfg.r, f.holder.value))
        .collect();
    Ok(format!(
        "lp-analyze: n={} q=[{}, {}] a0={:.5} {}",
        analysis.n,
        analysis.q_min,
        analysis.q_max,
        analysis.a0,
        norms.join(" ")
    ))
}

#[derive(Serialize)]
struct SolveSummary {
    t: f64,
    theta_r: f64,
    u_r: f64,
    grad_u_inf: f64,
    bkm_integral: f64,
    max_div_residual: f64,
    #[serde(rename = "C")]
    c: f64,
    c_source: String,
    continuation: ContinuationReport,
    temperature_bound: EnvelopeCheck,
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn solve(cfg: &RunConfig) -> Result<String> {
    let p = partition(cfg)?;
    let s0 = initial_state(cfg, &p)?;
    let (c, c_source) = resolve_c(cfg)?;
    let direct = DirectConfig {
        kernel: cfg.kernel,
        snapshot_every: cfg.snapshot_every,
        ..DirectConfig::new(cfg.horizon, cfg.dt, cfg.r)
    };
    let run = run_direct(&p, &s0, &direct)?;
    write_csv(&cfg.out_dir.join("monitor.csv"), |w| run.monitor.write_csv(w))?;
    save_state(&cfg.out_dir, "final", &run.final_state)?;
    if !run.snapshots.is_empty() {
        let dir = cfg.out_dir.join("snapshots");
        fs::create_dir_all(&dir)?;
        for (k, state) in run.snapshots.iter().enumerate() {
            save_state(&dir, &format!("{k:05}"), state)?;
        }
    }
    let last = run.monitor.last().expect("monitor has the initial sample");
    let summary = SolveSummary {
        t: last.t,
        theta_r: last.theta_r,
        u_r: last.u_r,
        grad_u_inf: last.grad_u_inf,
        bkm_integral: last.bkm_integral,
        max_div_residual: run.monitor.samples.iter().map(|s| s.div_residual).fold(0.0, f64::max),
        c,
        c_source,
        continuation: continuation_check(&run.monitor, cfg.horizon, c),
        temperature_bound: temperature_bound_check(&run.monitor, c),
    };
    write_json(&cfg.out_dir.join("solve.json"), &summary)?;
    Ok(format!(
        "solve: t={:.6} theta_r={:.6e} u_r={:.6e} bkm_integral={:.6e} verdict={:?} temperature_bound={} velocity_envelope={} C={:.4}",
        summary.t,
        summary.theta_r,
        summary.u_r,
        summary.bkm_integral,
        summary.continuation.verdict,
        pass(summary.temperature_bound.pass),
        pass(summary.continuation.envelope.pass),
        c
    ))
}

#[derive(Serialize)]
struct IterateSummary {
    status: IterationStatus,
    records: Vec<IterationRecord>,
    /// Fit over the records with `n ≥ 3`, when there are enough of them.
    contraction: Option<ContractionSummary>,
    /// `C^{r−1}` distance between the last iterate and a direct run at `T`.
    direct_distance: f64,
}

fn iterate(cfg: &RunConfig) -> Result<String> {
    let p = partition(cfg)?;
    let s0 = initial_state(cfg, &p)?;
    let icfg = IterationConfig {
        r: cfg.r,
        n_max: cfg.n_max,
        horizon: cfg.horizon,
        dt: cfg.dt,
        tol: cfg.tol,
        theta_index: cfg.theta_index,
    };
    let out = iterate_scheme(&p, &s0.theta, &s0.u, &icfg)?;
    write_csv(&cfg.out_dir.join("iterations.csv"), |w| write_iterations_csv(&out.records, w))?;
    let limit = out.limit.last().expect("iterate has the initial state");
    save_state(&cfg.out_dir, "limit", limit)?;
    let tail: Vec<IterationRecord> = out.records.iter().filter(|r| r.n >= 3).cloned().collect();
    let contraction = (tail.len() >= MIN_RECORDS).then(|| contraction_report(&tail)).transpose()?;
    let direct = run_direct(&p, &s0, &DirectConfig::new(cfg.horizon, cfg.dt, cfg.r))?.final_state;
    let s = cfg.r - 1.0;
    let direct_distance = holder_value(&p, &(&limit.theta - &direct.theta), s)
        .max(holder_value_vector(&p, &limit.u.axpy(-1.0, &direct.u), s));
    let last_gap = out.records.last().map_or(0.0, IterationRecord::gap);
    let rho = contraction
        .as_ref()
        .and_then(|c| c.rho)
        .map_or_else(|| "n/a".to_string(), |q| format!("{q:.4e}"));
    let summary = IterateSummary { status: out.status.clone(), records: out.records, contraction, direct_distance };
    write_json(&cfg.out_dir.join("iterate.json"), &summary)?;
    Ok(format!(
        "iterate: status={:?} iterations={} last_gap={last_gap:.3e} rho={rho} limit_vs_direct={direct_distance:.3e}",
        summary.status,
        summary.records.len()
    ))
}

fn verify(cfg: &RunConfig) -> Result<String> {
    let reports = verify_many(&cfg.estimates, &cfg.corpus)?;
    write_json(&cfg.out_dir.join("reports.json"), &reports)?;
    for rep in &reports {
        write_json(&cfg.out_dir.join(format!("report_{}.json", rep.name)), rep)?;
    }
    write_csv(&cfg.out_dir.join("summary.csv"), |w| write_summary_csv(&reports, w))?;
    let parts: Vec<String> = reports
        .iter()
        .map(|r| format!("{} c_emp={:.4} stable={}", r.name, r.c_emp, r.stable))
        .collect();
    Ok(format!("verify: {}", parts.join("; ")))
}

fn thresholds(cfg: &RunConfig) -> Result<String> {
    let p = partition(cfg)?;
    let s0 = initial_state(cfg, &p)?;
    let (c, _) = resolve_c(cfg)?;
    let rep = threshold_formulas(
        holder_value(&p, &s0.theta, cfg.r),
        holder_value_vector(&p, &s0.u, cfg.r),
        cfg.r,
        c,
        a0_constant().a0,
        cfg.constants,
    )?;
    write_json(&cfg.out_dir.join("thresholds.json"), &rep)?;
    let all: Vec<String> = rep.all().map(|t| format!("{}={:.4e}", t.name, t.value)).collect();
    Ok(format!("thresholds: C={c:.4} t_star={:.6e} {}", rep.t_star, all.join(" ")))
}

#[derive(Serialize)]
struct ProbeSummary {
    eps: Vec<f64>,
    terminal_gaps: Vec<f64>,
    /// Terminal-gap ratios of consecutive perturbation sizes.
    ratios: Vec<f64>,
}

fn probe(cfg: &RunConfig) -> Result<String> {
    let p = partition(cfg)?;
    let s0 = initial_state(cfg, &p)?;
    let direction = synthesize_holder_field(&p, cfg.r - 1.0, 1.0, cfg.seed.wrapping_add(1));
    let curves = uniqueness_probe(&p, &s0, &direction, &cfg.eps, cfg.r, cfg.horizon, cfg.dt)?;
    write_csv(&cfg.out_dir.join("probe.csv"), |w| write_probe_csv(&curves, w))?;
    let terminal_gaps: Vec<f64> = curves.iter().map(|c| c.terminal_gap()).collect();
    let ratios: Vec<f64> = terminal_gaps.windows(2).map(|w| w[0] / w[1]).collect();
    let summary = ProbeSummary { eps: cfg.eps.clone(), terminal_gaps, ratios };
    write_json(&cfg.out_dir.join("probe.json"), &summary)?;
    let gaps: Vec<String> = summary
        .eps
        .iter()
        .zip(&summary.terminal_gaps)
        .map(|(e, g)| format!("{e:e}->{g:.3e}"))
        .collect();
    let ratios: Vec<String> = summary.ratios.iter().map(|q| format!("{q:.4}")).collect();
    Ok(format!("probe: terminal gaps {} ratios [{}]", gaps.join(" "), ratios.join(", ")))
}
