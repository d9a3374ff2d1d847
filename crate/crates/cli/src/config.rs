use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use boussinesq_core::boussinesq::{Kernel, Preset, ThetaIndex};
use boussinesq_core::harness::{CorpusSpec, Estimate, ThresholdConstants, DEFAULT_P, DEFAULT_Q, ESTIMATES};
use boussinesq_core::spectral::make_grid;

pub const DEFAULT_OUT_DIR: &str = "out";
pub const DEFAULT_N_MAX: usize = 30;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_EPS: [f64; 3] = [1e-3, 1e-4, 1e-5];

#[derive(Debug, Parser)]
#[command(
    name = "boussinesq-lp",
    version,
    about = "Littlewood-Paley analysis, solvers and estimate checks for the inviscid Boussinesq system"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Dyadic block norms, Hölder and Besov norms of the initial data or a snapshot.
    LpAnalyze(Flags),
    /// Direct RK4 run with monitor, a priori bound checks and snapshots.
    Solve(Flags),
    /// Successive approximations with Cauchy-gap records.
    Iterate(Flags),
    /// Empirical constants of the registered estimates over a seeded corpus.
    Verify(Flags),
    /// Existence-time formulas for the initial data.
    Thresholds(Flags),
    /// Twin runs with perturbed temperature.
    Probe(Flags),
}

impl CliCommand {
    fn split(self) -> (Command, Flags) {
        match self {
            CliCommand::LpAnalyze(f) => (Command::LpAnalyze, f),
            CliCommand::Solve(f) => (Command::Solve, f),
            CliCommand::Iterate(f) => (Command::Iterate, f),
            CliCommand::Verify(f) => (Command::Verify, f),
            CliCommand::Thresholds(f) => (Command::Thresholds, f),
            CliCommand::Probe(f) => (Command::Probe, f),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    LpAnalyze,
    Solve,
    Iterate,
    Verify,
    Thresholds,
    Probe,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::LpAnalyze => "lp-analyze",
            Command::Solve => "solve",
            Command::Iterate => "iterate",
            Command::Verify => "verify",
            Command::Thresholds => "thresholds",
            Command::Probe => "probe",
        }
    }

    fn default_preset(self) -> Preset {
        match self {
            Command::Iterate | Command::Thresholds => Preset::SmallDataIteration,
            _ => Preset::TaylorGreen,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    #[default]
    Direct,
    Iterate,
}

/// Reads a kebab-case enum through its serde representation.
fn parse_serde<T: DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    s.parse().map_err(|e: boussinesq_core::Error| e.to_string())
}

fn parse_estimates(s: &str) -> Result<EstimateSelection, String> {
    if s == "all" {
        Ok(EstimateSelection(ESTIMATES.to_vec()))
    } else {
        s.parse().map(|e| EstimateSelection(vec![e])).map_err(|e: boussinesq_core::Error| e.to_string())
    }
}

/// One `--estimate` value: a registered id or `all`.
#[derive(Clone, Debug)]
pub struct EstimateSelection(Vec<Estimate>);

/// Command-line flags. Every field overrides the same key of `--config`.
#[derive(Clone, Debug, Default, Args)]
pub struct Flags {
    /// JSON file with any of the keys below; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_parser = parse_preset)]
    pub preset: Option<Preset>,
    /// Grid points per side (power of two, at least 16).
    #[arg(long)]
    pub n: Option<usize>,
    /// Box side length.
    #[arg(long = "L")]
    pub length: Option<f64>,
    /// Hölder regularity.
    #[arg(long)]
    pub r: Option<f64>,
    /// Final time.
    #[arg(long = "T")]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub theta_amplitude: Option<f64>,
    #[arg(long)]
    pub u_amplitude: Option<f64>,
    /// boussinesq | euler
    #[arg(long, value_parser = parse_serde::<Kernel>)]
    pub kernel: Option<Kernel>,
    /// direct | iterate
    #[arg(long, value_parser = parse_serde::<Scheme>)]
    pub scheme: Option<Scheme>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// next | previous
    #[arg(long, value_parser = parse_serde::<ThetaIndex>)]
    pub theta_index: Option<ThetaIndex>,
    #[arg(long = "P")]
    pub p: Option<f64>,
    #[arg(long = "Q")]
    pub q: Option<f64>,
    #[arg(long = "S")]
    pub s: Option<f64>,
    /// Gronwall constant C(r); skips measuring it.
    #[arg(long = "C", conflicts_with = "reports")]
    pub c: Option<f64>,
    /// Estimate reports written by `verify`, used for C(r).
    #[arg(long)]
    pub reports: Option<PathBuf>,
    /// Field snapshot analysed by `lp-analyze`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Keep every k-th state of a direct run as snapshots (0 keeps none).
    #[arg(long)]
    pub snapshot_every: Option<usize>,
    /// Estimate id or `all`; repeatable.
    #[arg(long = "estimate", value_parser = parse_estimates)]
    pub estimate: Vec<EstimateSelection>,
    /// Perturbation sizes for `probe`, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,
    /// Corpus regularities, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub corpus_r: Option<Vec<f64>>,
    /// Corpus seeds `0..count`.
    #[arg(long)]
    pub corpus_seeds: Option<u64>,
    /// Corpus resolutions, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub corpus_n: Option<Vec<usize>>,
}

/// Keys accepted in the `--config` file.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub preset: Option<String>,
    pub n: Option<usize>,
    #[serde(rename = "L")]
    pub length: Option<f64>,
    pub r: Option<f64>,
    #[serde(rename = "T")]
    pub horizon: Option<f64>,
    pub dt: Option<f64>,
    pub seed: Option<u64>,
    pub theta_amplitude: Option<f64>,
    pub u_amplitude: Option<f64>,
    pub kernel: Option<Kernel>,
    pub scheme: Option<Scheme>,
    pub n_max: Option<usize>,
    pub tol: Option<f64>,
    pub theta_index: Option<ThetaIndex>,
    #[serde(rename = "P")]
    pub p: Option<f64>,
    #[serde(rename = "Q")]
    pub q: Option<f64>,
    #[serde(rename = "S")]
    pub s: Option<f64>,
    #[serde(rename = "C")]
    pub c: Option<f64>,
    pub reports: Option<PathBuf>,
    pub input: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub snapshot_every: Option<usize>,
    pub estimates: Option<Vec<String>>,
    pub eps: Option<Vec<f64>>,
    pub corpus: Option<CorpusSpec>,
}

/// Fully resolved and validated parameters of one command.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub preset: Preset,
    pub n: usize,
    #[serde(rename = "L")]
    pub length: f64,
    pub r: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub dt: f64,
    pub seed: u64,
    pub theta_amplitude: f64,
    pub u_amplitude: f64,
    pub kernel: Kernel,
    pub scheme: Scheme,
    pub n_max: usize,
    pub tol: f64,
    pub theta_index: ThetaIndex,
    pub constants: ThresholdConstants,
    #[serde(rename = "C")]
    pub c: Option<f64>,
    pub reports: Option<PathBuf>,
    pub input: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub snapshot_every: usize,
    pub estimates: Vec<Estimate>,
    pub eps: Vec<f64>,
    pub corpus: CorpusSpec,
}

/// Why a command line could not become a [`RunConfig`].
#[derive(Debug)]
pub enum ConfigError {
    /// Help or version text requested; not a failure.
    Display(String),
    /// Unknown command, malformed or conflicting flags.
    Usage(String),
    /// Unreadable or malformed config file.
    File(String),
    /// Every invalid field, one message each.
    Invalid(Vec<String>),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Display(s) | ConfigError::Usage(s) => f.write_str(s.trim_end()),
            ConfigError::File(s) => write!(f, "config file: {s}"),
            ConfigError::Invalid(list) => {
                writeln!(f, "invalid configuration:")?;
                for (i, m) in list.iter().enumerate() {
                    if i > 0 {
                        writeln!(f)?;
                    }
                    write!(f, "  {m}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for ConfigError {}

fn load_file(path: &Path) -> Result<FileConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::File(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| ConfigError::File(format!("{}: {e}", path.display())))
}

/// Parses `args` (program name first) and merges flags over the config file
/// over the preset defaults, then validates every field.
pub fn parse_config<I, T>(args: I) -> Result<RunConfig, ConfigError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            ConfigError::Display(e.to_string())
        }
        _ => ConfigError::Usage(e.to_string()),
    })?;
    let (command, flags) = cli.command.split();
    let file = match &flags.config {
        Some(path) => load_file(path)?,
        None => FileConfig::default(),
    };
    merge(command, flags, file)
}

fn merge(command: Command, flags: Flags, file: FileConfig) -> Result<RunConfig, ConfigError> {
    let mut errors = Vec::new();
    let file_preset = match file.preset.as_deref().map(parse_preset) {
        Some(Ok(p)) => Some(p),
        Some(Err(e)) => {
            errors.push(format!("preset: {e}"));
            None
        }
        None => None,
    };
    let preset = flags.preset.or(file_preset).unwrap_or(command.default_preset());
    let d = preset.defaults();

    let file_estimates = file.estimates.as_ref().map(|names| {
        let mut out = Vec::new();
        for name in names {
            match parse_estimates(name) {
                Ok(sel) => out.extend(sel.0),
                Err(e) => errors.push(format!("estimates: {e}")),
            }
        }
        out
    });
    let flag_estimates: Option<Vec<Estimate>> =
        (!flags.estimate.is_empty()).then(|| flags.estimate.iter().flat_map(|s| s.0.clone()).collect());
    let mut estimates = flag_estimates.or(file_estimates).unwrap_or_else(|| ESTIMATES.to_vec());
    let mut seen = Vec::new();
    estimates.retain(|e| {
        let fresh = !seen.contains(e);
        seen.push(*e);
        fresh
    });

    let base_corpus = file.corpus.clone().unwrap_or_default();
    let corpus = CorpusSpec {
        r_values: flags.corpus_r.clone().unwrap_or(base_corpus.r_values),
        seeds: flags.corpus_seeds.map(|k| (0..k).collect()).unwrap_or(base_corpus.seeds),
        resolutions: flags.corpus_n.clone().unwrap_or(base_corpus.resolutions),
        ..base_corpus
    };

    let cfg = RunConfig {
        command,
        preset,
        n: flags.n.or(file.n).unwrap_or(d.n),
        length: flags.length.or(file.length).unwrap_or(d.length),
        r: flags.r.or(file.r).unwrap_or(d.r),
        horizon: flags.horizon.or(file.horizon).unwrap_or(d.horizon),
        dt: flags.dt.or(file.dt).unwrap_or(d.dt),
        seed: flags.seed.or(file.seed).unwrap_or(d.seed),
        theta_amplitude: flags.theta_amplitude.or(file.theta_amplitude).unwrap_or(d.theta_amplitude),
        u_amplitude: flags.u_amplitude.or(file.u_amplitude).unwrap_or(d.u_amplitude),
        kernel: flags.kernel.or(file.kernel).unwrap_or(d.kernel),
        scheme: flags.scheme.or(file.scheme).unwrap_or_default(),
        n_max: flags.n_max.or(file.n_max).unwrap_or(DEFAULT_N_MAX),
        tol: flags.tol.or(file.tol).unwrap_or(DEFAULT_TOL),
        theta_index: flags.theta_index.or(file.theta_index).unwrap_or_default(),
        constants: ThresholdConstants {
            p: flags.p.or(file.p).unwrap_or(DEFAULT_P),
            q: flags.q.or(file.q).unwrap_or(DEFAULT_Q),
            s: flags.s.or(file.s),
        },
        c: flags.c.or(file.c),
        reports: flags.reports.clone().or(file.reports),
        input: flags.input.clone().or(file.input),
        out_dir: flags.out_dir.clone().or(file.out_dir).unwrap_or_else(|| DEFAULT_OUT_DIR.into()),
        snapshot_every: flags.snapshot_every.or(file.snapshot_every).unwrap_or(0),
        estimates,
        eps: flags.eps.clone().or(file.eps).unwrap_or_else(|| DEFAULT_EPS.to_vec()),
        corpus,
    };
    validate(&cfg, &mut errors);
    if errors.is_empty() {
        Ok(cfg)
    } else {
        Err(ConfigError::Invalid(errors))
    }
}

fn positive(errors: &mut Vec<String>, name: &str, v: f64) {
    if !(v > 0.0 && v.is_finite()) {
        errors.push(format!("{name}: must be positive and finite (got {v})"));
    }
}

fn nonnegative(errors: &mut Vec<String>, name: &str, v: f64) {
    if !(v >= 0.0 && v.is_finite()) {
        errors.push(format!("{name}: must be nonnegative and finite (got {v})"));
    }
}

fn readable(errors: &mut Vec<String>, name: &str, path: &Option<PathBuf>) {
    if let Some(p) = path {
        if !p.is_file() {
            errors.push(format!("{name}: {} is not a readable file", p.display()));
        }
    }
}

/// Creates `dir` if needed and checks a file can be written in it.
fn writable(dir: &Path) -> Result<(), String> {
    std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
    let probe = dir.join(".write-check");
    std::fs::write(&probe, b"").map_err(|e| e.to_string())?;
    std::fs::remove_file(&probe).map_err(|e| e.to_string())
}

fn validate(cfg: &RunConfig, errors: &mut Vec<String>) {
    if let Err(e) = make_grid(cfg.n, 1.0) {
        errors.push(format!("n: {e}"));
    }
    positive(errors, "L", cfg.length);
    let r_floor = if cfg.command == Command::LpAnalyze { 0.0 } else { 1.0 };
    if !(cfg.r > r_floor && cfg.r.is_finite()) {
        errors.push(format!("r: must exceed {r_floor} (got {})", cfg.r));
    }
    positive(errors, "T", cfg.horizon);
    positive(errors, "dt", cfg.dt);
    nonnegative(errors, "theta_amplitude", cfg.theta_amplitude);
    nonnegative(errors, "u_amplitude", cfg.u_amplitude);
    if cfg.n_max < 2 {
        errors.push(format!("n_max: needs at least 2 (got {})", cfg.n_max));
    }
    positive(errors, "tol", cfg.tol);
    positive(errors, "P", cfg.constants.p);
    positive(errors, "Q", cfg.constants.q);
    if let Some(s) = cfg.constants.s {
        positive(errors, "S", s);
    }
    if let Some(c) = cfg.c {
        positive(errors, "C", c);
    }
    if cfg.c.is_some() && cfg.reports.is_some() {
        errors.push("C: conflicts with reports (give one source for C(r))".into());
    }
    readable(errors, "reports", &cfg.reports);
    readable(errors, "input", &cfg.input);
    if cfg.eps.is_empty() {
        errors.push("eps: needs at least one perturbation size".into());
    }
    for &e in &cfg.eps {
        nonnegative(errors, "eps", e);
    }
    if cfg.estimates.is_empty() {
        errors.push("estimates: needs at least one estimate".into());
    }
    let corpus = &cfg.corpus;
    if corpus.r_values.is_empty() || corpus.seeds.is_empty() || corpus.resolutions.is_empty() {
        errors.push("corpus: needs at least one r, seed and resolution".into());
    }
    for &r in &corpus.r_values {
        if !(r > 1.0 && r.is_finite()) {
            errors.push(format!("corpus.r_values: must exceed 1 (got {r})"));
        }
    }
    for &n in &corpus.resolutions {
        if let Err(e) = make_grid(n, 1.0) {
            errors.push(format!("corpus.resolutions: {e}"));
        }
    }
    positive(errors, "corpus.L", corpus.box_length);
    positive(errors, "corpus.amplitude", corpus.amplitude);
    if let Err(e) = writable(&cfg.out_dir) {
        errors.push(format!("out_dir: {} is not writable ({e})", cfg.out_dir.display()));
    }
}
