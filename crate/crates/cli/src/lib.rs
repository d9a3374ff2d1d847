//! Command-line driver: configuration merging, validation, dispatch and
//! artifact output for `boussinesq-core`.
//!
//! Exit codes: `0` success, `1` numerical abort (CFL violation, non-finite
//! values) or I/O failure, `2` configuration error.

pub mod config;
pub mod run;

pub use config::{parse_config, Command, ConfigError, RunConfig, Scheme};
pub use run::run;

use boussinesq_core::Error;

/// Caps rayon's worker count.
pub const THREADS_ENV: &str = "BOUSSINESQ_LP_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERICAL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Exit code for a failed run.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical_abort() || matches!(e, Error::Io(_)) {
        EXIT_NUMERICAL
    } else {
        EXIT_CONFIG
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&k| k > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer (got {raw:?})"))?;
    // a pool from an earlier call in the same process stays in place
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

/// Parses `args`, runs the command and reports on stdout/stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return EXIT_CONFIG;
    }
    let cfg = match parse_config(args) {
        Ok(cfg) => cfg,
        Err(ConfigError::Display(text)) => {
            println!("{}", text.trim_end());
            return EXIT_OK;
        }
        Err(ConfigError::Usage(text)) => {
            eprintln!("{}", text.trim_end());
            return EXIT_CONFIG;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    match run(&cfg) {
        Ok(summary) => {
            println!("{summary}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {} failed: {e}", cfg.command.name());
            exit_code(&e)
        }
    }
}
