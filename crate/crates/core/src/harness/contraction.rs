use serde::{Deserialize, Serialize};

use crate::boussinesq::{envelope_check, EnvelopeCheck, IterationRecord, MonitorRecord};
use crate::error::{Error, Result};

/// Gaps at or below this count as converged and are left out of the fit.
pub const CONVERGED_GAP: f64 = 1e-14;
/// Largest acceptable fitted ratio: the contraction factor `3/5` plus slack `0.2`.
pub const RHO_LIMIT: f64 = 0.8;
/// Fewest iteration records a report accepts.
pub const MIN_RECORDS: usize = 4;

/// Geometric fit `gap_n ≈ α ρⁿ` of Cauchy gaps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContractionSummary {
    /// `(n, gap)` of every record.
    pub gaps: Vec<(usize, f64)>,
    /// Gaps above [`CONVERGED_GAP`] never increase.
    pub monotone: bool,
    /// Every gap is at or below [`CONVERGED_GAP`].
    pub converged: bool,
    pub alpha: Option<f64>,
    pub rho: Option<f64>,
    /// `converged`, or monotone with `ρ ≤ RHO_LIMIT`.
    pub pass: bool,
}

/// Least-squares fit of `ln gap` against `n` over the gaps above the
/// convergence floor.
pub fn contraction_report(records: &[IterationRecord]) -> Result<ContractionSummary> {
    if records.len() < MIN_RECORDS {
        return Err(Error::InvalidParameter {
            name: "records",
            reason: format!("need at least {MIN_RECORDS} iterations (got {})", records.len()),
        });
    }
    let gaps: Vec<(usize, f64)> = records.iter().map(|r| (r.n, r.gap())).collect();
    let live: Vec<(f64, f64)> = gaps
        .iter()
        .filter(|(_, g)| *g > CONVERGED_GAP)
        .map(|&(n, g)| (n as f64, g))
        .collect();
    let monotone = live.windows(2).all(|w| w[1].1 <= w[0].1);
    let converged = live.is_empty();
    let fit = if monotone && live.len() >= 2 {
        let m = live.len() as f64;
        let mx = live.iter().map(|p| p.0).sum::<f64>() / m;
        let my = live.iter().map(|p| p.1.ln()).sum::<f64>() / m;
        let sxx: f64 = live.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = live.iter().map(|p| (p.0 - mx) * (p.1.ln() - my)).sum();
        let slope = sxy / sxx;
        Some(((my - slope * mx).exp(), slope.exp()))
    } else {
        None
    };
    let rho = fit.map(|f| f.1);
    let pass = converged || (monotone && (live.len() < 2 || rho.is_some_and(|q| q <= RHO_LIMIT)));
    Ok(ContractionSummary {
        gaps,
        monotone,
        converged,
        alpha: fit.map(|f| f.0),
        rho,
        pass,
    })
}

/// Replays the velocity envelope
/// `‖u₀‖_r e^{C I} + (2 + 2^{−r}) ‖θ₀‖_r (∫ e^{C I}) e^{C I}`, `I = ∫‖∇u‖_∞`,
/// along a monitored run.
pub fn blowup_envelope_check(
    record: &MonitorRecord,
    theta0_r: f64,
    u0_r: f64,
    c_frozen: f64,
) -> EnvelopeCheck {
    envelope_check(record, theta0_r, u0_r, c_frozen)
}

/// Checks `‖θ(t)‖_r ≤ ‖θ₀‖_r e^{C ∫‖∇u‖_∞}` at every sample.
pub fn temperature_bound_check(record: &MonitorRecord, c_frozen: f64) -> EnvelopeCheck {
    let theta0 = record.samples.first().map_or(0.0, |s| s.theta_r);
    let mut margin = f64::INFINITY;
    let mut t_worst = 0.0;
    for s in &record.samples {
        let m = theta0 * (c_frozen * s.bkm_integral).exp() - s.theta_r;
        if m < margin {
            margin = m;
            t_worst = s.t;
        }
    }
    EnvelopeCheck {
        pass: margin >= 0.0,
        margin,
        t_worst,
        c: c_frozen,
    }
}
