use serde::{Deserialize, Serialize};

use super::state::MonitorRecord;

/// Trapezoidal `∫ ‖∇u‖_∞ dt` over all samples.
pub fn blowup_integral(record: &MonitorRecord) -> f64 {
    record
        .samples
        .windows(2)
        .map(|w| 0.5 * (w[1].t - w[0].t) * (w[0].grad_u_inf + w[1].grad_u_inf))
        .sum()
}

/// Velocity envelope from the temperature and velocity a priori bounds:
/// `E(t) = ‖u₀‖_r e^{C I(t)} + (2 + 2^{−r}) ‖θ₀‖_r (∫₀ᵗ e^{C I(s)} ds) e^{C I(t)}`
/// with `I(t) = ∫₀ᵗ ‖∇u‖_∞`, evaluated at every sample.
pub fn velocity_envelope(record: &MonitorRecord, theta0_r: f64, u0_r: f64, c: f64) -> Vec<f64> {
    let coupling = 2.0 + 2f64.powf(-record.r);
    let mut inner = 0.0;
    let mut prev: Option<(f64, f64)> = None;
    record
        .samples
        .iter()
        .map(|s| {
            let growth = (c * s.bkm_integral).exp();
            if let Some((t0, g0)) = prev {
                inner += 0.5 * (s.t - t0) * (g0 + growth);
            }
            prev = Some((s.t, growth));
            u0_r * growth + coupling * theta0_r * inner * growth
        })
        .collect()
}

/// Outcome of replaying the velocity envelope along a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeCheck {
    pub pass: bool,
    /// `min_t (E(t) − ‖u(t)‖_r)`.
    pub margin: f64,
    /// Time of the smallest margin.
    pub t_worst: f64,
    pub c: f64,
}

/// Checks `‖u(t)‖_r ≤ E(t)` at every sample.
pub fn envelope_check(record: &MonitorRecord, theta0_r: f64, u0_r: f64, c: f64) -> EnvelopeCheck {
    let env = velocity_envelope(record, theta0_r, u0_r, c);
    let mut margin = f64::INFINITY;
    let mut t_worst = 0.0;
    for (s, e) in record.samples.iter().zip(&env) {
        let m = e - s.u_r;
        if m < margin {
            margin = m;
            t_worst = s.t;
        }
    }
    EnvelopeCheck {
        pass: margin >= 0.0,
        margin,
        t_worst,
        c,
    }
}

/// Times at which `∫‖∇u‖_∞` first reaches `2^j` times its first positive value.
pub fn doubling_times(record: &MonitorRecord) -> Vec<f64> {
    let mut out = Vec::new();
    let Some(base) = record.samples.iter().find(|s| s.bkm_integral > 0.0) else {
        return out;
    };
    let mut target = base.bkm_integral;
    for s in &record.samples {
        while s.bkm_integral >= target {
            out.push(s.t);
            target *= 2.0;
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Finite,
    Suspect,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuationReport {
    pub verdict: Verdict,
    pub integral: f64,
    /// Durations between successive doublings of the integral.
    pub doubling_durations: Vec<f64>,
    /// Last three durations strictly decreasing.
    pub superlinear: bool,
    pub envelope: EnvelopeCheck,
}

/// Classifies the run up to `t_star`: SUSPECT needs both accelerating growth
/// of `∫‖∇u‖_∞` and a violated velocity envelope, otherwise FINITE.
pub fn continuation_check(record: &MonitorRecord, t_star: f64, c: f64) -> ContinuationReport {
    let window = MonitorRecord {
        r: record.r,
        samples: record.samples.iter().filter(|s| s.t <= t_star).cloned().collect(),
    };
    let (theta0_r, u0_r) = window
        .samples
        .first()
        .map(|s| (s.theta_r, s.u_r))
        .unwrap_or((0.0, 0.0));
    let times = doubling_times(&window);
    let durations: Vec<f64> = times.windows(2).map(|w| w[1] - w[0]).collect();
    let superlinear = durations.len() >= 3 && {
        let tail = &durations[durations.len() - 3..];
        tail[1] < tail[0] && tail[2] < tail[1]
    };
    let envelope = envelope_check(&window, theta0_r, u0_r, c);
    let verdict = if superlinear && !envelope.pass {
        Verdict::Suspect
    } else {
        Verdict::Finite
    };
    ContinuationReport {
        verdict,
        integral: blowup_integral(&window),
        doubling_durations: durations,
        superlinear,
        envelope,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boussinesq::MonitorSample;

    fn record(ts: &[f64], grads: &[f64], u_r: &[f64]) -> MonitorRecord {
        let mut samples: Vec<MonitorSample> = Vec::new();
        for i in 0..ts.len() {
            let bkm = match samples.last() {
                Some(p) => p.bkm_integral + 0.5 * (ts[i] - p.t) * (grads[i] + p.grad_u_inf),
                None => 0.0,
            };
            samples.push(MonitorSample {
                t: ts[i],
                grad_u_inf: grads[i],
                bkm_integral: bkm,
                theta_r: 0.5,
                u_r: u_r[i],
                div_residual: 0.0,
                theta_linf: 0.0,
                kinetic_energy: 0.0,
                buoyancy_flux: 0.0,
            });
        }
        MonitorRecord { r: 1.5, samples }
    }

    #[test]
    fn still_fluid() {
        let ts: Vec<f64> = (0..11).map(|i| i as f64 * 0.1).collect();
        let zeros = vec![0.0; 11];
        let rec = record(&ts, &zeros, &zeros);
        assert_eq!(blowup_integral(&rec), 0.0);
        let env = velocity_envelope(&rec, 0.5, 0.0, 3.0);
        // E(t) = (2 + 2^{-r}) ‖θ₀‖_r t
        for (t, e) in ts.iter().zip(&env) {
            assert!((e - (2.0 + 2f64.powf(-1.5)) * 0.5 * t).abs() < 1e-14);
        }
        let rep = continuation_check(&rec, 1.0, 3.0);
        assert_eq!(rep.verdict, Verdict::Finite);
    }

    #[test]
    fn accelerating_growth_with_violation_is_suspect() {
        // ‖∇u‖ ~ (1.05 − t)^{-2} and ‖u‖_r far above any envelope
        let ts: Vec<f64> = (0..=2000).map(|i| i as f64 * 0.0005).collect();
        let grads: Vec<f64> = ts.iter().map(|t| (1.05 - t).powi(-2)).collect();
        let big: Vec<f64> = ts.iter().map(|t| 1.0 + 1e6 * t).collect();
        let rec = record(&ts, &grads, &big);
        let rep = continuation_check(&rec, 1.0, 0.1);
        assert!(rep.superlinear);
        assert_eq!(rep.verdict, Verdict::Suspect);
        // growth alone is not enough
        let calm: Vec<f64> = vec![0.0; ts.len()];
        let rep = continuation_check(&record(&ts, &grads, &calm), 1.0, 0.1);
        assert_eq!(rep.verdict, Verdict::Finite);
    }

    #[test]
    fn linear_growth_is_not_superlinear() {
        let ts: Vec<f64> = (0..=100).map(|i| i as f64 * 0.1).collect();
        let ones = vec![1.0; ts.len()];
        let rep = continuation_check(&record(&ts, &ones, &ones), 100.0, 0.0);
        assert!(!rep.superlinear);
    }
}
