use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::littlewood_paley::maybe_inf;

/// Absolute residual at which the implicit `T₂⁽³⁾` root is accepted.
pub const ROOT_TOLERANCE: f64 = 1e-10;
/// Default amplification factors for the uniform bounds `Pa₀‖θ₀‖_r`, `Qa₀‖u₀‖_r`.
pub const DEFAULT_P: f64 = 32.0;
pub const DEFAULT_Q: f64 = 32.0;
/// `S = DEFAULT_S_FACTOR · max(‖θ₀‖_r, ‖u₀‖_r)` unless given.
pub const DEFAULT_S_FACTOR: f64 = 10.0;

/// Free constants of the existence-time formulas.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdConstants {
    #[serde(rename = "P")]
    pub p: f64,
    #[serde(rename = "Q")]
    pub q: f64,
    /// `None` selects the default `S`.
    #[serde(rename = "S")]
    pub s: Option<f64>,
}

impl Default for ThresholdConstants {
    fn default() -> Self {
        Self { p: DEFAULT_P, q: DEFAULT_Q, s: None }
    }
}

/// Named time bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub name: String,
    #[serde(with = "maybe_inf")]
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub a0: f64,
    #[serde(rename = "P")]
    pub p: f64,
    #[serde(rename = "Q")]
    pub q: f64,
    #[serde(rename = "S")]
    pub s: f64,
    /// Constant `C(r)` substituted in every formula.
    #[serde(rename = "C")]
    pub c: f64,
    pub r: f64,
    pub theta0_r: f64,
    pub u0_r: f64,
    /// `T₁⁽¹⁾ … T₁⁽⁴⁾`.
    pub t1: Vec<Threshold>,
    /// `T₂⁽¹⁾ … T₂⁽⁴⁾`.
    pub t2: Vec<Threshold>,
    #[serde(with = "maybe_inf")]
    pub t1_min: f64,
    #[serde(with = "maybe_inf")]
    pub t2_min: f64,
    #[serde(with = "maybe_inf")]
    pub t_star: f64,
    /// `|F(T₂⁽³⁾)|` of the implicit equation, `0` when the root is infinite.
    pub t2_3_residual: f64,
}

impl ThresholdReport {
    pub fn all(&self) -> impl Iterator<Item = &Threshold> {
        self.t1.iter().chain(&self.t2)
    }
}

/// `ln(x)` for `x > 1`, else an error naming `formula`.
fn log_of(formula: &'static str, x: f64) -> Result<f64> {
    if x > 1.0 {
        Ok(x.ln())
    } else {
        Err(Error::LogDomain { formula, argument: x })
    }
}

fn threshold(name: &str, value: f64) -> Threshold {
    Threshold { name: name.to_string(), value }
}

/// Root of `A e^{Bt} t = target` for `A, B, target > 0`: bracket by doubling
/// from `guess`, then bisect until `|F| ≤ ROOT_TOLERANCE` or the bracket stops
/// shrinking. Returns `(t, |F(t)|)`.
pub fn solve_implicit_time(a: f64, b: f64, target: f64, guess: f64) -> (f64, f64) {
    let f = |t: f64| a * (b * t).exp() * t - target;
    let mut lo = 0.0;
    let mut hi = if guess > 0.0 && guess.is_finite() { guess } else { 1.0 };
    while f(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    let mut mid = hi;
    for _ in 0..400 {
        mid = 0.5 * (lo + hi);
        let v = f(mid);
        if v.abs() <= ROOT_TOLERANCE || mid <= lo || mid >= hi {
            break;
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (mid, f(mid).abs())
}

/// Evaluates `T₁⁽¹⁾…T₁⁽⁴⁾` and `T₂⁽¹⁾…T₂⁽⁴⁾` with `C(r) = c`.
///
/// `T₂⁽³⁾` is the positive root of
/// `(2CPa₀‖θ₀‖_r / (CQa₀‖u₀‖_r)) e^{3CtQa₀‖u₀‖_r} t = Qa₀²/5`, infinite when
/// `θ₀ = 0`.
pub fn threshold_formulas(
    theta0_r: f64,
    u0_r: f64,
    r: f64,
    c: f64,
    a0: f64,
    constants: ThresholdConstants,
) -> Result<ThresholdReport> {
    let positive = |name: &'static str, v: f64| {
        if v > 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParameter {
                name,
                reason: format!("must be positive and finite (got {v})"),
            })
        }
    };
    positive("u0_r", u0_r)?;
    positive("C", c)?;
    positive("a0", a0)?;
    positive("P", constants.p)?;
    positive("Q", constants.q)?;
    if !(theta0_r >= 0.0 && theta0_r.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "theta0_r",
            reason: format!("must be nonnegative and finite (got {theta0_r})"),
        });
    }
    let s = constants.s.unwrap_or(DEFAULT_S_FACTOR * theta0_r.max(u0_r));
    positive("S", s)?;
    let (p, q) = (constants.p, constants.q);
    let pa = p * a0;
    let qa = q * a0;
    let cu = c * u0_r;
    let cqau = c * qa * u0_r;
    let buoyancy = 2.0 * pa * theta0_r / u0_r;

    let t1 = vec![
        threshold("T1(1)", log_of("T1(1)", pa)? / cu),
        threshold("T1(2)", log_of("T1(2)", qa)? / (3.0 * cu + buoyancy)),
        threshold("T1(3)", log_of("T1(3)", pa)? / cqau),
        threshold("T1(4)", log_of("T1(4)", qa)? / (3.0 * cqau + buoyancy)),
    ];

    let t2_1_u = log_of("T2(1)", s / u0_r)? / (2.0 * cqau);
    let t2_1_theta = if theta0_r > 0.0 {
        log_of("T2(1)", s / theta0_r)? / (3.0 * cqau)
    } else {
        f64::INFINITY
    };
    let t2_2 = log_of("T2(2)", pa / (5.0 * c * q * u0_r))? / (3.0 * cqau);
    let (t2_3, residual) = if theta0_r > 0.0 {
        let a = 2.0 * c * pa * theta0_r / cqau;
        solve_implicit_time(a, 3.0 * cqau, qa * a0 / 5.0, t2_2)
    } else {
        (f64::INFINITY, 0.0)
    };
    let t2_4 = if theta0_r > 0.0 {
        log_of("T2(4)", 1.0 + pa * cqau * cqau / (5.0 * c * pa * theta0_r))? / cqau
    } else {
        f64::INFINITY
    };
    let t2 = vec![
        threshold("T2(1)", t2_1_u.min(t2_1_theta)),
        threshold("T2(2)", t2_2),
        threshold("T2(3)", t2_3),
        threshold("T2(4)", t2_4),
    ];
    let t1_min = t1.iter().map(|t| t.value).fold(f64::INFINITY, f64::min);
    let t2_min = t2.iter().map(|t| t.value).fold(f64::INFINITY, f64::min);
    Ok(ThresholdReport {
        a0,
        p,
        q,
        s,
        c,
        r,
        theta0_r,
        u0_r,
        t1,
        t2,
        t1_min,
        t2_min,
        t_star: t1_min.min(t2_min),
        t2_3_residual: residual,
    })
}
