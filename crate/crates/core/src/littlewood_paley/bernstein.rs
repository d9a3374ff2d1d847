use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::partition::DyadicPartition;
use crate::error::{Error, Result};
use crate::spectral::{lp_norm_of_values, SpectralField};

/// Both sides of the annulus inequality for one block-localized field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BernsteinRecord {
    pub q: i32,
    pub k: u32,
    pub a: f64,
    pub b: f64,
    /// `sup_{|α|=k} ‖∂^α f‖_{L^b} / (λ^{k + 2(1/a − 1/b)} ‖f‖_{L^a})`, `λ = 2^q`.
    pub upper_ratio: f64,
    /// `sup_{|α|=k} ‖∂^α f‖_{L^a} / (λ^k ‖f‖_{L^a})`.
    pub lower_ratio: f64,
}

fn partial(f: &SpectralField, j1: u32, j2: u32) -> SpectralField {
    let g = f.grid().clone();
    let i = Complex64::new(0.0, 1.0);
    let m = i.powu(j1 + j2);
    f.map_modes(|i1, i2, c| {
        c * m * g.odd_wavenumber(i1).powi(j1 as i32) * g.odd_wavenumber(i2).powi(j2 as i32)
    })
}

fn inverse_exponent(p: f64) -> f64 {
    if p.is_infinite() {
        0.0
    } else {
        1.0 / p
    }
}

/// Bernstein ratios of `Δ_q f` for derivatives of order `k`.
pub fn bernstein_report(
    partition: &DyadicPartition,
    f: &SpectralField,
    q: i32,
    k: u32,
    a: f64,
    b: f64,
) -> Result<BernsteinRecord> {
    for (name, p) in [("a", a), ("b", b)] {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidParameter {
                name,
                reason: format!("integrability exponent must be ≥ 1 (got {p})"),
            });
        }
    }
    if a > b {
        return Err(Error::InvalidParameter {
            name: "a",
            reason: format!("need a ≤ b (got a = {a}, b = {b})"),
        });
    }
    let local = partition.block(q, f)?;
    let h = f.grid().spacing();
    let base = lp_norm_of_values(&local.to_values(), h, a)?;
    let lambda = 2f64.powi(q);
    let dim_shift = 2.0 * (inverse_exponent(a) - inverse_exponent(b));
    let mut sup_b = 0.0f64;
    let mut sup_a = 0.0f64;
    for j in 0..=k {
        let values = partial(&local, j, k - j).to_values();
        sup_b = sup_b.max(lp_norm_of_values(&values, h, b)?);
        sup_a = sup_a.max(lp_norm_of_values(&values, h, a)?);
    }
    let ratio = |num: f64, den: f64| if den == 0.0 { 0.0 } else { num / den };
    Ok(BernsteinRecord {
        q,
        k,
        a,
        b,
        upper_ratio: ratio(sup_b, lambda.powf(k as f64 + dim_shift) * base),
        lower_ratio: ratio(sup_a, lambda.powi(k as i32) * base),
    })
}
