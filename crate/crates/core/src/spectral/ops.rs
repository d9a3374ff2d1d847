use num_complex::Complex64;

use super::field::{Axis, SpectralField};
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `∂f/∂x_axis`: multiplier `i k_axis`, Nyquist mode zeroed.
pub fn derivative(f: &SpectralField, axis: Axis) -> SpectralField {
    let g = f.grid().clone();
    f.map_modes(|i1, i2, c| {
        let k = match axis {
            Axis::X1 => g.odd_wavenumber(i1),
            Axis::X2 => g.odd_wavenumber(i2),
        };
        I * k * c
    })
}

/// Whether mode position `(i1, i2)` survives the 2/3 rule.
#[inline]
pub fn is_resolved(n: usize, m1: i64, m2: i64) -> bool {
    // max(|m1|, |m2|) ≤ n/3, in integer arithmetic
    3 * m1.unsigned_abs().max(m2.unsigned_abs()) as usize <= n
}

/// Zeroes every mode with `max(|m₁|, |m₂|) > n/3`.
pub fn dealias(f: &SpectralField) -> SpectralField {
    let g = f.grid().clone();
    let n = g.n();
    f.map_modes(|i1, i2, c| {
        if is_resolved(n, g.mode(i1), g.mode(i2)) {
            c
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Whether all energy sits inside the 2/3-rule band.
pub fn is_dealiased(f: &SpectralField) -> bool {
    let g = f.grid();
    let n = g.n();
    (0..n).all(|i1| {
        (0..n).all(|i2| {
            is_resolved(n, g.mode(i1), g.mode(i2)) || f.coeffs()[i1 * n + i2].norm() == 0.0
        })
    })
}

pub fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Maximum of `|f|` over the collocation points.
pub fn linf_norm(f: &SpectralField) -> f64 {
    max_abs(&f.to_values())
}

/// `(Σ |f(x)|^p (L/n)²)^{1/p}`; `p = ∞` gives the grid maximum.
pub fn lp_norm(f: &SpectralField, p: f64) -> Result<f64> {
    let values = f.to_values();
    lp_norm_of_values(&values, f.grid().spacing(), p)
}

pub fn lp_norm_of_values(values: &[f64], spacing: f64, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidParameter {
            name: "p",
            reason: format!("integrability exponent must be ≥ 1 (got {p})"),
        });
    }
    if p.is_infinite() {
        return Ok(max_abs(values));
    }
    let w = spacing * spacing;
    // scale by the maximum to keep |f|^p representable
    let scale = max_abs(values);
    if scale == 0.0 {
        return Ok(0.0);
    }
    let sum: f64 = values.iter().map(|v| (v.abs() / scale).powf(p)).sum();
    Ok(scale * (sum * w).powf(1.0 / p))
}

/// `L · (Σ |coeff|²)^{1/2}`: equals the grid `L²` norm by Parseval.
pub fn coefficient_l2_norm(f: &SpectralField) -> f64 {
    let s: f64 = f.coeffs().iter().map(|c| c.norm_sqr()).sum();
    f.grid().length() * s.sqrt()
}

/// Dealiased pointwise product of two fields.
pub fn product(a: &SpectralField, b: &SpectralField) -> SpectralField {
    let av = a.to_values();
    let bv = b.to_values();
    product_of_values(a, &av, &bv)
}

pub(crate) fn product_of_values(like: &SpectralField, a: &[f64], b: &[f64]) -> SpectralField {
    let prod: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
    dealiased_from_values(like, &prod)
}

pub(crate) fn dealiased_from_values(like: &SpectralField, values: &[f64]) -> SpectralField {
    dealias(&SpectralField::from_values(like.grid(), values).expect("same grid"))
}
