use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::partition::chi;
use crate::error::Result;
use crate::spectral::{make_grid, SpectralField};

/// `a₀ = ‖h̃‖_{L¹(ℝ²)}` with `h̃ = F⁻¹χ`, so that `‖S_q f‖_∞ ≤ a₀ ‖f‖_∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct A0Constant {
    pub a0: f64,
    /// `∫ h̃ = χ(0) = 1`, recomputed by the same quadrature.
    pub integral: f64,
    pub n: usize,
    pub box_length: f64,
}

pub const A0_DEFAULT_N: usize = 2048;
pub const A0_DEFAULT_BOX: f64 = 128.0 * std::f64::consts::PI;

/// `a₀` on the default quadrature box, computed once per process.
pub fn a0_constant() -> A0Constant {
    static CACHE: OnceLock<A0Constant> = OnceLock::new();
    *CACHE.get_or_init(|| {
        a0_constant_with(A0_DEFAULT_N, A0_DEFAULT_BOX).expect("default quadrature grid is valid")
    })
}

/// `a₀` by periodizing `h̃` on `[0, box_length)²` with `n` points per side.
///
/// Poisson summation gives the periodization coefficients `χ(k)/L²`. The
/// kernel decays like `exp(−c√|x|)`, so the box must reach `|x| ~ 200` for
/// four correct digits.
pub fn a0_constant_with(n: usize, box_length: f64) -> Result<A0Constant> {
    let grid = make_grid(n, box_length)?;
    let area = box_length * box_length;
    let g = grid.clone();
    let kernel = SpectralField::zeros(&grid)
        .map_modes(|i1, i2, _| (chi(g.radius(i1, i2)) / area).into());
    let values = kernel.to_values();
    let cell = grid.spacing() * grid.spacing();
    Ok(A0Constant {
        a0: values.iter().map(|v| v.abs()).sum::<f64>() * cell,
        integral: values.iter().sum::<f64>() * cell,
        n,
        box_length,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a0_exceeds_mean_and_converges() {
        let fine = a0_constant();
        assert!((fine.integral - 1.0).abs() < 1e-12);
        assert!(fine.a0 >= 1.0 - 1e-6);
        let wide = a0_constant_with(2 * A0_DEFAULT_N, 2.0 * A0_DEFAULT_BOX).unwrap();
        assert!((wide.a0 - fine.a0).abs() < 1e-4 * fine.a0, "{} vs {}", wide.a0, fine.a0);
    }
}
