use std::sync::Arc;

use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralField};

/// Inner radius of the annulus carrying `φ`.
pub const ANNULUS_INNER: f64 = 3.0 / 4.0;
/// Outer radius of the annulus carrying `φ`.
pub const ANNULUS_OUTER: f64 = 8.0 / 3.0;
/// `χ` vanishes for `|ξ| ≥ 4/3`.
pub const CHI_SUPPORT: f64 = 4.0 / 3.0;

fn bump(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// C^∞ step falling from 1 at `t ≤ 0` to 0 at `t ≥ 1`.
fn smooth_step_down(t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    if t >= 1.0 {
        return 0.0;
    }
    let a = bump(1.0 - t);
    a / (a + bump(t))
}

/// Radial profile of `χ`: ≡ 1 on `|ξ| ≤ 1`, ≡ 0 on `|ξ| ≥ 4/3`, smooth and
/// nonincreasing in between.
pub fn chi(radius: f64) -> f64 {
    smooth_step_down((radius - 1.0) / (CHI_SUPPORT - 1.0))
}

/// Radial profile of `φ(ξ) = χ(ξ/2) − χ(ξ)`, supported in `1 ≤ |ξ| ≤ 8/3`.
pub fn phi(radius: f64) -> f64 {
    chi(radius / 2.0) - chi(radius)
}

/// `φ(2^{-q} ξ)` written so that partial sums telescope exactly.
#[inline]
fn phi_scaled(radius: f64, q: i32) -> f64 {
    chi(radius * 2f64.powi(-(q + 1))) - chi(radius * 2f64.powi(-q))
}

/// Sampled dyadic multipliers on a frequency grid.
///
/// Blocks run over `q = -1..=q_max` where `q_max` is the smallest index with
/// `2^{q_max+1} ≥ max |ξ|` over the grid, so `χ + Σ_q φ(2^{-q}·) ≡ 1` on every
/// grid frequency and every field is exactly reconstructed. Homogeneous
/// negative blocks run down to `q_min = −⌊log₂ L⌋ − 2`, below which no
/// nonzero grid frequency is reached.
#[derive(Clone, Debug)]
pub struct DyadicPartition {
    grid: Arc<Grid>,
    chi_hat: Vec<f64>,
    phi_hat: Vec<Vec<f64>>,
    negative_hat: Vec<Vec<f64>>,
    q_max: i32,
    q_min: i32,
}

/// Largest inhomogeneous block index used on `grid`.
pub fn q_max_for(grid: &Grid) -> i32 {
    let top = grid.k_radius_max();
    let mut q = -1;
    while 2f64.powi(q + 1) < top {
        q += 1;
    }
    q
}

/// Lowest homogeneous block index used on `grid`.
pub fn q_min_for(grid: &Grid) -> i32 {
    -(grid.length().log2().floor() as i32) - 2
}

/// Samples `χ` and every `φ(2^{-q}·)` on the frequency grid.
pub fn build_partition(grid: &Arc<Grid>) -> Result<DyadicPartition> {
    let q_max = q_max_for(grid);
    if q_max < 1 {
        return Err(Error::InvalidParameter {
            name: "grid",
            reason: format!("too coarse for blocks -1, 0, 1 (q_max = {q_max})"),
        });
    }
    let q_min = q_min_for(grid).min(-1);
    let n = grid.n();
    let radii: Vec<f64> = (0..n)
        .flat_map(|i1| (0..n).map(move |i2| (i1, i2)))
        .map(|(i1, i2)| grid.radius(i1, i2))
        .collect();
    let sample = |f: &dyn Fn(f64) -> f64| radii.iter().map(|&r| f(r)).collect::<Vec<f64>>();
    let chi_hat = sample(&chi);
    let phi_hat = (0..=q_max).map(|q| sample(&|r| phi_scaled(r, q))).collect();
    let negative_hat = (q_min..=-1).map(|j| sample(&|r| phi_scaled(r, j))).collect();
    Ok(DyadicPartition {
        grid: Arc::clone(grid),
        chi_hat,
        phi_hat,
        negative_hat,
        q_max,
        q_min,
    })
}

impl DyadicPartition {
    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn q_max(&self) -> i32 {
        self.q_max
    }

    /// Lowest homogeneous block index.
    pub fn q_min(&self) -> i32 {
        self.q_min
    }

    pub fn chi_hat(&self) -> &[f64] {
        &self.chi_hat
    }

    /// Inhomogeneous block indices `-1..=q_max`.
    pub fn blocks(&self) -> impl Iterator<Item = i32> {
        -1..=self.q_max
    }

    /// Multiplier of `Δ_q`, `q ∈ [-1, q_max]`.
    pub fn block_multiplier(&self, q: i32) -> Result<&[f64]> {
        match q {
            -1 => Ok(&self.chi_hat),
            0.. if q <= self.q_max => Ok(&self.phi_hat[q as usize]),
            _ => Err(Error::BlockOutOfRange {
                q,
                min: -1,
                max: self.q_max,
            }),
        }
    }

    /// Multiplier of the homogeneous block `Δ̇_j`, `j ∈ [q_min, q_max]`.
    pub fn homogeneous_multiplier(&self, j: i32) -> Result<&[f64]> {
        if (self.q_min..0).contains(&j) {
            Ok(&self.negative_hat[(j - self.q_min) as usize])
        } else if (0..=self.q_max).contains(&j) {
            Ok(&self.phi_hat[j as usize])
        } else {
            Err(Error::BlockOutOfRange {
                q: j,
                min: self.q_min,
                max: self.q_max,
            })
        }
    }

    fn check(&self, f: &SpectralField) -> Result<()> {
        if Arc::ptr_eq(f.grid(), &self.grid) || **f.grid() == *self.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// `Δ_q f`.
    pub fn block(&self, q: i32, f: &SpectralField) -> Result<SpectralField> {
        self.check(f)?;
        Ok(f.apply_real_multiplier(self.block_multiplier(q)?))
    }

    /// `Δ̇_j f`.
    pub fn homogeneous_block(&self, j: i32, f: &SpectralField) -> Result<SpectralField> {
        self.check(f)?;
        Ok(f.apply_real_multiplier(self.homogeneous_multiplier(j)?))
    }

    /// `S_q f = Σ_{p ≤ q−1} Δ_p f = χ(2^{-q}D) f`, for `q ≤ q_max + 1`.
    pub fn low_pass(&self, q: i32, f: &SpectralField) -> Result<SpectralField> {
        self.check(f)?;
        if q > self.q_max + 1 {
            return Err(Error::BlockOutOfRange {
                q,
                min: i32::MIN,
                max: self.q_max + 1,
            });
        }
        if q <= -1 {
            return Ok(SpectralField::zeros(&self.grid));
        }
        let scale = 2f64.powi(-q);
        let g = &self.grid;
        Ok(f.map_modes(|i1, i2, c| c * chi(g.radius(i1, i2) * scale)))
    }

    /// `S_q f` with `q` clamped to the top of the grid (identity beyond it).
    pub fn low_pass_clamped(&self, q: i32, f: &SpectralField) -> SpectralField {
        if q > self.q_max {
            return f.clone();
        }
        self.low_pass(q, f).expect("in range")
    }

    /// `Σ_q Δ_q f` over all grid blocks.
    pub fn reconstruct(&self, f: &SpectralField) -> Result<SpectralField> {
        let mut out = SpectralField::zeros(&self.grid);
        for q in self.blocks() {
            out += &self.block(q, f)?;
        }
        Ok(out)
    }
}
