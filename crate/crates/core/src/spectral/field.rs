use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use super::grid::Grid;
use crate::error::{Error, Result};

/// Fourier coefficients of a real scalar field on the periodic square.
///
/// Normalization is "unitary in mean": `coeff(m) = n⁻² Σ_x f(x) e^{-i k·x}`
/// and `f(x) = Σ_m coeff(m) e^{i k·x}`. A constant `c` has zero mode `c`,
/// and `cos(2π x₁/L)` has coefficient `1/2` at `m = (±1, 0)`.
#[derive(Clone, Debug)]
pub struct SpectralField {
    grid: Arc<Grid>,
    coeffs: Vec<Complex64>,
}

/// Coordinate axis of the 2-torus. `X2` is the vertical direction `e₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X1,
    X2,
}

impl SpectralField {
    pub fn zeros(grid: &Arc<Grid>) -> Self {
        Self {
            grid: Arc::clone(grid),
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_coeffs(grid: &Arc<Grid>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                actual: coeffs.len(),
            });
        }
        Ok(Self {
            grid: Arc::clone(grid),
            coeffs,
        })
    }

    /// Forward transform of row-major collocation values (`values[i1 * n + i2]`).
    pub fn from_values(grid: &Arc<Grid>, values: &[f64]) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                actual: values.len(),
            });
        }
        let mut coeffs: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        grid.fft2(&mut coeffs, true);
        let norm = 1.0 / grid.len() as f64;
        coeffs.iter_mut().for_each(|c| *c *= norm);
        Ok(Self {
            grid: Arc::clone(grid),
            coeffs,
        })
    }

    /// Samples `f(x₁, x₂)` on the grid and transforms.
    pub fn from_fn(grid: &Arc<Grid>, f: impl Fn(f64, f64) -> f64) -> Self {
        let n = grid.n();
        let mut values = Vec::with_capacity(grid.len());
        for i1 in 0..n {
            let x1 = grid.coordinate(i1);
            for i2 in 0..n {
                values.push(f(x1, grid.coordinate(i2)));
            }
        }
        Self::from_values(grid, &values).expect("shape matches by construction")
    }

    /// Single complex mode `amplitude · e^{i k·x}` with its conjugate partner,
    /// i.e. the real field `2 Re(amplitude e^{i k·x})` (or `amplitude` for m = 0).
    pub fn real_mode(grid: &Arc<Grid>, m1: i64, m2: i64, amplitude: Complex64) -> Self {
        let mut f = Self::zeros(grid);
        let i = grid.index(grid.index_of_mode(m1), grid.index_of_mode(m2));
        let j = grid.index(grid.index_of_mode(-m1), grid.index_of_mode(-m2));
        if i == j {
            f.coeffs[i] = Complex64::new(amplitude.re, 0.0);
        } else {
            f.coeffs[i] = amplitude;
            f.coeffs[j] = amplitude.conj();
        }
        f
    }

    /// Inverse transform to row-major collocation values.
    pub fn to_values(&self) -> Vec<f64> {
        let mut buf = self.coeffs.clone();
        self.grid.fft2(&mut buf, false);
        buf.into_iter().map(|c| c.re).collect()
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of integer mode `(m1, m2)`.
    pub fn coeff(&self, m1: i64, m2: i64) -> Complex64 {
        let g = &self.grid;
        self.coeffs[g.index(g.index_of_mode(m1), g.index_of_mode(m2))]
    }

    /// Spatial mean (the zero mode).
    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }

    pub fn check_grid(&self, other: &Self) -> Result<()> {
        if self.same_grid(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// Applies a Fourier multiplier given as a function of array position.
    pub fn map_modes(&self, mut m: impl FnMut(usize, usize, Complex64) -> Complex64) -> Self {
        let n = self.grid.n();
        let mut coeffs = self.coeffs.clone();
        for i1 in 0..n {
            for i2 in 0..n {
                let idx = i1 * n + i2;
                coeffs[idx] = m(i1, i2, coeffs[idx]);
            }
        }
        Self {
            grid: Arc::clone(&self.grid),
            coeffs,
        }
    }

    /// Multiplies by a real multiplier sampled on the frequency grid.
    pub fn apply_real_multiplier(&self, multiplier: &[f64]) -> Self {
        debug_assert_eq!(multiplier.len(), self.coeffs.len());
        Self {
            grid: Arc::clone(&self.grid),
            coeffs: self
                .coeffs
                .iter()
                .zip(multiplier)
                .map(|(c, m)| c * m)
                .collect(),
        }
    }

    pub fn scale(&self, alpha: f64) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            coeffs: self.coeffs.iter().map(|c| c * alpha).collect(),
        }
    }

    /// `self + alpha * other`.
    pub fn axpy(&self, alpha: f64, other: &Self) -> Self {
        debug_assert!(self.same_grid(other));
        Self {
            grid: Arc::clone(&self.grid),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b * alpha)
                .collect(),
        }
    }

    /// Largest coefficient-wise deviation from Hermitian symmetry.
    pub fn hermitian_defect(&self) -> f64 {
        let g = &self.grid;
        let n = g.n();
        let mut worst = 0.0f64;
        for i1 in 0..n {
            let j1 = (n - i1) % n;
            for i2 in 0..n {
                let j2 = (n - i2) % n;
                let d = self.coeffs[i1 * n + i2] - self.coeffs[j1 * n + j2].conj();
                worst = worst.max(d.norm());
            }
        }
        worst
    }
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &SpectralField) -> SpectralField {
        self.axpy(1.0, rhs)
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        self.axpy(-1.0, rhs)
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: f64) -> SpectralField {
        self.scale(rhs)
    }
}

impl AddAssign<&SpectralField> for SpectralField {
    fn add_assign(&mut self, rhs: &SpectralField) {
        debug_assert!(self.same_grid(rhs));
        self.coeffs
            .iter_mut()
            .zip(&rhs.coeffs)
            .for_each(|(a, b)| *a += b);
    }
}
