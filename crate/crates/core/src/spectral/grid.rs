use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Uniform collocation grid on the periodic square `[0, L)²`.
///
/// Array index `i` along an axis carries the integer mode `m = i` for
/// `i < n/2` and `m = i - n` otherwise, so modes cover `[-n/2, n/2)`.
/// The wavenumber of mode `m` is `2π m / L`.
pub struct Grid {
    n: usize,
    length: f64,
    modes: Vec<i64>,
    wavenumbers: Vec<f64>,
    odd_wavenumbers: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n", &self.n)
            .field("length", &self.length)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.length == other.length
    }
}

/// Builds a shared grid with `n` points per dimension and period `box_length`.
pub fn make_grid(n: usize, box_length: f64) -> Result<Arc<Grid>> {
    Grid::new(n, box_length).map(Arc::new)
}

impl Grid {
    pub fn new(n: usize, box_length: f64) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidResolution(n));
        }
        if !(box_length.is_finite() && box_length > 0.0) {
            return Err(Error::InvalidBoxLength(box_length));
        }
        let half = (n / 2) as i64;
        let modes: Vec<i64> = (0..n as i64)
            .map(|i| if i < half { i } else { i - n as i64 })
            .collect();
        let scale = 2.0 * PI / box_length;
        let wavenumbers: Vec<f64> = modes.iter().map(|&m| scale * m as f64).collect();
        let odd_wavenumbers = modes
            .iter()
            .zip(&wavenumbers)
            .map(|(&m, &k)| if m == -half { 0.0 } else { k })
            .collect();
        let mut planner = FftPlanner::new();
        Ok(Self {
            n,
            length: box_length,
            modes,
            wavenumbers,
            odd_wavenumbers,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of collocation points, `n²`.
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Smallest nonzero wavenumber magnitude, `2π / L`.
    pub fn fundamental(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// Largest wavenumber magnitude along one axis, `π n / L`.
    pub fn k_max(&self) -> f64 {
        self.fundamental() * (self.n / 2) as f64
    }

    /// Largest `|k|` over the whole frequency grid (a corner mode).
    pub fn k_radius_max(&self) -> f64 {
        self.k_max() * std::f64::consts::SQRT_2
    }

    #[inline]
    pub fn index(&self, i1: usize, i2: usize) -> usize {
        i1 * self.n + i2
    }

    /// Array index holding integer mode `m` along one axis.
    pub fn index_of_mode(&self, m: i64) -> usize {
        m.rem_euclid(self.n as i64) as usize
    }

    #[inline]
    pub fn mode(&self, i: usize) -> i64 {
        self.modes[i]
    }

    #[inline]
    pub fn wavenumber(&self, i: usize) -> f64 {
        self.wavenumbers[i]
    }

    /// Wavenumber used by odd multipliers (derivatives, Riesz transforms):
    /// the Nyquist entry is zero so real fields stay real.
    #[inline]
    pub fn odd_wavenumber(&self, i: usize) -> f64 {
        self.odd_wavenumbers[i]
    }

    /// `|k|` at array position `(i1, i2)`.
    #[inline]
    pub fn radius(&self, i1: usize, i2: usize) -> f64 {
        self.wavenumbers[i1].hypot(self.wavenumbers[i2])
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        i as f64 * self.spacing()
    }

    pub(crate) fn fft2(&self, data: &mut [Complex64], forward: bool) {
        debug_assert_eq!(data.len(), self.len());
        let plan = if forward { &self.forward } else { &self.inverse };
        plan.process(data);
        transpose(data, self.n);
        plan.process(data);
        transpose(data, self.n);
    }
}

fn transpose(data: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_box_gives_integer_wavenumbers() {
        let g = make_grid(64, 2.0 * PI).unwrap();
        let ks: Vec<f64> = (0..64).map(|i| g.wavenumber(i)).collect();
        let min = ks.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = ks.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!((min + 32.0).abs() < 1e-12);
        assert!((max - 31.0).abs() < 1e-12);
        for k in ks {
            assert!((k - k.round()).abs() < 1e-12);
        }
    }

    #[test]
    fn k_max_for_unit_length() {
        let g = make_grid(16, 1.0).unwrap();
        assert!((g.k_max() - 16.0 * PI).abs() < 1e-12);
        assert!((g.wavenumber(8).abs() - 16.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(make_grid(17, 2.0 * PI).unwrap_err(), Error::InvalidResolution(17));
        assert_eq!(make_grid(8, 2.0 * PI).unwrap_err(), Error::InvalidResolution(8));
        assert!(matches!(make_grid(32, 0.0), Err(Error::InvalidBoxLength(_))));
        assert!(matches!(make_grid(32, -1.0), Err(Error::InvalidBoxLength(_))));
        assert!(matches!(make_grid(32, f64::NAN), Err(Error::InvalidBoxLength(_))));
    }

    #[test]
    fn nyquist_is_zeroed_only_for_odd_multipliers() {
        let g = make_grid(16, 2.0 * PI).unwrap();
        assert_eq!(g.mode(8), -8);
        assert_eq!(g.wavenumber(8), -8.0);
        assert_eq!(g.odd_wavenumber(8), 0.0);
        assert_eq!(g.odd_wavenumber(7), 7.0);
        assert_eq!(g.index_of_mode(-1), 15);
    }
}
