use std::sync::Arc;

use num_complex::Complex64;

use super::field::{Axis, SpectralField};
use super::grid::Grid;
use super::ops::{dealiased_from_values, derivative, max_abs};
use crate::error::{Error, Result};

/// Planar vector field `(u₁, u₂)`; component 2 is the vertical `e₂` direction.
#[derive(Clone, Debug)]
pub struct VectorField {
    pub u1: SpectralField,
    pub u2: SpectralField,
}

/// Collocation values of a vector field, kept around when the same velocity
/// multiplies several fields.
#[derive(Clone, Debug)]
pub struct VectorValues {
    pub u1: Vec<f64>,
    pub u2: Vec<f64>,
}

impl VectorValues {
    pub fn linf_norm(&self) -> f64 {
        max_abs(&self.u1).max(max_abs(&self.u2))
    }
}

impl VectorField {
    pub fn new(u1: SpectralField, u2: SpectralField) -> Result<Self> {
        u1.check_grid(&u2)?;
        Ok(Self { u1, u2 })
    }

    pub fn zeros(grid: &Arc<Grid>) -> Self {
        Self {
            u1: SpectralField::zeros(grid),
            u2: SpectralField::zeros(grid),
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        self.u1.grid()
    }

    pub fn component(&self, axis: Axis) -> &SpectralField {
        match axis {
            Axis::X1 => &self.u1,
            Axis::X2 => &self.u2,
        }
    }

    pub fn map(&self, f: impl Fn(&SpectralField) -> SpectralField) -> Self {
        Self {
            u1: f(&self.u1),
            u2: f(&self.u2),
        }
    }

    pub fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&SpectralField, &SpectralField) -> SpectralField,
    ) -> Self {
        Self {
            u1: f(&self.u1, &other.u1),
            u2: f(&self.u2, &other.u2),
        }
    }

    pub fn scale(&self, alpha: f64) -> Self {
        self.map(|c| c.scale(alpha))
    }

    pub fn axpy(&self, alpha: f64, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.axpy(alpha, b))
    }

    pub fn to_values(&self) -> VectorValues {
        VectorValues {
            u1: self.u1.to_values(),
            u2: self.u2.to_values(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.u1.is_finite() && self.u2.is_finite()
    }

    /// Spectral divergence `∂₁u₁ + ∂₂u₂`.
    pub fn divergence(&self) -> SpectralField {
        &derivative(&self.u1, Axis::X1) + &derivative(&self.u2, Axis::X2)
    }

    /// Max over components of the grid maximum.
    pub fn linf_norm(&self) -> f64 {
        self.to_values().linf_norm()
    }

    /// `‖∇u‖_{L^∞}`: max over grid of the max-row-sum norm of the Jacobian.
    pub fn grad_linf_norm(&self) -> f64 {
        let row = |c: &SpectralField| -> Vec<f64> {
            let a = derivative(c, Axis::X1).to_values();
            let b = derivative(c, Axis::X2).to_values();
            a.iter().zip(&b).map(|(x, y)| x.abs() + y.abs()).collect()
        };
        max_abs(&row(&self.u1)).max(max_abs(&row(&self.u2)))
    }

    /// `‖div u‖_{L^∞}` on the grid.
    pub fn divergence_residual(&self) -> f64 {
        max_abs(&self.divergence().to_values())
    }

    /// Checks `‖div u‖ ≤ 1e-10 ‖∇u‖ + 1e-13`.
    pub fn ensure_divergence_free(&self) -> Result<()> {
        let residual = self.divergence_residual();
        let tolerance = DIVERGENCE_RELATIVE_TOL * self.grad_linf_norm() + DIVERGENCE_ABSOLUTE_TOL;
        if residual <= tolerance {
            Ok(())
        } else {
            Err(Error::NotDivergenceFree { residual, tolerance })
        }
    }
}

pub const DIVERGENCE_RELATIVE_TOL: f64 = 1e-10;
pub const DIVERGENCE_ABSOLUTE_TOL: f64 = 1e-13;

/// Projection onto gradients, `∇Δ⁻¹div`: multiplier `k ⊗ k / |k|²`
/// (zero mode and vanishing odd wavenumbers map to 0).
pub fn grad_inv_laplacian_div(w: &VectorField) -> VectorField {
    let g = w.grid().clone();
    let n = g.n();
    let mut out1 = Vec::with_capacity(g.len());
    let mut out2 = Vec::with_capacity(g.len());
    let (a, b) = (w.u1.coeffs(), w.u2.coeffs());
    for i1 in 0..n {
        let k1 = g.odd_wavenumber(i1);
        for i2 in 0..n {
            let k2 = g.odd_wavenumber(i2);
            let kk = k1 * k1 + k2 * k2;
            let idx = i1 * n + i2;
            if kk == 0.0 {
                out1.push(Complex64::new(0.0, 0.0));
                out2.push(Complex64::new(0.0, 0.0));
            } else {
                let dot = (a[idx] * k1 + b[idx] * k2) / kk;
                out1.push(dot * k1);
                out2.push(dot * k2);
            }
        }
    }
    VectorField {
        u1: SpectralField::from_coeffs(&g, out1).expect("shape"),
        u2: SpectralField::from_coeffs(&g, out2).expect("shape"),
    }
}

/// `∇Δ⁻¹∂_axis θ`: multiplier `k k_axis / |k|²`, zero mode 0.
pub fn grad_inv_laplacian_partial(theta: &SpectralField, axis: Axis) -> VectorField {
    let g = theta.grid().clone();
    let comp = |target: Axis| {
        theta.map_modes(|i1, i2, c| {
            let k1 = g.odd_wavenumber(i1);
            let k2 = g.odd_wavenumber(i2);
            let kk = k1 * k1 + k2 * k2;
            if kk == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let ka = match axis {
                Axis::X1 => k1,
                Axis::X2 => k2,
            };
            let kt = match target {
                Axis::X1 => k1,
                Axis::X2 => k2,
            };
            c * (kt * ka / kk)
        })
    };
    VectorField {
        u1: comp(Axis::X1),
        u2: comp(Axis::X2),
    }
}

/// Leray projection `w − ∇Δ⁻¹div w`.
pub fn leray_project(w: &VectorField) -> VectorField {
    w.axpy(-1.0, &grad_inv_laplacian_div(w))
}

/// Dealiased `v·∇f` with the velocity already in physical space.
pub fn advect_values(v: &VectorValues, f: &SpectralField) -> SpectralField {
    let d1 = derivative(f, Axis::X1).to_values();
    let d2 = derivative(f, Axis::X2).to_values();
    let prod: Vec<f64> = v
        .u1
        .iter()
        .zip(&v.u2)
        .zip(d1.iter().zip(&d2))
        .map(|((a, b), (x, y))| a * x + b * y)
        .collect();
    dealiased_from_values(f, &prod)
}

/// Dealiased `v·∇f`.
pub fn advect(v: &VectorField, f: &SpectralField) -> SpectralField {
    advect_values(&v.to_values(), f)
}

/// Dealiased `(v·∇)w`, component-wise.
pub fn advect_vector(v: &VectorValues, w: &VectorField) -> VectorField {
    VectorField {
        u1: advect_values(v, &w.u1),
        u2: advect_values(v, &w.u2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{linf_norm, make_grid};
    use std::f64::consts::PI;

    fn close(a: &SpectralField, b: &SpectralField, tol: f64) -> bool {
        linf_norm(&(a - b)) <= tol
    }

    #[test]
    fn gradient_is_fixed_by_projection_onto_gradients() {
        let g = make_grid(32, 2.0 * PI).unwrap();
        let psi = SpectralField::from_fn(&g, |x1, x2| (2.0 * x1).sin() * (3.0 * x2).cos() + (x1 - x2).cos());
        let w = VectorField::new(derivative(&psi, Axis::X1), derivative(&psi, Axis::X2)).unwrap();
        let q = grad_inv_laplacian_div(&w);
        assert!(close(&q.u1, &w.u1, 1e-12) && close(&q.u2, &w.u2, 1e-12));
        let p = leray_project(&w);
        assert!(p.linf_norm() < 1e-12);
    }

    #[test]
    fn shear_flow_is_divergence_free() {
        let g = make_grid(32, 2.0 * PI).unwrap();
        let w = VectorField::new(
            SpectralField::from_fn(&g, |_, x2| x2.sin()),
            SpectralField::zeros(&g),
        )
        .unwrap();
        assert!(grad_inv_laplacian_div(&w).linf_norm() < 1e-14);
        let p = leray_project(&w);
        assert!(close(&p.u1, &w.u1, 1e-14));
    }

    #[test]
    fn vertical_partial_multiplier() {
        let l = 2.0;
        let g = make_grid(32, l).unwrap();
        let w = 2.0 * PI / l;
        let theta = SpectralField::from_fn(&g, |_, x2| (w * x2).sin());
        let out = grad_inv_laplacian_partial(&theta, Axis::X2);
        assert!(linf_norm(&out.u1) < 1e-14);
        assert!(close(&out.u2, &theta, 1e-14));

        let c = SpectralField::from_fn(&g, |_, _| 4.0);
        assert!(grad_inv_laplacian_partial(&c, Axis::X2).linf_norm() == 0.0);
        let h = SpectralField::from_fn(&g, |x1, _| (w * x1).sin());
        assert!(grad_inv_laplacian_partial(&h, Axis::X2).linf_norm() < 1e-14);
    }

    #[test]
    fn zero_mode_of_gradient_projection_is_exactly_zero() {
        let g = make_grid(16, 2.0 * PI).unwrap();
        let w = VectorField::new(
            SpectralField::from_fn(&g, |x1, x2| 1.0 + x1.sin() * x2.cos()),
            SpectralField::from_fn(&g, |x1, _| -2.0 + x1.cos()),
        )
        .unwrap();
        let q = grad_inv_laplacian_div(&w);
        assert_eq!(q.u1.coeffs()[0], Complex64::new(0.0, 0.0));
        assert_eq!(q.u2.coeffs()[0], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn jacobian_norm_uses_row_sums() {
        let g = make_grid(64, 2.0 * PI).unwrap();
        // u = (sin x1 cos x2, -cos x1 sin x2): row sums |cos x1 cos x2| + |sin x1 sin x2| ≤ 1, equality at x = 0
        let u = VectorField::new(
            SpectralField::from_fn(&g, |x1, x2| x1.sin() * x2.cos()),
            SpectralField::from_fn(&g, |x1, x2| -x1.cos() * x2.sin()),
        )
        .unwrap();
        assert!((u.grad_linf_norm() - 1.0).abs() < 1e-12);
        u.ensure_divergence_free().unwrap();
    }

    #[test]
    fn rejects_compressible_field() {
        let g = make_grid(16, 2.0 * PI).unwrap();
        let u = VectorField::new(
            SpectralField::from_fn(&g, |x1, _| x1.sin()),
            SpectralField::zeros(&g),
        )
        .unwrap();
        assert!(matches!(
            u.ensure_divergence_free(),
            Err(Error::NotDivergenceFree { .. })
        ));
    }
}
