use std::f64::consts::PI;
use std::sync::Arc;

use boussinesq_core::spectral::{
    coefficient_l2_norm, derivative, grad_inv_laplacian_div, grad_inv_laplacian_partial,
    leray_project, linf_norm, make_grid, max_abs, Axis, Grid, SpectralField, VectorField,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn values(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, n * n)
}

fn grid(n: usize, l: f64) -> Arc<Grid> {
    make_grid(n, l).unwrap()
}

/// `n⁻² Σ_x f(x) e^{−ik·x}` summed directly.
fn direct_dft(g: &Grid, v: &[f64]) -> Vec<Complex64> {
    let n = g.n();
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for a1 in 0..n {
        for a2 in 0..n {
            let (k1, k2) = (g.wavenumber(a1), g.wavenumber(a2));
            let mut acc = Complex64::new(0.0, 0.0);
            for j1 in 0..n {
                for j2 in 0..n {
                    let phase = -(k1 * g.coordinate(j1) + k2 * g.coordinate(j2));
                    acc += Complex64::from_polar(v[j1 * n + j2], phase);
                }
            }
            out[a1 * n + a2] = acc / (n * n) as f64;
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn round_trip(v in values(32), l in 0.5f64..20.0) {
        let g = grid(32, l);
        let back = SpectralField::from_values(&g, &v).unwrap().to_values();
        let err = v.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-12 * max_abs(&v).max(1e-300));
    }

    #[test]
    fn parseval(v in values(32)) {
        let g = grid(32, 2.0 * PI);
        let f = SpectralField::from_values(&g, &v).unwrap();
        let mean_square = v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64;
        let coeff_sum = coefficient_l2_norm(&f).powi(2) / (g.length() * g.length());
        prop_assert!((coeff_sum - mean_square).abs() <= 1e-10 * mean_square);
    }

    #[test]
    fn real_data_has_hermitian_coefficients(v in values(16)) {
        let f = SpectralField::from_values(&grid(16, 1.0), &v).unwrap();
        prop_assert!(f.hermitian_defect() <= 1e-12 * max_abs(&v));
    }

    #[test]
    fn leray_projection_is_idempotent(a in values(32), b in values(32)) {
        let g = grid(32, 2.0 * PI);
        let w = VectorField {
            u1: SpectralField::from_values(&g, &a).unwrap(),
            u2: SpectralField::from_values(&g, &b).unwrap(),
        };
        let once = leray_project(&w);
        let twice = leray_project(&once);
        prop_assert!(twice.axpy(-1.0, &once).linf_norm() <= 1e-13 * w.linf_norm());
        prop_assert!(once.divergence_residual() <= 1e-12 * w.linf_norm() * 32.0);
    }

    #[test]
    fn gradient_projection_has_zero_mean(a in values(16), b in values(16)) {
        let g = grid(16, 3.0);
        let w = VectorField {
            u1: SpectralField::from_values(&g, &a).unwrap(),
            u2: SpectralField::from_values(&g, &b).unwrap(),
        };
        let q = grad_inv_laplacian_div(&w);
        prop_assert_eq!(q.u1.coeffs()[0], Complex64::new(0.0, 0.0));
        prop_assert_eq!(q.u2.coeffs()[0], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn multipliers_compose(v in values(32)) {
        let g = grid(32, 2.0 * PI);
        let f = SpectralField::from_values(&g, &v).unwrap();
        // mixed partials commute
        let a = derivative(&derivative(&f, Axis::X1), Axis::X2);
        let b = derivative(&derivative(&f, Axis::X2), Axis::X1);
        prop_assert!(linf_norm(&(&a - &b)) <= 1e-12 * linf_norm(&a).max(1.0));
        // ∇Δ⁻¹div ∇ = ∇ on gradients built from any potential
        let grad = VectorField { u1: derivative(&f, Axis::X1), u2: derivative(&f, Axis::X2) };
        let back = grad_inv_laplacian_div(&grad);
        prop_assert!(back.axpy(-1.0, &grad).linf_norm() <= 1e-12 * grad.linf_norm().max(1.0));
        // ∇Δ⁻¹∂₂θ = ∇Δ⁻¹div(0, θ)
        let via_div = grad_inv_laplacian_div(&VectorField { u1: SpectralField::zeros(&g), u2: f.clone() });
        let direct = grad_inv_laplacian_partial(&f, Axis::X2);
        prop_assert!(via_div.axpy(-1.0, &direct).linf_norm() <= 1e-13 * linf_norm(&f).max(1.0));
    }
}

#[test]
fn transform_matches_direct_sum() {
    let g = grid(16, 2.5);
    let v: Vec<f64> = (0..256).map(|i| ((i * 37 % 101) as f64 / 17.0).sin() + 0.3).collect();
    let fast = SpectralField::from_values(&g, &v).unwrap();
    let slow = direct_dft(&g, &v);
    let err = fast.coeffs().iter().zip(&slow).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(err <= 1e-10, "max coefficient error {err:e}");
}

#[test]
fn grid_examples() {
    let g = grid(64, 2.0 * PI);
    let ks: Vec<f64> = (0..64).map(|i| g.wavenumber(i)).collect();
    assert!(ks.iter().all(|k| k.fract() == 0.0 && (-32.0..=31.0).contains(k)));
    assert!((grid(16, 1.0).k_max() - 16.0 * PI).abs() < 1e-12);
    assert!(make_grid(17, 2.0 * PI).is_err());
    assert!(make_grid(8, 2.0 * PI).is_err());
    assert!(make_grid(16, 0.0).is_err());
    assert!(make_grid(16, -1.0).is_err());
}
