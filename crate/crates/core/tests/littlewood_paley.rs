use std::f64::consts::{FRAC_PI_4, PI};

use boussinesq_core::boussinesq::synthesize_holder_field;
use boussinesq_core::littlewood_paley::{
    a0_constant, bernstein_report, besov_norm, bony_decompose, build_partition, chi, holder_norm,
    DyadicPartition, Exponent, CHI_SUPPORT,
};
use boussinesq_core::spectral::{linf_norm, make_grid, product, SpectralField};
use num_complex::Complex64;
use proptest::prelude::*;

fn partition(n: usize) -> DyadicPartition {
    build_partition(&make_grid(n, 2.0 * PI).unwrap()).unwrap()
}

/// Bessel `J₀` from the rational approximations of Abramowitz & Stegun
/// 9.4.1 and 9.4.3 (absolute error below `5e-8`).
fn bessel_j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= 3.0 {
        let y = (x / 3.0).powi(2);
        1.0 + y * (-2.2499997 + y * (1.2656208 + y * (-0.3163866 + y * (0.0444479 + y * (-0.0039444 + y * 0.0002100)))))
    } else {
        let y = 3.0 / ax;
        let f0 = 0.79788456
            + y * (-0.00000077 + y * (-0.00552740 + y * (-0.00009512 + y * (0.00137237 + y * (-0.00072805 + y * 0.00014476)))));
        let t0 = ax - FRAC_PI_4
            + y * (-0.04166397 + y * (-0.00003954 + y * (0.00262573 + y * (-0.00054125 + y * (-0.00029333 + y * 0.00013558)))));
        f0 * t0.cos() / ax.sqrt()
    }
}

/// `‖F⁻¹χ‖_{L¹(R²)}` by radial quadrature: `h(s) = (2π)⁻¹ ∫ χ(ρ) J₀(ρs) ρ dρ`,
/// `a₀ = 2π ∫ |h(s)| s ds`, truncated at `s_max`.
fn a0_by_hankel(s_max: f64) -> f64 {
    let nr = 1200;
    let dr = CHI_SUPPORT / nr as f64;
    let rho: Vec<f64> = (0..=nr).map(|i| i as f64 * dr).collect();
    let weight: Vec<f64> = (0..=nr)
        .map(|i| {
            let simpson = if i == 0 || i == nr { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            simpson * dr / 3.0 * chi(rho[i]) * rho[i]
        })
        .collect();
    let ds = 0.02;
    let ns = (s_max / ds) as usize;
    let mut total = 0.0;
    for j in 0..=ns {
        let s = j as f64 * ds;
        let h: f64 = rho.iter().zip(&weight).map(|(r, w)| w * bessel_j0(r * s)).sum::<f64>() / (2.0 * PI);
        let trap = if j == 0 || j == ns { 0.5 } else { 1.0 };
        total += trap * ds * h.abs() * s;
    }
    2.0 * PI * total
}

#[test]
fn a0_matches_radial_quadrature() {
    let a0 = a0_constant();
    assert!(a0.a0 >= 1.0 - 1e-6);
    let radial = a0_by_hankel(300.0);
    assert!((a0.a0 - radial).abs() <= 2e-3 * radial, "torus {} vs radial {radial}", a0.a0);
    // ∫ h̃ = χ(0) = 1
    assert!((a0.integral - 1.0).abs() < 1e-10);
}

#[test]
fn partition_identity_and_frame_bound() {
    let p = partition(128);
    let len = p.grid().len();
    let blocks: Vec<&[f64]> = p.blocks().map(|q| p.block_multiplier(q).unwrap()).collect();
    for i in 0..len {
        let sum: f64 = blocks.iter().map(|b| b[i]).sum();
        let squares: f64 = blocks.iter().map(|b| b[i] * b[i]).sum();
        assert!((sum - 1.0).abs() <= 1e-12);
        assert!((1.0 / 3.0 - 1e-12..=1.0 + 1e-12).contains(&squares));
    }
    for (a, ba) in blocks.iter().enumerate() {
        for bb in blocks.iter().skip(a + 2) {
            assert!(ba.iter().zip(bb.iter()).all(|(x, y)| x * y == 0.0));
        }
    }
}

#[test]
fn holder_norm_of_single_mode() {
    // k = (3, 0): |k| = 3 lies in the core of block 1, where φ(k/2) = 1
    let p = partition(64);
    let f = SpectralField::real_mode(p.grid(), 3, 0, Complex64::new(0.5, 0.0));
    let rep = holder_norm(&p, &f, 1.5).unwrap();
    assert!((rep.value - 2f64.powf(1.5)).abs() < 1e-12);
    let b11 = besov_norm(&p, &f, 1.0, Exponent::Infinite, Exponent::Finite(1.0)).unwrap();
    assert!((b11.value - 2.0).abs() < 1e-12);
}

#[test]
fn bernstein_ratios_for_annulus_data() {
    let p = partition(64);
    let f = synthesize_holder_field(&p, 1.5, 1.0, 5);
    for q in 0..=p.q_max() - 2 {
        let rec = bernstein_report(&p, &f, q, 1, 2.0, f64::INFINITY).unwrap();
        // annulus support: derivatives cost between (3/4)λ and (8/3)λ per order
        assert!(rec.lower_ratio >= 0.75 - 1e-12 && rec.lower_ratio <= 8.0 / 3.0 * 2f64.sqrt(), "{rec:?}");
        assert!(rec.upper_ratio.is_finite() && rec.upper_ratio > 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn blocks_reconstruct_field(seed in 0u64..1000, r in 1.1f64..3.0) {
        let p = partition(64);
        let f = synthesize_holder_field(&p, r, 1.0, seed);
        let back = p.reconstruct(&f).unwrap();
        prop_assert!(linf_norm(&(&back - &f)) <= 1e-12 * linf_norm(&f));
    }

    #[test]
    fn bony_pieces_sum_to_product(a in 0u64..1000, b in 0u64..1000) {
        let p = partition(64);
        let u = synthesize_holder_field(&p, 1.5, 1.0, a);
        let v = synthesize_holder_field(&p, 2.0, 1.0, b.wrapping_add(7919));
        let uv = product(&u, &v);
        let d = bony_decompose(&p, &u, &v).unwrap();
        prop_assert!(linf_norm(&(&d.sum() - &uv)) <= 1e-10 * linf_norm(&uv));
    }

    #[test]
    fn holder_norm_is_absolutely_homogeneous(seed in 0u64..1000, alpha in -20.0f64..20.0) {
        let p = partition(32);
        let f = synthesize_holder_field(&p, 1.5, 1.0, seed);
        let a = holder_norm(&p, &f, 1.5).unwrap().value;
        let b = holder_norm(&p, &f.scale(alpha), 1.5).unwrap().value;
        prop_assert!((b - alpha.abs() * a).abs() <= 1e-12 * (1.0 + alpha.abs()) * a);
    }
}
