use std::f64::consts::PI;

use boussinesq_core::boussinesq::{
    blowup_integral, continuation_check, iterate_scheme, run_direct, synthesize_holder_field,
    uniqueness_probe, write_probe_csv, BoussinesqState, DirectConfig, IterationConfig,
    IterationStatus, Kernel, Preset, ThetaIndex, Verdict,
};
use boussinesq_core::littlewood_paley::{build_partition, holder_value, holder_value_vector, DyadicPartition};
use boussinesq_core::spectral::{linf_norm, make_grid, SpectralField, VectorField};

fn partition(n: usize) -> DyadicPartition {
    build_partition(&make_grid(n, 2.0 * PI).unwrap()).unwrap()
}

fn preset_state(p: &DyadicPartition, preset: Preset) -> BoussinesqState {
    let d = preset.defaults();
    preset.initial_state(p, d.r, d.seed, d.theta_amplitude, d.u_amplitude).unwrap()
}

#[test]
fn hydrostatic_state_is_steady() {
    let p = partition(64);
    let s0 = preset_state(&p, Preset::Hydrostatic);
    let run = run_direct(&p, &s0, &DirectConfig::new(5.0, 1e-2, 1.5)).unwrap();
    let end = &run.final_state;
    assert!(end.u.linf_norm() <= 1e-8);
    assert!(linf_norm(&(&end.theta - &s0.theta)) <= 1e-8);
    assert!(blowup_integral(&run.monitor) <= 1e-8);
    let report = continuation_check(&run.monitor, 5.0, 1.0);
    assert_eq!(report.verdict, Verdict::Finite);
    assert!(report.envelope.pass);
}

#[test]
fn zero_temperature_reduces_to_euler() {
    let p = partition(64);
    let s0 = preset_state(&p, Preset::EulerReduction);
    assert_eq!(linf_norm(&s0.theta), 0.0);
    let coupled = run_direct(&p, &s0, &DirectConfig::new(1.0, 5e-3, 1.5)).unwrap();
    let euler_cfg = DirectConfig { kernel: Kernel::Euler, ..DirectConfig::new(1.0, 5e-3, 1.5) };
    let euler = run_direct(&p, &s0, &euler_cfg).unwrap();
    for (a, b) in coupled.monitor.samples.iter().zip(&euler.monitor.samples) {
        assert!((a.u_r - b.u_r).abs() <= 1e-12);
    }
    assert!(coupled.final_state.u.axpy(-1.0, &euler.final_state.u).linf_norm() <= 1e-12);
    assert_eq!(linf_norm(&coupled.final_state.theta), 0.0);
}

#[test]
fn energy_changes_by_buoyancy_work() {
    let p = partition(64);
    let s0 = preset_state(&p, Preset::TaylorGreen);
    let run = run_direct(&p, &s0, &DirectConfig::new(1.0, 5e-3, 1.5)).unwrap();
    let m = &run.monitor.samples;
    let mut work = 0.0;
    for w in m.windows(2) {
        work += 0.5 * (w[1].t - w[0].t) * (w[0].buoyancy_flux + w[1].buoyancy_flux);
        let change = w[1].kinetic_energy - m[0].kinetic_energy;
        assert!((change - work).abs() <= 1e-6 * m[0].kinetic_energy * w[1].t, "t = {}", w[1].t);
    }
}

#[test]
fn runs_keep_invariants() {
    let p = partition(64);
    let s0 = preset_state(&p, Preset::TaylorGreen);
    let run = run_direct(&p, &s0, &DirectConfig::new(1.0, 5e-3, 1.5)).unwrap();
    let theta_sup = run.monitor.samples[0].theta_linf;
    for s in &run.monitor.samples {
        assert!(s.div_residual <= 1e-10);
        assert!(s.theta_linf <= theta_sup * (1.0 + 1e-5), "t = {}", s.t);
    }
    let mut csv = Vec::new();
    run.monitor.write_csv(&mut csv).unwrap();
    assert_eq!(String::from_utf8(csv).unwrap().lines().count(), run.monitor.samples.len() + 1);
}

#[test]
fn flow_is_time_reversible() {
    let p = partition(64);
    let s0 = preset_state(&p, Preset::TaylorGreen);
    let cfg = DirectConfig::new(0.5, 5e-3, 1.5);
    let forward = run_direct(&p, &s0, &cfg).unwrap().final_state;
    let mut back = forward.reversed();
    back.t = 0.0;
    let end = run_direct(&p, &back, &cfg).unwrap().final_state.reversed();
    assert!(linf_norm(&(&end.theta - &s0.theta)) <= 1e-6);
    assert!(end.u.axpy(-1.0, &s0.u).linf_norm() <= 1e-6);
}

#[test]
fn low_block_data_is_not_truncated() {
    // u₀ in blocks ≤ 0 is fixed by S₂, so every iterate starts from u₀
    let p = partition(32);
    let g = p.grid().clone();
    let u0 = VectorField::new(
        SpectralField::from_fn(&g, |x1, x2| 0.1 * x1.sin() * x2.cos()),
        SpectralField::from_fn(&g, |x1, x2| -0.1 * x1.cos() * x2.sin()),
    )
    .unwrap();
    let theta0 = SpectralField::zeros(&g);
    // grid evaluation leaves roundoff-level coefficients at high modes
    assert!(linf_norm(&p.low_pass_clamped(2, &u0.u1).axpy(-1.0, &u0.u1)) <= 1e-16);
    let cfg = IterationConfig {
        r: 1.5,
        n_max: 6,
        horizon: 0.2,
        dt: 1e-2,
        tol: 1e-12,
        theta_index: ThetaIndex::Next,
    };
    let out = iterate_scheme(&p, &theta0, &u0, &cfg).unwrap();
    assert!(out.limit[0].u.axpy(-1.0, &u0).linf_norm() <= 1e-16);
    assert!(out.records.iter().all(|r| r.cauchy_gap_theta == 0.0));
}

#[test]
fn iteration_limit_matches_direct_run() {
    let p = partition(64);
    let d = Preset::SmallDataIteration.defaults();
    let s0 = preset_state(&p, Preset::SmallDataIteration);
    let tol = 1e-10;
    for theta_index in [ThetaIndex::Next, ThetaIndex::Previous] {
        let cfg = IterationConfig { r: d.r, n_max: 30, horizon: d.horizon, dt: d.dt, tol, theta_index };
        let out = iterate_scheme(&p, &s0.theta, &s0.u, &cfg).unwrap();
        assert_eq!(out.status, IterationStatus::Converged, "{theta_index:?}");
        for w in out.records.windows(2).skip(2) {
            assert!(w[1].gap() <= w[0].gap());
        }
        let direct = run_direct(&p, &s0, &DirectConfig::new(d.horizon, d.dt, d.r)).unwrap().final_state;
        let limit = out.limit.last().unwrap();
        let s = d.r - 1.0;
        let dist = holder_value(&p, &(&limit.theta - &direct.theta), s)
            .max(holder_value_vector(&p, &limit.u.axpy(-1.0, &direct.u), s));
        assert!(dist <= 10.0 * tol, "{theta_index:?}: {dist:e}");
    }
}

#[test]
fn iteration_rejects_bad_parameters() {
    let p = partition(32);
    let g = p.grid().clone();
    let z = SpectralField::zeros(&g);
    let u = VectorField::zeros(&g);
    let base = IterationConfig {
        r: 1.5,
        n_max: 4,
        horizon: 0.1,
        dt: 1e-2,
        tol: 1e-10,
        theta_index: ThetaIndex::Next,
    };
    assert!(iterate_scheme(&p, &z, &u, &IterationConfig { r: 1.0, ..base.clone() }).is_err());
    assert!(iterate_scheme(&p, &z, &u, &IterationConfig { tol: 0.0, ..base.clone() }).is_err());
    assert!(iterate_scheme(&p, &z, &u, &IterationConfig { n_max: 1, ..base }).is_err());
}

#[test]
fn probe_is_linear_in_perturbation() {
    let p = partition(32);
    let s0 = preset_state(&p, Preset::TaylorGreen);
    let dir = synthesize_holder_field(&p, 0.5, 1.0, 3);
    let curves = uniqueness_probe(&p, &s0, &dir, &[0.0, 1e-4, 1e-5], 1.5, 0.2, 1e-2).unwrap();
    assert_eq!(curves[0].terminal_gap(), 0.0);
    // initial gap is ε in C^{r−1}
    assert!((curves[1].theta_gap[0] - 1e-4).abs() <= 1e-12);
    let ratio = curves[1].terminal_gap() / curves[2].terminal_gap();
    assert!((ratio - 10.0).abs() <= 3.0, "ratio {ratio}");
    let mut csv = Vec::new();
    write_probe_csv(&curves, &mut csv).unwrap();
    assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 1 + 3 * curves[0].t.len());
    assert!(uniqueness_probe(&p, &s0, &SpectralField::zeros(p.grid()), &[1e-4], 1.5, 0.1, 1e-2).is_err());
}

#[test]
fn synthesized_fields_have_flat_block_profile() {
    let p = partition(128);
    assert_eq!(linf_norm(&synthesize_holder_field(&p, 1.5, 0.0, 4)), 0.0);
    let f = synthesize_holder_field(&p, 1.5, 1.0, 4);
    let levels: Vec<f64> = (0..=p.q_max() - 2)
        .map(|q| 2f64.powf(1.5 * q as f64) * linf_norm(&p.block(q, &f).unwrap()))
        .collect();
    let hi = levels.iter().cloned().fold(0.0, f64::max);
    let lo = levels.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(hi <= 2.0 * lo, "{levels:?}");
    let h = holder_value(&p, &f, 1.5);
    assert!((0.5..=2.0).contains(&h));
    assert!(f.mean().abs() < 1e-15);
    let other = synthesize_holder_field(&p, 1.5, 1.0, 5);
    assert!(linf_norm(&(&f - &other)) > 0.1);
    assert_eq!(f.coeffs(), synthesize_holder_field(&p, 1.5, 1.0, 4).coeffs());
}
