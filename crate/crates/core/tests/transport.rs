use std::f64::consts::PI;
use std::sync::Arc;

use boussinesq_core::littlewood_paley::build_partition;
use boussinesq_core::spectral::{linf_norm, make_grid, Grid, SpectralField, VectorField};
use boussinesq_core::transport::{solve, solve_with_trajectory, TransportProblem};
use boussinesq_core::Error;

fn taylor_green(g: &Arc<Grid>, a: f64) -> VectorField {
    VectorField::new(
        SpectralField::from_fn(g, |x1, x2| a * x1.sin() * x2.cos()),
        SpectralField::from_fn(g, |x1, x2| -a * x1.cos() * x2.sin()),
    )
    .unwrap()
}

fn run(f0: SpectralField, v: VectorField, horizon: f64, dt: f64) -> SpectralField {
    solve(&TransportProblem::frozen(f0, v, horizon, dt), |_, _, _| Ok(())).unwrap()
}

fn profile(x1: f64, x2: f64) -> f64 {
    (10.0 * x1 + 3.0 * x2).cos() + 0.5 * (2.0 * x1 - x2).sin()
}

#[test]
fn constant_velocity_translates_data() {
    let g = make_grid(128, 2.0 * PI).unwrap();
    let c = (1.0, 0.0);
    let v = VectorField::new(
        SpectralField::from_fn(&g, |_, _| c.0),
        SpectralField::from_fn(&g, |_, _| c.1),
    )
    .unwrap();
    let out = run(SpectralField::from_fn(&g, profile), v, 1.0, 1e-3);
    let exact = SpectralField::from_fn(&g, |x1, x2| profile(x1 - c.0, x2 - c.1));
    let err = linf_norm(&(&out - &exact));
    assert!(err <= 1e-8, "translation error {err:e}");
}

#[test]
fn rk4_self_convergence_order() {
    let g = make_grid(64, 2.0 * PI).unwrap();
    let f0 = SpectralField::from_fn(&g, |x1, x2| (2.0 * x1 + x2).sin() + (3.0 * x2).cos());
    let v = taylor_green(&g, 1.0);
    let a = run(f0.clone(), v.clone(), 1.0, 2e-3);
    let b = run(f0.clone(), v.clone(), 1.0, 1e-3);
    let c = run(f0, v, 1.0, 5e-4);
    let order = (linf_norm(&(&a - &b)) / linf_norm(&(&b - &c))).log2();
    assert!(order >= 3.0, "observed order {order}");
}

#[test]
fn solution_is_linear_in_data() {
    let g = make_grid(32, 2.0 * PI).unwrap();
    let v = taylor_green(&g, 0.8);
    let f = SpectralField::from_fn(&g, |x1, x2| (x1 + x2).sin());
    let h = SpectralField::from_fn(&g, |x1, x2| (2.0 * x1).cos() * x2.sin());
    let combo = run(f.scale(2.0).axpy(-3.0, &h), v.clone(), 0.5, 1e-2);
    let parts = run(f, v.clone(), 0.5, 1e-2).scale(2.0).axpy(-3.0, &run(h, v, 0.5, 1e-2));
    assert!(linf_norm(&(&combo - &parts)) <= 1e-12);
}

#[test]
fn mean_and_maximum_are_controlled() {
    let g = make_grid(64, 2.0 * PI).unwrap();
    let f0 = SpectralField::from_fn(&g, |x1, x2| 0.3 + (x1 + 2.0 * x2).sin() * x2.cos());
    let p = build_partition(&g).unwrap();
    let (_, traj) =
        solve_with_trajectory(&TransportProblem::frozen(f0.clone(), taylor_green(&g, 1.0), 1.0, 5e-3), &p, 1.5)
            .unwrap();
    let m0 = traj.rows[0].mean;
    let sup0 = traj.rows[0].linf;
    for row in &traj.rows {
        assert!((row.mean - m0).abs() <= 1e-13);
        assert!(row.linf <= sup0 * (1.0 + 1e-3), "t = {}: {} > {sup0}", row.t, row.linf);
    }
    let mut csv = Vec::new();
    traj.write_csv(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert_eq!(text.lines().next(), Some("t,linf,holder_r,mean"));
    assert_eq!(text.lines().count(), traj.rows.len() + 1);
}

#[test]
fn stream_function_is_steady() {
    // v = ∇^⊥ψ makes v·∇ψ vanish
    let g = make_grid(32, 2.0 * PI).unwrap();
    let psi = SpectralField::from_fn(&g, |x1, x2| x1.sin() * x2.sin());
    let out = run(psi.clone(), taylor_green(&g, 1.0), 1.0, 1e-2);
    assert!(linf_norm(&(&out - &psi)) <= 1e-13);
}

#[test]
fn manufactured_forced_solution() {
    // f = e^{−t} sin x₁ cos x₂ under Taylor–Green velocity needs
    // g = −f + ½ e^{−t} sin 2x₁
    let g = make_grid(32, 2.0 * PI).unwrap();
    let exact = |t: f64| SpectralField::from_fn(&g, move |x1, x2| (-t).exp() * x1.sin() * x2.cos());
    let forcing = |t: f64| {
        SpectralField::from_fn(&g, move |x1, x2| {
            (-t).exp() * (0.5 * (2.0 * x1).sin() - x1.sin() * x2.cos())
        })
    };
    let problem = TransportProblem::frozen(exact(0.0), taylor_green(&g, 1.0), 1.0, 1e-3).with_forcing(forcing);
    let out = solve(&problem, |_, _, _| Ok(())).unwrap();
    let err = linf_norm(&(&out - &exact(1.0)));
    assert!(err <= 1e-10, "manufactured error {err:e}");
}

#[test]
fn compressible_velocity_is_rejected() {
    let g = make_grid(32, 2.0 * PI).unwrap();
    let v = VectorField {
        u1: SpectralField::from_fn(&g, |x1, _| x1.sin()),
        u2: SpectralField::zeros(&g),
    };
    let p = TransportProblem::frozen(SpectralField::zeros(&g), v, 1.0, 1e-2);
    assert!(matches!(solve(&p, |_, _, _| Ok(())), Err(Error::NotDivergenceFree { .. })));
}
