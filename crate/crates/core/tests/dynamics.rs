use std::f64::consts::PI;

use kamstab::dynamics::{acceleration, integrate, jacobi_constant, IntegrateOptions, PhaseState};
use kamstab::equilibria::{refine_equilibrium, triangular_point_full, Branch, RESIDUAL_BOUND_CONSTANT};
use kamstab::linear::frequencies;
use kamstab::SystemParams;
use proptest::prelude::*;

fn l4(params: &SystemParams) -> (f64, f64) {
    let seed = triangular_point_full(params, Branch::L4).unwrap();
    let p = refine_equilibrium(&seed, params, 1e-14).unwrap();
    (p.x, p.y)
}

fn distance(a: &PhaseState, b: &PhaseState) -> f64 {
    let (u, v) = (a.vector(), b.vector());
    (0..4).map(|i| (u[i] - v[i]).powi(2)).sum::<f64>().sqrt()
}

#[test]
fn mirrored_flow_retraces_orbit() {
    let params = SystemParams::with_drag(0.01, 0.99, 0.005, 0.0).unwrap();
    let (x, y) = l4(&params);
    let s0 = PhaseState::new(0.0, x + 2e-3, y - 1e-3, 1e-3, 5e-4);
    let t = 10.0;
    let opts = IntegrateOptions::rk4(0.005);
    let forward = *integrate(&s0, &params, t, &opts).unwrap().last();
    let back = *integrate(&forward.time_reversed(), &params, t, &opts).unwrap().last();
    let end = back.time_reversed();
    assert!(distance(&PhaseState { t: 0.0, ..end }, &s0) < 1e-8);
}

#[test]
fn small_displacement_returns_after_long_period() {
    let params = SystemParams::classical(0.01).unwrap();
    let (x, y) = l4(&params);
    let s0 = PhaseState::new(0.0, x + 1e-5, y, 0.0, 0.0);
    let period = 2.0 * PI / frequencies(&params).unwrap().omega2;
    let tr = integrate(&s0, &params, period, &IntegrateOptions::default()).unwrap();
    assert!(distance(&PhaseState { t: 0.0, ..*tr.last() }, &s0) < 1e-4);
}

#[test]
fn fourth_order_convergence() {
    let params = SystemParams::classical(0.01).unwrap();
    let s0 = PhaseState::new(0.0, 0.5, 0.8, 0.05, 0.02);
    let reference = *integrate(&s0, &params, 4.0, &IntegrateOptions::dopri5(1e-13, 1e-15)).unwrap().last();
    let err = |h| distance(integrate(&s0, &params, 4.0, &IntegrateOptions::rk4(h)).unwrap().last(), &reference);
    let ratio = err(0.02) / err(0.01);
    assert!((ratio - 16.0).abs() <= 3.2, "{ratio}");
}

#[test]
fn jacobi_conserved_at_default_tolerances() {
    let params = SystemParams::with_drag(0.02, 0.97, 0.01, 0.0).unwrap();
    let (x, y) = l4(&params);
    let s0 = PhaseState::new(0.0, x - 1e-3, y + 1e-3, 0.0, 1e-3);
    let tr = integrate(&s0, &params, 100.0, &IntegrateOptions::default()).unwrap();
    let c0 = jacobi_constant(&s0, &params);
    let drift = tr.states.iter().map(|s| (jacobi_constant(s, &params) - c0).abs()).fold(0.0, f64::max);
    assert!(drift < 1e-8, "{drift}");
}

#[test]
fn refined_point_stays_put() {
    let params = SystemParams::new(0.01, 0.98, 0.01, 1e4).unwrap();
    let (x, y) = l4(&params);
    let tr = integrate(&PhaseState::at_rest(x, y), &params, 5.0, &IntegrateOptions::default()).unwrap();
    let end = tr.last();
    assert!((end.x - x).hypot(end.y - y) < 1e-9);
}

proptest! {
    #[test]
    fn first_order_point_is_nearly_at_rest(
        eps in 0.0f64..0.01,
        a2 in 0.0f64..0.01,
        w1 in 0.0f64..0.01,
    ) {
        let params = SystemParams::with_drag(0.1, 1.0 - eps, a2, w1).unwrap();
        let pt = triangular_point_full(&params, Branch::L4).unwrap();
        let (ax, ay) = acceleration(&PhaseState::at_rest(pt.x, pt.y), &params).unwrap();
        let bound = RESIDUAL_BOUND_CONSTANT * (eps + a2 + w1).powi(2) + 1e-14;
        prop_assert!(ax.hypot(ay) <= bound);
    }

    #[test]
    fn mirror_symmetry_of_l4_and_l5(eps in 0.0f64..0.05, a2 in 0.0f64..0.05) {
        let params = SystemParams::with_drag(0.05, 1.0 - eps, a2, 0.0).unwrap();
        let p4 = triangular_point_full(&params, Branch::L4).unwrap();
        let p5 = triangular_point_full(&params, Branch::L5).unwrap();
        prop_assert!((p4.x - p5.x).abs() < 1e-15 && (p4.y + p5.y).abs() < 1e-15);
    }
}
