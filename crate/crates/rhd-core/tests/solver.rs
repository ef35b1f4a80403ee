use rhd_core::dg::{max_stable_dt, DgOperator, DgSolution};
use rhd_core::limiter::{irp_limit, LimiterConfig, LimiterMode};
use rhd_core::mesh::{Boundary, Mesh};
use rhd_core::scenarios::{builtin, entropy_floor, first_order_reference, AnyScenario, Scenario};
use rhd_core::state::{primitive, ConservedState, Eos, PrimitiveState};
use rhd_core::stepper::{check_averages, integrate, DgScheme, Scheme};

fn totals<const N: usize>(u: &DgSolution<N>) -> ConservedState<N> {
    u.averages().fold(ConservedState::ZERO, |a, b| a + b)
}

fn one(name: &str) -> Scenario<1> {
    match builtin(name).unwrap() {
        AnyScenario::One(s) => s,
        AnyScenario::Two(_) => panic!("{name} is 2D"),
    }
}

#[test]
fn periodic_runs_conserve_totals() {
    let sc = one("smooth1d");
    for (k, scheme) in [(1, Scheme::SspRk3), (2, Scheme::SspMs3), (3, Scheme::ForwardEuler)] {
        let op = DgOperator::new(sc.mesh([32]).unwrap(), k, sc.eos().unwrap(), 1.0).unwrap();
        let mut u0 = op.project_initial(|x| sc.initial.eval(x)).unwrap();
        let limiter = LimiterConfig::new(LimiterMode::Irp, -100.0);
        irp_limit(&mut u0, &op, &limiter).unwrap();
        let before = totals(&u0);
        let dt = scheme.cfl_fraction() * max_stable_dt(&op.mesh, k, 1.0, 0.1);
        let s = DgScheme { limiter, op };
        let u = integrate(&s, scheme, u0, 0.05, dt, |_| Ok(())).unwrap();
        let after = totals(&u);
        assert!((after - before).max_abs() <= 1e-13 * before.max_abs(), "k={k}");
    }
}

#[test]
fn uniform_flow_is_preserved() {
    let eos = Eos::default();
    let state = PrimitiveState::new(0.7, [0.5, -0.6], 3.0);
    let mesh = Mesh::uniform_boundary([0.0, 0.0], [1.0, 1.0], [6, 5], Boundary::Periodic).unwrap();
    let op = DgOperator::new(mesh, 2, eos, 1.0).unwrap();
    let u0 = op.project_initial(|_| state).unwrap();
    let dt = max_stable_dt(&op.mesh, 2, 1.0, 0.15);
    let s = DgScheme {
        limiter: LimiterConfig::new(LimiterMode::Irp, -10.0),
        op,
    };
    let u = integrate(&s, Scheme::SspRk3, u0.clone(), 0.1, dt, |_| Ok(())).unwrap();
    for (a, b) in u.averages().zip(u0.averages()) {
        assert!((a - b).max_abs() < 1e-12);
    }
    let v = primitive(&u.average(7), &eos).unwrap();
    assert!((v.p - 3.0).abs() < 1e-11 && (v.v[1] + 0.6).abs() < 1e-12);
}

#[test]
fn shock_tube_stays_in_the_invariant_region() {
    let sc = one("riemann1d_1");
    let eos = sc.eos().unwrap();
    let s0 = entropy_floor(&sc, 4096, &eos).unwrap();
    let op = DgOperator::new(sc.mesh([100]).unwrap(), 2, eos, 1.0).unwrap();
    let limiter = LimiterConfig::new(LimiterMode::Irp, s0);
    let mut u0 = op.project_initial(|x| sc.initial.eval(x)).unwrap();
    irp_limit(&mut u0, &op, &limiter).unwrap();
    let dt = max_stable_dt(&op.mesh, 2, 1.0, 0.15);
    let s = DgScheme { op, limiter };
    let mut steps = 0;
    let u = integrate(&s, Scheme::SspRk3, u0, 0.2, dt, |v| {
        steps += 1;
        let (pts, avg) = s.op.entropy_minima(v);
        assert!(pts >= s0 - 1e-10 && avg >= s0 - 1e-10);
        check_averages(v, &s.op, &s.limiter)
    })
    .unwrap();
    assert!(steps > 10);

    // the high-order density agrees with a fine first-order reference
    let reference = first_order_reference(&sc, 100, 8, 0.2).unwrap();
    let l1: f64 = u
        .averages()
        .zip(&reference)
        .map(|(a, r)| (primitive(&a, &eos).unwrap().rho - r).abs())
        .sum::<f64>()
        / 100.0;
    assert!(l1 < 0.05, "l1 {l1}");
}
