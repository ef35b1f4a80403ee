//! Randomised verification of the invariant-region theory.
//!
//! Each check draws admissible states by sampling primitives (ρ and p
//! log-uniform in `[1e-2, 1e2]`, uniform direction, `|v|` uniform in
//! `[0, 0.999]`) and reports the number of failures and the worst margin.

use std::fmt;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use rhd_core::dg::{theoretical_dt, DgOperator, DgSolution};
use rhd_core::flux::{
    cartesian_glf_average_2d, glf_average, lf_flux, physical_flux, polytope_glf_average, FanEdge, UnitNormal,
};
use rhd_core::limiter::{irp_limit, LimiterConfig, LimiterMode};
use rhd_core::mesh::{Boundary, Mesh};
use rhd_core::quadrature::{decomposition_2d, Rule};
use rhd_core::region::{
    entropy_hessian, phi_scale, phi_sigma, q_fn, specific_entropy, AuxiliaryPoint, EntropyGenerator, Linear, Negated,
};
use rhd_core::state::{prim_to_cons, ConservedState, Eos, PrimitiveState};
use rhd_core::stepper::IRP_SLACK;
use rhd_core::InvariantRegion;

/// Relative slack of the constructive inequality.
pub const CONSTRUCTIVE_TOL: f64 = 1e-10;
/// Relative slack of the forward second-form check.
pub const PHI_TOL: f64 = 1e-12;
/// Entropy slack on recomputed floors: the round-off band of `S` itself.
pub const FLOOR_SLACK: f64 = 1e-10;
/// Slack of the first-order local minimum entropy principle.
pub const LOCAL_MIN_TOL: f64 = 1e-10;
/// Relative eigenvalue resolution of the finite-difference Hessian.
pub const HESSIAN_RESOLUTION: f64 = 1e-10;
/// Decomposition exactness tolerance.
pub const DECOMPOSITION_TOL: f64 = 1e-13;

pub const CHECK_NAMES: [&str; 13] = [
    "constructive_inequality",
    "second_form_forward",
    "second_form_witness",
    "convexity",
    "glf_1d",
    "glf_2d_cartesian",
    "glf_polytope",
    "local_minimum_entropy",
    "pp_1d",
    "pp_2d",
    "hessian",
    "decomposition_2d",
    "limiter_contracts",
];

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Multiplier on the default sample counts.
    pub scale: f64,
    pub only: Option<String>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            scale: 1.0,
            only: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub samples: usize,
    pub failures: usize,
    /// Smallest normalised margin seen; negative beyond the tolerance is a failure.
    pub worst: f64,
    pub passed: bool,
    pub seconds: f64,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<26} samples={:<7} failures={:<3} worst={:+.3e} ({:.1}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.samples,
            self.failures,
            self.worst,
            self.seconds
        )
    }
}

fn rng(seed: u64, check: usize, i: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ check as u64);
    r.set_stream(i as u64);
    r
}

fn log_uniform(r: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    (r.gen_range(lo.ln()..hi.ln())).exp()
}

fn velocity<const N: usize>(r: &mut impl Rng, max: f64) -> [f64; N] {
    let speed = r.gen_range(0.0..max);
    let dir: [f64; N] = core::array::from_fn(|_| r.gen_range(-1.0..1.0));
    let n = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n < 1e-12 {
        let mut e = [0.0; N];
        e[0] = speed;
        return e;
    }
    dir.map(|x| x / n * speed)
}

pub fn random_primitive<const N: usize>(r: &mut impl Rng) -> PrimitiveState<N> {
    PrimitiveState::new(log_uniform(r, 1e-2, 1e2), velocity(r, 0.999), log_uniform(r, 1e-2, 1e2))
}

/// A random admissible conserved state and its entropy.
pub fn random_state<const N: usize>(r: &mut impl Rng, eos: &Eos) -> (ConservedState<N>, f64) {
    loop {
        let u = prim_to_cons(&random_primitive::<N>(r), eos).expect("sampled primitives are admissible");
        if let Ok(s) = specific_entropy(&u, eos) {
            return (u, s);
        }
    }
}

fn random_gamma(r: &mut impl Rng) -> Eos {
    let g = if r.gen_bool(0.5) { 5.0 / 3.0 } else { r.gen_range(1.05..=2.0) };
    Eos::new(g).expect("gamma in range")
}

fn random_aux<const N: usize>(r: &mut impl Rng) -> AuxiliaryPoint<N> {
    AuxiliaryPoint::new(velocity(r, 0.999), log_uniform(r, 1e-3, 1e3)).expect("valid auxiliary point")
}

/// Runs `n` independent samples; each returns its margin (negative fails).
fn sampled<F>(name: &str, id: usize, n: usize, seed: u64, f: F) -> Check
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let start = Instant::now();
    let margins: Vec<f64> = (0..n).into_par_iter().map(|i| f(&mut rng(seed, id, i))).collect();
    let failures = margins.iter().filter(|m| !(**m >= 0.0)).count();
    let worst = margins.iter().copied().fold(f64::INFINITY, |a, b| if b.is_nan() { f64::NAN } else { a.min(b) });
    Check {
        name: name.into(),
        samples: n,
        failures,
        worst,
        passed: failures == 0,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn member_margin<const N: usize>(u: &ConservedState<N>, sigma: f64, eos: &Eos) -> f64 {
    if !(u.d > 0.0) || !(q_fn(u) > 0.0) {
        return -1.0;
    }
    specific_entropy(u, eos).map_or(-1.0, |s| s - sigma)
}

fn constructive(r: &mut ChaCha8Rng) -> f64 {
    let eos = random_gamma(r);
    let (u, s) = random_state::<2>(r, &eos);
    let sigma = s - r.gen_range(0.0..2.0);
    let aux = random_aux::<2>(r);
    let theta = r.gen_range(-1.0..=1.0);
    let i = r.gen_range(0..2);
    let f = physical_flux(&u, i, &eos).expect("admissible");
    let w = u.axpy(theta, &f);
    let extra = theta * sigma.exp() * aux.v_star[i] * aux.rho_star.powf(eos.gamma());
    let value = phi_sigma(&w, &aux, sigma, &eos) + extra;
    let scale = phi_scale(&w, &aux, sigma, &eos) + extra.abs();
    value / scale + CONSTRUCTIVE_TOL
}

fn second_form_forward(r: &mut ChaCha8Rng) -> f64 {
    let eos = random_gamma(r);
    let (u, s) = random_state::<2>(r, &eos);
    let sigma = if r.gen_bool(0.3) { s } else { s - r.gen_range(0.0..2.0) };
    let v = rhd_core::state::primitive(&u, &eos).expect("admissible");
    let mut worst = f64::INFINITY;
    for j in 0..100 {
        let aux = if j == 0 {
            AuxiliaryPoint::witness(&v)
        } else if j < 20 {
            // near the witness, where φ attains its minimum
            let dv: [f64; 2] = core::array::from_fn(|a| v.v[a] * (1.0 + r.gen_range(-1e-2..1e-2)));
            let speed = (dv[0] * dv[0] + dv[1] * dv[1]).sqrt();
            let dv = if speed >= 0.9999 { v.v } else { dv };
            AuxiliaryPoint::new(dv, v.rho * (1.0 + r.gen_range(-1e-2..1e-2))).expect("valid")
        } else {
            random_aux(r)
        };
        let m = phi_sigma(&u, &aux, sigma, &eos) / phi_scale(&u, &aux, sigma, &eos) + PHI_TOL;
        worst = worst.min(m);
    }
    worst
}

fn second_form_witness(r: &mut ChaCha8Rng) -> f64 {
    let eos = random_gamma(r);
    let (u, s) = random_state::<2>(r, &eos);
    let sigma = s + log_uniform(r, 1e-6, 1.0);
    let v = rhd_core::state::primitive(&u, &eos).expect("admissible");
    let aux = AuxiliaryPoint::witness(&v);
    -phi_sigma(&u, &aux, sigma, &eos) / phi_scale(&u, &aux, sigma, &eos)
}

fn convexity(r: &mut ChaCha8Rng) -> f64 {
    let eos = random_gamma(r);
    let (u1, s1) = random_state::<2>(r, &eos);
    let (u2, s2) = random_state::<2>(r, &eos);
    let sigma = s1.min(s2) - FLOOR_SLACK;
    let l = r.gen_range(0.0..=1.0);
    member_margin(&(u1 * l + u2 * (1.0 - l)), sigma, &eos)
}

fn floor_of<const N: usize>(states: &[(ConservedState<N>, f64)]) -> f64 {
    states.iter().map(|s| s.1).fold(f64::INFINITY, f64::min) - FLOOR_SLACK
}

fn glf_1d(r: &mut ChaCha8Rng) -> f64 {
    let eos = random_gamma(r);
    let a = random_state::<1>(r, &eos);
    let b = random_state::<1>(r, &eos);
    let sigma = floor_of(&[a, b]);
    let alpha = if r.gen_bool(0.5) { 1.0 } else { r.gen_range(1.0..2.0) };
    let g = glf_average(&a.0, &b.0, 0, alpha, &eos).expect("admissible");
    member_margin(&g, sigma, &eos)
}

fn glf_2d_cartesian(r: &mut ChaCha8Rng) -> f64 {
    let eos = random_gamma(r);
    let q = r.gen_range(1..=4);
    let weights = Rule::gauss(q).weights;
    let draw = |r: &mut ChaCha8Rng| (0..q).map(|_| random_state::<2>(r, &eos)).collect::<Vec<_>>();
    let sets: Vec<Vec<(ConservedState<2>, f64)>> = (0..4).map(|_| draw(r)).collect();
    let all: Vec<_> = sets.iter().flatten().copied().collect();
    let sigma = floor_of(&all);
    let st = |i: usize| sets[i].iter().map(|s| s.0).collect::<Vec<_>>();
    let (dx, dy) = (log_uniform(r, 0.1, 10.0), log_uniform(r, 0.1, 10.0));
    let g = cartesian_glf_average_2d(dx, dy, &weights, &st(0), &st(1), &st(2), &st(3), 1.0, &eos).expect("admissible");
    member_margin(&g, sigma, &eos).min(member_margin(&(g * 0.5), sigma, &eos))
}

/// Outward edge lengths and normals of a random convex polygon.
fn random_fan(r: &mut ChaCha8Rng) -> Vec<(f64, UnitNormal<2>)> {
    let m = r.gen_range(3..=7);
    let mut angles: Vec<f64> = (0..m).map(|_| r.gen_range(0.0..std::f64::consts::TAU)).collect();
    angles.sort_by(f64::total_cmp);
    let pts: Vec<[f64; 2]> = angles
        .iter()
        .map(|a| {
            let rad = r.gen_range(0.5..2.0);
            [rad * a.cos(), rad * a.sin()]
        })
        .collect();
    (0..m)
        .filter_map(|j| {
            let (p, q) = (pts[j], pts[(j + 1) % m]);
            let e = [q[0] - p[0], q[1] - p[1]];
            let len = (e[0] * e[0] + e[1] * e[1]).sqrt();
            // counter-clockwise vertices: the outward normal is (e_y, -e_x)
            (len > 1e-9).then(|| (len, UnitNormal::normalize([e[1], -e[0]]).expect("nonzero")))
        })
        .collect()
}

fn glf_polytope(r: &mut ChaCha8Rng) -> f64 {
    let eos = random_gamma(r);
    let fan = random_fan(r);
    let mut all = Vec::new();
    let mut edges = Vec::new();
    for (length, normal) in fan {
        let q = r.gen_range(1..=3);
        let raw: Vec<f64> = (0..q).map(|_| r.gen_range(0.1..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let states: Vec<_> = (0..q).map(|_| random_state::<2>(r, &eos)).collect();
        all.extend(states.iter().copied());
        edges.push(FanEdge {
            length,
            normal,
            weights: raw.iter().map(|w| w / total).collect(),
            states: states.iter().map(|s| s.0).collect(),
        });
    }
    let sigma = floor_of(&all);
    match polytope_glf_average(&edges, 1.0, &eos) {
        Ok(g) => member_margin(&g, sigma, &eos),
        Err(_) => -1.0,
    }
}

fn local_minimum_entropy(r: &mut ChaCha8Rng) -> f64 {
    let eos = random_gamma(r);
    let t: Vec<_> = (0..3).map(|_| random_state::<1>(r, &eos)).collect();
    let sigma = t.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    let lambda = if r.gen_bool(0.2) { 1.0 } else { r.gen_range(0.0..=1.0) };
    let x = UnitNormal::axis(0);
    let fr = lf_flux(&t[1].0, &t[2].0, &x, 1.0, &eos).expect("admissible");
    let fl = lf_flux(&t[0].0, &t[1].0, &x, 1.0, &eos).expect("admissible");
    let next = t[1].0 - (fr - fl) * lambda;
    member_margin(&next, sigma - LOCAL_MIN_TOL, &eos)
}

/// Random modal data around admissible averages, limited to `Ω_{S₀}`.
fn limited_data<const N: usize>(r: &mut ChaCha8Rng, op: &DgOperator<N>) -> Option<(DgSolution<N>, f64)> {
    let mut u = DgSolution::zeros(&op.mesh, op.degree);
    let mut smin = f64::INFINITY;
    let amp = r.gen_range(0.0..1.0);
    for c in 0..u.n_cells() {
        let (avg, s) = random_state::<N>(r, &op.eos);
        smin = smin.min(s);
        let modes = u.cell_mut(c);
        modes[0] = avg;
        for m in modes.iter_mut().skip(1) {
            for i in 0..N + 2 {
                m.set(i, avg.get(i) * amp * r.gen_range(-0.5..0.5));
            }
        }
    }
    let s0 = if r.gen_bool(0.3) { smin } else { smin - r.gen_range(0.0..1.0) };
    let cfg = LimiterConfig::new(LimiterMode::Irp, s0);
    irp_limit(&mut u, op, &cfg).ok()?;
    Some((u, s0))
}

fn pp_update<const N: usize>(r: &mut ChaCha8Rng, op: &DgOperator<N>) -> f64 {
    let Some((u, s0)) = limited_data(r, op) else {
        return -1.0;
    };
    let Ok(l) = op.residual(&u) else {
        return -1.0;
    };
    let dt = theoretical_dt(&op.mesh, op.degree, op.alpha);
    (0..u.n_cells())
        .map(|c| member_margin(&u.average(c).axpy(dt, &l.average(c)), s0 - IRP_SLACK, &op.eos))
        .fold(f64::INFINITY, f64::min)
}

fn pp_1d(r: &mut ChaCha8Rng) -> f64 {
    let eos = random_gamma(r);
    let k = r.gen_range(1..=3);
    let mesh = Mesh::uniform_boundary([0.0], [1.0], [4], Boundary::Periodic).expect("mesh");
    let op = DgOperator::new(mesh, k, eos, 1.0).expect("operator");
    pp_update(r, &op)
}

fn pp_2d(r: &mut ChaCha8Rng) -> f64 {
    let eos = random_gamma(r);
    let k = r.gen_range(1..=3);
    let hi = [1.0, log_uniform(r, 0.5, 2.0)];
    let mesh = Mesh::uniform_boundary([0.0, 0.0], hi, [3, 3], Boundary::Periodic).expect("mesh");
    let op = DgOperator::new(mesh, k, eos, 1.0).expect("operator");
    pp_update(r, &op)
}

fn eigen_range(h: &dyn EntropyGenerator, u: &ConservedState<2>, eos: &Eos) -> Option<(f64, f64)> {
    let m = entropy_hessian(h, u, eos, None).ok()?;
    let e = DMatrix::from_fn(m.n, m.n, |i, j| m.get(i, j)).symmetric_eigenvalues();
    Some((e.min(), e.iter().map(|x| x.abs()).fold(0.0, f64::max)))
}

fn hessian(r: &mut ChaCha8Rng) -> f64 {
    let eos = random_gamma(r);
    let (u, _) = random_state::<2>(r, &eos);
    let pd = eigen_range(&Linear, &u, &eos).map_or(-1.0, |(lo, hi)| lo / hi + HESSIAN_RESOLUTION);
    let violation = eigen_range(&Negated, &u, &eos).map_or(-1.0, |(lo, hi)| -lo / hi - HESSIAN_RESOLUTION);
    pd.min(violation)
}

fn mono_mean(a: usize) -> f64 {
    if a % 2 == 1 {
        0.0
    } else {
        1.0 / (a as f64 + 1.0)
    }
}

/// Decomposition error of every monomial `x^a y^b`, `a + b ≤ k`, on random cells.
fn decomposition(r: &mut ChaCha8Rng) -> f64 {
    let (dx, dy) = (log_uniform(r, 0.01, 10.0), log_uniform(r, 0.01, 10.0));
    let mut worst = f64::INFINITY;
    for k in 0..=3 {
        let pts = decomposition_2d(k, dx, dy);
        if pts.iter().any(|p| !(p.w > 0.0)) {
            return -1.0;
        }
        for a in 0..=k {
            for b in 0..=k - a {
                let sum: f64 = pts.iter().map(|p| p.w * p.x[0].powi(a as i32) * p.x[1].powi(b as i32)).sum();
                worst = worst.min(DECOMPOSITION_TOL - (sum - mono_mean(a) * mono_mean(b)).abs());
            }
        }
    }
    worst
}

type CheckFn = fn(&mut ChaCha8Rng) -> f64;

fn table() -> [(CheckFn, usize); 12] {
    [
        (constructive, 100_000),
        (second_form_forward, 10_000),
        (second_form_witness, 10_000),
        (convexity, 10_000),
        (glf_1d, 10_000),
        (glf_2d_cartesian, 10_000),
        (glf_polytope, 10_000),
        (local_minimum_entropy, 10_000),
        (pp_1d, 1_000),
        (pp_2d, 1_000),
        (hessian, 1_000),
        (decomposition, 100),
    ]
}

/// Runs the battery, or the single check named in `opts.only`.
pub fn battery(opts: &VerifyOptions) -> Vec<Check> {
    let count = |n: usize| ((n as f64 * opts.scale).round() as usize).max(1);
    let selected = |name: &str| opts.only.as_deref().is_none_or(|n| n == name);
    let mut out: Vec<Check> = table()
        .into_iter()
        .enumerate()
        .filter(|(id, _)| selected(CHECK_NAMES[*id]))
        .map(|(id, (f, n))| sampled(CHECK_NAMES[id], id, count(n), opts.seed, f))
        .collect();
    if selected("limiter_contracts") {
        out.extend(limiter_contracts(opts.seed, count(1_000)));
    }
    out
}

/// Relative tolerance of the limiter conservation and idempotence contracts.
pub const LIMITER_TOL: f64 = 1e-14;

/// Limiter contracts on one random cell: averages unchanged, a second pass
/// changes nothing, and every limiter point in `Ω_{S₀}` up to slack.
fn limiter_cell<const N: usize>(r: &mut ChaCha8Rng, op: &DgOperator<N>) -> f64 {
    let mut u = DgSolution::zeros(&op.mesh, op.degree);
    let (avg, s) = random_state::<N>(r, &op.eos);
    let amp = log_uniform(r, 1e-3, 4.0);
    {
        let modes = u.cell_mut(0);
        modes[0] = avg;
        for m in modes.iter_mut().skip(1) {
            for i in 0..N + 2 {
                m.set(i, avg.get(i) * amp * r.gen_range(-1.0..1.0));
            }
        }
    }
    let mode = match r.gen_range(0..3) {
        0 => LimiterMode::Bp,
        1 => LimiterMode::IrpQtilde,
        _ => LimiterMode::Irp,
    };
    let s0 = if r.gen_bool(0.3) { s } else { s - r.gen_range(0.0..2.0) };
    let cfg = LimiterConfig::new(mode, s0);
    let before = u.clone();
    if irp_limit(&mut u, op, &cfg).is_err() {
        return -1.0;
    }
    let scale = before.cell(0).iter().map(|m| m.max_abs()).fold(0.0, f64::max);
    let mut margin = f64::INFINITY;
    let a0 = before.average(0);
    let a1 = u.average(0);
    margin = margin.min(LIMITER_TOL - (a1 - a0).max_abs() / a0.max_abs());
    let once = u.clone();
    if irp_limit(&mut u, op, &cfg).is_err() {
        return -1.0;
    }
    for (x, y) in once.cell(0).iter().zip(u.cell(0)) {
        margin = margin.min(LIMITER_TOL - (*x - *y).max_abs() / scale);
    }
    let pts = &op.limiting;
    for p in 0..pts.len() {
        let w = pts.eval(once.cell(0), p);
        if !(w.d > 0.0) || !(q_fn(&w) > 0.0) {
            return -1.0;
        }
        if mode.enforces_entropy() {
            let Ok(v) = rhd_core::state::primitive(&w, &op.eos) else {
                return -1.0;
            };
            let slack = IRP_SLACK.max(rhd_core::region::entropy_round_off(&w, &v, &op.eos));
            margin = margin.min(rhd_core::region::entropy_of(&v, &op.eos) - s0 + slack);
        }
    }
    margin
}

/// Limiter contracts for `k = 1..=3` in one and two dimensions, `n` cells each.
pub fn limiter_contracts(seed: u64, n: usize) -> Vec<Check> {
    let mut out = Vec::new();
    for k in 1..=3 {
        let eos = Eos::default();
        let m1 = Mesh::uniform_boundary([0.0], [1.0], [1], Boundary::Outflow).expect("mesh");
        let op1 = DgOperator::new(m1, k, eos, 1.0).expect("operator");
        out.push(sampled(&format!("limiter_k{k}_1d"), 100 + k, n, seed, |r| limiter_cell(r, &op1)));
        let m2 = Mesh::uniform_boundary([0.0, 0.0], [1.0, 0.7], [1, 1], Boundary::Outflow).expect("mesh");
        let op2 = DgOperator::new(m2, k, eos, 1.0).expect("operator");
        out.push(sampled(&format!("limiter_k{k}_2d"), 200 + k, n, seed, |r| limiter_cell(r, &op2)));
    }
    out
}

/// Membership of `u` in `Ω_σ`, exposed for callers that build their own samples.
pub fn in_region<const N: usize>(u: &ConservedState<N>, sigma: f64, eos: Eos) -> bool {
    InvariantRegion::new(sigma, eos).is_ok_and(|r| r.contains(u))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_battery_passes() {
        let report = battery(&VerifyOptions {
            seed: 7,
            scale: 0.01,
            only: None,
        });
        assert_eq!(report.len(), CHECK_NAMES.len() - 1 + 6);
        for c in &report {
            assert!(c.passed, "{c}");
        }
    }

    #[test]
    fn limiter_contracts_hold_on_a_sample() {
        for c in limiter_contracts(11, 50) {
            assert!(c.passed, "{c}");
        }
    }

    #[test]
    fn fans_close() {
        let mut r = rng(1, 0, 0);
        for _ in 0..100 {
            let fan = random_fan(&mut r);
            let s: [f64; 2] = core::array::from_fn(|a| fan.iter().map(|(l, n)| l * n.xi()[a]).sum());
            assert!(s[0].abs() < 1e-12 && s[1].abs() < 1e-12);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let opts = VerifyOptions {
            seed: 3,
            scale: 0.001,
            only: Some("convexity".into()),
        };
        let (a, b) = (battery(&opts), battery(&opts));
        assert_eq!(a[0].worst, b[0].worst);
        assert_eq!(a.len(), 1);
    }

    #[test]
    fn witness_detects_entropy_deficit() {
        let eos = Eos::default();
        let u = prim_to_cons(&PrimitiveState::new(1.0, [0.0], 1.0), &eos).unwrap();
        let aux = AuxiliaryPoint::witness(&PrimitiveState::new(1.0, [0.0], 1.0));
        let sigma: f64 = 0.1;
        let expect = (1.0 - sigma.exp()) / (eos.gamma() - 1.0);
        assert!((phi_sigma(&u, &aux, sigma, &eos) - expect).abs() < 1e-14);
        assert!(!in_region(&u, sigma, eos));
        assert!(in_region(&u, 0.0, eos));
    }
}
