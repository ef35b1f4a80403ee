//! Cell-wise scaling limiter toward the cell average: positivity of `D`,
//! positivity of `q`, and the entropy floor `S ≥ S₀` at the decomposition and
//! volume quadrature points.
//!
//! Every step multiplies the non-constant modes by a factor `θ ∈ [0, 1]`,
//! so cell averages are left bit-identical.

use crate::dg::{DgOperator, DgSolution, PointTable};
use crate::error::{Error, Quantity, Result};
use crate::math;
use crate::region::{entropy_of, entropy_round_off, q_fn};
use crate::state::{primitive, ConservedState, Eos};

/// Largest admissible `ε₁`, `ε₂`.
pub const EPSILON_CAP: f64 = 1e-13;
/// Amount by which `S(Ū)` may fall below `S₀` before the average is rejected,
/// unless the round-off of `S` at `Ū` is larger.
pub const AVERAGE_ENTROPY_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimiterMode {
    None,
    /// Steps (i) and (ii).
    Bp,
    /// Steps (i), (ii) and (iii) with an exact scalar solve.
    Irp,
    /// Steps (i), (ii) and the `q̃ = D(S - S₀)` variant of step (iii).
    IrpQtilde,
}

impl LimiterMode {
    pub fn name(&self) -> &'static str {
        match self {
            LimiterMode::None => "none",
            LimiterMode::Bp => "bp",
            LimiterMode::Irp => "irp",
            LimiterMode::IrpQtilde => "irp_qtilde",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "none" => LimiterMode::None,
            "bp" => LimiterMode::Bp,
            "irp" => LimiterMode::Irp,
            "irp_qtilde" => LimiterMode::IrpQtilde,
            _ => return None,
        })
    }

    pub fn enforces_entropy(&self) -> bool {
        matches!(self, LimiterMode::Irp | LimiterMode::IrpQtilde)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimiterConfig {
    pub mode: LimiterMode,
    pub s0: f64,
    pub bisection_tol: f64,
    pub max_iter: usize,
}

impl LimiterConfig {
    pub fn new(mode: LimiterMode, s0: f64) -> Self {
        Self {
            mode,
            s0,
            bisection_tol: 1e-12,
            max_iter: 200,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.bisection_tol > 0.0) || self.max_iter == 0 || !self.s0.is_finite() {
            return Err(Error::Config("limiter needs a finite floor, tol > 0 and max_iter ≥ 1".into()));
        }
        Ok(())
    }
}

/// Scaling factors applied to one cell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thetas {
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
}

impl Default for Thetas {
    fn default() -> Self {
        Self {
            theta1: 1.0,
            theta2: 1.0,
            theta3: 1.0,
        }
    }
}

/// `min{1, |(a - ε)/(a - b)|}`, with `1` when `b ≥ ε`.
#[inline]
fn ratio(avg: f64, min: f64, eps: f64) -> f64 {
    if min >= eps {
        1.0
    } else {
        math::abs((avg - eps) / (avg - min)).min(1.0)
    }
}

/// Step (i): scale the density modes so `D ≥ ε₁ = min(10⁻¹³, D̄)` at every point.
pub fn bp_limit_density<const N: usize>(
    modes: &mut [ConservedState<N>],
    points: &PointTable<N>,
    cell: usize,
) -> Result<f64> {
    let avg = modes[0].d;
    if !(avg > 0.0) {
        return Err(Error::InvalidAverage {
            cell,
            quantity: Quantity::Density,
        });
    }
    let eps = EPSILON_CAP.min(avg);
    let min = (0..points.len())
        .map(|p| points.row(p).iter().zip(modes.iter()).map(|(f, c)| f * c.d).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    let theta = ratio(avg, min, eps);
    if theta < 1.0 {
        for c in modes.iter_mut().skip(1) {
            c.d *= theta;
        }
    }
    Ok(theta)
}

fn scale_modes<const N: usize>(modes: &mut [ConservedState<N>], theta: f64) {
    if theta < 1.0 {
        for c in modes.iter_mut().skip(1) {
            *c *= theta;
        }
    }
}

/// Step (ii): scale all modes so `q ≥ ε₂ = min(10⁻¹³, q(Ū))` at every point.
pub fn bp_limit_q<const N: usize>(modes: &mut [ConservedState<N>], points: &PointTable<N>, cell: usize) -> Result<f64> {
    let qa = q_fn(&modes[0]);
    if !(qa > 0.0) {
        return Err(Error::InvalidAverage { cell, quantity: Quantity::Q });
    }
    let eps = EPSILON_CAP.min(qa);
    let min = (0..points.len())
        .map(|p| q_fn(&points.eval(modes, p)))
        .fold(f64::INFINITY, f64::min);
    let theta = ratio(qa, min, eps);
    scale_modes(modes, theta);
    Ok(theta)
}

/// Entropy floor used for a cell: `S₀`, lowered to `S(Ū)` when the average
/// sits within [`AVERAGE_ENTROPY_SLACK`] below it.
fn cell_floor<const N: usize>(avg: &ConservedState<N>, s0: f64, eos: &Eos, cell: usize) -> Result<f64> {
    let invalid = Error::InvalidAverage {
        cell,
        quantity: Quantity::Entropy,
    };
    let v = primitive(avg, eos).map_err(|_| invalid.clone())?;
    let s = entropy_of(&v, eos);
    if s < s0 - AVERAGE_ENTROPY_SLACK.max(entropy_round_off(avg, &v, eos)) || !s.is_finite() {
        return Err(invalid);
    }
    Ok(s.min(s0))
}

/// Largest `θ ∈ [0, 1)` (within `tol`) with `S((1-θ)Ū + θŬ) ≥ floor`, by bisection.
pub fn entropy_segment_root<const N: usize>(
    avg: &ConservedState<N>,
    point: &ConservedState<N>,
    floor: f64,
    eos: &Eos,
    tol: f64,
    max_iter: usize,
) -> Result<f64> {
    let delta = *point - *avg;
    let feasible = |t: f64| {
        primitive(&avg.axpy(t, &delta), eos)
            .map(|v| entropy_of(&v, eos) >= floor)
            .unwrap_or(false)
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut it = 0;
    while hi - lo > tol {
        if it == max_iter {
            return Err(Error::NonConvergence(max_iter));
        }
        it += 1;
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

fn point_entropy<const N: usize>(u: &ConservedState<N>, eos: &Eos) -> f64 {
    primitive(u, eos)
        .map(|v| entropy_of(&v, eos))
        .unwrap_or(f64::NEG_INFINITY)
}

/// Step (iii): scale all modes so `S ≥ s0` at every point.
pub fn entropy_limit<const N: usize>(
    modes: &mut [ConservedState<N>],
    points: &PointTable<N>,
    s0: f64,
    tol: f64,
    max_iter: usize,
    eos: &Eos,
    cell: usize,
) -> Result<f64> {
    let avg = modes[0];
    let floor = cell_floor(&avg, s0, eos, cell)?;
    let mut theta: f64 = 1.0;
    for p in 0..points.len() {
        let w = points.eval(modes, p);
        if point_entropy(&w, eos) < floor {
            let t = entropy_segment_root(&avg, &w, floor, eos, tol, max_iter).map_err(|e| e.at_cell(cell))?;
            theta = theta.min(t);
        }
    }
    scale_modes(modes, theta);
    Ok(theta)
}

/// Step (iii) through the concave surrogate `q̃(U) = D(S(U) - s0)`.
pub fn entropy_limit_qtilde<const N: usize>(
    modes: &mut [ConservedState<N>],
    points: &PointTable<N>,
    s0: f64,
    eos: &Eos,
    cell: usize,
) -> Result<f64> {
    let avg = modes[0];
    let floor = cell_floor(&avg, s0, eos, cell)?;
    let qt = |u: &ConservedState<N>| u.d * (point_entropy(u, eos) - floor);
    let qa = qt(&avg);
    let min = (0..points.len())
        .map(|p| qt(&points.eval(modes, p)))
        .fold(f64::INFINITY, f64::min);
    let theta = if min >= 0.0 {
        1.0
    } else if min == f64::NEG_INFINITY {
        0.0
    } else {
        math::abs(qa / (qa - min)).min(1.0)
    };
    scale_modes(modes, theta);
    Ok(theta)
}

/// Applies the configured steps to one cell.
pub fn limit_cell<const N: usize>(
    modes: &mut [ConservedState<N>],
    points: &PointTable<N>,
    config: &LimiterConfig,
    eos: &Eos,
    cell: usize,
) -> Result<Thetas> {
    let mut th = Thetas::default();
    if config.mode == LimiterMode::None || modes.len() == 1 {
        return Ok(th);
    }
    th.theta1 = bp_limit_density(modes, points, cell)?;
    th.theta2 = bp_limit_q(modes, points, cell)?;
    th.theta3 = match config.mode {
        LimiterMode::Irp => entropy_limit(modes, points, config.s0, config.bisection_tol, config.max_iter, eos, cell)?,
        LimiterMode::IrpQtilde => entropy_limit_qtilde(modes, points, config.s0, eos, cell)?,
        _ => 1.0,
    };
    Ok(th)
}

/// Limits every cell of `solution` at the limiter points of `op`.
pub fn irp_limit<const N: usize>(
    solution: &mut DgSolution<N>,
    op: &DgOperator<N>,
    config: &LimiterConfig,
) -> Result<()> {
    if config.mode == LimiterMode::None || solution.n_modes == 1 {
        return Ok(());
    }
    let nm = solution.n_modes;
    let points = &op.limiting;
    let eos = op.eos;
    let f = |c: usize, modes: &mut [ConservedState<N>]| limit_cell(modes, points, config, &eos, c).map(|_| ());
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        solution
            .coeffs
            .par_chunks_mut(nm)
            .enumerate()
            .try_for_each(|(c, m)| f(c, m))
    }
    #[cfg(not(feature = "parallel"))]
    {
        solution.coeffs.chunks_mut(nm).enumerate().try_for_each(|(c, m)| f(c, m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::DgOperator;
    use crate::mesh::{Boundary, Mesh};
    use crate::region::{in_admissible, specific_entropy};
    use crate::state::{prim_to_cons, PrimitiveState};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn eos() -> Eos {
        Eos::default()
    }

    fn op1(k: usize) -> DgOperator<1> {
        let mesh = Mesh::uniform_boundary([0.0], [1.0], [1], Boundary::Outflow).unwrap();
        DgOperator::new(mesh, k, eos(), 1.0).unwrap()
    }

    fn cons(rho: f64, v: f64, p: f64) -> ConservedState<1> {
        prim_to_cons(&PrimitiveState::new(rho, [v], p), &eos()).unwrap()
    }

    #[test]
    fn density_theta_example() {
        // linear density with average 1 and endpoint values -0.5, 2.5 at the Lobatto ends
        let op = op1(1);
        let slope = 1.5 / 3f64.sqrt();
        let mut modes = vec![ConservedState::new(1.0, [0.0], 10.0), ConservedState::new(slope, [0.0], 0.0)];
        let t = bp_limit_density(&mut modes, &op.decomposition, 0).unwrap();
        assert_relative_eq!(t, (1.0 - 1e-13) / 1.5, max_relative = 1e-12);
        assert!((t - 0.6666667).abs() < 1e-7);
        assert_eq!(modes[0].d, 1.0);
    }

    #[test]
    fn density_identity_cases() {
        let op = op1(2);
        let mut modes = vec![ConservedState::new(1.0, [0.0], 3.0), ConservedState::new(0.1, [0.0], 0.0), ConservedState::ZERO];
        let before = modes.clone();
        assert_eq!(bp_limit_density(&mut modes, &op.decomposition, 0).unwrap(), 1.0);
        assert_eq!(modes, before);
        let mut flat = vec![ConservedState::new(1.0, [0.0], 3.0), ConservedState::ZERO, ConservedState::ZERO];
        assert_eq!(bp_limit_density(&mut flat, &op.decomposition, 0).unwrap(), 1.0);
        let mut bad = vec![ConservedState::new(-1.0, [0.0], 3.0), ConservedState::ZERO, ConservedState::ZERO];
        assert!(matches!(
            bp_limit_density(&mut bad, &op.decomposition, 7),
            Err(Error::InvalidAverage { cell: 7, quantity: Quantity::Density })
        ));
    }

    #[test]
    fn q_theta_example() {
        // average (1, 0, 2) has q = 1; endpoint energy slope gives q = -1 at one end
        let op = op1(1);
        let s = 2.0 / 3f64.sqrt();
        let mut modes = vec![ConservedState::new(1.0, [0.0], 2.0), ConservedState::new(0.0, [0.0], s)];
        let t = bp_limit_q(&mut modes, &op.decomposition, 0).unwrap();
        assert_relative_eq!(t, (1.0 - 1e-13) / 2.0, max_relative = 1e-12);
        for p in 0..op.decomposition.len() {
            assert!(q_fn(&op.decomposition.eval(&modes, p)) >= 1e-13 - 1e-15);
        }
        let mut bad = vec![ConservedState::new(1.0, [0.0], 1.0), ConservedState::ZERO];
        assert!(bp_limit_q(&mut bad, &op.decomposition, 0).is_err());
    }

    #[test]
    fn entropy_segment_example() {
        let e = eos();
        let avg = cons(1.0, 0.0, 1.0);
        let pt = cons(1.0, 0.0, 0.5);
        let tol = 1e-12;
        // S(avg) = 0 = s0, so the admissible part of the segment is the average alone
        let t = entropy_segment_root(&avg, &pt, 0.0, &e, tol, 200).unwrap();
        let s = specific_entropy(&avg.axpy(t, &(pt - avg)), &e).unwrap();
        assert!(t <= tol && s.abs() <= tol, "{t} {s}");
        // independent oracle: at rest S = ln p with p = (Γ-1)(E - D) linear in θ
        let p = |u: ConservedState<1>| (e.gamma() - 1.0) * (u.e - u.d);
        let s0 = 0.75f64.ln();
        let t = entropy_segment_root(&avg, &pt, s0, &e, tol, 200).unwrap();
        let exact = (0.75 - p(avg)) / (p(pt) - p(avg));
        assert!(t > 0.0 && t < 1.0);
        assert!((t - exact).abs() < 1e-10);
        let s = specific_entropy(&avg.axpy(t, &(pt - avg)), &e).unwrap();
        assert!(s >= s0 - tol && s <= s0 + tol * 10.0, "{s}");
    }

    #[test]
    fn entropy_limit_identity_and_qtilde_ordering() {
        let e = eos();
        let op = op1(2);
        let pts = &op.decomposition;
        // quadratic perturbation of pressure through the energy
        let base = cons(1.0, 0.2, 1.0);
        let mut modes = vec![base, ConservedState::new(0.0, [0.0], 0.3), ConservedState::new(0.0, [0.0], 0.2)];
        let mut exact = modes.clone();
        let mut surrogate = modes.clone();
        let s0 = specific_entropy(&base, &e).unwrap() - 0.01;
        let t = entropy_limit(&mut exact, pts, s0, 1e-12, 200, &e, 0).unwrap();
        let tq = entropy_limit_qtilde(&mut surrogate, pts, s0, &e, 0).unwrap();
        assert!(t < 1.0);
        assert!(tq <= t + 1e-12, "{tq} > {t}");
        for m in [&exact, &surrogate] {
            for p in 0..pts.len() {
                assert!(specific_entropy(&pts.eval(m, p), &e).unwrap() >= s0 - 1e-10);
            }
        }
        let lenient = specific_entropy(&base, &e).unwrap() - 10.0;
        let before = modes.clone();
        assert_eq!(entropy_limit(&mut modes, pts, lenient, 1e-12, 200, &e, 0).unwrap(), 1.0);
        assert_eq!(modes, before);
    }

    #[test]
    fn entropy_limit_rejects_low_average() {
        let e = eos();
        let op = op1(1);
        let mut modes = vec![cons(1.0, 0.0, 1.0), ConservedState::ZERO];
        assert!(matches!(
            entropy_limit(&mut modes, &op.decomposition, 1.0, 1e-12, 200, &e, 3),
            Err(Error::InvalidAverage { cell: 3, quantity: Quantity::Entropy })
        ));
    }

    #[test]
    fn bp_mode_skips_entropy() {
        let e = eos();
        let op = op1(1);
        let base = cons(1.0, 0.0, 1.0);
        let mut modes = vec![base, ConservedState::new(0.0, [0.0], 0.5)];
        let s0 = 0.0;
        let th = limit_cell(&mut modes, &op.decomposition, &LimiterConfig::new(LimiterMode::Bp, s0), &e, 0).unwrap();
        assert_eq!(th.theta3, 1.0);
        let low = (0..2)
            .map(|p| specific_entropy(&op.decomposition.eval(&modes, p), &e).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!(low < s0);
        let th = limit_cell(&mut modes, &op.decomposition, &LimiterConfig::new(LimiterMode::Irp, s0), &e, 0).unwrap();
        assert!(th.theta3 < 1.0);
        for p in 0..2 {
            let w = op.decomposition.eval(&modes, p);
            assert!(in_admissible(&w));
            assert!(specific_entropy(&w, &e).unwrap() >= s0 - 1e-12);
        }
    }

    fn check_contracts<const N: usize>(op: &DgOperator<N>, modes: Vec<ConservedState<N>>, mode: LimiterMode, s0: f64) {
        let e = op.eos;
        let mut u = crate::dg::DgSolution::zeros(&op.mesh, op.degree);
        u.cell_mut(0).copy_from_slice(&modes);
        let cfg = LimiterConfig::new(mode, s0);
        irp_limit(&mut u, op, &cfg).unwrap();
        assert_eq!(u.average(0), modes[0]);
        let once = u.clone();
        irp_limit(&mut u, op, &cfg).unwrap();
        let scale = modes.iter().map(|m| m.max_abs()).fold(0.0, f64::max);
        for (a, b) in once.cell(0).iter().zip(u.cell(0)) {
            assert!((*a - *b).max_abs() <= 1e-14 * scale);
        }
        for p in 0..op.limiting.len() {
            let w = op.limiting.eval(once.cell(0), p);
            assert!(in_admissible(&w));
            if mode.enforces_entropy() {
                assert!(specific_entropy(&w, &e).unwrap() >= s0 - 1e-9);
            }
        }
    }

    fn arb_mode() -> impl Strategy<Value = LimiterMode> {
        prop_oneof![Just(LimiterMode::Bp), Just(LimiterMode::Irp), Just(LimiterMode::IrpQtilde)]
    }

    proptest! {
        #[test]
        fn contracts_1d(
            k in 1usize..=3,
            rho in 0.05f64..20.0, v in -0.99f64..0.99, p in 0.05f64..20.0,
            pert in proptest::collection::vec(-1.0f64..1.0, 9),
            amp in 0.0f64..3.0, drop in 0.0f64..1.0, mode in arb_mode(),
        ) {
            let op = op1(k);
            let avg = cons(rho, v, p);
            let s = specific_entropy(&avg, &eos()).unwrap();
            let modes: Vec<_> = (0..=k)
                .map(|m| if m == 0 { avg } else {
                    let c = |i: usize| avg.get(i) * amp * pert[3 * (m - 1) + i];
                    ConservedState::new(c(0), [c(1)], c(2))
                })
                .collect();
            check_contracts(&op, modes, mode, s - drop);
        }

        #[test]
        fn contracts_2d(
            k in 1usize..=3,
            rho in 0.05f64..20.0, vx in -0.7f64..0.7, vy in -0.7f64..0.7, p in 0.05f64..20.0,
            pert in proptest::collection::vec(-1.0f64..1.0, 36),
            amp in 0.0f64..3.0, drop in 0.0f64..1.0, mode in arb_mode(),
        ) {
            let mesh = Mesh::uniform_boundary([0.0, 0.0], [1.0, 2.0], [1, 1], Boundary::Outflow).unwrap();
            let op = DgOperator::new(mesh, k, eos(), 1.0).unwrap();
            let avg = prim_to_cons(&PrimitiveState::new(rho, [vx, vy], p), &eos()).unwrap();
            let s = specific_entropy(&avg, &eos()).unwrap();
            let modes: Vec<_> = (0..op.n_modes())
                .map(|m| if m == 0 { avg } else {
                    let c = |i: usize| avg.get(i) * amp * pert[4 * (m - 1) + i];
                    ConservedState::new(c(0), [c(1), c(2)], c(3))
                })
                .collect();
            check_contracts(&op, modes, mode, s - drop);
        }
    }
}
