//! Forward Euler, SSP-RK3 and SSP-MS3 time integration with the limiter
//! applied to every stage.

use alloc::collections::VecDeque;

use crate::dg::{DgOperator, DgSolution};
use crate::error::{Error, Quantity, Result};
use crate::limiter::{irp_limit, LimiterConfig, LimiterMode};
use crate::region::{entropy_of, entropy_round_off, q_fn};
use crate::state::primitive;

/// Slack on `S(Ū) ≥ S₀` in the post-step check, unless the round-off of `S`
/// at `Ū` is larger.
pub const IRP_SLACK: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    ForwardEuler,
    SspRk3,
    SspMs3,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::ForwardEuler => "fe",
            Scheme::SspRk3 => "ssprk3",
            Scheme::SspMs3 => "sspms3",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "fe" => Scheme::ForwardEuler,
            "ssprk3" => Scheme::SspRk3,
            "sspms3" => Scheme::SspMs3,
            _ => return None,
        })
    }

    /// Factor by which the largest inner forward-Euler step exceeds `Δt`.
    pub fn fe_multiplier(&self) -> f64 {
        match self {
            Scheme::SspMs3 => 3.0,
            _ => 1.0,
        }
    }

    /// Fraction of the SSP-RK practical CFL number used by this scheme.
    pub fn cfl_fraction(&self) -> f64 {
        1.0 / self.fe_multiplier()
    }
}

/// A semi-discrete system `dU/dt = L(U)` with a limiter and a post-step check.
pub trait SemiDiscrete {
    type State: Clone;

    fn residual(&self, u: &Self::State) -> Result<Self::State>;
    fn limit(&self, u: &mut Self::State) -> Result<()>;
    fn check(&self, u: &Self::State) -> Result<()>;
    /// `y = a y + b x`.
    fn combine(y: &mut Self::State, a: f64, b: f64, x: &Self::State);
    fn set_time(u: &mut Self::State, t: f64);
    fn time(u: &Self::State) -> f64;
}

/// Time-stepper state: scheme, stored levels `(U, L(U))` for SSP-MS3, step count.
#[derive(Clone, Debug)]
pub struct StepperState<S> {
    pub scheme: Scheme,
    pub history: VecDeque<(S, S)>,
    pub history_dt: Option<f64>,
    pub steps: usize,
}

impl<S: Clone> StepperState<S> {
    pub fn new(scheme: Scheme) -> Self {
        Self {
            scheme,
            history: VecDeque::new(),
            history_dt: None,
            steps: 0,
        }
    }
}

fn euler<P: SemiDiscrete>(u: &P::State, dt_l: &P::State, dt: f64) -> P::State {
    let mut y = u.clone();
    P::combine(&mut y, 1.0, dt, dt_l);
    y
}

fn rk3<P: SemiDiscrete>(op: &P, u: &P::State, l0: &P::State, dt: f64) -> Result<P::State> {
    let t = P::time(u);
    let mut u1 = euler::<P>(u, l0, dt);
    op.limit(&mut u1)?;
    P::set_time(&mut u1, t + dt);
    let l1 = op.residual(&u1)?;
    let mut u2 = euler::<P>(&u1, &l1, dt);
    P::combine(&mut u2, 0.25, 0.75, u);
    op.limit(&mut u2)?;
    P::set_time(&mut u2, t + 0.5 * dt);
    let l2 = op.residual(&u2)?;
    let mut u3 = euler::<P>(&u2, &l2, dt);
    P::combine(&mut u3, 2.0 / 3.0, 1.0 / 3.0, u);
    op.limit(&mut u3)?;
    Ok(u3)
}

/// Advances `u` (already limited) by `dt`.
pub fn advance<P: SemiDiscrete>(
    op: &P,
    st: &mut StepperState<P::State>,
    u: &P::State,
    dt: f64,
) -> Result<P::State> {
    let t = P::time(u);
    let l0 = op.residual(u).map_err(|e| e.at_time(t))?;
    let next = match st.scheme {
        Scheme::ForwardEuler => {
            let mut y = euler::<P>(u, &l0, dt);
            op.limit(&mut y).map_err(|e| e.at_time(t))?;
            y
        }
        Scheme::SspRk3 => rk3(op, u, &l0, dt).map_err(|e| e.at_time(t))?,
        Scheme::SspMs3 => {
            if st.history_dt != Some(dt) {
                st.history.clear();
                st.history_dt = Some(dt);
            }
            let y = if st.history.len() == 3 {
                let (u3, l3) = &st.history[0];
                let mut a = euler::<P>(u, &l0, 3.0 * dt);
                let b = euler::<P>(u3, l3, 12.0 / 11.0 * dt);
                P::combine(&mut a, 16.0 / 27.0, 11.0 / 27.0, &b);
                op.limit(&mut a).map_err(|e| e.at_time(t))?;
                a
            } else {
                rk3(op, u, &l0, dt).map_err(|e| e.at_time(t))?
            };
            st.history.push_back((u.clone(), l0));
            if st.history.len() > 3 {
                st.history.pop_front();
            }
            y
        }
    };
    let mut next = next;
    P::set_time(&mut next, t + dt);
    op.check(&next).map_err(|e| e.at_time(t + dt))?;
    st.steps += 1;
    Ok(next)
}

/// Steps of size `dt` until `t_final`, shortening the last one; with
/// SSP-MS3 the shortened step falls back to SSP-RK3. `monitor` sees every
/// accepted solution.
pub fn integrate<P, F>(op: &P, scheme: Scheme, u0: P::State, t_final: f64, dt: f64, mut monitor: F) -> Result<P::State>
where
    P: SemiDiscrete,
    F: FnMut(&P::State) -> Result<()>,
{
    if !(dt > 0.0) {
        return Err(Error::Config("time step must be positive".into()));
    }
    let mut st = StepperState::new(scheme);
    let mut u = u0;
    let span = t_final - P::time(&u);
    let n_full = {
        let r = span / dt;
        let n = crate::math::ceil(r - 1e-9);
        if n < 1.0 {
            1
        } else {
            n as usize
        }
    };
    for n in 0..n_full {
        let t = P::time(&u);
        let remaining = t_final - t;
        if remaining <= 0.0 {
            break;
        }
        let last = n + 1 == n_full;
        let h = if last { remaining } else { dt.min(remaining) };
        if last && h != dt && st.scheme == Scheme::SspMs3 {
            st.scheme = Scheme::SspRk3;
        }
        u = advance(op, &mut st, &u, h)?;
        if last {
            P::set_time(&mut u, t_final);
        }
        monitor(&u)?;
    }
    Ok(u)
}

/// DG operator paired with a limiter configuration.
#[derive(Clone, Debug)]
pub struct DgScheme<const N: usize> {
    pub op: DgOperator<N>,
    pub limiter: LimiterConfig,
}

/// Checks every cell average against the configured invariant region.
pub fn check_averages<const N: usize>(u: &DgSolution<N>, op: &DgOperator<N>, limiter: &LimiterConfig) -> Result<()> {
    if limiter.mode == LimiterMode::None {
        return Ok(());
    }
    for (c, a) in u.averages().enumerate() {
        if !(a.d > 0.0) {
            return Err(Error::IrpViolation {
                cell: c,
                quantity: Quantity::Density,
                value: a.d,
            });
        }
        let q = q_fn(&a);
        if !(q > 0.0) {
            return Err(Error::IrpViolation {
                cell: c,
                quantity: Quantity::Q,
                value: q,
            });
        }
        if limiter.mode.enforces_entropy() {
            let v = primitive(&a, &op.eos).map_err(|e| e.at_cell(c))?;
            let s = entropy_of(&v, &op.eos);
            if s < limiter.s0 - IRP_SLACK.max(entropy_round_off(&a, &v, &op.eos)) {
                return Err(Error::IrpViolation {
                    cell: c,
                    quantity: Quantity::Entropy,
                    value: s - limiter.s0,
                });
            }
        }
    }
    Ok(())
}

impl<const N: usize> SemiDiscrete for DgScheme<N> {
    type State = DgSolution<N>;

    fn residual(&self, u: &DgSolution<N>) -> Result<DgSolution<N>> {
        self.op.residual(u)
    }

    fn limit(&self, u: &mut DgSolution<N>) -> Result<()> {
        irp_limit(u, &self.op, &self.limiter)
    }

    fn check(&self, u: &DgSolution<N>) -> Result<()> {
        check_averages(u, &self.op, &self.limiter)
    }

    fn combine(y: &mut DgSolution<N>, a: f64, b: f64, x: &DgSolution<N>) {
        y.scale_add(a, b, x);
    }

    fn set_time(u: &mut DgSolution<N>, t: f64) {
        u.time = t;
    }

    fn time(u: &DgSolution<N>) -> f64 {
        u.time
    }
}
