//! Conserved and primitive states, the ideal equation of state and the
//! conservative-to-primitive recovery.

use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, RecoveryFailure, Result};
use crate::math;

/// Default relative tolerance of the pressure solve.
pub const RECOVERY_TOL: f64 = 1e-14;
/// Default iteration cap of the pressure solve.
pub const RECOVERY_MAX_ITER: usize = 200;
/// Floor applied to `1 - |v|^2` when round-off makes it marginally non-positive.
pub const VELOCITY_CLAMP: f64 = 1e-15;

/// Ideal gas law `p = (Γ - 1) ρ e`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eos {
    gamma: f64,
}

impl Eos {
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma > 1.0 && gamma <= 2.0 {
            Ok(Self { gamma })
        } else {
            Err(Error::InvalidGamma(gamma))
        }
    }

    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Specific enthalpy `h = 1 + Γ p / ((Γ - 1) ρ)`.
    #[inline]
    pub fn enthalpy(&self, rho: f64, p: f64) -> f64 {
        1.0 + self.gamma * p / ((self.gamma - 1.0) * rho)
    }
}

impl Default for Eos {
    fn default() -> Self {
        Self { gamma: 5.0 / 3.0 }
    }
}

/// `U = (D, m, E)` in `N` space dimensions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConservedState<const N: usize> {
    pub d: f64,
    pub m: [f64; N],
    pub e: f64,
}

/// `V = (ρ, v, p)` in `N` space dimensions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrimitiveState<const N: usize> {
    pub rho: f64,
    pub v: [f64; N],
    pub p: f64,
}

#[inline]
pub(crate) fn norm_sq<const N: usize>(a: &[f64; N]) -> f64 {
    a.iter().map(|x| x * x).sum()
}

#[inline]
pub(crate) fn dot<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl<const N: usize> ConservedState<N> {
    /// Number of scalar components.
    pub const NCOMP: usize = N + 2;

    pub const ZERO: Self = Self {
        d: 0.0,
        m: [0.0; N],
        e: 0.0,
    };

    pub const fn new(d: f64, m: [f64; N], e: f64) -> Self {
        Self { d, m, e }
    }

    /// Component `i` in the order `D, m_1, .., m_N, E`.
    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        match i {
            0 => self.d,
            i if i <= N => self.m[i - 1],
            _ => self.e,
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: f64) {
        match i {
            0 => self.d = value,
            i if i <= N => self.m[i - 1] = value,
            _ => self.e = value,
        }
    }

    #[inline]
    pub fn momentum_sq(&self) -> f64 {
        norm_sq(&self.m)
    }

    pub fn is_finite(&self) -> bool {
        self.d.is_finite() && self.e.is_finite() && self.m.iter().all(|x| x.is_finite())
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        let mut r = math::abs(self.d).max(math::abs(self.e));
        for x in &self.m {
            r = r.max(math::abs(*x));
        }
        r
    }

    /// `self + a * other`.
    #[inline]
    pub fn axpy(&self, a: f64, other: &Self) -> Self {
        let mut m = self.m;
        for (mi, oi) in m.iter_mut().zip(&other.m) {
            *mi += a * oi;
        }
        Self {
            d: self.d + a * other.d,
            m,
            e: self.e + a * other.e,
        }
    }
}

impl<const N: usize> Default for ConservedState<N> {
    fn default() -> Self {
        Self::ZERO
    }
}

impl<const N: usize> Add for ConservedState<N> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        self.axpy(1.0, &rhs)
    }
}

impl<const N: usize> Sub for ConservedState<N> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        self.axpy(-1.0, &rhs)
    }
}

impl<const N: usize> Neg for ConservedState<N> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        self * -1.0
    }
}

impl<const N: usize> Mul<f64> for ConservedState<N> {
    type Output = Self;
    #[inline]
    fn mul(self, a: f64) -> Self {
        let mut m = self.m;
        for mi in &mut m {
            *mi *= a;
        }
        Self {
            d: self.d * a,
            m,
            e: self.e * a,
        }
    }
}

impl<const N: usize> Mul<ConservedState<N>> for f64 {
    type Output = ConservedState<N>;
    #[inline]
    fn mul(self, u: ConservedState<N>) -> ConservedState<N> {
        u * self
    }
}

impl<const N: usize> AddAssign for ConservedState<N> {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const N: usize> SubAssign for ConservedState<N> {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<const N: usize> MulAssign<f64> for ConservedState<N> {
    #[inline]
    fn mul_assign(&mut self, a: f64) {
        *self = *self * a;
    }
}

impl<const N: usize> PrimitiveState<N> {
    pub const fn new(rho: f64, v: [f64; N], p: f64) -> Self {
        Self { rho, v, p }
    }

    #[inline]
    pub fn speed_sq(&self) -> f64 {
        norm_sq(&self.v)
    }

    /// Lorentz factor `W = 1 / sqrt(1 - |v|^2)`.
    #[inline]
    pub fn lorentz(&self) -> f64 {
        1.0 / math::sqrt(1.0 - self.speed_sq())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return Err(Error::Domain("rest-mass density must be positive"));
        }
        if !(self.p > 0.0) || !self.p.is_finite() {
            return Err(Error::Domain("pressure must be positive"));
        }
        if !(self.speed_sq() < 1.0) {
            return Err(Error::Domain("speed must be below the speed of light"));
        }
        Ok(())
    }
}

/// Forward map `V -> (ρW, ρhW²v, ρhW² - p)`.
pub fn prim_to_cons<const N: usize>(v: &PrimitiveState<N>, eos: &Eos) -> Result<ConservedState<N>> {
    v.validate()?;
    let w2 = 1.0 / (1.0 - v.speed_sq());
    let w = math::sqrt(w2);
    let rhw2 = v.rho * eos.enthalpy(v.rho, v.p) * w2;
    let mut m = v.v;
    for mi in &mut m {
        *mi *= rhw2;
    }
    Ok(ConservedState {
        d: v.rho * w,
        m,
        e: rhw2 - v.p,
    })
}

/// Residual of the pressure equation and its derivative.
#[inline]
fn residual_with_derivative(p: f64, d: f64, m2: f64, e: f64, gm1: f64) -> (f64, f64) {
    let s = e + p;
    let u2 = m2 / (s * s);
    let r = math::sqrt(1.0 - u2);
    let f = m2 / s + d * r + p / gm1 - e;
    let df = -u2 + d * u2 / (s * r) + 1.0 / gm1;
    (f, df)
}

/// `f(p) = |m|²/(E+p) + D sqrt(1 - |m|²/(E+p)²) + p/(Γ-1) - E`.
pub fn pressure_residual<const N: usize>(p: f64, u: &ConservedState<N>, eos: &Eos) -> Result<f64> {
    let s = u.e + p;
    let m2 = u.momentum_sq();
    if !(s > 0.0) || !(1.0 - m2 / (s * s) > 0.0) {
        return Err(Error::Domain("E + p must exceed |m|"));
    }
    Ok(residual_with_derivative(p, u.d, m2, u.e, eos.gamma() - 1.0).0)
}

/// Controls for [`recover`].
#[derive(Clone, Copy, Debug)]
pub struct RecoveryOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Starting pressure; defaults to `(Γ - 1) q(U)`.
    pub initial_guess: Option<f64>,
}

impl Default for RecoveryOptions {
    fn default() -> Self {
        Self {
            tol: RECOVERY_TOL,
            max_iter: RECOVERY_MAX_ITER,
            initial_guess: None,
        }
    }
}

/// Output of [`recover`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Recovery<const N: usize> {
    pub prim: PrimitiveState<N>,
    pub iterations: usize,
    /// Set when `1 - |v|^2` was clamped to [`VELOCITY_CLAMP`].
    pub velocity_clamped: bool,
}

/// Solves the pressure equation by Newton's method safeguarded by bisection
/// on the bracket `[0, (Γ - 1) E]`.
pub fn recover<const N: usize>(
    u: &ConservedState<N>,
    eos: &Eos,
    opts: &RecoveryOptions,
) -> Result<Recovery<N>> {
    if !u.is_finite() {
        return Err(Error::Recovery(RecoveryFailure::NonFinite));
    }
    let gm1 = eos.gamma() - 1.0;
    let (d, e) = (u.d, u.e);
    let m2 = u.momentum_sq();
    if !(d > 0.0) || !(e * e > m2) || !(e > 0.0) {
        return Err(Error::Recovery(RecoveryFailure::Bracket));
    }
    let (f0, _) = residual_with_derivative(0.0, d, m2, e, gm1);
    if !(f0 < 0.0) {
        return Err(Error::Recovery(RecoveryFailure::Bracket));
    }
    let mut lo = 0.0;
    let mut hi = gm1 * e;
    let mut p = match opts.initial_guess {
        Some(g) if g > lo && g < hi => g,
        _ => {
            let g = gm1 * (e - math::sqrt(d * d + m2));
            if g > lo && g < hi {
                g
            } else {
                0.5 * hi
            }
        }
    };
    let noise = 8.0 * f64::EPSILON * e;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        iterations += 1;
        let (f, df) = residual_with_derivative(p, d, m2, e, gm1);
        if f == 0.0 || math::abs(f) <= noise {
            converged = true;
            break;
        }
        if f < 0.0 {
            lo = p;
        } else {
            hi = p;
        }
        let mut next = p - f / df;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let step = math::abs(next - p);
        p = next;
        if step <= opts.tol * p || hi - lo <= opts.tol * hi {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence(opts.max_iter));
    }
    if !(p > 0.0) {
        return Err(Error::Recovery(RecoveryFailure::Bracket));
    }
    let s = e + p;
    let mut vel = u.m;
    for vi in &mut vel {
        *vi /= s;
    }
    let mut lor = 1.0 - norm_sq(&vel);
    let mut velocity_clamped = false;
    if lor <= 0.0 {
        if lor > -VELOCITY_CLAMP {
            lor = VELOCITY_CLAMP;
            velocity_clamped = true;
        } else {
            return Err(Error::Recovery(RecoveryFailure::Superluminal));
        }
    }
    Ok(Recovery {
        prim: PrimitiveState {
            rho: d * math::sqrt(lor),
            v: vel,
            p,
        },
        iterations,
        velocity_clamped,
    })
}

/// Primitive variables of `u` with the given relative tolerance.
pub fn cons_to_prim<const N: usize>(u: &ConservedState<N>, eos: &Eos, tol: f64) -> Result<PrimitiveState<N>> {
    let opts = RecoveryOptions {
        tol,
        ..RecoveryOptions::default()
    };
    recover(u, eos, &opts).map(|r| r.prim)
}

/// Primitive variables with the default tolerance.
#[inline]
pub fn primitive<const N: usize>(u: &ConservedState<N>, eos: &Eos) -> Result<PrimitiveState<N>> {
    recover(u, eos, &RecoveryOptions::default()).map(|r| r.prim)
}

/// `c_s = sqrt(Γ p / (ρ h))`.
pub fn sound_speed<const N: usize>(v: &PrimitiveState<N>, eos: &Eos) -> Result<f64> {
    v.validate()?;
    Ok(math::sqrt(eos.gamma() * v.p / (v.rho * eos.enthalpy(v.rho, v.p))))
}
