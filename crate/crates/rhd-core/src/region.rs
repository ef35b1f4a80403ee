//! Specific entropy, the concave functional `q`, the admissible set and the
//! invariant region `Ω_σ` with its auxiliary-variable characterisation.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::state::{dot, norm_sq, primitive, ConservedState, Eos, PrimitiveState};

/// `S = ln p - Γ ln ρ` of a primitive state.
#[inline]
pub fn entropy_of<const N: usize>(v: &PrimitiveState<N>, eos: &Eos) -> f64 {
    math::ln(v.p) - eos.gamma() * math::ln(v.rho)
}

/// Specific entropy of a conserved state.
pub fn specific_entropy<const N: usize>(u: &ConservedState<N>, eos: &Eos) -> Result<f64> {
    primitive(u, eos).map(|v| entropy_of(&v, eos))
}


/// Multiple of the unit round-off in [`entropy_round_off`].
pub const ENTROPY_ROUND_OFF_ULPS: f64 = 16.0;

/// Size of the rounding error in `S(U)` carried by representing `U` in
/// floating point: `|∇S|·|U|·ε`, scaled by [`ENTROPY_ROUND_OFF_ULPS`]. It
/// grows like `E/p` in cold states.
pub fn entropy_round_off<const N: usize>(u: &ConservedState<N>, v: &PrimitiveState<N>, eos: &Eos) -> f64 {
    let h = eos.enthalpy(v.rho, v.p);
    let grad = (eos.gamma() - 1.0) / v.p * (math::abs(u.e) + math::sqrt(u.momentum_sq()) + u.d * h / v.lorentz());
    ENTROPY_ROUND_OFF_ULPS * f64::EPSILON * grad
}

/// `q(U) = E - sqrt(D² + |m|²)`.
#[inline]
pub fn q_fn<const N: usize>(u: &ConservedState<N>) -> f64 {
    u.e - math::sqrt(u.d * u.d + u.momentum_sq())
}

/// `D > 0` and `E > sqrt(D² + |m|²)`.
#[inline]
pub fn in_admissible<const N: usize>(u: &ConservedState<N>) -> bool {
    u.d > 0.0 && q_fn(u) > 0.0
}

/// `Ω_σ = { U ∈ G : S(U) ≥ σ }`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InvariantRegion {
    pub sigma: f64,
    pub eos: Eos,
}

impl InvariantRegion {
    pub fn new(sigma: f64, eos: Eos) -> Result<Self> {
        if sigma.is_finite() {
            Ok(Self { sigma, eos })
        } else {
            Err(Error::Domain("entropy floor must be finite"))
        }
    }

    pub fn contains<const N: usize>(&self, u: &ConservedState<N>) -> bool {
        in_invariant_region(u, self)
    }
}

pub fn in_invariant_region<const N: usize>(u: &ConservedState<N>, region: &InvariantRegion) -> bool {
    in_admissible(u)
        && specific_entropy(u, &region.eos)
            .map(|s| s >= region.sigma)
            .unwrap_or(false)
}

/// A point `(v_*, ρ_*)` with `|v_*| < 1` and `ρ_* > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AuxiliaryPoint<const N: usize> {
    pub v_star: [f64; N],
    pub rho_star: f64,
}

impl<const N: usize> AuxiliaryPoint<N> {
    pub fn new(v_star: [f64; N], rho_star: f64) -> Result<Self> {
        if !(norm_sq(&v_star) < 1.0) {
            return Err(Error::Domain("auxiliary velocity outside the unit ball"));
        }
        if !(rho_star > 0.0) {
            return Err(Error::Domain("auxiliary density must be positive"));
        }
        Ok(Self { v_star, rho_star })
    }

    /// The point `(v(U), ρ(U))` of an admissible state.
    pub fn witness(v: &PrimitiveState<N>) -> Self {
        Self {
            v_star: v.v,
            rho_star: v.rho,
        }
    }
}

/// `φ_σ(U; v_*, ρ_*)`, linear in `U`.
pub fn phi_sigma<const N: usize>(u: &ConservedState<N>, aux: &AuxiliaryPoint<N>, sigma: f64, eos: &Eos) -> f64 {
    let g = eos.gamma();
    let lor = math::sqrt(1.0 - norm_sq(&aux.v_star));
    let es = math::exp(sigma);
    let rg1 = math::powf(aux.rho_star, g - 1.0);
    u.e - dot(&u.m, &aux.v_star) - u.d * lor
        + es * (rg1 * aux.rho_star - g / (g - 1.0) * u.d * rg1 * lor)
}

/// Magnitude of the terms entering `φ_σ`, for relative tolerances.
pub fn phi_scale<const N: usize>(u: &ConservedState<N>, aux: &AuxiliaryPoint<N>, sigma: f64, eos: &Eos) -> f64 {
    let g = eos.gamma();
    let es = math::exp(sigma);
    let rg1 = math::powf(aux.rho_star, g - 1.0);
    math::abs(u.e)
        + math::sqrt(u.momentum_sq())
        + math::abs(u.d)
        + es * (rg1 * aux.rho_star + g / (g - 1.0) * math::abs(u.d) * rg1)
}

/// A scalar generator `H(S)` of the entropy `-D H(S)` with two derivatives.
pub trait EntropyGenerator {
    fn value(&self, s: f64) -> f64;
    fn first(&self, s: f64) -> f64;
    fn second(&self, s: f64) -> f64;

    /// `H' > 0` and `H' - Γ H'' > 0`, the strict convexity condition.
    fn convexity_condition(&self, s: f64, gamma: f64) -> bool {
        self.first(s) > 0.0 && self.first(s) - gamma * self.second(s) > 0.0
    }
}

/// `H(S) = S`.
#[derive(Clone, Copy, Debug)]
pub struct Linear;

impl EntropyGenerator for Linear {
    fn value(&self, s: f64) -> f64 {
        s
    }
    fn first(&self, _: f64) -> f64 {
        1.0
    }
    fn second(&self, _: f64) -> f64 {
        0.0
    }
}

/// `H(S) = -S`.
#[derive(Clone, Copy, Debug)]
pub struct Negated;

impl EntropyGenerator for Negated {
    fn value(&self, s: f64) -> f64 {
        -s
    }
    fn first(&self, _: f64) -> f64 {
        -1.0
    }
    fn second(&self, _: f64) -> f64 {
        0.0
    }
}

/// `H(S) = Γ e^{S/Γ}`, for which `H' - Γ H'' = 0`.
#[derive(Clone, Copy, Debug)]
pub struct Marginal {
    pub gamma: f64,
}

impl EntropyGenerator for Marginal {
    fn value(&self, s: f64) -> f64 {
        self.gamma * math::exp(s / self.gamma)
    }
    fn first(&self, s: f64) -> f64 {
        math::exp(s / self.gamma)
    }
    fn second(&self, s: f64) -> f64 {
        math::exp(s / self.gamma) / self.gamma
    }
}

/// Dense symmetric matrix in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    pub n: usize,
    pub data: Vec<f64>,
}

impl SymMatrix {
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }
}

/// `ℰ(U) = -D H(S(U))`.
pub fn entropy_function<const N: usize, H: EntropyGenerator + ?Sized>(
    h: &H,
    u: &ConservedState<N>,
    eos: &Eos,
) -> Result<f64> {
    Ok(-u.d * h.value(specific_entropy(u, eos)?))
}

/// `∂ℰ/∂U = -H(S) e_D - D H'(S) S_U` with `S_U = (Γ-1)/p (-h/W, -v, 1)`.
pub fn entropy_gradient<const N: usize, H: EntropyGenerator + ?Sized>(
    h: &H,
    u: &ConservedState<N>,
    eos: &Eos,
) -> Result<ConservedState<N>> {
    let v = primitive(u, eos)?;
    let s = entropy_of(&v, eos);
    let c = (eos.gamma() - 1.0) / v.p;
    let k = -u.d * h.first(s) * c;
    let mut m = v.v;
    for mi in &mut m {
        *mi *= -k;
    }
    let enth = eos.enthalpy(v.rho, v.p);
    Ok(ConservedState {
        d: -h.value(s) - k * enth / v.lorentz(),
        m,
        e: k,
    })
}

/// Hessian of `ℰ(U) = -D H(S(U))` by central differences of
/// [`entropy_gradient`], symmetrised.
///
/// `step` is the relative step, default `ε^{1/3}`. It is scaled per component
/// by `min(max(1, |u_i|), p ∂E/∂p)`, so that the pressure moves by a relative
/// amount of order `step` at every stencil point.
pub fn entropy_hessian<const N: usize, H: EntropyGenerator + ?Sized>(
    h: &H,
    u: &ConservedState<N>,
    eos: &Eos,
    step: Option<f64>,
) -> Result<SymMatrix> {
    let n = N + 2;
    let rel = step.unwrap_or_else(|| math::cbrt(f64::EPSILON));
    let v = primitive(u, eos)?;
    let g = eos.gamma();
    let pscale = v.p * (g / (g - 1.0) * v.lorentz() * v.lorentz() - 1.0);
    let mut cols = vec![0.0; n * n];
    for j in 0..n {
        let hj = rel * math::abs(u.get(j)).max(1.0).min(pscale);
        let (mut up, mut dn) = (*u, *u);
        up.set(j, u.get(j) + hj);
        dn.set(j, u.get(j) - hj);
        let d = entropy_gradient(h, &up, eos)? - entropy_gradient(h, &dn, eos)?;
        for i in 0..n {
            cols[i * n + j] = d.get(i) / (2.0 * hj);
        }
    }
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            data[i * n + j] = 0.5 * (cols[i * n + j] + cols[j * n + i]);
        }
    }
    Ok(SymMatrix { n, data })
}
