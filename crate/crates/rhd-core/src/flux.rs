//! Physical fluxes, the Lax–Friedrichs flux, rotations onto a normal and the
//! gLF splitting combinations.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::state::{dot, norm_sq, primitive, ConservedState, Eos, PrimitiveState};

/// Unit vector in `N` dimensions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitNormal<const N: usize> {
    xi: [f64; N],
}

impl<const N: usize> UnitNormal<N> {
    pub fn new(xi: [f64; N]) -> Result<Self> {
        if math::abs(math::sqrt(norm_sq(&xi)) - 1.0) <= 1e-14 {
            Ok(Self { xi })
        } else {
            Err(Error::Domain("normal must have unit length"))
        }
    }

    /// Normalises an arbitrary nonzero vector.
    pub fn normalize(v: [f64; N]) -> Result<Self> {
        let n = math::sqrt(norm_sq(&v));
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::Domain("cannot normalise a zero vector"));
        }
        let mut xi = v;
        for x in &mut xi {
            *x /= n;
        }
        Ok(Self { xi })
    }

    /// Coordinate direction `e_i`.
    pub fn axis(i: usize) -> Self {
        let mut xi = [0.0; N];
        xi[i] = 1.0;
        Self { xi }
    }

    #[inline]
    pub fn xi(&self) -> &[f64; N] {
        &self.xi
    }

    pub fn flipped(&self) -> Self {
        let mut xi = self.xi;
        for x in &mut xi {
            *x = -*x;
        }
        Self { xi }
    }
}

/// `F_i` evaluated from a state and its primitive variables.
#[inline]
pub fn flux_from_prim<const N: usize>(u: &ConservedState<N>, v: &PrimitiveState<N>, i: usize) -> ConservedState<N> {
    let vi = v.v[i];
    let mut m = u.m;
    for mk in &mut m {
        *mk *= vi;
    }
    m[i] += v.p;
    ConservedState {
        d: u.d * vi,
        m,
        e: u.m[i],
    }
}

/// `ξ·F` evaluated from a state and its primitive variables.
#[inline]
pub fn normal_flux_from_prim<const N: usize>(
    u: &ConservedState<N>,
    v: &PrimitiveState<N>,
    xi: &[f64; N],
) -> ConservedState<N> {
    let vn = dot(&v.v, xi);
    let mut m = u.m;
    for (mk, xk) in m.iter_mut().zip(xi) {
        *mk = *mk * vn + v.p * xk;
    }
    ConservedState {
        d: u.d * vn,
        m,
        e: dot(&u.m, xi),
    }
}

/// `F_i(U) = (D v_i, v_i m + p e_i, m_i)`.
pub fn physical_flux<const N: usize>(u: &ConservedState<N>, i: usize, eos: &Eos) -> Result<ConservedState<N>> {
    Ok(flux_from_prim(u, &primitive(u, eos)?, i))
}

/// `ξ·F(U)`.
pub fn normal_flux<const N: usize>(u: &ConservedState<N>, xi: &UnitNormal<N>, eos: &Eos) -> Result<ConservedState<N>> {
    Ok(normal_flux_from_prim(u, &primitive(u, eos)?, xi.xi()))
}

/// `½(ξ·F(U⁻) + ξ·F(U⁺) - α(U⁺ - U⁻))`.
pub fn lf_flux<const N: usize>(
    um: &ConservedState<N>,
    up: &ConservedState<N>,
    xi: &UnitNormal<N>,
    alpha: f64,
    eos: &Eos,
) -> Result<ConservedState<N>> {
    let fm = normal_flux(um, xi, eos)?;
    let fp = normal_flux(up, xi, eos)?;
    Ok(lf_combine(um, &fm, up, &fp, alpha))
}

/// LF flux from states and precomputed normal fluxes.
#[inline]
pub fn lf_combine<const N: usize>(
    um: &ConservedState<N>,
    fm: &ConservedState<N>,
    up: &ConservedState<N>,
    fp: &ConservedState<N>,
    alpha: f64,
) -> ConservedState<N> {
    (*fm + *fp - (*up - *um) * alpha) * 0.5
}

/// Orthogonal `Q_ξ` whose first row is `ξ`. In 2D the rows are `(ξ₁, ξ₂)` and `(-ξ₂, ξ₁)`.
pub fn rotation_matrix<const N: usize>(xi: &UnitNormal<N>) -> [[f64; N]; N] {
    let x = xi.xi();
    let mut q = [[0.0; N]; N];
    q[0] = *x;
    if N == 2 {
        q[1][0] = -x[1];
        q[1][1] = x[0];
        return q;
    }
    let mut row = 1;
    for k in 0..N {
        if row == N {
            break;
        }
        let mut w = [0.0; N];
        w[k] = 1.0;
        for r in q.iter().take(row) {
            let c = dot(&w, r);
            for (wi, ri) in w.iter_mut().zip(r) {
                *wi -= c * ri;
            }
        }
        let n = math::sqrt(norm_sq(&w));
        if n > 0.5 {
            for wi in &mut w {
                *wi /= n;
            }
            q[row] = w;
            row += 1;
        }
    }
    q
}

/// `Q U` with `Q = diag(1, Q_ξ, 1)`.
pub fn rotate_to_normal<const N: usize>(u: &ConservedState<N>, xi: &UnitNormal<N>) -> ConservedState<N> {
    let q = rotation_matrix(xi);
    let mut m = [0.0; N];
    for (mk, row) in m.iter_mut().zip(&q) {
        *mk = dot(row, &u.m);
    }
    ConservedState { d: u.d, m, e: u.e }
}

/// `Q⁻¹ U`, the inverse of [`rotate_to_normal`].
pub fn rotate_from_normal<const N: usize>(u: &ConservedState<N>, xi: &UnitNormal<N>) -> ConservedState<N> {
    let q = rotation_matrix(xi);
    let mut m = [0.0; N];
    for (k, mk) in m.iter_mut().enumerate() {
        *mk = (0..N).map(|r| q[r][k] * u.m[r]).sum();
    }
    ConservedState { d: u.d, m, e: u.e }
}

/// `G_{i,α}(Û, Ǔ) = ½(Û - F_i(Û)/α + Ǔ + F_i(Ǔ)/α)`.
pub fn glf_average<const N: usize>(
    u_hat: &ConservedState<N>,
    u_check: &ConservedState<N>,
    i: usize,
    alpha: f64,
    eos: &Eos,
) -> Result<ConservedState<N>> {
    let fh = physical_flux(u_hat, i, eos)?;
    let fc = physical_flux(u_check, i, eos)?;
    Ok((u_hat.axpy(-1.0 / alpha, &fh) + u_check.axpy(1.0 / alpha, &fc)) * 0.5)
}

/// One edge of a closed normal fan: length `s_j`, outward normal `ξ^{(j)}`,
/// quadrature weights `ω_i` and the states `U^{(ij)}`.
#[derive(Clone, Debug)]
pub struct FanEdge<const N: usize> {
    pub length: f64,
    pub normal: UnitNormal<N>,
    pub weights: Vec<f64>,
    pub states: Vec<ConservedState<N>>,
}

/// Absolute tolerance on `|Σ s_j ξ^{(j)}|`, scaled by `max(1, Σ s_j)`.
pub const FAN_CLOSURE_TOL: f64 = 1e-12;

/// `(1/Σ s_j) Σ_j Σ_i s_j ω_i (U^{(ij)} - ξ^{(j)}·F(U^{(ij)})/α)`.
pub fn polytope_glf_average<const N: usize>(edges: &[FanEdge<N>], alpha: f64, eos: &Eos) -> Result<ConservedState<N>> {
    let mut closure = [0.0; N];
    let mut total = 0.0;
    for edge in edges {
        if !(edge.length > 0.0) || edge.weights.len() != edge.states.len() {
            return Err(Error::Domain("fan edges need positive length and matching weights"));
        }
        total += edge.length;
        for (c, x) in closure.iter_mut().zip(edge.normal.xi()) {
            *c += edge.length * x;
        }
    }
    let residual = math::sqrt(norm_sq(&closure));
    if !(residual <= FAN_CLOSURE_TOL * total.max(1.0)) {
        return Err(Error::Fan(residual));
    }
    let mut acc = ConservedState::ZERO;
    for edge in edges {
        for (w, u) in edge.weights.iter().zip(&edge.states) {
            let f = normal_flux(u, &edge.normal, eos)?;
            acc += u.axpy(-1.0 / alpha, &f) * (edge.length * w);
        }
    }
    Ok(acc * (1.0 / total))
}

/// The 2D Cartesian combination
/// `1/(1/Δx+1/Δy) Σ_i ω_i (G₁(Ū^i, Ũ^i)/Δx + G₂(Û^i, Ǔ^i)/Δy)`, a convex
/// combination of the `G` terms. Scaling it by any `λ ∈ (0, 1]` stays in `Ω_σ`.
#[allow(clippy::too_many_arguments)]
pub fn cartesian_glf_average_2d(
    dx: f64,
    dy: f64,
    weights: &[f64],
    u_bar: &[ConservedState<2>],
    u_tilde: &[ConservedState<2>],
    u_hat: &[ConservedState<2>],
    u_check: &[ConservedState<2>],
    alpha: f64,
    eos: &Eos,
) -> Result<ConservedState<2>> {
    let mut acc = ConservedState::ZERO;
    for i in 0..weights.len() {
        let gx = glf_average(&u_bar[i], &u_tilde[i], 0, alpha, eos)?;
        let gy = glf_average(&u_hat[i], &u_check[i], 1, alpha, eos)?;
        acc += (gx * (1.0 / dx) + gy * (1.0 / dy)) * weights[i];
    }
    Ok(acc * (1.0 / (1.0 / dx + 1.0 / dy)))
}

/// The 3D Cartesian analogue; `pairs[a]` holds the states of direction `a`.
pub fn cartesian_glf_average_3d(
    h: [f64; 3],
    weights: &[f64],
    pairs: [(&[ConservedState<3>], &[ConservedState<3>]); 3],
    alpha: f64,
    eos: &Eos,
) -> Result<ConservedState<3>> {
    let mut acc = ConservedState::ZERO;
    for (i, w) in weights.iter().enumerate() {
        for (a, (plus, minus)) in pairs.iter().enumerate() {
            acc += glf_average(&plus[i], &minus[i], a, alpha, eos)? * (w / h[a]);
        }
    }
    Ok(acc * (1.0 / (1.0 / h[0] + 1.0 / h[1] + 1.0 / h[2])))
}
