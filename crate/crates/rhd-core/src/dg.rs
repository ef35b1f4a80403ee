//! Modal discontinuous Galerkin discretisation on uniform Cartesian meshes.
//!
//! The basis on the reference cell `[-1, 1]^N` is the orthonormal Legendre
//! family restricted to total degree `k`, so coefficient 0 is the cell average.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::flux::{flux_from_prim, lf_combine};
use crate::mesh::{Boundary, Mesh};
use crate::quadrature::{self, basis, lobatto_end_weight, Rule};
use crate::region::{entropy_of, entropy_round_off};
use crate::stepper::IRP_SLACK;
use crate::state::{prim_to_cons, primitive, ConservedState, Eos, PrimitiveState};

/// Per-axis Legendre degrees of the `P^k` basis, ordered by total degree.
pub fn modes<const N: usize>(k: usize) -> Vec<[usize; N]> {
    let mut out = Vec::new();
    let total = (k + 1).pow(N as u32);
    for l in 0..total {
        let mut idx = [0; N];
        let mut r = l;
        for x in idx.iter_mut() {
            *x = r % (k + 1);
            r /= k + 1;
        }
        if idx.iter().sum::<usize>() <= k {
            out.push(idx);
        }
    }
    out.sort_by_key(|idx| (idx.iter().sum::<usize>(), idx.iter().rev().copied().collect::<Vec<_>>()));
    out
}

fn basis_at<const N: usize>(modes: &[[usize; N]], xi: &[f64; N]) -> (Vec<f64>, Vec<[f64; N]>) {
    let mut vals = Vec::with_capacity(modes.len());
    let mut grads = Vec::with_capacity(modes.len());
    for m in modes {
        let f: [(f64, f64); N] = core::array::from_fn(|a| basis(m[a], xi[a]));
        let v: f64 = f.iter().map(|x| x.0).product();
        let g = core::array::from_fn(|a| {
            f.iter()
                .enumerate()
                .map(|(b, x)| if a == b { x.1 } else { x.0 })
                .product()
        });
        vals.push(v);
        grads.push(g);
    }
    (vals, grads)
}

/// Basis values (and gradients) tabulated at a weighted point set.
#[derive(Clone, Debug)]
pub struct PointTable<const N: usize> {
    pub points: Vec<[f64; N]>,
    pub weights: Vec<f64>,
    pub n_modes: usize,
    /// `phi[p * n_modes + m]`.
    pub phi: Vec<f64>,
    /// Reference-coordinate gradients, same layout as `phi`.
    pub dphi: Vec<[f64; N]>,
}

impl<const N: usize> PointTable<N> {
    pub fn new(modes: &[[usize; N]], points: Vec<[f64; N]>, weights: Vec<f64>) -> Self {
        let mut phi = Vec::with_capacity(points.len() * modes.len());
        let mut dphi = Vec::with_capacity(points.len() * modes.len());
        for p in &points {
            let (v, g) = basis_at(modes, p);
            phi.extend(v);
            dphi.extend(g);
        }
        Self {
            points,
            weights,
            n_modes: modes.len(),
            phi,
            dphi,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn row(&self, p: usize) -> &[f64] {
        &self.phi[p * self.n_modes..(p + 1) * self.n_modes]
    }

    /// Value of the polynomial with coefficients `c` at point `p`.
    #[inline]
    pub fn eval(&self, c: &[ConservedState<N>], p: usize) -> ConservedState<N> {
        let mut u = ConservedState::ZERO;
        for (phi, cm) in self.row(p).iter().zip(c) {
            u = u.axpy(*phi, cm);
        }
        u
    }
}

/// Tensor product of a 1D rule over the axes in `axes`, other coordinates fixed by `base`.
fn tensor<const N: usize>(rule: &Rule, axes: &[usize], base: [f64; N]) -> (Vec<[f64; N]>, Vec<f64>) {
    let q = rule.len();
    let total = q.pow(axes.len() as u32);
    let mut pts = Vec::with_capacity(total);
    let mut wts = Vec::with_capacity(total);
    for l in 0..total {
        let mut x = base;
        let mut w = 1.0;
        let mut r = l;
        for &a in axes {
            x[a] = rule.nodes[r % q];
            w *= rule.weights[r % q];
            r /= q;
        }
        pts.push(x);
        wts.push(w);
    }
    (pts, wts)
}

/// Decomposition point set of the limiter for a cell with spacings `h`.
pub fn decomposition_points<const N: usize>(k: usize, h: &[f64; N]) -> (Vec<[f64; N]>, Vec<f64>) {
    match N {
        1 => quadrature::decomposition_1d(k)
            .into_iter()
            .map(|p| (core::array::from_fn(|_| p.x[0]), p.w))
            .unzip(),
        2 => quadrature::decomposition_2d(k, h[0], h[1])
            .into_iter()
            .map(|p| (core::array::from_fn(|a| p.x[a]), p.w))
            .unzip(),
        _ => panic!("decomposition points exist in one and two dimensions"),
    }
}

/// Modal coefficients of a DG solution, cell-major with modes contiguous.
#[derive(Clone, Debug, PartialEq)]
pub struct DgSolution<const N: usize> {
    pub degree: usize,
    pub n_modes: usize,
    pub counts: [usize; N],
    pub coeffs: Vec<ConservedState<N>>,
    pub time: f64,
}

impl<const N: usize> DgSolution<N> {
    pub fn zeros(mesh: &Mesh<N>, degree: usize) -> Self {
        let n_modes = modes::<N>(degree).len();
        Self {
            degree,
            n_modes,
            counts: mesh.counts,
            coeffs: vec![ConservedState::ZERO; mesh.n_cells() * n_modes],
            time: 0.0,
        }
    }

    pub fn n_cells(&self) -> usize {
        self.coeffs.len() / self.n_modes
    }

    #[inline]
    pub fn cell(&self, c: usize) -> &[ConservedState<N>] {
        &self.coeffs[c * self.n_modes..(c + 1) * self.n_modes]
    }

    #[inline]
    pub fn cell_mut(&mut self, c: usize) -> &mut [ConservedState<N>] {
        let n = self.n_modes;
        &mut self.coeffs[c * n..(c + 1) * n]
    }

    #[inline]
    pub fn average(&self, c: usize) -> ConservedState<N> {
        self.coeffs[c * self.n_modes]
    }

    pub fn averages(&self) -> impl Iterator<Item = ConservedState<N>> + '_ {
        self.coeffs.iter().step_by(self.n_modes).copied()
    }

    /// `self = a * self + b * x`.
    pub fn scale_add(&mut self, a: f64, b: f64, x: &Self) {
        for (y, xv) in self.coeffs.iter_mut().zip(&x.coeffs) {
            *y = *y * a + *xv * b;
        }
    }
}

/// Value of `solution` in `cell` at reference point `xi`.
pub fn evaluate<const N: usize>(solution: &DgSolution<N>, cell: usize, xi: &[f64; N]) -> ConservedState<N> {
    let (phi, _) = basis_at(&modes::<N>(solution.degree), xi);
    let mut u = ConservedState::ZERO;
    for (p, c) in phi.iter().zip(solution.cell(cell)) {
        u = u.axpy(*p, c);
    }
    u
}

/// First Gauss–Lobatto weight, or 1 for the first-order scheme.
fn courant_weight(k: usize) -> f64 {
    if k == 0 {
        1.0
    } else {
        lobatto_end_weight(k)
    }
}

/// `Σ_a α / Δx_a`.
fn inverse_time_scale<const N: usize>(mesh: &Mesh<N>, alpha: f64) -> f64 {
    (0..N).map(|a| alpha / mesh.spacing(a)).sum()
}

/// Largest forward-Euler step keeping cell averages in the invariant region:
/// `αΔt Σ 1/Δx_a ≤ 1/(L(L-1))`, or `≤ 1` for `k = 0`.
pub fn theoretical_dt<const N: usize>(mesh: &Mesh<N>, k: usize, alpha: f64) -> f64 {
    courant_weight(k) / inverse_time_scale(mesh, alpha)
}

/// `min(theoretical bound, cfl / (α Σ 1/Δx_a))`.
pub fn max_stable_dt<const N: usize>(mesh: &Mesh<N>, k: usize, alpha: f64, cfl: f64) -> f64 {
    theoretical_dt(mesh, k, alpha).min(cfl / inverse_time_scale(mesh, alpha))
}

/// Practical SSP-RK CFL numbers 0.3, 0.15, 0.1 for `P¹`, `P²`, `P³`.
pub fn default_cfl(k: usize) -> f64 {
    match k {
        0 => 0.9,
        1 => 0.3,
        2 => 0.15,
        _ => 0.1,
    }
}

#[cfg(feature = "parallel")]
fn for_each_chunk<T, F>(data: &mut [T], chunk: usize, f: F) -> Result<()>
where
    T: Send,
    F: Fn(usize, &mut [T]) -> Result<()> + Sync + Send,
{
    use rayon::prelude::*;
    data.par_chunks_mut(chunk).enumerate().try_for_each(|(i, c)| f(i, c))
}

#[cfg(not(feature = "parallel"))]
fn for_each_chunk<T, F>(data: &mut [T], chunk: usize, f: F) -> Result<()>
where
    F: Fn(usize, &mut [T]) -> Result<()>,
{
    data.chunks_mut(chunk).enumerate().try_for_each(|(i, c)| f(i, c))
}

/// Semi-discrete DG operator `L(U_h)` with the Lax–Friedrichs interface flux.
#[derive(Clone, Debug)]
pub struct DgOperator<const N: usize> {
    pub mesh: Mesh<N>,
    pub degree: usize,
    pub eos: Eos,
    pub alpha: f64,
    pub modes: Vec<[usize; N]>,
    /// `(k+1)^N` Gauss points.
    pub volume: PointTable<N>,
    /// `faces[axis][side]`, Gauss points on the face `ξ_axis = ±1`.
    pub faces: Vec<[PointTable<N>; 2]>,
    /// Monitoring points, the decomposition set of the cell average.
    pub decomposition: PointTable<N>,
    /// Limiter points: the decomposition set followed by the volume points,
    /// where the residual also recovers primitives. Volume weights are zero.
    pub limiting: PointTable<N>,
    /// `(k+2)^N` Gauss points for projection.
    pub projection: PointTable<N>,
}

impl<const N: usize> DgOperator<N> {
    pub fn new(mesh: Mesh<N>, degree: usize, eos: Eos, alpha: f64) -> Result<Self> {
        if degree > 3 {
            return Err(Error::Config("degree must be in 0..=3".into()));
        }
        if !(alpha >= 1.0) {
            return Err(Error::Config("wave-speed bound alpha must be at least 1".into()));
        }
        let md = modes::<N>(degree);
        let all: Vec<usize> = (0..N).collect();
        let g = Rule::gauss(degree + 1);
        let (vp, vw) = tensor::<N>(&g, &all, [0.0; N]);
        let volume = PointTable::new(&md, vp, vw);
        let faces = (0..N)
            .map(|a| {
                let others: Vec<usize> = (0..N).filter(|&b| b != a).collect();
                core::array::from_fn(|s| {
                    let mut base = [0.0; N];
                    base[a] = if s == 0 { -1.0 } else { 1.0 };
                    let (p, w) = tensor::<N>(&g, &others, base);
                    PointTable::new(&md, p, w)
                })
            })
            .collect();
        let (dp, dw) = decomposition_points::<N>(degree, &mesh.spacings());
        let mut lp = dp.clone();
        let mut lw = dw.clone();
        lp.extend(volume.points.iter().copied());
        lw.extend(core::iter::repeat_n(0.0, volume.len()));
        let decomposition = PointTable::new(&md, dp, dw);
        let limiting = PointTable::new(&md, lp, lw);
        let (pp, pw) = tensor::<N>(&Rule::gauss(degree + 2), &all, [0.0; N]);
        let projection = PointTable::new(&md, pp, pw);
        Ok(Self {
            mesh,
            degree,
            eos,
            alpha,
            modes: md,
            volume,
            faces,
            decomposition,
            limiting,
            projection,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    /// `L²` projection of a conserved field given at physical positions.
    pub fn project<F>(&self, f: F) -> Result<DgSolution<N>>
    where
        F: Fn(&[f64; N]) -> Result<ConservedState<N>> + Sync + Send,
    {
        let mut sol = DgSolution::zeros(&self.mesh, self.degree);
        let nm = self.n_modes();
        let tab = &self.projection;
        for_each_chunk(&mut sol.coeffs, nm, |c, out| {
            for p in 0..tab.len() {
                let u = f(&self.mesh.physical(c, &tab.points[p])).map_err(|e| e.at_cell(c))?;
                for (o, phi) in out.iter_mut().zip(tab.row(p)) {
                    *o = o.axpy(tab.weights[p] * phi, &u);
                }
            }
            Ok(())
        })?;
        Ok(sol)
    }

    /// Projection of a primitive initial condition.
    pub fn project_initial<F>(&self, ic: F) -> Result<DgSolution<N>>
    where
        F: Fn(&[f64; N]) -> PrimitiveState<N> + Sync + Send,
    {
        self.project(|x| prim_to_cons(&ic(x), &self.eos))
    }

    fn face_count(&self, axis: usize) -> [usize; N] {
        let mut c = self.mesh.counts;
        c[axis] += 1;
        c
    }

    fn face_linear(&self, axis: usize, idx: &[usize; N]) -> usize {
        let counts = self.face_count(axis);
        let mut l = 0;
        for a in (0..N).rev() {
            l = l * counts[a] + idx[a];
        }
        l
    }

    /// `dU_h/dt` of every mode of every cell.
    pub fn residual(&self, u: &DgSolution<N>) -> Result<DgSolution<N>> {
        let mesh = &self.mesh;
        let nm = self.n_modes();
        let nfp = self.faces[0][0].len();
        let eos = self.eos;

        // interior traces (U, F_axis(U)) per cell, axis, side, face point
        let per_cell = N * 2 * nfp;
        let mut traces = vec![(ConservedState::ZERO, ConservedState::ZERO); mesh.n_cells() * per_cell];
        for_each_chunk(&mut traces, per_cell, |c, out| {
            let coeffs = u.cell(c);
            for a in 0..N {
                for s in 0..2 {
                    let tab = &self.faces[a][s];
                    for p in 0..nfp {
                        let w = tab.eval(coeffs, p);
                        let v = primitive(&w, &eos).map_err(|e| e.at_cell(c))?;
                        out[(a * 2 + s) * nfp + p] = (w, flux_from_prim(&w, &v, a));
                    }
                }
            }
            Ok(())
        })?;
        let trace = |c: usize, a: usize, s: usize, p: usize| &traces[c * per_cell + (a * 2 + s) * nfp + p];

        let mut fluxes: Vec<Vec<ConservedState<N>>> = Vec::with_capacity(N);
        for a in 0..N {
            let fc = self.face_count(a);
            let nf: usize = fc.iter().product();
            let mut fa = vec![ConservedState::ZERO; nf * nfp];
            let n_a = mesh.counts[a];
            for_each_chunk(&mut fa, nfp, |f, out| {
                let mut idx = [0; N];
                let mut r = f;
                for b in 0..N {
                    idx[b] = r % fc[b];
                    r /= fc[b];
                }
                let i = idx[a];
                let periodic = mesh.boundary[a][0] == Boundary::Periodic;
                let cell_at = |ia: usize| {
                    let mut j = idx;
                    j[a] = ia;
                    mesh.linear(&j)
                };
                for p in 0..nfp {
                    let left = if i > 0 {
                        *trace(cell_at(i - 1), a, 1, p)
                    } else if periodic {
                        *trace(cell_at(n_a - 1), a, 1, p)
                    } else {
                        let c = cell_at(0);
                        let inner = trace(c, a, 0, p).0;
                        let x = mesh.physical(c, &self.faces[a][0].points[p]);
                        exterior_pair(mesh.exterior(a, 0, &inner, &x), a, &eos).map_err(|e| e.at_cell(c))?
                    };
                    let right = if i < n_a {
                        *trace(cell_at(i), a, 0, p)
                    } else if periodic {
                        *trace(cell_at(0), a, 0, p)
                    } else {
                        let c = cell_at(n_a - 1);
                        let inner = trace(c, a, 1, p).0;
                        let x = mesh.physical(c, &self.faces[a][1].points[p]);
                        exterior_pair(mesh.exterior(a, 1, &inner, &x), a, &eos).map_err(|e| e.at_cell(c))?
                    };
                    out[p] = lf_combine(&left.0, &left.1, &right.0, &right.1, self.alpha);
                }
                Ok(())
            })?;
            fluxes.push(fa);
        }

        let h = mesh.spacings();
        let mut res = DgSolution::zeros(mesh, self.degree);
        res.time = u.time;
        let vol = &self.volume;
        for_each_chunk(&mut res.coeffs, nm, |c, out| {
            let coeffs = u.cell(c);
            if nm > 1 {
                for q in 0..vol.len() {
                    let w = vol.eval(coeffs, q);
                    let v = primitive(&w, &eos).map_err(|e| e.at_cell(c))?;
                    for a in 0..N {
                        let f = flux_from_prim(&w, &v, a);
                        let scale = 2.0 * vol.weights[q] / h[a];
                        for (m, o) in out.iter_mut().enumerate().skip(1) {
                            *o = o.axpy(scale * vol.dphi[q * nm + m][a], &f);
                        }
                    }
                }
            }
            let idx = mesh.multi(c);
            for a in 0..N {
                let lf = self.face_linear(a, &idx);
                let mut ridx = idx;
                ridx[a] += 1;
                let rf = self.face_linear(a, &ridx);
                let (t0, t1) = (&self.faces[a][0], &self.faces[a][1]);
                for p in 0..nfp {
                    let fl = fluxes[a][lf * nfp + p];
                    let fr = fluxes[a][rf * nfp + p];
                    let wl = t0.weights[p] / h[a];
                    let wr = t1.weights[p] / h[a];
                    for (m, o) in out.iter_mut().enumerate() {
                        *o = o.axpy(wl * t0.phi[p * nm + m], &fl).axpy(-wr * t1.phi[p * nm + m], &fr);
                    }
                }
            }
            Ok(())
        })?;
        Ok(res)
    }

    /// Values at the decomposition points of `cell`.
    pub fn point_values(&self, u: &DgSolution<N>, cell: usize) -> impl Iterator<Item = ConservedState<N>> + '_ {
        let coeffs: Vec<ConservedState<N>> = u.cell(cell).to_vec();
        let tab = &self.decomposition;
        (0..tab.len()).map(move |p| tab.eval(&coeffs, p))
    }

    /// `(min over decomposition points, min over cell averages)` of `S`.
    ///
    /// Points outside the admissible set count as `-∞`.
    pub fn entropy_minima(&self, u: &DgSolution<N>) -> (f64, f64) {
        let s = |w: &ConservedState<N>| {
            primitive(w, &self.eos)
                .map(|v| entropy_of(&v, &self.eos))
                .unwrap_or(f64::NEG_INFINITY)
        };
        let mut pmin = f64::INFINITY;
        let mut amin = f64::INFINITY;
        for c in 0..u.n_cells() {
            amin = amin.min(s(&u.average(c)));
            for w in self.point_values(u, c) {
                pmin = pmin.min(s(&w));
            }
        }
        (pmin, amin)
    }

    /// Largest `S₀ - S(U) - slack(U)` over decomposition points and cell
    /// averages, where `slack` is the larger of `IRP_SLACK` and the round-off
    /// of `S` at `U`. Positive means a violation beyond slack; inadmissible
    /// points give `+∞`.
    pub fn entropy_excess(&self, u: &DgSolution<N>, s0: f64) -> f64 {
        let excess = |w: &ConservedState<N>| match primitive(w, &self.eos) {
            Ok(v) => s0 - entropy_of(&v, &self.eos) - IRP_SLACK.max(entropy_round_off(w, &v, &self.eos)),
            Err(_) => f64::INFINITY,
        };
        let mut worst = f64::NEG_INFINITY;
        for c in 0..u.n_cells() {
            worst = worst.max(excess(&u.average(c)));
            for w in self.point_values(u, c) {
                worst = worst.max(excess(&w));
            }
        }
        worst
    }
}

fn exterior_pair<const N: usize>(
    u: ConservedState<N>,
    axis: usize,
    eos: &Eos,
) -> Result<(ConservedState<N>, ConservedState<N>)> {
    let v = primitive(&u, eos)?;
    Ok((u, flux_from_prim(&u, &v, axis)))
}

/// Residual of a 1D solution.
pub fn residual_1d(op: &DgOperator<1>, u: &DgSolution<1>) -> Result<DgSolution<1>> {
    op.residual(u)
}

/// Residual of a 2D solution.
pub fn residual_2d(op: &DgOperator<2>, u: &DgSolution<2>) -> Result<DgSolution<2>> {
    op.residual(u)
}

/// Initial projection of a primitive field onto `P^k`.
pub fn project_initial<const N: usize, F>(ic: F, mesh: &Mesh<N>, k: usize, eos: &Eos) -> Result<DgSolution<N>>
where
    F: Fn(&[f64; N]) -> PrimitiveState<N> + Sync + Send,
{
    DgOperator::new(mesh.clone(), k, *eos, 1.0)?.project_initial(ic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::q_fn;
    use approx::assert_relative_eq;

    fn eos() -> Eos {
        Eos::default()
    }

    fn periodic1(n: usize) -> Mesh<1> {
        Mesh::uniform_boundary([0.0], [1.0], [n], Boundary::Periodic).unwrap()
    }

    #[test]
    fn entropy_excess_of_constant_data() {
        let op = DgOperator::new(periodic1(4), 2, eos(), 1.0).unwrap();
        let u = op.project_initial(|_| PrimitiveState::new(1.0, [0.2], 1.0)).unwrap();
        let (pts, avg) = op.entropy_minima(&u);
        assert!(pts.abs() < 1e-13 && avg.abs() < 1e-13);
        assert!((op.entropy_excess(&u, 1.0) - (1.0 - IRP_SLACK)).abs() < 1e-12);
        assert!(op.entropy_excess(&u, 0.0) < 0.0);
        let mut bad = u.clone();
        bad.cell_mut(2)[1] = ConservedState::new(-5.0, [0.0], 0.0);
        assert_eq!(op.entropy_excess(&bad, 0.0), f64::INFINITY);
    }

    #[test]
    fn mode_ordering() {
        assert_eq!(modes::<1>(3), vec![[0], [1], [2], [3]]);
        let m = modes::<2>(2);
        assert_eq!(m.len(), 6);
        assert_eq!(m[0], [0, 0]);
        assert!(m[1..3].contains(&[1, 0]) && m[1..3].contains(&[0, 1]));
    }

    #[test]
    fn evaluate_constant_and_linear() {
        let mesh = periodic1(4);
        let mut s = DgSolution::zeros(&mesh, 1);
        s.cell_mut(2)[0] = ConservedState::new(1.0, [0.2], 3.0);
        assert_eq!(evaluate(&s, 2, &[0.7]).d, 1.0);
        s.cell_mut(2)[1] = ConservedState::new(0.5, [0.0], 0.0);
        assert_eq!(evaluate(&s, 2, &[0.0]).d, 1.0);
        let k0 = DgSolution::zeros(&mesh, 0);
        assert_eq!(k0.n_modes, 1);
    }

    #[test]
    fn project_then_evaluate_polynomial() {
        let e = eos();
        for k in 0..=3 {
            let mesh = Mesh::uniform_boundary([0.0, -1.0], [2.0, 1.0], [3, 2], Boundary::Outflow).unwrap();
            let op = DgOperator::new(mesh, k, e, 1.0).unwrap();
            let poly = |x: &[f64; 2]| {
                let mut t = 0.0;
                for a in 0..=k {
                    for b in 0..=k - a {
                        t += 0.1 * (a + 2 * b + 1) as f64 * x[0].powi(a as i32) * x[1].powi(b as i32);
                    }
                }
                t
            };
            let sol = op.project(|x| Ok(ConservedState::new(poly(x), [0.0, 0.0], 0.0))).unwrap();
            for c in 0..6 {
                for xi in [[-0.9, 0.3], [0.5, -0.5], [1.0, 1.0]] {
                    let x = op.mesh.physical(c, &xi);
                    assert!((evaluate(&sol, c, &xi).d - poly(&x)).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn constant_state_projects_to_mean_only() {
        let e = eos();
        let st = PrimitiveState::new(1.2, [0.3], 0.8);
        let s = project_initial(|_| st, &periodic1(5), 2, &e).unwrap();
        let u = prim_to_cons(&st, &e).unwrap();
        for c in 0..5 {
            assert_relative_eq!(s.average(c).e, u.e, max_relative = 1e-14);
            assert!(s.cell(c)[1].e.abs() < 1e-14 && s.cell(c)[2].d.abs() < 1e-14);
        }
    }

    #[test]
    fn riemann_interface_on_face_is_piecewise_constant() {
        let mesh = Mesh::uniform_boundary([0.0], [1.0], [4], Boundary::Outflow).unwrap();
        let s = project_initial(
            |x| {
                if x[0] < 0.5 {
                    PrimitiveState::new(0.8, [0.5], 8.0)
                } else {
                    PrimitiveState::new(1.0, [0.0], 1.0)
                }
            },
            &mesh,
            3,
            &eos(),
        )
        .unwrap();
        for c in 0..4 {
            for m in 1..4 {
                assert!(s.cell(c)[m].max_abs() < 1e-13);
            }
        }
    }

    #[test]
    fn constant_state_has_zero_residual() {
        let e = eos();
        for k in 0..=3 {
            let op = DgOperator::new(periodic1(6), k, e, 1.0).unwrap();
            let s = op.project_initial(|_| PrimitiveState::new(1.0, [0.6], 2.0)).unwrap();
            let r = op.residual(&s).unwrap();
            assert!(r.coeffs.iter().all(|c| c.max_abs() < 1e-13), "k={k}");
            let mesh = Mesh::uniform_boundary([0.0, 0.0], [1.0, 1.0], [3, 4], Boundary::Periodic).unwrap();
            let op = DgOperator::new(mesh, k, e, 1.0).unwrap();
            let s = op.project_initial(|_| PrimitiveState::new(1.0, [0.6, -0.3], 2.0)).unwrap();
            let r = op.residual(&s).unwrap();
            assert!(r.coeffs.iter().all(|c| c.max_abs() < 1e-12), "2d k={k}");
        }
    }

    fn wave(x: f64) -> PrimitiveState<1> {
        PrimitiveState::new(1.0 + 0.5 * (2.0 * core::f64::consts::PI * x).sin(), [0.4], 1.0)
    }

    #[test]
    fn periodic_residual_conserves() {
        let op = DgOperator::new(periodic1(16), 2, eos(), 1.0).unwrap();
        let s = op.project_initial(|x| wave(x[0])).unwrap();
        let r = op.residual(&s).unwrap();
        let h = op.mesh.spacing(0);
        let mut total = ConservedState::<1>::ZERO;
        for c in 0..16 {
            total += r.average(c) * h;
        }
        assert!(total.max_abs() < 1e-12);
    }

    #[test]
    fn first_order_residual_matches_lf_scheme() {
        let e = eos();
        let op = DgOperator::new(periodic1(8), 0, e, 1.0).unwrap();
        let s = op.project_initial(|x| wave(x[0])).unwrap();
        let r = op.residual(&s).unwrap();
        let h = op.mesh.spacing(0);
        let xi = crate::flux::UnitNormal::axis(0);
        for j in 0..8 {
            let (l, c, rr) = (s.average((j + 7) % 8), s.average(j), s.average((j + 1) % 8));
            let fr = crate::flux::lf_flux(&c, &rr, &xi, 1.0, &e).unwrap();
            let fl = crate::flux::lf_flux(&l, &c, &xi, 1.0, &e).unwrap();
            let expect = (fr - fl) * (-1.0 / h);
            for i in 0..3 {
                assert!((r.average(j).get(i) - expect.get(i)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn extruded_residual_matches_1d() {
        let e = eos();
        for k in 0..=3 {
            let op1 = DgOperator::new(periodic1(10), k, e, 1.0).unwrap();
            let s1 = op1.project_initial(|x| wave(x[0])).unwrap();
            let r1 = op1.residual(&s1).unwrap();
            let mesh2 = Mesh::uniform_boundary([0.0, 0.0], [1.0, 0.3], [10, 3], Boundary::Periodic).unwrap();
            let op2 = DgOperator::new(mesh2, k, e, 1.0).unwrap();
            let s2 = op2
                .project_initial(|x| {
                    let w = wave(x[0]);
                    PrimitiveState::new(w.rho, [w.v[0], 0.0], w.p)
                })
                .unwrap();
            let r2 = op2.residual(&s2).unwrap();
            let pos: Vec<usize> = (0..op2.n_modes()).filter(|&m| op2.modes[m][1] == 0).collect();
            for row in 0..3 {
                for i in 0..10 {
                    let c2 = op2.mesh.linear(&[i, row]);
                    for (m1, &m2) in pos.iter().enumerate() {
                        let a = r1.cell(i)[m1];
                        let b = r2.cell(c2)[m2];
                        assert!((a.d - b.d).abs() < 1e-12 * (1.0 + a.d.abs()));
                        assert!((a.m[0] - b.m[0]).abs() < 1e-12 * (1.0 + a.m[0].abs()));
                        assert!((a.e - b.e).abs() < 1e-12 * (1.0 + a.e.abs()));
                        assert!(b.m[1].abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn stable_dt_bounds() {
        let m = Mesh::uniform_boundary([0.0], [1.0], [10], Boundary::Outflow).unwrap();
        assert!((theoretical_dt(&m, 1, 1.0) - 0.05).abs() < 1e-16);
        assert!((theoretical_dt(&m, 2, 1.0) - 0.1 / 6.0).abs() < 1e-16);
        assert!((theoretical_dt(&m, 3, 1.0) - 0.1 / 6.0).abs() < 1e-16);
        assert!((max_stable_dt(&m, 1, 1.0, 0.3) - 0.03).abs() < 1e-16);
        let h = 0.25;
        let m2 = Mesh::uniform_boundary([0.0, 0.0], [1.0, 1.0], [4, 4], Boundary::Outflow).unwrap();
        assert!((theoretical_dt(&m2, 1, 1.0) - h / 4.0).abs() < 1e-16);
    }

    #[test]
    fn projected_sine_averages_admissible() {
        let e = eos();
        let s = project_initial(
            |x| PrimitiveState::new(1.0 + 0.99999 * (2.0 * core::f64::consts::PI * x[0]).sin(), [0.9], 1.0),
            &periodic1(10),
            3,
            &e,
        )
        .unwrap();
        let s0 = -(5.0 / 3.0) * 1.99999f64.ln();
        for c in 0..10 {
            let u = s.average(c);
            assert!(u.d > 0.0 && q_fn(&u) > 0.0);
            assert!(crate::region::specific_entropy(&u, &e).unwrap() >= s0);
        }
    }
}
