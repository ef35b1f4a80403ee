//! Gauss and Gauss–Lobatto rules on `[-1, 1]`, the orthonormal Legendre
//! basis, and the decomposition point sets of the limiter.
//!
//! Weights are normalised to sum to one.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
pub fn legendre(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    let (mut d0, mut d1) = (0.0, 1.0);
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        let d2 = d0 + (2.0 * kf + 1.0) * p1;
        p0 = p1;
        p1 = p2;
        d0 = d1;
        d1 = d2;
    }
    (p1, d1)
}

/// Orthonormal basis `φ_n = sqrt(2n+1) P_n` under the measure `dξ/2`, and its derivative.
#[inline]
pub fn basis(n: usize, x: f64) -> (f64, f64) {
    let (p, d) = legendre(n, x);
    let c = math::sqrt(2.0 * n as f64 + 1.0);
    (c * p, c * d)
}

/// A one-dimensional rule with nodes ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Gauss–Legendre with `n` points, exact for degree `2n - 1`.
    pub fn gauss(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n {
            let mut x = -math::cos(math::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                let dx = p / d;
                x -= dx;
                if math::abs(dx) < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            nodes[i] = x;
            weights[i] = 1.0 / ((1.0 - x * x) * d * d);
        }
        symmetrize(&mut nodes, &mut weights);
        Self { nodes, weights }
    }

    /// Gauss–Lobatto with `n ≥ 2` points, exact for degree `2n - 3`.
    pub fn gauss_lobatto(n: usize) -> Self {
        assert!(n >= 2);
        let nf = n as f64;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        nodes[0] = -1.0;
        nodes[n - 1] = 1.0;
        for i in 1..n - 1 {
            // interior nodes are the roots of P'_{n-1}
            let mut x = -math::cos(math::PI * i as f64 / (nf - 1.0));
            for _ in 0..100 {
                let (p, d) = legendre(n - 1, x);
                let dd = (2.0 * x * d - (nf - 1.0) * nf * p) / (1.0 - x * x);
                let dx = d / dd;
                x -= dx;
                if math::abs(dx) < 1e-16 {
                    break;
                }
            }
            nodes[i] = x;
        }
        for i in 0..n {
            let (p, _) = legendre(n - 1, nodes[i]);
            weights[i] = 1.0 / (nf * (nf - 1.0) * p * p);
        }
        symmetrize(&mut nodes, &mut weights);
        Self { nodes, weights }
    }
}

fn symmetrize(nodes: &mut [f64], weights: &mut [f64]) {
    let n = nodes.len();
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (nodes[j] - nodes[i]);
        nodes[i] = -x;
        nodes[j] = x;
        let w = 0.5 * (weights[i] + weights[j]);
        weights[i] = w;
        weights[j] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    let total: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= total;
    }
}

/// Number of Gauss–Lobatto points `L = ⌈(k+3)/2⌉` for degree `k`.
pub fn lobatto_points(k: usize) -> usize {
    (k + 4) / 2
}

/// First Gauss–Lobatto weight `1/(L(L-1))`.
pub fn lobatto_end_weight(k: usize) -> f64 {
    let l = lobatto_points(k) as f64;
    1.0 / (l * (l - 1.0))
}

/// A weighted point on the reference cell `[-1, 1]^D`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightedPoint<const D: usize> {
    pub x: [f64; D],
    pub w: f64,
}

/// The 1D decomposition set: the Gauss–Lobatto rule itself.
pub fn decomposition_1d(k: usize) -> Vec<WeightedPoint<1>> {
    let gl = Rule::gauss_lobatto(lobatto_points(k));
    gl.nodes
        .iter()
        .zip(&gl.weights)
        .map(|(&x, &w)| WeightedPoint { x: [x], w })
        .collect()
}

/// The 2D decomposition set `(GL_x ⊗ G_y) ∪ (G_x ⊗ GL_y)` of a `dx × dy` cell.
///
/// Weights sum to one and reproduce the cell average of any `P^k` polynomial.
/// The first `2Q` points of each family sit on the cell edges in the order
/// left, right (first family) and bottom, top (second family).
pub fn decomposition_2d(k: usize, dx: f64, dy: f64) -> Vec<WeightedPoint<2>> {
    let gl = Rule::gauss_lobatto(lobatto_points(k));
    let g = Rule::gauss(k + 1);
    let l = gl.len();
    let ax = dx / (dx + dy);
    let ay = dy / (dx + dy);
    let mut pts = Vec::with_capacity(2 * l * g.len());
    // family 1: Lobatto in x, Gauss in y, weight share Δy/(Δx+Δy)
    let mut family = |share: f64, swap: bool| {
        let order = core::iter::once(0).chain(core::iter::once(l - 1)).chain(1..l - 1);
        for a in order {
            for (b, (&yg, &wg)) in g.nodes.iter().zip(&g.weights).enumerate() {
                let _ = b;
                let x = gl.nodes[a];
                let p = if swap { [yg, x] } else { [x, yg] };
                pts.push(WeightedPoint {
                    x: p,
                    w: share * gl.weights[a] * wg,
                });
            }
        }
    };
    family(ay, false);
    family(ax, true);
    pts
}
