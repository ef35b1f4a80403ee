//! Uniform Cartesian meshes in one and two dimensions with per-side
//! boundary conditions.

use crate::error::{Error, Result};
use crate::state::ConservedState;

/// Boundary condition on one side of the domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Boundary<const N: usize> {
    Periodic,
    /// Zero-order extrapolation.
    Outflow,
    /// Mirror with the normal momentum reversed.
    Reflective,
    /// Prescribed exterior state.
    Inflow(ConservedState<N>),
    /// Prescribed state where the coordinate along the side satisfies
    /// `|x - center| <= half_width`, outflow elsewhere.
    Nozzle {
        center: f64,
        half_width: f64,
        state: ConservedState<N>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mesh<const N: usize> {
    pub lo: [f64; N],
    pub hi: [f64; N],
    pub counts: [usize; N],
    /// `boundary[axis][0]` at `lo`, `boundary[axis][1]` at `hi`.
    pub boundary: [[Boundary<N>; 2]; N],
}

impl<const N: usize> Mesh<N> {
    pub fn new(lo: [f64; N], hi: [f64; N], counts: [usize; N], boundary: [[Boundary<N>; 2]; N]) -> Result<Self> {
        for a in 0..N {
            if !(hi[a] > lo[a]) || !lo[a].is_finite() || !hi[a].is_finite() {
                return Err(Error::Config("mesh extents must satisfy lo < hi".into()));
            }
            if counts[a] == 0 {
                return Err(Error::Config("cell counts must be positive".into()));
            }
            let periodic = boundary[a].map(|b| b == Boundary::Periodic);
            if periodic[0] != periodic[1] {
                return Err(Error::Config("periodic boundaries must be paired".into()));
            }
        }
        Ok(Self {
            lo,
            hi,
            counts,
            boundary,
        })
    }

    /// Mesh with the same condition on every side.
    pub fn uniform_boundary(lo: [f64; N], hi: [f64; N], counts: [usize; N], b: Boundary<N>) -> Result<Self> {
        Self::new(lo, hi, counts, [[b; 2]; N])
    }

    #[inline]
    pub fn spacing(&self, axis: usize) -> f64 {
        (self.hi[axis] - self.lo[axis]) / self.counts[axis] as f64
    }

    pub fn spacings(&self) -> [f64; N] {
        core::array::from_fn(|a| self.spacing(a))
    }

    pub fn n_cells(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn cell_volume(&self) -> f64 {
        (0..N).map(|a| self.spacing(a)).product()
    }

    /// Linear index of a multi-index, first axis fastest.
    #[inline]
    pub fn linear(&self, idx: &[usize; N]) -> usize {
        let mut l = 0;
        for a in (0..N).rev() {
            l = l * self.counts[a] + idx[a];
        }
        l
    }

    #[inline]
    pub fn multi(&self, mut l: usize) -> [usize; N] {
        let mut idx = [0; N];
        for a in 0..N {
            idx[a] = l % self.counts[a];
            l /= self.counts[a];
        }
        idx
    }

    pub fn cell_center(&self, cell: usize) -> [f64; N] {
        let idx = self.multi(cell);
        core::array::from_fn(|a| self.lo[a] + (idx[a] as f64 + 0.5) * self.spacing(a))
    }

    /// Physical position of reference point `xi ∈ [-1, 1]^N` in `cell`.
    pub fn physical(&self, cell: usize, xi: &[f64; N]) -> [f64; N] {
        let c = self.cell_center(cell);
        core::array::from_fn(|a| c[a] + 0.5 * xi[a] * self.spacing(a))
    }

    /// Exterior state across side `side` of `axis` for interior trace `u` at `pos`.
    pub fn exterior(&self, axis: usize, side: usize, u: &ConservedState<N>, pos: &[f64; N]) -> ConservedState<N> {
        match self.boundary[axis][side] {
            Boundary::Periodic | Boundary::Outflow => *u,
            Boundary::Reflective => {
                let mut r = *u;
                r.m[axis] = -r.m[axis];
                r
            }
            Boundary::Inflow(s) => s,
            Boundary::Nozzle {
                center,
                half_width,
                state,
            } => {
                let t = if N > 1 { pos[(axis + 1) % N] } else { pos[0] };
                if crate::math::abs(t - center) <= half_width {
                    state
                } else {
                    *u
                }
            }
        }
    }
}
