//! Benchmark problems, entropy floors, error norms and entropy monitoring.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::dg::{default_cfl, max_stable_dt, DgOperator, DgSolution, PointTable};
use crate::error::{Error, Result};
use crate::limiter::{LimiterConfig, LimiterMode};
use crate::math;
use crate::mesh::{Boundary, Mesh};
use crate::quadrature::Rule;
use crate::region::entropy_of;
use crate::state::{prim_to_cons, primitive, Eos, PrimitiveState};
use crate::stepper::{integrate, DgScheme, Scheme};

/// Initial data families.
#[derive(Clone, Debug, PartialEq)]
pub enum Initial<const N: usize> {
    Uniform(PrimitiveState<N>),
    /// `ρ = 1 + amplitude·sin(2π Σ x_a)` advected with constant velocity and pressure.
    Sine {
        amplitude: f64,
        velocity: [f64; N],
        pressure: f64,
    },
    /// Planar discontinuity normal to the first axis.
    Riemann {
        interface: f64,
        left: PrimitiveState<N>,
        right: PrimitiveState<N>,
    },
    /// States in the quadrants `x>0,y>0`, `x<0,y>0`, `x<0,y<0`, `x>0,y<0` around `center`.
    Quadrants {
        center: [f64; 2],
        states: [PrimitiveState<N>; 4],
    },
    /// Planar shock at `x = shock` with a circular bubble of `bubble_state`.
    ShockBubble {
        shock: f64,
        left: PrimitiveState<N>,
        right: PrimitiveState<N>,
        center: [f64; 2],
        radius: f64,
        bubble_state: PrimitiveState<N>,
    },
}

impl<const N: usize> Initial<N> {
    pub fn eval(&self, x: &[f64; N]) -> PrimitiveState<N> {
        match self {
            Initial::Uniform(s) => *s,
            Initial::Sine {
                amplitude,
                velocity,
                pressure,
            } => {
                let phase: f64 = x.iter().sum();
                PrimitiveState::new(1.0 + amplitude * math::sin(2.0 * math::PI * phase), *velocity, *pressure)
            }
            Initial::Riemann { interface, left, right } => {
                if x[0] < *interface {
                    *left
                } else {
                    *right
                }
            }
            Initial::Quadrants { center, states } => {
                let east = x[0] > center[0];
                let north = x[1 % N] > center[1];
                match (east, north) {
                    (true, true) => states[0],
                    (false, true) => states[1],
                    (false, false) => states[2],
                    (true, false) => states[3],
                }
            }
            Initial::ShockBubble {
                shock,
                left,
                right,
                center,
                radius,
                bubble_state,
            } => {
                let dx = x[0] - center[0];
                let dy = x[1 % N] - center[1];
                if dx * dx + dy * dy <= radius * radius {
                    *bubble_state
                } else if x[0] < *shock {
                    *left
                } else {
                    *right
                }
            }
        }
    }

    /// The finitely many states of piecewise-constant data.
    pub fn constant_states(&self) -> Option<Vec<PrimitiveState<N>>> {
        match self {
            Initial::Uniform(s) => Some(vec![*s]),
            Initial::Sine { .. } => None,
            Initial::Riemann { left, right, .. } => Some(vec![*left, *right]),
            Initial::Quadrants { states, .. } => Some(states.to_vec()),
            Initial::ShockBubble {
                left,
                right,
                bubble_state,
                ..
            } => Some(vec![*left, *right, *bubble_state]),
        }
    }

    /// Exact solution at time `t`, when one is known.
    pub fn exact(&self, x: &[f64; N], t: f64) -> Option<PrimitiveState<N>> {
        match self {
            Initial::Uniform(s) => Some(*s),
            Initial::Sine { velocity, .. } => {
                let shifted: [f64; N] = core::array::from_fn(|a| x[a] - velocity[a] * t);
                Some(self.eval(&shifted))
            }
            _ => None,
        }
    }
}

/// Boundary condition in primitive variables.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundarySpec<const N: usize> {
    Periodic,
    Outflow,
    Reflective,
    Inflow(PrimitiveState<N>),
    Nozzle {
        center: f64,
        half_width: f64,
        state: PrimitiveState<N>,
    },
}

impl<const N: usize> BoundarySpec<N> {
    fn to_boundary(self, eos: &Eos) -> Result<Boundary<N>> {
        Ok(match self {
            BoundarySpec::Periodic => Boundary::Periodic,
            BoundarySpec::Outflow => Boundary::Outflow,
            BoundarySpec::Reflective => Boundary::Reflective,
            BoundarySpec::Inflow(s) => Boundary::Inflow(prim_to_cons(&s, eos)?),
            BoundarySpec::Nozzle {
                center,
                half_width,
                state,
            } => Boundary::Nozzle {
                center,
                half_width,
                state: prim_to_cons(&state, eos)?,
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario<const N: usize> {
    pub name: String,
    pub lo: [f64; N],
    pub hi: [f64; N],
    pub counts: [usize; N],
    pub boundary: [[BoundarySpec<N>; 2]; N],
    pub gamma: f64,
    pub t_final: f64,
    pub initial: Initial<N>,
    /// Snapshot times besides the final time.
    pub output_times: Vec<f64>,
}

impl<const N: usize> Scenario<N> {
    pub fn eos(&self) -> Result<Eos> {
        Eos::new(self.gamma)
    }

    pub fn mesh(&self, counts: [usize; N]) -> Result<Mesh<N>> {
        let eos = self.eos()?;
        let mut b = [[Boundary::Outflow; 2]; N];
        for a in 0..N {
            for s in 0..2 {
                b[a][s] = self.boundary[a][s].to_boundary(&eos)?;
            }
        }
        Mesh::new(self.lo, self.hi, counts, b)
    }

    pub fn has_exact(&self) -> bool {
        matches!(self.initial, Initial::Uniform(_) | Initial::Sine { .. })
    }
}

/// A built-in benchmark in one or two dimensions.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyScenario {
    One(Scenario<1>),
    Two(Scenario<2>),
}

impl AnyScenario {
    pub fn name(&self) -> &str {
        match self {
            AnyScenario::One(s) => &s.name,
            AnyScenario::Two(s) => &s.name,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            AnyScenario::One(_) => 1,
            AnyScenario::Two(_) => 2,
        }
    }
}

pub const BUILTIN_NAMES: [&str; 9] = [
    "smooth1d",
    "riemann1d_1",
    "riemann1d_2",
    "smooth2d",
    "shock_bubble",
    "rp2d_1",
    "rp2d_2",
    "jet_cold",
    "jet_hot",
];

fn p1(rho: f64, v: f64, p: f64) -> PrimitiveState<1> {
    PrimitiveState::new(rho, [v], p)
}

fn p2(rho: f64, vx: f64, vy: f64, p: f64) -> PrimitiveState<2> {
    PrimitiveState::new(rho, [vx, vy], p)
}

/// Pressure of a beam with density `rho`, speed `v` and classical Mach number `mach`.
pub fn beam_pressure(rho: f64, v: f64, mach: f64, gamma: f64) -> f64 {
    let cs2 = (v / mach) * (v / mach);
    cs2 * rho * (gamma - 1.0) / (gamma * (gamma - 1.0 - cs2))
}

fn riemann1d(name: &str, left: PrimitiveState<1>, right: PrimitiveState<1>, t_final: f64) -> Scenario<1> {
    Scenario {
        name: name.to_string(),
        lo: [0.0],
        hi: [1.0],
        counts: [400],
        boundary: [[BoundarySpec::Outflow; 2]],
        gamma: 5.0 / 3.0,
        t_final,
        initial: Initial::Riemann {
            interface: 0.5,
            left,
            right,
        },
        output_times: vec![],
    }
}

fn quadrants(name: &str, states: [PrimitiveState<2>; 4]) -> Scenario<2> {
    Scenario {
        name: name.to_string(),
        lo: [-1.0, -1.0],
        hi: [1.0, 1.0],
        counts: [200, 200],
        boundary: [[BoundarySpec::Outflow; 2]; 2],
        gamma: 5.0 / 3.0,
        t_final: 0.8,
        initial: Initial::Quadrants {
            center: [0.0, 0.0],
            states,
        },
        output_times: vec![],
    }
}

fn jet(name: &str, gamma: f64, rho_b: f64, mach: f64, height: f64, counts: [usize; 2], t_final: f64) -> Scenario<2> {
    let v_b = 0.99;
    let p = beam_pressure(rho_b, v_b, mach, gamma);
    Scenario {
        name: name.to_string(),
        lo: [0.0, 0.0],
        hi: [12.0, height],
        counts,
        boundary: [
            [BoundarySpec::Reflective, BoundarySpec::Outflow],
            [
                BoundarySpec::Nozzle {
                    center: 0.0,
                    half_width: 0.5,
                    state: p2(rho_b, 0.0, v_b, p),
                },
                BoundarySpec::Outflow,
            ],
        ],
        gamma,
        t_final,
        initial: Initial::Uniform(p2(1.0, 0.0, 0.0, p)),
        output_times: vec![],
    }
}

/// Built-in scenario by name.
pub fn builtin(name: &str) -> Result<AnyScenario> {
    Ok(match name {
        "smooth1d" => AnyScenario::One(Scenario {
            name: name.to_string(),
            lo: [0.0],
            hi: [1.0],
            counts: [40],
            boundary: [[BoundarySpec::Periodic; 2]],
            gamma: 5.0 / 3.0,
            t_final: 0.2,
            initial: Initial::Sine {
                amplitude: 0.99999,
                velocity: [0.9],
                pressure: 1.0,
            },
            output_times: vec![],
        }),
        "riemann1d_1" => AnyScenario::One(riemann1d(name, p1(0.8, 0.5, 8.0), p1(1.0, 0.0, 1.0), 0.4)),
        "riemann1d_2" => AnyScenario::One(riemann1d(name, p1(1.0, 0.0, 1e4), p1(1.0, 0.0, 1e-8), 0.45)),
        "smooth2d" => {
            let v = 0.99 / core::f64::consts::SQRT_2;
            AnyScenario::Two(Scenario {
                name: name.to_string(),
                lo: [0.0, 0.0],
                hi: [1.0, 1.0],
                counts: [20, 20],
                boundary: [[BoundarySpec::Periodic; 2]; 2],
                gamma: 5.0 / 3.0,
                t_final: 0.2,
                initial: Initial::Sine {
                    amplitude: 0.99999,
                    velocity: [v, v],
                    pressure: 1e-2,
                },
                output_times: vec![],
            })
        }
        "shock_bubble" => {
            let right = p2(1.865225080631180, -0.196781107378299, 0.0, 0.15);
            AnyScenario::Two(Scenario {
                name: name.to_string(),
                lo: [0.0, -45.0],
                hi: [325.0, 45.0],
                counts: [650, 180],
                boundary: [
                    [BoundarySpec::Outflow, BoundarySpec::Inflow(right)],
                    [BoundarySpec::Reflective, BoundarySpec::Reflective],
                ],
                gamma: 5.0 / 3.0,
                t_final: 450.0,
                initial: Initial::ShockBubble {
                    shock: 265.0,
                    left: p2(1.0, 0.0, 0.0, 0.05),
                    right,
                    center: [215.0, 0.0],
                    radius: 25.0,
                    bubble_state: p2(0.1358, 0.0, 0.0, 0.05),
                },
                output_times: vec![90.0, 180.0, 270.0, 360.0],
            })
        }
        "rp2d_1" => AnyScenario::Two(quadrants(
            name,
            [
                p2(0.1, 0.0, 0.0, 20.0),
                p2(0.00414329639576, 0.9946418833556542, 0.0, 0.05),
                p2(0.01, 0.0, 0.0, 0.05),
                p2(0.00414329639576, 0.0, 0.9946418833556542, 0.05),
            ],
        )),
        "rp2d_2" => AnyScenario::Two(quadrants(
            name,
            [
                p2(0.035145216124503, 0.0, 0.0, 0.162931056509027),
                p2(0.1, 0.7, 0.0, 1.0),
                p2(0.5, 0.0, 0.0, 1.0),
                p2(0.1, 0.0, 0.7, 1.0),
            ],
        )),
        "jet_cold" => AnyScenario::Two(jet(name, 5.0 / 3.0, 0.1, 50.0, 25.0, [60, 125], 30.0)),
        "jet_hot" => AnyScenario::Two(jet(name, 4.0 / 3.0, 0.01, 1.72, 30.0, [60, 150], 33.0)),
        _ => return Err(Error::UnknownScenario(name.to_string())),
    })
}

/// Default sampling resolution (cells per axis) of [`entropy_floor`].
pub fn default_floor_resolution(dim: usize) -> usize {
    if dim == 1 {
        4096
    } else {
        512
    }
}

/// `S₀`: the exact minimum over the states of piecewise-constant data, or
/// the minimum over `resolution^N` cells sampled at 5×5 Gauss–Lobatto points.
///
/// Constant states are evaluated after a round trip through the conserved
/// variables, so that they coincide with the discrete values.
pub fn entropy_floor<const N: usize>(sc: &Scenario<N>, resolution: usize, eos: &Eos) -> Result<f64> {
    if let Some(states) = sc.initial.constant_states() {
        let mut m = f64::INFINITY;
        for s in states {
            let v = primitive(&prim_to_cons(&s, eos)?, eos)?;
            m = m.min(entropy_of(&v, eos));
        }
        return Ok(m);
    }
    let gl = Rule::gauss_lobatto(5);
    let h: [f64; N] = core::array::from_fn(|a| (sc.hi[a] - sc.lo[a]) / resolution as f64);
    let per = gl.len().pow(N as u32);
    let total = resolution.pow(N as u32) * per;
    let mut m = f64::INFINITY;
    for l in 0..total {
        let mut r = l;
        let mut x = [0.0; N];
        for a in 0..N {
            let node = r % gl.len();
            r /= gl.len();
            x[a] = sc.lo[a] + h[a] * (0.5 * (gl.nodes[node] + 1.0));
        }
        for a in 0..N {
            let cell = r % resolution;
            r /= resolution;
            x[a] += h[a] * cell as f64;
        }
        let v = sc.initial.eval(&x);
        v.validate()?;
        m = m.min(entropy_of(&v, eos));
    }
    Ok(m)
}

/// Density of a first-order (`k = 0`, forward Euler) run on `refine × cells`
/// cells at `t_final`, averaged back onto `cells` cells. Reference for data
/// without an exact solution.
pub fn first_order_reference(sc: &Scenario<1>, cells: usize, refine: usize, t_final: f64) -> Result<Vec<f64>> {
    let eos = sc.eos()?;
    let fine = cells * refine;
    let op = DgOperator::new(sc.mesh([fine])?, 0, eos, 1.0)?;
    let u0 = op.project_initial(|x| sc.initial.eval(x))?;
    let dt = max_stable_dt(&op.mesh, 0, 1.0, default_cfl(0));
    let scheme = DgScheme {
        op,
        limiter: LimiterConfig::new(LimiterMode::Bp, 0.0),
    };
    let u = integrate(&scheme, Scheme::ForwardEuler, u0, t_final, dt, |_| Ok(()))?;
    let mut out = vec![0.0; cells];
    for (c, a) in u.averages().enumerate() {
        out[c / refine] += primitive(&a, &eos).map_err(|e| e.at_cell(c))?.rho / refine as f64;
    }
    Ok(out)
}

/// Discrete `L¹` and `L²` norms of the rest-mass density error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorNorms {
    pub l1: f64,
    pub l2: f64,
}

/// Density error norms against `exact`, using `k+3` Gauss points per axis
/// and pointwise recovery; normalised by the domain measure.
pub fn error_norms<const N: usize, F>(op: &DgOperator<N>, u: &DgSolution<N>, exact: F) -> Result<ErrorNorms>
where
    F: Fn(&[f64; N]) -> f64,
{
    let all: Vec<usize> = (0..N).collect();
    let g = Rule::gauss(op.degree + 3);
    let q = g.len();
    let total = q.pow(all.len() as u32);
    let mut pts = Vec::with_capacity(total);
    let mut wts = Vec::with_capacity(total);
    for l in 0..total {
        let mut r = l;
        let mut x = [0.0; N];
        let mut w = 1.0;
        for xa in x.iter_mut() {
            *xa = g.nodes[r % q];
            w *= g.weights[r % q];
            r /= q;
        }
        pts.push(x);
        wts.push(w);
    }
    let tab = PointTable::new(&op.modes, pts, wts);
    let (mut l1, mut l2) = (0.0, 0.0);
    let cells = u.n_cells();
    for c in 0..cells {
        for p in 0..tab.len() {
            let w = tab.eval(u.cell(c), p);
            let rho = primitive(&w, &op.eos).map_err(|e| e.at_cell(c))?.rho;
            let err = math::abs(rho - exact(&op.mesh.physical(c, &tab.points[p])));
            l1 += tab.weights[p] * err;
            l2 += tab.weights[p] * err * err;
        }
    }
    let n = cells as f64;
    Ok(ErrorNorms {
        l1: l1 / n,
        l2: math::sqrt(l2 / n),
    })
}

/// One monitoring record: time, minimum of `S` over the decomposition
/// points, minimum of `S` over the cell averages.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SMinRecord {
    pub t: f64,
    pub points: f64,
    pub averages: f64,
}

/// Appends the entropy minima of `u` to `series`.
pub fn record_s_min<const N: usize>(series: &mut Vec<SMinRecord>, op: &DgOperator<N>, u: &DgSolution<N>) {
    let (points, averages) = op.entropy_minima(u);
    series.push(SMinRecord {
        t: u.time,
        points,
        averages,
    });
}

/// Records of a run trace whose values drop below `s0 - slack`: `(points, averages)` counts.
pub fn s_min_violations(series: &[SMinRecord], s0: f64, slack: f64) -> (usize, usize) {
    let p = series.iter().filter(|r| r.points < s0 - slack).count();
    let a = series.iter().filter(|r| r.averages < s0 - slack).count();
    (p, a)
}
