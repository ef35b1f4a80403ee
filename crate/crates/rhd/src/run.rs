//! Scenario execution: projection, limiting, time stepping, monitoring and
//! output.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use rhd_core::dg::{default_cfl, max_stable_dt, DgOperator, DgSolution};
use rhd_core::limiter::{irp_limit, LimiterConfig, LimiterMode};
use rhd_core::scenarios::{
    builtin, default_floor_resolution, entropy_floor, error_norms, record_s_min, AnyScenario, BoundarySpec, Initial,
    SMinRecord, Scenario,
};
use rhd_core::state::PrimitiveState;
use rhd_core::stepper::{check_averages, integrate, DgScheme, Scheme};

use crate::config::{InlineKind, Problem, RunConfig};
use crate::snapshot::{self, Meta};
use crate::{revision, DriverError};

/// Machine-readable record of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub scenario: String,
    pub dim: usize,
    pub degree: usize,
    pub cells: Vec<usize>,
    pub gamma: f64,
    pub scheme: String,
    pub limiter: String,
    pub t_final: f64,
    pub dt: f64,
    pub steps: usize,
    pub s0: f64,
    pub l1: Option<f64>,
    pub l2: Option<f64>,
    /// `(min, max)` of the point-value series.
    pub s_min_points: Option<(f64, f64)>,
    /// `(min, max)` of the cell-average series.
    pub s_min_averages: Option<(f64, f64)>,
    /// Largest `S₀ - S_min` over the point-value series; positive means an excursion below the floor.
    pub max_deficit: Option<f64>,
    /// Largest `S₀ - S - slack` over monitored points and averages; the
    /// slack covers the round-off of `S` in cold states.
    pub max_excess: Option<f64>,
    /// No monitored point or average below `S₀` beyond slack.
    pub irp_verdict: bool,
    pub wall_seconds: f64,
    pub revision: String,
}

/// Full result of a run in `N` dimensions.
#[derive(Clone, Debug)]
pub struct RunResult<const N: usize> {
    pub summary: RunSummary,
    pub op: DgOperator<N>,
    pub solution: DgSolution<N>,
    pub series: Vec<SMinRecord>,
}

#[derive(Clone, Debug)]
pub enum RunOutcome {
    One(RunResult<1>),
    Two(RunResult<2>),
}

impl RunOutcome {
    pub fn summary(&self) -> &RunSummary {
        match self {
            RunOutcome::One(r) => &r.summary,
            RunOutcome::Two(r) => &r.summary,
        }
    }

    pub fn series(&self) -> &[SMinRecord] {
        match self {
            RunOutcome::One(r) => &r.series,
            RunOutcome::Two(r) => &r.series,
        }
    }
}

const OPTIONAL: [&str; 2] = ["jet_cold", "jet_hot"];

fn inline_scenario<const N: usize>(ic: &crate::config::InlineInitial) -> Result<Scenario<N>, DriverError> {
    let state = |v: &[f64]| PrimitiveState::new(v[0], core::array::from_fn(|a| v[1 + a]), v[N + 1]);
    let b = match ic.boundary.as_str() {
        "periodic" => BoundarySpec::Periodic,
        "reflective" => BoundarySpec::Reflective,
        _ => BoundarySpec::Outflow,
    };
    let initial = match ic.kind {
        InlineKind::Uniform => Initial::Uniform(state(&ic.left)),
        InlineKind::Riemann => Initial::Riemann {
            interface: ic.interface,
            left: state(&ic.left),
            right: state(&ic.right),
        },
    };
    Ok(Scenario {
        name: "inline".into(),
        lo: core::array::from_fn(|a| ic.lo[a]),
        hi: core::array::from_fn(|a| ic.hi[a]),
        counts: [100; N],
        boundary: [[b; 2]; N],
        gamma: 5.0 / 3.0,
        t_final: ic.t_final,
        initial,
        output_times: vec![],
    })
}

/// The scenario named or described by `cfg`.
pub fn resolve(cfg: &RunConfig) -> Result<AnyScenario, DriverError> {
    match &cfg.problem {
        Problem::Builtin(name) => {
            if OPTIONAL.contains(&name.as_str()) && !cfg.optional {
                return Err(DriverError::Config(format!("{name} is an optional scenario; pass --optional")));
            }
            Ok(builtin(name)?)
        }
        Problem::Inline(ic) => Ok(if ic.left.len() == 3 {
            AnyScenario::One(inline_scenario(ic)?)
        } else {
            AnyScenario::Two(inline_scenario(ic)?)
        }),
    }
}

/// Step size for `cfg` on `op`: explicit, a power law in `Δx`, or the CFL
/// bound scaled by the scheme's fraction.
pub fn step_size<const N: usize>(cfg: &RunConfig, op: &DgOperator<N>) -> f64 {
    if let Some(dt) = cfg.dt {
        return dt;
    }
    let dx = op.mesh.spacings().into_iter().fold(f64::INFINITY, f64::min);
    if let Some((c, e)) = cfg.dt_law {
        return c * dx.powf(e);
    }
    let cfl = cfg.cfl.unwrap_or_else(|| default_cfl(cfg.degree));
    cfg.scheme.cfl_fraction() * max_stable_dt(&op.mesh, cfg.degree, cfg.alpha, cfl)
}

fn output_targets(t0: f64, t_final: f64, interval: Option<f64>, extra: &[f64]) -> Vec<f64> {
    let mut t: Vec<f64> = extra.iter().copied().filter(|&x| x > t0 && x < t_final).collect();
    if let Some(dt) = interval {
        let mut k = 1.0;
        while t0 + k * dt < t_final * (1.0 - 1e-12) {
            t.push(t0 + k * dt);
            k += 1.0;
        }
    }
    t.push(t_final);
    t.sort_by(f64::total_cmp);
    t.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * t_final.abs().max(1.0));
    t
}

fn series_range(series: &[SMinRecord], f: impl Fn(&SMinRecord) -> f64) -> Option<(f64, f64)> {
    if series.is_empty() {
        return None;
    }
    let lo = series.iter().map(&f).fold(f64::INFINITY, f64::min);
    let hi = series.iter().map(&f).fold(f64::NEG_INFINITY, f64::max);
    Some((lo, hi))
}

fn snapshot_path(dir: &Path, name: &str, index: usize) -> PathBuf {
    dir.join(format!("{name}_{index:04}.dat"))
}

/// Runs `sc` with the settings of `cfg`.
pub fn execute<const N: usize>(mut sc: Scenario<N>, cfg: &RunConfig) -> Result<RunResult<N>, DriverError> {
    let start = Instant::now();
    if let Some(g) = cfg.gamma {
        sc.gamma = g;
    }
    if let Some(t) = cfg.t_final {
        sc.t_final = t;
    }
    let counts: [usize; N] = match &cfg.cells {
        None => sc.counts,
        Some(c) if c.len() == 1 => [c[0]; N],
        Some(c) if c.len() == N => core::array::from_fn(|a| c[a]),
        Some(_) => return Err(DriverError::Config(format!("cells needs 1 or {N} entries"))),
    };
    let eos = sc.eos()?;
    let op = DgOperator::new(sc.mesh(counts)?, cfg.degree, eos, cfg.alpha)?;
    let s0 = entropy_floor(&sc, default_floor_resolution(N), &eos)?;
    let limiter = LimiterConfig::new(cfg.limiter, s0);
    let mut u = op.project_initial(|x| sc.initial.eval(x))?;
    irp_limit(&mut u, &op, &limiter)?;
    check_averages(&u, &op, &limiter)?;
    let dt = step_size(cfg, &op);
    let scheme = DgScheme { op, limiter };
    let mut series = Vec::new();
    let mut excess = f64::NEG_INFINITY;
    if cfg.monitor {
        record_s_min(&mut series, &scheme.op, &u);
        excess = scheme.op.entropy_excess(&u, s0);
    }
    let meta = |t: f64| Meta {
        degree: cfg.degree,
        counts: counts.to_vec(),
        time: t,
        gamma: sc.gamma,
        scheme: cfg.scheme.name().into(),
        limiter: cfg.limiter.name().into(),
        revision: revision().into(),
    };
    if let Some(dir) = &cfg.output_dir {
        std::fs::create_dir_all(dir)?;
        snapshot::write(&snapshot_path(dir, &sc.name, 0), &scheme.op, &u, &meta(u.time))?;
    }
    let mut steps = 0;
    let targets = output_targets(u.time, sc.t_final, cfg.snapshot_interval, &sc.output_times);
    for (i, &target) in targets.iter().enumerate() {
        let monitor = |v: &DgSolution<N>| {
            steps += 1;
            if cfg.monitor {
                record_s_min(&mut series, &scheme.op, v);
                excess = excess.max(scheme.op.entropy_excess(v, s0));
            }
            Ok(())
        };
        u = integrate(&scheme, cfg.scheme, u, target, dt, monitor)?;
        if let Some(dir) = &cfg.output_dir {
            snapshot::write(&snapshot_path(dir, &sc.name, i + 1), &scheme.op, &u, &meta(u.time))?;
        }
    }
    let (l1, l2) = if sc.has_exact() {
        let e = error_norms(&scheme.op, &u, |x| sc.initial.exact(x, u.time).map_or(f64::NAN, |v| v.rho))?;
        (Some(e.l1), Some(e.l2))
    } else {
        (None, None)
    };
    let max_excess = cfg.monitor.then_some(excess);
    let summary = RunSummary {
        scenario: sc.name.clone(),
        dim: N,
        degree: cfg.degree,
        cells: counts.to_vec(),
        gamma: sc.gamma,
        scheme: cfg.scheme.name().into(),
        limiter: cfg.limiter.name().into(),
        t_final: u.time,
        dt,
        steps,
        s0,
        l1,
        l2,
        s_min_points: series_range(&series, |r| r.points),
        s_min_averages: series_range(&series, |r| r.averages),
        max_deficit: series_range(&series, |r| s0 - r.points).map(|r| r.1),
        max_excess,
        irp_verdict: !(excess > 0.0),
        wall_seconds: start.elapsed().as_secs_f64(),
        revision: revision().into(),
    };
    if let Some(dir) = &cfg.output_dir {
        if cfg.monitor {
            std::fs::write(dir.join(format!("{}_smin.dat", sc.name)), snapshot::render_s_min(&series))?;
        }
        std::fs::write(
            dir.join(format!("{}_summary.json", sc.name)),
            serde_json::to_string_pretty(&summary).map_err(|e| DriverError::Parse(e.to_string()))?,
        )?;
    }
    Ok(RunResult {
        summary,
        op: scheme.op,
        solution: u,
        series,
    })
}

pub fn run(cfg: &RunConfig) -> Result<RunOutcome, DriverError> {
    cfg.validate()?;
    match resolve(cfg)? {
        AnyScenario::One(sc) => Ok(RunOutcome::One(execute(sc, cfg)?)),
        AnyScenario::Two(sc) => Ok(RunOutcome::Two(execute(sc, cfg)?)),
    }
}

/// Runs `cfg` and a twin differing only in the limiter mode.
pub fn twin(cfg: &RunConfig, other: LimiterMode) -> Result<(RunOutcome, RunOutcome), DriverError> {
    let a = run(cfg)?;
    let b = run(&RunConfig {
        limiter: other,
        ..cfg.clone()
    })?;
    Ok((a, b))
}

/// Scheme used by [`twin`] and the acceptance runs when none is given.
pub fn scheme_or_default(s: Option<Scheme>) -> Scheme {
    s.unwrap_or(Scheme::SspRk3)
}
