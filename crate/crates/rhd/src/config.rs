//! Run configuration: `key = value` lines with optional `[run]` and
//! `[initial]` sections. Unknown keys are errors.
//!
//! ```text
//! # a shock tube
//! degree = 2
//! cells = 200
//! limiter = irp
//! [initial]
//! kind = riemann
//! left = 1.0 0.0 1000.0
//! right = 1.0 0.0 0.01
//! ```

use std::path::PathBuf;

use rhd_core::limiter::LimiterMode;
use rhd_core::stepper::Scheme;

use crate::DriverError;

/// Inline initial data. States are `rho v.. p`; the number of velocity
/// components fixes the dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct InlineInitial {
    pub kind: InlineKind,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    pub interface: f64,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub boundary: String,
    pub t_final: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InlineKind {
    Riemann,
    Uniform,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Problem {
    Builtin(String),
    Inline(InlineInitial),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub problem: Problem,
    pub degree: usize,
    pub cells: Option<Vec<usize>>,
    pub cfl: Option<f64>,
    pub dt: Option<f64>,
    /// `Δt = dt_coeff · Δx^dt_exponent`.
    pub dt_law: Option<(f64, f64)>,
    pub t_final: Option<f64>,
    pub limiter: LimiterMode,
    pub scheme: Scheme,
    pub gamma: Option<f64>,
    pub alpha: f64,
    pub output_dir: Option<PathBuf>,
    /// Snapshot cadence in simulation time; final snapshot always written.
    pub snapshot_interval: Option<f64>,
    pub monitor: bool,
    pub seed: u64,
    /// Enables the reduced-resolution jet scenarios.
    pub optional: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            problem: Problem::Builtin("smooth1d".into()),
            degree: 2,
            cells: None,
            cfl: None,
            dt: None,
            dt_law: None,
            t_final: None,
            limiter: LimiterMode::Irp,
            scheme: Scheme::SspRk3,
            gamma: None,
            alpha: 1.0,
            output_dir: None,
            snapshot_interval: None,
            monitor: true,
            seed: 0,
            optional: false,
        }
    }
}

fn err(line: usize, msg: impl std::fmt::Display) -> DriverError {
    DriverError::Config(format!("line {line}: {msg}"))
}

fn num(line: usize, v: &str) -> Result<f64, DriverError> {
    v.trim().parse::<f64>().map_err(|_| err(line, format!("not a number: {v:?}")))
}

fn nums(line: usize, v: &str) -> Result<Vec<f64>, DriverError> {
    v.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| num(line, s))
        .collect()
}

pub fn parse_counts(v: &str) -> Result<Vec<usize>, String> {
    let out: Result<Vec<usize>, _> = v
        .split(|c: char| c == ',' || c == 'x' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>())
        .collect();
    match out {
        Ok(c) if !c.is_empty() && c.iter().all(|&n| n >= 1) => Ok(c),
        _ => Err(format!("invalid cell counts: {v:?}")),
    }
}

fn boolean(line: usize, v: &str) -> Result<bool, DriverError> {
    match v {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(err(line, format!("not a boolean: {v:?}"))),
    }
}

pub fn parse_limiter(v: &str) -> Result<LimiterMode, String> {
    LimiterMode::parse(v).ok_or_else(|| format!("unknown limiter {v:?} (none, bp, irp, irp_qtilde)"))
}

pub fn parse_scheme(v: &str) -> Result<Scheme, String> {
    Scheme::parse(v).ok_or_else(|| format!("unknown scheme {v:?} (fe, ssprk3, sspms3)"))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, DriverError> {
        let mut cfg = RunConfig::default();
        let mut section = "run".to_string();
        let mut inline: Option<InlineInitial> = None;
        let mut coeff = None;
        let mut exponent = None;
        for (i, raw) in text.lines().enumerate() {
            let n = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest.strip_suffix(']').ok_or_else(|| err(n, "unterminated section header"))?;
                section = name.trim().to_string();
                match section.as_str() {
                    "run" => {}
                    "initial" => {
                        inline.get_or_insert_with(|| InlineInitial {
                            kind: InlineKind::Riemann,
                            left: vec![],
                            right: vec![],
                            interface: 0.5,
                            lo: vec![0.0],
                            hi: vec![1.0],
                            boundary: "outflow".into(),
                            t_final: 0.4,
                        });
                    }
                    _ => return Err(err(n, format!("unknown section [{section}]"))),
                }
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| err(n, "expected key = value"))?;
            let (k, v) = (k.trim(), v.trim());
            if section == "initial" {
                let ic = inline.as_mut().expect("section opened");
                match k {
                    "kind" => {
                        ic.kind = match v {
                            "riemann" => InlineKind::Riemann,
                            "uniform" => InlineKind::Uniform,
                            _ => return Err(err(n, format!("unknown initial kind {v:?}"))),
                        }
                    }
                    "left" | "state" => ic.left = nums(n, v)?,
                    "right" => ic.right = nums(n, v)?,
                    "interface" => ic.interface = num(n, v)?,
                    "lo" => ic.lo = nums(n, v)?,
                    "hi" => ic.hi = nums(n, v)?,
                    "boundary" => ic.boundary = v.to_string(),
                    "t_final" => ic.t_final = num(n, v)?,
                    _ => return Err(err(n, format!("unknown key {k:?} in [initial]"))),
                }
                continue;
            }
            match k {
                "scenario" => cfg.problem = Problem::Builtin(v.to_string()),
                "degree" => {
                    cfg.degree = v.parse().map_err(|_| err(n, format!("invalid degree {v:?}")))?;
                }
                "cells" => cfg.cells = Some(parse_counts(v).map_err(|e| err(n, e))?),
                "cfl" => cfg.cfl = Some(num(n, v)?),
                "dt" => cfg.dt = Some(num(n, v)?),
                "dt_coeff" => coeff = Some(num(n, v)?),
                "dt_exponent" => exponent = Some(num(n, v)?),
                "t_final" => cfg.t_final = Some(num(n, v)?),
                "limiter" => cfg.limiter = parse_limiter(v).map_err(|e| err(n, e))?,
                "scheme" => cfg.scheme = parse_scheme(v).map_err(|e| err(n, e))?,
                "gamma" => cfg.gamma = Some(num(n, v)?),
                "alpha" => cfg.alpha = num(n, v)?,
                "output_dir" => cfg.output_dir = Some(PathBuf::from(v)),
                "snapshot_interval" => cfg.snapshot_interval = Some(num(n, v)?),
                "monitor" => cfg.monitor = boolean(n, v)?,
                "seed" => cfg.seed = v.parse().map_err(|_| err(n, format!("invalid seed {v:?}")))?,
                "optional" => cfg.optional = boolean(n, v)?,
                _ => return Err(err(n, format!("unknown key {k:?}"))),
            }
        }
        match (coeff, exponent) {
            (Some(c), Some(e)) => cfg.dt_law = Some((c, e)),
            (None, None) => {}
            _ => return Err(DriverError::Config("dt_coeff and dt_exponent must be given together".into())),
        }
        if let Some(ic) = inline {
            cfg.problem = Problem::Inline(ic);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), DriverError> {
        let bad = |m: &str| Err(DriverError::Config(m.to_string()));
        if self.degree > 3 {
            return bad("degree must be 0, 1, 2 or 3");
        }
        if let Some(c) = &self.cells {
            if c.is_empty() || c.contains(&0) {
                return bad("cell counts must be positive");
            }
        }
        for (name, v) in [("cfl", self.cfl), ("dt", self.dt), ("t_final", self.t_final)] {
            if let Some(x) = v {
                if !(x > 0.0 && x.is_finite()) {
                    return Err(DriverError::Config(format!("{name} must be positive")));
                }
            }
        }
        if let Some((c, e)) = self.dt_law {
            if !(c > 0.0) || !e.is_finite() {
                return bad("dt law needs a positive coefficient");
            }
        }
        if !(self.alpha >= 1.0) {
            return bad("alpha must be at least 1");
        }
        if let Some(s) = self.snapshot_interval {
            if !(s > 0.0) {
                return bad("snapshot_interval must be positive");
            }
        }
        if let Problem::Inline(ic) = &self.problem {
            let len = ic.left.len();
            if !(len == 3 || len == 4) {
                return bad("inline states are `rho v p` (1D) or `rho vx vy p` (2D)");
            }
            if ic.kind == InlineKind::Riemann && ic.right.len() != len {
                return bad("left and right states must have the same length");
            }
            let dim = len - 2;
            if ic.lo.len() != dim || ic.hi.len() != dim {
                return bad("lo and hi must have one entry per dimension");
            }
            if !matches!(ic.boundary.as_str(), "outflow" | "periodic" | "reflective") {
                return bad("boundary must be outflow, periodic or reflective");
            }
        }
        Ok(())
    }
}
