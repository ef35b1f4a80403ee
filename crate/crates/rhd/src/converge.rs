//! Mesh-refinement studies against exact solutions.

use std::fmt::Write as _;

use serde::Serialize;

use crate::config::RunConfig;
use crate::run::run;
use crate::DriverError;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub cells: usize,
    pub l1: f64,
    pub l1_order: Option<f64>,
    pub l2: f64,
    pub l2_order: Option<f64>,
    pub wall_seconds: f64,
}

/// `log2(e_coarse / e_fine)` for meshes refined by `ratio`.
pub fn order(coarse: f64, fine: f64, ratio: f64) -> f64 {
    (coarse / fine).ln() / ratio.ln()
}

/// Runs `base` at each cell count and tabulates density errors.
pub fn study(base: &RunConfig, counts: &[usize]) -> Result<Vec<ConvergenceRow>, DriverError> {
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(counts.len());
    for &n in counts {
        let cfg = RunConfig {
            cells: Some(vec![n]),
            monitor: false,
            output_dir: None,
            ..base.clone()
        };
        let out = run(&cfg)?;
        let s = out.summary();
        let (l1, l2) = match (s.l1, s.l2) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(DriverError::Config(format!("{} has no exact solution", s.scenario))),
        };
        let (l1_order, l2_order) = match rows.last() {
            Some(prev) => {
                let r = n as f64 / prev.cells as f64;
                (Some(order(prev.l1, l1, r)), Some(order(prev.l2, l2, r)))
            }
            None => (None, None),
        };
        rows.push(ConvergenceRow {
            cells: n,
            l1,
            l1_order,
            l2,
            l2_order,
            wall_seconds: s.wall_seconds,
        });
    }
    Ok(rows)
}

pub fn render(rows: &[ConvergenceRow]) -> String {
    let fmt = |o: Option<f64>| o.map_or("-".to_string(), |v| format!("{v:.3}"));
    let mut out = format!("{:>6} {:>12} {:>7} {:>12} {:>7}\n", "N", "L1", "order", "L2", "order");
    for r in rows {
        let _ = writeln!(
            out,
            "{:>6} {:>12.4e} {:>7} {:>12.4e} {:>7}",
            r.cells,
            r.l1,
            fmt(r.l1_order),
            r.l2,
            fmt(r.l2_order)
        );
    }
    out
}
