//! Plain-text snapshot and S_min(t) tables.
//!
//! A snapshot holds one row per cell with the cell centre, the conserved
//! cell average, the recovered primitives and `S`. Floats are written in
//! the shortest form that parses back to the same value.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rhd_core::dg::{DgOperator, DgSolution};
use rhd_core::region::entropy_of;
use rhd_core::scenarios::SMinRecord;
use rhd_core::state::{primitive, ConservedState};

use crate::DriverError;

/// Run metadata stored in the header line.
#[derive(Clone, Debug, PartialEq)]
pub struct Meta {
    pub degree: usize,
    pub counts: Vec<usize>,
    pub time: f64,
    pub gamma: f64,
    pub scheme: String,
    pub limiter: String,
    pub revision: String,
}

impl Meta {
    fn header(&self) -> String {
        let n: Vec<String> = self.counts.iter().map(|c| c.to_string()).collect();
        format!(
            "# k={} N={} t={} gamma={} scheme={} limiter={} rev={}",
            self.degree,
            n.join("x"),
            self.time,
            self.gamma,
            self.scheme,
            self.limiter,
            self.revision
        )
    }
}

pub fn columns(dim: usize) -> Vec<String> {
    let axes = ["x", "y", "z"];
    let mut c: Vec<String> = axes[..dim].iter().map(|s| s.to_string()).collect();
    c.push("D".into());
    c.extend((1..=dim).map(|i| format!("m{i}")));
    c.push("E".into());
    c.push("rho".into());
    c.extend((1..=dim).map(|i| format!("v{i}")));
    c.push("p".into());
    c.push("S".into());
    c
}

/// Renders the cell averages of `u`.
pub fn render<const N: usize>(op: &DgOperator<N>, u: &DgSolution<N>, meta: &Meta) -> String {
    let mut out = String::new();
    out.push_str(&meta.header());
    out.push('\n');
    out.push_str("# ");
    out.push_str(&columns(N).join(" "));
    out.push('\n');
    for c in 0..u.n_cells() {
        let a = u.average(c);
        let x = op.mesh.cell_center(c);
        let mut row: Vec<f64> = x.to_vec();
        row.extend((0..N + 2).map(|i| a.get(i)));
        match primitive(&a, &op.eos) {
            Ok(v) => {
                row.push(v.rho);
                row.extend(v.v);
                row.push(v.p);
                row.push(entropy_of(&v, &op.eos));
            }
            Err(_) => row.extend(std::iter::repeat_n(f64::NAN, N + 3)),
        }
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

pub fn write<const N: usize>(path: &Path, op: &DgOperator<N>, u: &DgSolution<N>, meta: &Meta) -> Result<(), DriverError> {
    std::fs::write(path, render(op, u, meta))?;
    Ok(())
}

/// A parsed snapshot table.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn parse(text: &str) -> Result<Self, DriverError> {
        let bad = |m: &str| DriverError::Parse(m.to_string());
        let mut lines = text.lines();
        let head = lines.next().ok_or_else(|| bad("empty snapshot"))?;
        let head = head.strip_prefix("# ").ok_or_else(|| bad("missing header line"))?;
        let mut header = BTreeMap::new();
        for kv in head.split_whitespace() {
            let (k, v) = kv.split_once('=').ok_or_else(|| bad("malformed header field"))?;
            header.insert(k.to_string(), v.to_string());
        }
        let cols = lines.next().and_then(|l| l.strip_prefix("# ")).ok_or_else(|| bad("missing column line"))?;
        let columns: Vec<String> = cols.split_whitespace().map(String::from).collect();
        let mut rows = Vec::new();
        for l in lines.filter(|l| !l.trim().is_empty()) {
            let r: Result<Vec<f64>, _> = l.split_whitespace().map(str::parse::<f64>).collect();
            let r = r.map_err(|_| bad("non-numeric entry"))?;
            if r.len() != columns.len() {
                return Err(bad("row length does not match the columns"));
            }
            rows.push(r);
        }
        Ok(Self { header, columns, rows })
    }

    pub fn read(path: &Path) -> Result<Self, DriverError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Conserved cell averages stored in the table.
    pub fn averages<const N: usize>(&self) -> Option<Vec<ConservedState<N>>> {
        let d = self.column("D")?;
        let e = self.column("E")?;
        let m: Option<Vec<Vec<f64>>> = (1..=N).map(|i| self.column(&format!("m{i}"))).collect();
        let m = m?;
        Some(
            (0..d.len())
                .map(|r| ConservedState::new(d[r], core::array::from_fn(|a| m[a][r]), e[r]))
                .collect(),
        )
    }
}

pub fn render_s_min(series: &[SMinRecord]) -> String {
    let mut out = String::from("# t S_min_points S_min_averages\n");
    for r in series {
        let _ = writeln!(out, "{} {} {}", r.t, r.points, r.averages);
    }
    out
}

pub fn parse_s_min(text: &str) -> Result<Vec<SMinRecord>, DriverError> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let v: Result<Vec<f64>, _> = l.split_whitespace().map(str::parse::<f64>).collect();
            match v.as_deref() {
                Ok([t, p, a]) => Ok(SMinRecord {
                    t: *t,
                    points: *p,
                    averages: *a,
                }),
                _ => Err(DriverError::Parse(format!("bad S_min row {l:?}"))),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rhd_core::mesh::{Boundary, Mesh};
    use rhd_core::state::{Eos, PrimitiveState};

    #[test]
    fn snapshot_round_trips_averages() {
        let mesh = Mesh::uniform_boundary([0.0, 0.0], [1.0, 2.0], [3, 2], Boundary::Outflow).unwrap();
        let op = DgOperator::new(mesh, 1, Eos::default(), 1.0).unwrap();
        let u = op
            .project_initial(|x| PrimitiveState::new(1.0 + 0.3 * x[0], [0.1 * x[1], -0.2], 0.7 + x[0] * x[1]))
            .unwrap();
        let meta = Meta {
            degree: 1,
            counts: vec![3, 2],
            time: 0.1,
            gamma: 5.0 / 3.0,
            scheme: "ssprk3".into(),
            limiter: "irp".into(),
            revision: "abc".into(),
        };
        let t = Table::parse(&render(&op, &u, &meta)).unwrap();
        assert_eq!(t.header["N"], "3x2");
        assert_eq!(t.header["gamma"].parse::<f64>().unwrap(), 5.0 / 3.0);
        assert_eq!(t.columns, columns(2));
        let back: Vec<ConservedState<2>> = t.averages().unwrap();
        let orig: Vec<_> = u.averages().collect();
        assert_eq!(back, orig);
    }

    #[test]
    fn s_min_round_trip() {
        let s = vec![
            SMinRecord {
                t: 0.0,
                points: -0.1,
                averages: 1.0 / 3.0,
            },
            SMinRecord {
                t: 0.25,
                points: f64::MIN_POSITIVE,
                averages: 2.0,
            },
        ];
        assert_eq!(parse_s_min(&render_s_min(&s)).unwrap(), s);
    }
}
