use std::path::Path;
use std::process::Command;

use rhd::run::RunSummary;
use rhd::snapshot::{parse_s_min, Table};

fn rhd(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_rhd")).args(args).output().expect("binary runs")
}

fn short_run(dir: &Path) -> std::process::Output {
    rhd(&[
        "run",
        "riemann1d_1",
        "-k",
        "2",
        "-n",
        "64",
        "-t",
        "0.1",
        "--snapshot-interval",
        "0.05",
        "-o",
        dir.to_str().unwrap(),
    ])
}

#[test]
fn run_writes_snapshots_series_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = short_run(dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: RunSummary = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary.cells, vec![64]);
    assert!(summary.irp_verdict);
    let file: RunSummary =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("riemann1d_1_summary.json")).unwrap()).unwrap();
    assert_eq!(file.steps, summary.steps);

    let names = ["riemann1d_1_0000.dat", "riemann1d_1_0001.dat", "riemann1d_1_0002.dat"];
    for n in names {
        assert!(dir.path().join(n).exists(), "{n}");
    }
    let t = Table::read(&dir.path().join(names[2])).unwrap();
    assert_eq!(t.header["k"], "2");
    assert_eq!(t.header["N"], "64");
    assert_eq!(t.header["limiter"], "irp");
    assert_eq!(t.header["t"].parse::<f64>().unwrap(), 0.1);
    assert_eq!(t.rows.len(), 64);
    let rho = t.column("rho").unwrap();
    assert!(rho.iter().all(|r| *r > 0.0));

    let series = parse_s_min(&std::fs::read_to_string(dir.path().join("riemann1d_1_smin.dat")).unwrap()).unwrap();
    assert_eq!(series.len(), summary.steps + 1);
    assert!(series.windows(2).all(|w| w[1].t > w[0].t));
}

#[test]
fn runs_are_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert!(short_run(a.path()).status.success());
    assert!(short_run(b.path()).status.success());
    for n in ["riemann1d_1_0002.dat", "riemann1d_1_smin.dat"] {
        let x = std::fs::read(a.path().join(n)).unwrap();
        let y = std::fs::read(b.path().join(n)).unwrap();
        assert_eq!(x, y, "{n}");
    }
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("tube.cfg");
    std::fs::write(
        &cfg,
        "degree = 1\ncells = 50\nlimiter = bp\n[initial]\nkind = riemann\nleft = 1 0 10\nright = 0.5 0 1\nt_final = 0.1\n",
    )
    .unwrap();
    let out = rhd(&["run", "--config", cfg.to_str().unwrap(), "-n", "30", "--no-monitor"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let s: RunSummary = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(s.scenario, "inline");
    assert_eq!(s.cells, vec![30]);
    assert_eq!(s.degree, 1);
    assert_eq!(s.limiter, "bp");
    assert!(s.s_min_points.is_none());
}

#[test]
fn errors_map_to_exit_codes() {
    assert_eq!(rhd(&["run", "nonexistent"]).status.code(), Some(1));
    assert_eq!(rhd(&["run", "jet_cold"]).status.code(), Some(1));
    assert_eq!(rhd(&["run", "smooth1d", "-k", "5"]).status.code(), Some(1));
    assert_eq!(rhd(&["verify", "--only", "nothing"]).status.code(), Some(1));
}

#[test]
fn converge_and_verify_subcommands() {
    let out = rhd(&["converge", "smooth1d", "-k", "1", "-t", "0.05", "--meshes", "10,20"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);

    let out = rhd(&["verify", "--scale", "0.005", "--seed", "4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.starts_with("PASS")));
    assert_eq!(text.lines().count(), 18);
}
