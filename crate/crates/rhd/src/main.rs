use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rhd::config::{parse_counts, parse_limiter, parse_scheme, Problem, RunConfig};
use rhd::verify::{self, VerifyOptions};
use rhd::{converge, run, DriverError};
use rhd_core::limiter::LimiterMode;
use rhd_core::stepper::Scheme;

#[derive(Parser)]
#[command(name = "rhd", version, about = "Invariant-region-preserving DG solver for relativistic hydrodynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write snapshots and a summary.
    Run(RunArgs),
    /// Tabulate L1/L2 density errors over a sequence of meshes.
    Converge {
        #[command(flatten)]
        args: RunArgs,
        /// Cell counts, e.g. 40,80,160.
        #[arg(long, value_parser = counts, default_value = "40,80,160,320")]
        meshes: Counts,
    },
    /// Randomised checks of the invariant-region theory.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Multiplier on the default sample counts.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        /// Run a single check by name.
        #[arg(long)]
        only: Option<String>,
    },
    /// List the built-in scenarios.
    List,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Built-in scenario name.
    scenario: Option<String>,
    /// Configuration file; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(short = 'k', long)]
    degree: Option<usize>,
    /// Cell counts, `N` or `NxM`.
    #[arg(short = 'n', long, value_parser = counts)]
    cells: Option<Counts>,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    /// Δt = COEFF·Δx^EXP, given as COEFF,EXP.
    #[arg(long, value_parser = parse_law)]
    dt_law: Option<(f64, f64)>,
    #[arg(short = 't', long)]
    t_final: Option<f64>,
    #[arg(long, value_parser = parse_limiter)]
    limiter: Option<LimiterMode>,
    #[arg(long, value_parser = parse_scheme)]
    scheme: Option<Scheme>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(short = 'o', long)]
    output_dir: Option<PathBuf>,
    #[arg(long)]
    snapshot_interval: Option<f64>,
    /// Skip the S_min(t) monitor.
    #[arg(long)]
    no_monitor: bool,
    /// Allow the optional scenarios.
    #[arg(long)]
    optional: bool,
}

#[derive(Clone, Debug)]
struct Counts(Vec<usize>);

fn counts(v: &str) -> Result<Counts, String> {
    parse_counts(v).map(Counts)
}

fn parse_law(v: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = v.split(',').collect();
    match parts.as_slice() {
        [c, e] => Ok((
            c.trim().parse().map_err(|_| format!("bad coefficient {c:?}"))?,
            e.trim().parse().map_err(|_| format!("bad exponent {e:?}"))?,
        )),
        _ => Err(format!("expected COEFF,EXP, got {v:?}")),
    }
}

impl RunArgs {
    fn config(&self) -> Result<RunConfig, DriverError> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::parse(&std::fs::read_to_string(p)?)?,
            None => RunConfig::default(),
        };
        if let Some(s) = &self.scenario {
            cfg.problem = Problem::Builtin(s.clone());
        }
        macro_rules! set {
            ($($f:ident),*) => {$(if let Some(v) = self.$f.clone() { cfg.$f = v; })*};
        }
        macro_rules! set_opt {
            ($($f:ident),*) => {$(if self.$f.is_some() { cfg.$f = self.$f.clone(); })*};
        }
        set!(degree, limiter, scheme, alpha);
        set_opt!(cfl, dt, dt_law, t_final, gamma, output_dir, snapshot_interval);
        if let Some(c) = &self.cells {
            cfg.cells = Some(c.0.clone());
        }
        if self.no_monitor {
            cfg.monitor = false;
        }
        cfg.optional |= self.optional;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("RHD_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn execute(cli: Cli) -> Result<bool, DriverError> {
    match cli.command {
        Command::Run(args) => {
            let out = run::run(&args.config()?)?;
            let text = serde_json::to_string_pretty(out.summary()).map_err(|e| DriverError::Parse(e.to_string()))?;
            println!("{text}");
            Ok(true)
        }
        Command::Converge { args, meshes } => {
            let rows = converge::study(&args.config()?, &meshes.0)?;
            print!("{}", converge::render(&rows));
            Ok(true)
        }
        Command::Verify { seed, scale, only } => {
            let opts = VerifyOptions { seed, scale, only };
            if let Some(name) = &opts.only {
                if !verify::CHECK_NAMES.contains(&name.as_str()) {
                    return Err(DriverError::Config(format!(
                        "unknown check {name:?}; available: {}",
                        verify::CHECK_NAMES.join(", ")
                    )));
                }
            }
            let report = verify::battery(&opts);
            for c in &report {
                println!("{c}");
            }
            Ok(report.iter().all(|c| c.passed))
        }
        Command::List => {
            for name in rhd_core::scenarios::BUILTIN_NAMES {
                println!("{name}");
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(5),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
