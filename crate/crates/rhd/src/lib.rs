//! Driver for `rhd-core`: run configuration, benchmark execution,
//! convergence studies, the verification battery and output formats.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod converge;
pub mod profile;
pub mod run;
pub mod snapshot;
pub mod verify;

/// Errors surfaced by the driver.
#[derive(Debug, thiserror::Error)]
pub enum DriverError {
    #[error(transparent)]
    Core(#[from] rhd_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("configuration: {0}")]
    Config(String),
    #[error("parse: {0}")]
    Parse(String),
}

impl DriverError {
    /// Process exit status: 1 for configuration problems, 2 for an
    /// average leaving the invariant region, 3 for recovery failures.
    pub fn exit_code(&self) -> i32 {
        use rhd_core::Error as E;
        match self {
            DriverError::Core(e) => match e.root() {
                E::IrpViolation { .. } | E::InvalidAverage { .. } => 2,
                E::Recovery(_) | E::NonConvergence(_) | E::Domain(_) => 3,
                _ => 1,
            },
            DriverError::Io(_) => 4,
            DriverError::Config(_) | DriverError::Parse(_) => 1,
        }
    }
}

/// Source revision the binary was built from.
pub fn revision() -> &'static str {
    env!("RHD_GIT_REV")
}
