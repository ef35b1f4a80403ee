//! Error types shared by every module.

use alloc::boxed::Box;
use alloc::string::String;

/// Why a conserved state could not be inverted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecoveryFailure {
    /// A component is NaN or infinite.
    NonFinite,
    /// The pressure bracket is invalid, so the state lies outside the admissible set.
    Bracket,
    /// The recovered velocity is superluminal beyond round-off.
    Superluminal,
}

/// Which constraint of the invariant region a cell average violated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    Density,
    Q,
    Entropy,
}

impl core::fmt::Display for Quantity {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Quantity::Density => "density",
            Quantity::Q => "q",
            Quantity::Entropy => "entropy",
        })
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("adiabatic index {0} outside (1, 2]")]
    InvalidGamma(f64),
    #[error("state outside the physical domain: {0}")]
    Domain(&'static str),
    #[error("pressure recovery failed: {0:?}")]
    Recovery(RecoveryFailure),
    #[error("iteration did not converge within {0} iterations")]
    NonConvergence(usize),
    #[error("invalid cell average in cell {cell}: {quantity} constraint")]
    InvalidAverage { cell: usize, quantity: Quantity },
    #[error("normal fan does not close: residual {0:e}")]
    Fan(f64),
    #[error("cell {cell} average left the invariant region ({quantity} = {value:e})")]
    IrpViolation {
        cell: usize,
        quantity: Quantity,
        value: f64,
    },
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cell {cell}: {source}")]
    AtCell { cell: usize, source: Box<Error> },
    #[error("t = {time}: {source}")]
    AtTime { time: f64, source: Box<Error> },
}

impl Error {
    pub fn at_cell(self, cell: usize) -> Self {
        match self {
            e @ (Error::AtCell { .. } | Error::InvalidAverage { .. } | Error::IrpViolation { .. }) => e,
            e => Error::AtCell {
                cell,
                source: Box::new(e),
            },
        }
    }

    pub fn at_time(self, time: f64) -> Self {
        Error::AtTime {
            time,
            source: Box::new(self),
        }
    }

    /// The innermost error with location wrappers removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtCell { source, .. } | Error::AtTime { source, .. } => source.root(),
            e => e,
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
