//! Invariant-region-preserving discontinuous Galerkin schemes for special
//! relativistic hydrodynamics with an ideal equation of state.
//!
//! The crate is `no_std` with `alloc`. Enable the `std` feature (default) for
//! hardware floating point intrinsics through `std`, and `parallel` for
//! rayon-backed residual evaluation.

#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::excessive_precision)]

extern crate alloc;

pub mod dg;
pub mod error;
pub mod flux;
pub mod limiter;
pub mod math;
pub mod mesh;
pub mod quadrature;
pub mod region;
pub mod scenarios;
pub mod state;
pub mod stepper;

pub use error::{Error, Quantity, RecoveryFailure};
pub use region::InvariantRegion;
pub use state::{ConservedState, Eos, PrimitiveState};
