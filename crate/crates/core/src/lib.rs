//! Numerical reproduction of geometric-phase quantum gates built from Zeeman
//! coupling to a rotating field and isotropic Heisenberg exchange.
//!
//! The crate is layered bottom-up:
//!
//! * [`linalg`]: 2 x 2 and 4 x 4 complex matrices, Hermitian eigensolver,
//!   matrix exponential, gate metrics and local invariants.
//! * [`model`]: single- and two-spin Hamiltonians, rotating-frame generators
//!   and analytic eigensystems.
//! * [`evolve`]: closed-form and piecewise-constant propagators, pulse
//!   schedules and adiabatic sweeps.
//! * [`phase`]: total, dynamical and geometric phase bookkeeping.
//! * [`gates`]: gate parameter solvers, geometric gate construction,
//!   factorization audits and the exchange-based hybrid sequence.
//! * [`experiments`] and [`acceptance`]: named, reproducible experiments and
//!   the acceptance checks run by the `geogate` binary.

pub mod acceptance;
pub mod error;
pub mod evolve;
pub mod experiments;
pub mod gates;
pub mod linalg;
pub mod model;
pub mod phase;
pub mod random;
pub mod report;
pub mod sweep;
pub mod tolerances;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, QuantumState, Unitary, C64};
pub use model::{FieldConfig, SpinModel, TwoQubitConfig};

/// Version string recorded in every report.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
