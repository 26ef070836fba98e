//! Numerical thresholds shared by the library, the CLI and the acceptance
//! suite. Acceptance thresholds live next to their checks.

use serde::{Deserialize, Serialize};

/// Maximum ||U^dagger U - I||_F accepted when constructing a [`crate::Unitary`].
pub const UNITARITY: f64 = 1e-10;
/// Maximum ||H - H^dagger||_F accepted for an exponentiated generator.
pub const HERMITICITY: f64 = 1e-10;
/// Allowed deviation of a state norm from one.
pub const NORMALIZATION: f64 = 1e-12;
/// Eigen-equation residual and orthonormality of analytic eigensystems.
pub const EIGEN_RESIDUAL: f64 = 1e-10;
/// Smallest instantaneous gap treated as open.
pub const MIN_GAP: f64 = 1e-9;
/// Maximum 1 - |<psi(0)|psi(T)>| for a trajectory to count as cyclic.
pub const CYCLICITY: f64 = 1e-6;
/// Diagonal two-qubit phase defect below which a gate factorizes.
pub const FACTORIZATION: f64 = 1e-8;
/// Residual allowed on solved field-parameter conditions.
pub const SOLVER_RESIDUAL: f64 = 1e-10;

/// Minimum steps per segment for the piecewise-constant integrator.
pub const MIN_STEPS_PER_SEGMENT: usize = 100;
/// Default steps per segment for the piecewise-constant integrator.
pub const DEFAULT_STEPS_PER_SEGMENT: usize = 20_000;
/// Minimum loop discretization for the Berry-connection evaluation.
pub const MIN_BERRY_GRID: usize = 1000;
/// Default loop discretization for the Berry-connection evaluation.
pub const DEFAULT_BERRY_GRID: usize = 10_000;
/// Default number of samples recorded by the closed-form propagator.
pub const DEFAULT_EXACT_SAMPLES: usize = 4096;

/// Run-time tolerance profile. Defaults mirror the constants above and are
/// recorded in every experiment report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub unitarity: f64,
    pub hermiticity: f64,
    pub normalization: f64,
    pub eigen_residual: f64,
    pub min_gap: f64,
    pub cyclicity: f64,
    pub factorization: f64,
    pub solver_residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            unitarity: UNITARITY,
            hermiticity: HERMITICITY,
            normalization: NORMALIZATION,
            eigen_residual: EIGEN_RESIDUAL,
            min_gap: MIN_GAP,
            cyclicity: CYCLICITY,
            factorization: FACTORIZATION,
            solver_residual: SOLVER_RESIDUAL,
        }
    }
}
