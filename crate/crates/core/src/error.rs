use thiserror::Error;

/// Errors raised anywhere in the simulation stack.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported dimension {0} (only 2 and 4 are supported)")]
    UnsupportedDimension(usize),

    #[error("non-finite matrix or vector entry")]
    NonFinite,

    #[error("generator is not Hermitian (||H - H^dagger||_F = {defect:e})")]
    NonHermitianInput { defect: f64 },

    #[error("matrix is not unitary (||U^dagger U - I||_F = {defect:e})")]
    NotUnitary { defect: f64 },

    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("total field vanishes; spin quantization axis is undefined")]
    ZeroField,

    #[error("exchange-degenerate configuration (J = 0 with equal gyromagnetic ratios)")]
    DegenerateExchange,

    #[error("closed-form propagator requires a linear phi(t) profile")]
    ProfileNotLinear,

    #[error("steps per segment must be at least {min}, got {got}")]
    StepCountTooSmall { min: usize, got: usize },

    #[error("instantaneous gap {gap:e} is below threshold")]
    GapClosed { gap: f64 },

    #[error("evolution is not cyclic (1 - |<psi(0)|psi(T)>| = {defect:e})")]
    NotCyclic { defect: f64 },

    #[error("propagation result carries no energy history")]
    MissingHistory,

    #[error("argument outside the domain: {0}")]
    DomainError(String),

    #[error("target unreachable: {0}")]
    Unreachable(String),

    #[error("no real root for the dynamical-phase condition (discriminant {discriminant:e})")]
    NoRealRoot { discriminant: f64 },

    #[error("qubit basis undefined: {0}")]
    BasisUndefined(String),

    #[error("invalid sweep axis: {0}")]
    InvalidAxis(String),
}

pub type Result<T> = std::result::Result<T, Error>;
