use thiserror::Error;

use crate::lattice::Boundary;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("t and gamma must be finite (got t = {t}, gamma = {gamma})")]
    NonFinite { t: f64, gamma: f64 },
    #[error("length {length} is below the minimum {min} for {boundary:?}")]
    TooShort {
        length: usize,
        boundary: Boundary,
        min: usize,
    },
    #[error("operation requires periodic boundary conditions")]
    NeedsPeriodic,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaugeError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("bond {bond} has a vanishing hopping inside a block; gauge ratio undefined")]
    DegenerateBond { bond: usize },
    #[error("gauge transform is only defined for open chains")]
    PeriodicUnsupported,
    #[error("vector length {got} does not match gauge length {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("gauged amplitude is not representable")]
    Overflow,
    #[error("zero vector")]
    ZeroVector,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EigenError {
    #[error("iteration did not converge within {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },
    #[error("matrix is empty")]
    Empty,
    #[error("matrix is not square ({rows} x {cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("zero vector")]
    ZeroVector,
    #[error("matrix has periodic corners; a tridiagonal method does not apply")]
    NotTridiagonal,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("need at least {needed} levels in the requested class, found {found}")]
    InsufficientLevels { needed: usize, found: usize },
    #[error("envelope support has {sites} sites; at least 5 are required")]
    DegenerateSupport { sites: usize },
    #[error("zero vector")]
    ZeroVector,
    #[error("base point lies on the flux-threaded spectrum (|det| ratio {ratio:e})")]
    BasePointOnSpectrum { ratio: f64 },
    #[error("winding requires at least 64 theta steps, got {0}")]
    TooFewSteps(usize),
    #[error("regime {0} does not decouple")]
    RegimeMismatch(&'static str),
    #[error("no states supplied")]
    NoStates,
    #[error("state length {got} differs from {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Gauge(#[from] GaugeError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
}
