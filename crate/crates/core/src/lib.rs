//! Spectra and eigenstates of open and periodic tight-binding chains with
//! linearly graded non-reciprocal hopping.

pub mod analysis;
pub mod eigen;
pub mod error;
pub mod gauge;
pub mod lattice;
pub mod solve;

pub use error::{AnalysisError, EigenError, GaugeError, LatticeError};
pub use lattice::{Boundary, LatticeParams, Regime};
