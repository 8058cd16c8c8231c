use std::path::PathBuf;

use skinlab::solve::SolveError;
use skinlab::{AnalysisError, GaugeError, LatticeError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("invalid parameters: {0}")]
    Lattice(#[from] LatticeError),
    #[error("solver did not converge: {0}")]
    Convergence(String),
    #[error("{0}")]
    OnSpectrum(AnalysisError),
    #[error("analysis failed: {0}")]
    Analysis(AnalysisError),
    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) | CliError::Lattice(_) | CliError::Io { .. } => 2,
            CliError::Convergence(_) | CliError::Analysis(_) => 3,
            CliError::OnSpectrum(_) => 4,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Lattice(e) | SolveError::Gauge(GaugeError::Lattice(e)) => {
                CliError::Lattice(e)
            }
            other => CliError::Convergence(other.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::BasePointOnSpectrum { .. } => CliError::OnSpectrum(e),
            AnalysisError::TooFewSteps(_) => CliError::Invalid(e.to_string()),
            AnalysisError::Lattice(e) => CliError::Lattice(e),
            other => CliError::Analysis(other),
        }
    }
}
