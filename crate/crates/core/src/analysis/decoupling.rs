use serde::{Deserialize, Serialize};

use super::classify::{classify, EigenClass};
use crate::eigen::{eig_sym_tridiag, normalize, residual, residual_tolerance};
use crate::error::AnalysisError;
use crate::gauge::{hermitize, ungauge_log, LogAmplitude};
use crate::lattice::{build_hamiltonian, Boundary, LatticeParams, Regime};
use crate::solve::{block_eigenvector, solve_matrix, SolveError, SolveOptions};

/// Which gauged block carries exact eigenvectors when padded with zeros.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RestrictedBlock {
    /// Hermitian block, sites `1..=m` (backward hop on bond `m` vanishes).
    Hermitian,
    /// Anti-Hermitian block, sites `m+1..=L` (forward hop on bond `m` vanishes).
    AntiHermitian,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecouplingReport {
    pub m: usize,
    pub block: RestrictedBlock,
    pub states: usize,
    /// Largest `‖Hv − Ev‖` over the zero-padded block states.
    pub max_residual: f64,
    /// Largest peak-normalized amplitude outside the block.
    pub max_leak: f64,
    pub tolerance: f64,
    pub decoupled: bool,
}

/// Checks that zero-padded eigenvectors of the one-way block are exact
/// eigenvectors of the full open chain. Only integer splits qualify.
pub fn decoupling_check(params: &LatticeParams) -> Result<DecouplingReport, AnalysisError> {
    let m = match params.regime() {
        Regime::IntegerSplit { m } if params.boundary == Boundary::Obc => m,
        Regime::IntegerSplit { .. } => return Err(AnalysisError::RegimeMismatch("periodic")),
        other => return Err(AnalysisError::RegimeMismatch(other.name())),
    };
    let h = build_hamiltonian(params)?;
    let blocks = hermitize(params)?;
    let n = params.length;
    let (block, source, outside) = if blocks.coupling.hop_backward == 0.0 {
        (RestrictedBlock::Hermitian, &blocks.block_a, m..n)
    } else {
        (RestrictedBlock::AntiHermitian, &blocks.block_b, 0..m)
    };
    let spectrum = eig_sym_tridiag(source, false)?;
    let tol = residual_tolerance(h.frobenius_norm());
    let mut max_residual = 0.0f64;
    let mut max_leak = 0.0f64;
    for e in &spectrum.eigenvalues {
        let zero = LogAmplitude::ZERO;
        let padded: Vec<LogAmplitude> = match block {
            RestrictedBlock::Hermitian => block_eigenvector(source, e.re)
                .into_iter()
                .chain(std::iter::repeat_n(zero, n - m))
                .collect(),
            RestrictedBlock::AntiHermitian => std::iter::repeat_n(zero, m)
                .chain(block_eigenvector(source, e.im))
                .collect(),
        };
        let mut v = ungauge_log(&blocks.gauge, &padded)?;
        let leak = v[outside.clone()]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        normalize(&mut v);
        max_residual = max_residual.max(residual(&h, *e, &v)?);
        max_leak = max_leak.max(leak);
    }
    Ok(DecouplingReport {
        m,
        block,
        states: spectrum.eigenvalues.len(),
        max_residual,
        max_leak,
        tolerance: tol,
        decoupled: max_residual <= tol && max_leak == 0.0,
    })
}

/// For each real-class eigenstate from the general solver, the largest
/// peak-normalized amplitude on sites beyond the Hermitian block.
pub fn real_state_tails(params: &LatticeParams, seed: u64) -> Result<Vec<f64>, AnalysisError> {
    let h = build_hamiltonian(params)?;
    let split = params.regime().split_index(params.length);
    let spectrum = solve_matrix(&h, SolveOptions::with_vectors(seed)).map_err(|e| match e {
        SolveError::Lattice(e) => AnalysisError::Lattice(e),
        SolveError::Gauge(e) => AnalysisError::Gauge(e),
        SolveError::Eigen(e) => AnalysisError::Eigen(e),
    })?;
    let vectors = spectrum.eigenvectors.as_ref().expect("vectors requested");
    let classified = classify(&spectrum);
    Ok(classified
        .of_class(EigenClass::Real)
        .map(|entry| {
            let v = &vectors[entry.source_index];
            let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
            v[split..]
                .iter()
                .map(|z| z.norm() / max)
                .fold(0.0, f64::max)
        })
        .collect())
}
