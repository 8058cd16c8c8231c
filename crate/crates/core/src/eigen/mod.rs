//! Dense eigensolvers and exact spectral identities.
//!
//! Two solvers live here: an implicit-shift QL iteration for real symmetric
//! tridiagonal blocks, and a balanced Hessenberg/complex-QR solver with
//! inverse-iteration eigenvectors for everything else. Neither depends on an
//! external linear-algebra library.

mod dense;
mod det;
mod general;
mod tridiag;
mod twisted;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use dense::CMatrix;
pub use det::{det_shifted, spectral_moments, ScaledComplex, SpectralMoments};
pub use general::{balance, eig_general, eig_general_with, GeneralOptions};
pub use tridiag::{eig_sym_tridiag, SymTridiag};
pub use twisted::{
    from_log_amplitudes, solve_end, tridiagonal_eigenvector, twisted_null_vector, End, LogAmplitude,
};

use crate::error::EigenError;
use crate::lattice::BandedHamiltonian;

/// Residuals above `RESIDUAL_SCALE · ‖H‖_F` mark a pair as unconverged.
pub const RESIDUAL_SCALE: f64 = 1e-8;

/// Sweep budget per unit dimension for both iterative solvers.
pub const SWEEPS_PER_DIMENSION: usize = 50;

pub fn residual_tolerance(frobenius: f64) -> f64 {
    RESIDUAL_SCALE * frobenius.max(f64::MIN_POSITIVE)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumSource {
    SymTridiag,
    GeneralQr,
}

/// Eigenvalues with optional unit-norm right eigenvectors.
///
/// `residuals` and `flagged` are indexed like `eigenvalues`. `residuals` is
/// empty when no eigenvectors were requested. A flagged entry has a residual
/// above tolerance or came from a stalled inverse iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    pub eigenvectors: Option<Vec<Vec<Complex64>>>,
    pub residuals: Vec<f64>,
    pub flagged: Vec<bool>,
    pub source: SpectrumSource,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn any_flagged(&self) -> bool {
        self.flagged.iter().any(|&f| f)
    }

    /// Reorders every per-eigenvalue list by `order`.
    pub(crate) fn permute(&mut self, order: &[usize]) {
        self.eigenvalues = order.iter().map(|&k| self.eigenvalues[k]).collect();
        if let Some(vectors) = self.eigenvectors.take() {
            let mut slots: Vec<Option<Vec<Complex64>>> = vectors.into_iter().map(Some).collect();
            self.eigenvectors = Some(order.iter().map(|&k| slots[k].take().unwrap()).collect());
        }
        if !self.residuals.is_empty() {
            self.residuals = order.iter().map(|&k| self.residuals[k]).collect();
        }
        self.flagged = order.iter().map(|&k| self.flagged[k]).collect();
    }

    /// Sorts lexicographically by `(Re, Im)`.
    pub fn sort_lexicographic(&mut self) {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| {
            let (x, y) = (self.eigenvalues[a], self.eigenvalues[b]);
            x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im))
        });
        self.permute(&order);
    }
}

/// `‖H v − E v‖₂ / ‖v‖₂`.
pub fn residual(
    h: &BandedHamiltonian,
    energy: Complex64,
    v: &[Complex64],
) -> Result<f64, EigenError> {
    if v.len() != h.len() {
        return Err(EigenError::DimensionMismatch {
            expected: h.len(),
            got: v.len(),
        });
    }
    let norm = vector_norm(v);
    if norm == 0.0 {
        return Err(EigenError::ZeroVector);
    }
    let hv = h.matvec(v);
    let diff: f64 = hv
        .iter()
        .zip(v)
        .map(|(a, b)| (a - energy * b).norm_sqr())
        .sum();
    Ok(diff.sqrt() / norm)
}

/// Residual against a dense matrix.
pub fn residual_dense(a: &CMatrix, energy: Complex64, v: &[Complex64]) -> Result<f64, EigenError> {
    if v.len() != a.dim() {
        return Err(EigenError::DimensionMismatch {
            expected: a.dim(),
            got: v.len(),
        });
    }
    let norm = vector_norm(v);
    if norm == 0.0 {
        return Err(EigenError::ZeroVector);
    }
    let av = a.matvec(v);
    let diff: f64 = av
        .iter()
        .zip(v)
        .map(|(x, y)| (x - energy * y).norm_sqr())
        .sum();
    Ok(diff.sqrt() / norm)
}

pub(crate) fn vector_norm(v: &[Complex64]) -> f64 {
    // scaled to survive very small or very large entries
    let scale = v
        .iter()
        .map(|z| z.re.abs().max(z.im.abs()))
        .fold(0.0, f64::max);
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    scale * v.iter().map(|z| (z / scale).norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn normalize(v: &mut [Complex64]) {
    let n = vector_norm(v);
    if n > 0.0 && n.is_finite() {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residual_of_exact_pair_vanishes() {
        // [[0, 2], [0.5, 0]] has eigenpair E = 1, v = (2, 1)
        let h = BandedHamiltonian::from_bonds(vec![2.0], vec![0.5]);
        let v = [Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(residual(&h, Complex64::new(1.0, 0.0), &v).unwrap() < 1e-14);
        assert_eq!(
            residual(&h, Complex64::new(1.0, 0.0), &[Complex64::new(0.0, 0.0); 2]),
            Err(EigenError::ZeroVector)
        );
        assert!(matches!(
            residual(&h, Complex64::new(1.0, 0.0), &[Complex64::new(1.0, 0.0)]),
            Err(EigenError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn residual_grows_linearly_under_perturbation() {
        let h = BandedHamiltonian::from_bonds(vec![2.0], vec![0.5]);
        let e = Complex64::new(1.0, 0.0);
        let v = [Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0)];
        let w = [Complex64::new(0.3, 0.1), Complex64::new(-0.7, 0.2)];
        let at = |eps: f64| {
            let p: Vec<_> = v.iter().zip(&w).map(|(a, b)| a + b * eps).collect();
            residual(&h, e, &p).unwrap()
        };
        let (r1, r2) = (at(1e-6), at(2e-6));
        assert!((r2 / r1 - 2.0).abs() < 1e-4, "ratio {}", r2 / r1);
    }
}
