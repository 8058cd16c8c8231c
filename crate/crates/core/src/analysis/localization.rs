use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::AnalysisError;

/// Sites are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalizationMetrics {
    /// `Σ j |ψ_j|² / Σ |ψ_j|²`.
    pub centroid: f64,
    /// `Σ |ψ_j|⁴ / (Σ |ψ_j|²)²`.
    pub ipr: f64,
    pub argmax_site: usize,
}

pub fn localization(state: &[Complex64]) -> Result<LocalizationMetrics, AnalysisError> {
    let max = state.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return Err(AnalysisError::ZeroVector);
    }
    let weights: Vec<f64> = state.iter().map(|z| (z.norm() / max).powi(2)).collect();
    let total: f64 = weights.iter().sum();
    let centroid = weights
        .iter()
        .enumerate()
        .map(|(k, w)| (k + 1) as f64 * w)
        .sum::<f64>()
        / total;
    let ipr = weights.iter().map(|w| w * w).sum::<f64>() / (total * total);
    let argmax_site = weights
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(k, _)| k + 1)
        .unwrap();
    Ok(LocalizationMetrics {
        centroid,
        ipr,
        argmax_site,
    })
}
