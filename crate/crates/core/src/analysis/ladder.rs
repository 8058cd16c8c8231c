use serde::{Deserialize, Serialize};

use super::classify::{ClassifiedSpectrum, EigenClass};
use crate::error::AnalysisError;

/// Fraction of levels kept, centred on the middle of the sorted class.
pub const INTERIOR_WINDOW: f64 = 0.8;

/// Relative spacing spread below which a ladder counts as equally spaced.
pub const LADDER_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderStats {
    pub spacings: Vec<f64>,
    pub mean: f64,
    pub stdev: f64,
    pub relative_stdev: f64,
    /// Fraction of the class kept for the statistics.
    pub interior_window: f64,
    pub levels_used: usize,
}

impl LadderStats {
    pub fn is_equally_spaced(&self) -> bool {
        self.relative_stdev < LADDER_THRESHOLD
    }
}

/// Spacing statistics of one class along its axis, over the interior window.
pub fn level_spacings(
    spectrum: &ClassifiedSpectrum,
    class: EigenClass,
) -> Result<LadderStats, AnalysisError> {
    spacings_of(&spectrum.axis_values(class), INTERIOR_WINDOW)
}

/// Spacing statistics of sorted axis values, keeping the central `window`
/// fraction (`⌊n(1−window)/2⌋` levels dropped from each end).
pub fn spacings_of(sorted: &[f64], window: f64) -> Result<LadderStats, AnalysisError> {
    let n = sorted.len();
    if n < 3 {
        return Err(AnalysisError::InsufficientLevels {
            needed: 3,
            found: n,
        });
    }
    let drop = ((n as f64) * (1.0 - window) / 2.0 + 1e-9).floor() as usize;
    let kept = &sorted[drop..n - drop];
    let kept = if kept.len() < 3 { sorted } else { kept };
    let spacings: Vec<f64> = kept.windows(2).map(|w| w[1] - w[0]).collect();
    let k = spacings.len() as f64;
    let mean = spacings.iter().sum::<f64>() / k;
    let stdev = (spacings.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / k).sqrt();
    Ok(LadderStats {
        relative_stdev: stdev / mean.abs(),
        spacings,
        mean,
        stdev,
        interior_window: window,
        levels_used: kept.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_ladder() {
        let values: Vec<f64> = (0..20).map(|k| -1.0 + 0.1 * k as f64).collect();
        let s = spacings_of(&values, INTERIOR_WINDOW).unwrap();
        assert_eq!(s.levels_used, 16);
        assert!((s.mean - 0.1).abs() < 1e-12);
        assert!(s.relative_stdev < 1e-10 && s.is_equally_spaced());
    }

    #[test]
    fn cosine_band_is_not_a_ladder() {
        let mut values: Vec<f64> = (1..=40)
            .map(|n| 2.0 * (n as f64 * std::f64::consts::PI / 41.0).cos())
            .collect();
        values.sort_by(f64::total_cmp);
        assert!(!spacings_of(&values, INTERIOR_WINDOW)
            .unwrap()
            .is_equally_spaced());
    }

    #[test]
    fn unit_ladder() {
        let s = spacings_of(&[1.0, 2.0, 3.0, 4.0], INTERIOR_WINDOW).unwrap();
        assert_eq!(s.spacings, vec![1.0, 1.0, 1.0]);
        assert_eq!(s.stdev, 0.0);
    }

    #[test]
    fn too_few_levels() {
        assert_eq!(
            spacings_of(&[0.0, 1.0], INTERIOR_WINDOW),
            Err(AnalysisError::InsufficientLevels {
                needed: 3,
                found: 2
            })
        );
    }
}
