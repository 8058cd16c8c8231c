use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::AnalysisError;

/// Sites below this fraction of the peak amplitude are left out of the fit.
pub const SUPPORT_FRACTION: f64 = 1e-3;

const MIN_SUPPORT: usize = 5;

/// Gaussian fit `|ψ_j| ≈ A·exp(−w (j − x0)²)`, sites 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeFit {
    pub amplitude: f64,
    pub center: f64,
    pub width_param: f64,
    /// `|γ|/2`, the width the weak-gradient envelope law predicts.
    pub target_width: f64,
    /// RMS misfit over the support, on peak-normalized amplitudes.
    pub rms_error: f64,
    /// Sites (0-based positions) that entered the fit.
    pub support_mask: Vec<bool>,
}

impl EnvelopeFit {
    pub fn support_sites(&self) -> usize {
        self.support_mask.iter().filter(|&&m| m).count()
    }

    pub fn width_ratio(&self) -> f64 {
        self.width_param / self.target_width
    }
}

/// Fits a Gaussian envelope to `|ψ|`.
///
/// The centre is the peak site, refined by a parabola through the log
/// amplitudes of its neighbours when the peak is interior. The width comes
/// from least squares of `log|ψ_j|` against `−w (j − x0)² + c` over the sites
/// above [`SUPPORT_FRACTION`] of the peak.
pub fn fit_envelope(state: &[Complex64], gamma: f64) -> Result<EnvelopeFit, AnalysisError> {
    let mags: Vec<f64> = state.iter().map(|z| z.norm()).collect();
    fit_profile(&mags, gamma)
}

fn fit_profile(mags: &[f64], gamma: f64) -> Result<EnvelopeFit, AnalysisError> {
    let (peak, max) =
        mags.iter().copied().enumerate().fold(
            (0, 0.0),
            |best, (k, m)| if m > best.1 { (k, m) } else { best },
        );
    if max == 0.0 || !max.is_finite() {
        return Err(AnalysisError::ZeroVector);
    }
    let a: Vec<f64> = mags.iter().map(|m| m / max).collect();

    // parabola through the log amplitudes around an interior peak
    let mut center = (peak + 1) as f64;
    if peak > 0 && peak + 1 < a.len() && a[peak - 1] > 0.0 && a[peak + 1] > 0.0 {
        let (ym, yp) = (a[peak - 1].ln(), a[peak + 1].ln());
        let curvature = ym + yp;
        if curvature < 0.0 {
            center += (0.5 * (ym - yp) / curvature).clamp(-0.5, 0.5);
        }
    }

    let support: Vec<usize> = (0..a.len()).filter(|&k| a[k] > SUPPORT_FRACTION).collect();
    if support.len() < MIN_SUPPORT {
        return Err(AnalysisError::DegenerateSupport {
            sites: support.len(),
        });
    }
    // log a_j = c − w (j − x0)², linear in (c, w)
    let points: Vec<(f64, f64)> = support
        .iter()
        .map(|&k| (((k + 1) as f64 - center).powi(2), a[k].ln()))
        .collect();
    let count = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / count;
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let width_param = if sxx > 0.0 { -sxy / sxx } else { 0.0 };
    let sq: f64 = support
        .iter()
        .map(|&k| {
            let model = (-width_param * ((k + 1) as f64 - center).powi(2)).exp();
            (a[k] - model).powi(2)
        })
        .sum();
    Ok(EnvelopeFit {
        amplitude: max,
        center,
        width_param,
        target_width: gamma.abs() / 2.0,
        rms_error: (sq / support.len() as f64).sqrt(),
        support_mask: a.iter().map(|&x| x > SUPPORT_FRACTION).collect(),
    })
}

/// Pointwise maximum of the peak-normalized amplitudes of `states`.
pub fn global_envelope(states: &[Vec<Complex64>]) -> Result<Vec<f64>, AnalysisError> {
    let first = states.first().ok_or(AnalysisError::NoStates)?;
    let mut env = vec![0.0f64; first.len()];
    for s in states {
        if s.len() != env.len() {
            return Err(AnalysisError::LengthMismatch {
                expected: env.len(),
                got: s.len(),
            });
        }
        let max = s.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            continue;
        }
        for (e, z) in env.iter_mut().zip(s) {
            *e = e.max(z.norm() / max);
        }
    }
    Ok(env)
}

impl EnvelopeFit {
    /// Fits a profile of non-negative amplitudes, such as [`global_envelope`].
    pub fn of_profile(profile: &[f64], gamma: f64) -> Result<EnvelopeFit, AnalysisError> {
        fit_profile(profile, gamma)
    }
}
