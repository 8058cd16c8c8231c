use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigen::{det_shifted, ScaledComplex};
use crate::error::AnalysisError;
use crate::lattice::{build_flux_twisted, BandedHamiltonian, LatticeParams};

pub const MIN_THETA_STEPS: usize = 64;
pub const DEFAULT_THETA_STEPS: usize = 256;

/// `min |det| / max |det|` along the loop below which the base point is
/// treated as lying on the spectrum.
const ON_SPECTRUM_RATIO: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindingResult {
    pub winding: i32,
    pub theta_steps_used: usize,
    /// `min |det| / max |det|` over the sampled loop.
    pub min_ratio: f64,
    /// Accumulated phase of `det(H(θ) − E_b)` over one flux period, in radians.
    pub total_phase: f64,
}

/// Winding of `det(H(θ) − E_b)` as the flux `θ` runs over `[0, 2π]`.
pub fn winding_number(
    params: &LatticeParams,
    base: Complex64,
    theta_steps: usize,
) -> Result<WindingResult, AnalysisError> {
    params.validate()?;
    build_flux_twisted(params, 0.0)?;
    winding_number_with(
        |theta| build_flux_twisted(params, theta).expect("validated"),
        base,
        theta_steps,
    )
}

/// Winding for any flux-threaded family `theta ↦ H(θ)`.
///
/// The loop is sampled on `theta_steps` uniform points; if any phase step
/// exceeds π/2 the sampling is doubled once.
pub fn winding_number_with<F>(
    build: F,
    base: Complex64,
    theta_steps: usize,
) -> Result<WindingResult, AnalysisError>
where
    F: Fn(f64) -> BandedHamiltonian,
{
    if theta_steps < MIN_THETA_STEPS {
        return Err(AnalysisError::TooFewSteps(theta_steps));
    }
    let sample = |steps: usize| -> Vec<ScaledComplex> {
        (0..steps)
            .map(|k| det_shifted(&build(TAU * k as f64 / steps as f64), base))
            .collect()
    };
    let mut steps = theta_steps;
    let mut dets = sample(steps);
    let mut refined = false;
    loop {
        let logs: Vec<f64> = dets.iter().map(|d| d.log_abs()).collect();
        let hi = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = logs.iter().copied().fold(f64::INFINITY, f64::min);
        let min_ratio = if hi == f64::NEG_INFINITY {
            0.0
        } else {
            (lo - hi).exp()
        };
        if min_ratio < ON_SPECTRUM_RATIO || dets.iter().any(|d| d.is_zero()) {
            return Err(AnalysisError::BasePointOnSpectrum { ratio: min_ratio });
        }
        let mut total = 0.0;
        let mut max_step = 0.0f64;
        for k in 0..steps {
            let a = dets[k].phase();
            let b = dets[(k + 1) % steps].phase();
            let step = wrap(b - a);
            max_step = max_step.max(step.abs());
            total += step;
        }
        if max_step > FRAC_PI_2 {
            if refined {
                return Err(AnalysisError::BasePointOnSpectrum { ratio: min_ratio });
            }
            refined = true;
            steps *= 2;
            dets = sample(steps);
            continue;
        }
        return Ok(WindingResult {
            winding: (total / TAU).round() as i32,
            theta_steps_used: steps,
            min_ratio,
            total_phase: total,
        });
    }
}

/// One point of the sampled loop `θ ↦ det(H(θ) − E_b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSample {
    pub theta: f64,
    pub det_log_abs: f64,
    /// Continuously unwrapped from the phase at `θ = 0`.
    pub det_phase: f64,
}

/// The determinant trace on `steps` uniform points of `[0, 2π)`, closed by a
/// final sample at `θ = 2π`.
pub fn phase_trace_with<F>(build: F, base: Complex64, steps: usize) -> Vec<PhaseSample>
where
    F: Fn(f64) -> BandedHamiltonian,
{
    let mut trace: Vec<PhaseSample> = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let theta = TAU * k as f64 / steps as f64;
        let d = det_shifted(&build(theta), base);
        let det_phase = match trace.last() {
            Some(prev) => prev.det_phase + wrap(d.phase() - prev.det_phase),
            None => d.phase(),
        };
        trace.push(PhaseSample {
            theta,
            det_log_abs: d.log_abs(),
            det_phase,
        });
    }
    trace
}

fn wrap(x: f64) -> f64 {
    let mut y = x % TAU;
    if y > PI {
        y -= TAU;
    } else if y <= -PI {
        y += TAU;
    }
    y
}
