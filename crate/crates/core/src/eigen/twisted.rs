//! Twisted factorizations of tridiagonal matrices.
//!
//! The forward and backward pivots of `T − λ` depend only on the diagonal and
//! on the bond products `upper·lower`, so they are unchanged by any diagonal
//! similarity. Eigenvectors assembled as products of pivot ratios therefore
//! keep full relative accuracy in components far below the peak, which plain
//! inverse iteration cannot deliver for strongly non-normal chains.

use num_complex::Complex64;

use super::vector_norm;
use crate::error::EigenError;
use crate::lattice::BandedHamiltonian;

/// A complex amplitude as `exp(log_mag) · phase`, `phase` of unit modulus.
/// Zero has `log_mag = −∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogAmplitude {
    pub log_mag: f64,
    pub phase: Complex64,
}

impl LogAmplitude {
    pub const ZERO: LogAmplitude = LogAmplitude {
        log_mag: f64::NEG_INFINITY,
        phase: Complex64::new(1.0, 0.0),
    };

    pub const ONE: LogAmplitude = LogAmplitude {
        log_mag: 0.0,
        phase: Complex64::new(1.0, 0.0),
    };

    pub fn from_complex(z: Complex64) -> Self {
        if z == Complex64::new(0.0, 0.0) {
            return Self::ZERO;
        }
        let r = z.norm();
        LogAmplitude {
            log_mag: r.ln(),
            phase: z / r,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.log_mag == f64::NEG_INFINITY
    }

    pub fn times(self, z: Complex64) -> Self {
        let f = Self::from_complex(z);
        LogAmplitude {
            log_mag: self.log_mag + f.log_mag,
            phase: self.phase * f.phase,
        }
    }
}

/// Unit 2-norm vector from log amplitudes; components below the `f64` range
/// relative to the peak become zero.
pub fn from_log_amplitudes(v: &[LogAmplitude]) -> Vec<Complex64> {
    let shift = v
        .iter()
        .map(|z| z.log_mag)
        .fold(f64::NEG_INFINITY, f64::max);
    if !shift.is_finite() {
        return vec![Complex64::new(0.0, 0.0); v.len()];
    }
    let mut out: Vec<Complex64> = v
        .iter()
        .map(|z| {
            if z.is_zero() {
                Complex64::new(0.0, 0.0)
            } else {
                z.phase * (z.log_mag - shift).exp()
            }
        })
        .collect();
    let norm = vector_norm(&out);
    for z in &mut out {
        *z /= norm;
    }
    out
}

/// Which end of the system carries the right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum End {
    First,
    Last,
}

pub(crate) fn pivot_floor(diag: &[Complex64], upper: &[Complex64], lower: &[Complex64]) -> f64 {
    let scale = diag
        .iter()
        .map(|z| z.norm())
        .chain(upper.iter().zip(lower).map(|(u, l)| (u * l).norm().sqrt()))
        .fold(0.0, f64::max);
    f64::EPSILON * scale.max(f64::MIN_POSITIVE)
}

fn forward_pivots(
    diag: &[Complex64],
    upper: &[Complex64],
    lower: &[Complex64],
    floor: f64,
) -> Vec<Complex64> {
    let mut p: Vec<Complex64> = Vec::with_capacity(diag.len());
    for (j, &d) in diag.iter().enumerate() {
        let mut v = if j == 0 {
            d
        } else {
            d - upper[j - 1] * lower[j - 1] / p[j - 1]
        };
        if v.norm() < floor {
            v = Complex64::new(floor, 0.0);
        }
        p.push(v);
    }
    p
}

fn backward_pivots(
    diag: &[Complex64],
    upper: &[Complex64],
    lower: &[Complex64],
    floor: f64,
) -> Vec<Complex64> {
    let n = diag.len();
    let mut p = vec![Complex64::new(0.0, 0.0); n];
    for j in (0..n).rev() {
        let mut v = if j + 1 == n {
            diag[j]
        } else {
            diag[j] - upper[j] * lower[j] / p[j + 1]
        };
        if v.norm() < floor {
            v = Complex64::new(floor, 0.0);
        }
        p[j] = v;
    }
    p
}

/// Null vector of the (numerically singular) tridiagonal `M` with diagonal
/// `diag`, `M[j][j+1] = upper[j]`, `M[j+1][j] = lower[j]`.
pub fn twisted_null_vector(
    diag: &[Complex64],
    upper: &[Complex64],
    lower: &[Complex64],
) -> Vec<LogAmplitude> {
    let n = diag.len();
    let floor = pivot_floor(diag, upper, lower);
    let fwd = forward_pivots(diag, upper, lower, floor);
    let bwd = backward_pivots(diag, upper, lower, floor);
    let twist = (0..n)
        .min_by(|&a, &b| {
            let ga = (fwd[a] + bwd[a] - diag[a]).norm();
            let gb = (fwd[b] + bwd[b] - diag[b]).norm();
            ga.total_cmp(&gb)
        })
        .unwrap_or(0);
    let mut z = vec![LogAmplitude::ZERO; n];
    z[twist] = LogAmplitude::ONE;
    for j in (0..twist).rev() {
        z[j] = z[j + 1].times(-upper[j] / fwd[j]);
    }
    for j in twist + 1..n {
        z[j] = z[j - 1].times(-lower[j - 1] / bwd[j]);
    }
    z
}

/// Solves `M x = r e_1` or `M x = r e_n`. `None` when `M` is numerically
/// singular.
pub fn solve_end(
    diag: &[Complex64],
    upper: &[Complex64],
    lower: &[Complex64],
    rhs: LogAmplitude,
    end: End,
) -> Option<Vec<LogAmplitude>> {
    let n = diag.len();
    let floor = pivot_floor(diag, upper, lower);
    let mut x = vec![LogAmplitude::ZERO; n];
    match end {
        End::First => {
            let p = backward_pivots(diag, upper, lower, floor);
            if p[0].norm() <= floor {
                return None;
            }
            x[0] = rhs.times(p[0].inv());
            for j in 1..n {
                x[j] = x[j - 1].times(-lower[j - 1] / p[j]);
            }
        }
        End::Last => {
            let p = forward_pivots(diag, upper, lower, floor);
            if p[n - 1].norm() <= floor {
                return None;
            }
            x[n - 1] = rhs.times(p[n - 1].inv());
            for j in (0..n - 1).rev() {
                x[j] = x[j + 1].times(-upper[j] / p[j]);
            }
        }
    }
    Some(x)
}

/// Unit-norm eigenvector of an open chain for the eigenvalue `lambda`.
pub fn tridiagonal_eigenvector(
    h: &BandedHamiltonian,
    lambda: Complex64,
) -> Result<Vec<Complex64>, EigenError> {
    if h.is_periodic() {
        return Err(EigenError::NotTridiagonal);
    }
    let diag = vec![-lambda; h.len()];
    Ok(from_log_amplitudes(&twisted_null_vector(
        &diag, &h.upper, &h.lower,
    )))
}
