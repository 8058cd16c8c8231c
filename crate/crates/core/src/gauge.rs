//! Diagonal similarity transforms that symmetrize the open chain.
//!
//! For a bond with hoppings `u = H[k][k+1]` and `l = H[k+1][k]`, the gauge
//! ratio `d_{k+1}/d_k = √|l/u|` turns the pair into `±√|u·l|` on both sides.
//! When `u·l > 0` the entries are equal (Hermitian bond); when `u·l < 0` they
//! are opposite, and an extra factor `i` per site turns the block into `i`
//! times a real symmetric matrix. The gauge restarts at 1 at the first site
//! of the second block.
//!
//! Gauge magnitudes span hundreds of decades for long chains, so they are
//! stored as natural logs and only exponentiated after a normalization shift.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use crate::eigen::LogAmplitude;
use crate::eigen::SymTridiag;
use crate::error::GaugeError;
use crate::lattice::{Boundary, LatticeParams, Regime};

/// `d_k = sign_k · (i if imaginary_k) · exp(log_mag_k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaugeVector {
    pub log_mag: Vec<f64>,
    pub sign: Vec<i8>,
    /// Sites carrying an extra factor `i` (only inside anti-Hermitian blocks).
    pub imaginary: Vec<bool>,
    /// 0-based sites where the gauge restarts at 1.
    pub block_starts: Vec<usize>,
}

impl GaugeVector {
    pub fn len(&self) -> usize {
        self.log_mag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_mag.is_empty()
    }

    /// Phase of `d_k` as a unit complex number.
    pub fn phase(&self, k: usize) -> Complex64 {
        match (self.sign[k] < 0, self.imaginary[k]) {
            (false, false) => Complex64::new(1.0, 0.0),
            (false, true) => Complex64::new(0.0, 1.0),
            (true, false) => Complex64::new(-1.0, 0.0),
            (true, true) => Complex64::new(0.0, -1.0),
        }
    }
}

/// Coupling entries between the two gauged blocks: `a = h[m−1][m]`,
/// `b = h[m][m−1]` (0-based, `m` the size of block A).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub a: f64,
    pub b: f64,
    /// `log d_{m-1}`, the gauge magnitude at the last site of block A.
    /// `a = hop_forward / d` and `b = hop_backward · d`; the log form keeps
    /// the coupling usable when `d` itself is out of range.
    pub log_gauge: f64,
    pub hop_forward: f64,
    pub hop_backward: f64,
}

/// Gauged open chain: `[[A, a], [b, i·B]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockDecomposition {
    pub block_a: SymTridiag,
    pub block_b: SymTridiag,
    pub coupling: Coupling,
    pub decoupled: bool,
    pub gauge: GaugeVector,
}

impl BlockDecomposition {
    /// Number of sites in block A.
    pub fn split(&self) -> usize {
        self.block_a.len()
    }
}

/// Gauge factors for the open chain, restarting at the block boundary.
pub fn gauge_vector(params: &LatticeParams) -> Result<GaugeVector, GaugeError> {
    params.validate()?;
    let n = params.length;
    let split = params.regime().split_index(n);
    let block_starts = if split == 0 || split == n {
        vec![0]
    } else {
        vec![0, split]
    };

    let mut log_mag = vec![0.0; n];
    let mut sign = vec![1i8; n];
    let mut imaginary = vec![false; n];
    let mut quarter_turns = 0u8;
    for k in 0..n - 1 {
        if block_starts.contains(&(k + 1)) {
            // restart; the boundary bond is a coupling, not a gauge ratio
            quarter_turns = 0;
            continue;
        }
        let bond = k + 1;
        let (u, l) = (params.forward_bond(bond), params.backward_bond(bond));
        if u == 0.0 || l == 0.0 {
            return Err(GaugeError::DegenerateBond { bond });
        }
        log_mag[k + 1] = log_mag[k] + 0.5 * (l.abs().ln() - u.abs().ln());
        if u * l < 0.0 {
            quarter_turns = (quarter_turns + 1) % 4;
        }
        sign[k + 1] = if quarter_turns >= 2 { -1 } else { 1 };
        imaginary[k + 1] = quarter_turns % 2 == 1;
    }
    Ok(GaugeVector {
        log_mag,
        sign,
        imaginary,
        block_starts,
    })
}

/// Reduces the open chain to a Hermitian block `A` and an anti-Hermitian
/// block `i·B` (either may be empty) plus the coupling between them.
pub fn hermitize(params: &LatticeParams) -> Result<BlockDecomposition, GaugeError> {
    if params.boundary != Boundary::Obc {
        return Err(GaugeError::PeriodicUnsupported);
    }
    let gauge = gauge_vector(params)?;
    let n = params.length;
    let regime = params.regime();
    let split = regime.split_index(n);

    let symmetric_bond = |bond: usize| {
        let (u, l) = (params.forward_bond(bond), params.backward_bond(bond));
        u.signum() * (u * l).abs().sqrt()
    };
    let block = |first: usize, last: usize| -> SymTridiag {
        // sites first..last (0-based, exclusive end); bonds first+1..last-1 (1-based)
        if first >= last {
            return SymTridiag::empty();
        }
        SymTridiag::zero_diagonal((first + 1..last).map(symmetric_bond).collect())
    };

    let block_a = block(0, split);
    let mut block_b = block(split, n);
    block_b.imaginary = true;

    let coupling = if split == 0 || split == n {
        Coupling {
            a: 0.0,
            b: 0.0,
            log_gauge: 0.0,
            hop_forward: 0.0,
            hop_backward: 0.0,
        }
    } else {
        let (mut u, mut l) = (params.forward_bond(split), params.backward_bond(split));
        if let Regime::IntegerSplit { .. } = regime {
            // the vanishing hop is the block boundary; drop rounding residue
            if l.abs() <= u.abs() {
                l = 0.0;
            } else {
                u = 0.0;
            }
        }
        let log_gauge = gauge.log_mag[split - 1];
        let d_last = log_gauge.exp();
        Coupling {
            a: if u == 0.0 { 0.0 } else { u / d_last },
            b: if l == 0.0 { 0.0 } else { l * d_last },
            log_gauge,
            hop_forward: u,
            hop_backward: l,
        }
    };
    let decoupled = coupling.hop_forward == 0.0 || coupling.hop_backward == 0.0;
    Ok(BlockDecomposition {
        block_a,
        block_b,
        coupling,
        decoupled,
        gauge,
    })
}

/// Maps a gauged vector back to the original basis, `v_k = d_k ṽ_k`,
/// normalized to unit maximum amplitude.
pub fn ungauge(
    gauge: &GaugeVector,
    transformed: &[Complex64],
) -> Result<Vec<Complex64>, GaugeError> {
    apply_log_diagonal(gauge, transformed, 1.0)
}

/// `D⁻¹ v`, normalized to unit maximum amplitude.
pub fn apply_inverse(gauge: &GaugeVector, v: &[Complex64]) -> Result<Vec<Complex64>, GaugeError> {
    apply_log_diagonal(gauge, v, -1.0)
}

fn apply_log_diagonal(
    gauge: &GaugeVector,
    v: &[Complex64],
    power: f64,
) -> Result<Vec<Complex64>, GaugeError> {
    let logs: Vec<LogAmplitude> = v.iter().map(|&z| LogAmplitude::from_complex(z)).collect();
    apply_log_diagonal_logs(gauge, &logs, power)
}

/// [`ungauge`] for a vector given in log form, so that components far below
/// the `f64` range survive until the gauge brings them back.
pub fn ungauge_log(
    gauge: &GaugeVector,
    transformed: &[LogAmplitude],
) -> Result<Vec<Complex64>, GaugeError> {
    apply_log_diagonal_logs(gauge, transformed, 1.0)
}

fn apply_log_diagonal_logs(
    gauge: &GaugeVector,
    v: &[LogAmplitude],
    power: f64,
) -> Result<Vec<Complex64>, GaugeError> {
    if v.len() != gauge.len() {
        return Err(GaugeError::LengthMismatch {
            expected: gauge.len(),
            got: v.len(),
        });
    }
    let logs: Vec<Option<f64>> = v
        .iter()
        .zip(&gauge.log_mag)
        .map(|(z, lm)| (!z.is_zero()).then(|| z.log_mag + power * lm))
        .collect();
    let shift = logs
        .iter()
        .flatten()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    if shift == f64::NEG_INFINITY {
        return Err(GaugeError::ZeroVector);
    }
    if !shift.is_finite() || logs.iter().flatten().any(|x| x.is_nan()) {
        return Err(GaugeError::Overflow);
    }
    Ok(v.iter()
        .zip(&logs)
        .enumerate()
        .map(|(k, (z, log))| match log {
            None => Complex64::new(0.0, 0.0),
            Some(log) => {
                let phase = if power > 0.0 {
                    gauge.phase(k)
                } else {
                    gauge.phase(k).conj()
                };
                phase * z.phase * (log - shift).exp()
            }
        })
        .collect())
}
