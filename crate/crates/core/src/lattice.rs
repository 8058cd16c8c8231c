//! Lattice parameters, regime classification and Hamiltonian construction.
//!
//! The model is a zero-onsite chain whose hopping from site `j+1` to `j`
//! is `t + γ j` and from `j` to `j+1` is `t − γ j` (1-based bond index `j`).
//! In matrix form `H[j][j+1] = t + γ j` (the "upper" diagonal) and
//! `H[j+1][j] = t − γ j` (the "lower" diagonal).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::LatticeError;

/// Relative tolerance for deciding that `|t/γ|` is an integer.
pub const INTEGER_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Obc,
    Pbc,
}

impl Boundary {
    pub fn min_length(self) -> usize {
        match self {
            Boundary::Obc => 2,
            Boundary::Pbc => 3,
        }
    }
}

/// Physical specification of a chain. Construct through [`LatticeParams::new`]
/// to get the validity checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeParams {
    pub t: f64,
    pub gamma: f64,
    pub length: usize,
    pub boundary: Boundary,
}

impl LatticeParams {
    pub fn new(
        t: f64,
        gamma: f64,
        length: usize,
        boundary: Boundary,
    ) -> Result<Self, LatticeError> {
        let params = LatticeParams {
            t,
            gamma,
            length,
            boundary,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn obc(t: f64, gamma: f64, length: usize) -> Result<Self, LatticeError> {
        Self::new(t, gamma, length, Boundary::Obc)
    }

    pub fn pbc(t: f64, gamma: f64, length: usize) -> Result<Self, LatticeError> {
        Self::new(t, gamma, length, Boundary::Pbc)
    }

    pub fn validate(&self) -> Result<(), LatticeError> {
        if !self.t.is_finite() || !self.gamma.is_finite() {
            return Err(LatticeError::NonFinite {
                t: self.t,
                gamma: self.gamma,
            });
        }
        let min = self.boundary.min_length();
        if self.length < min {
            return Err(LatticeError::TooShort {
                length: self.length,
                boundary: self.boundary,
                min,
            });
        }
        Ok(())
    }

    pub fn with_boundary(self, boundary: Boundary) -> Result<Self, LatticeError> {
        Self::new(self.t, self.gamma, self.length, boundary)
    }

    /// Hopping on `c_j† c_{j+1}` for the 1-based bond `j`.
    pub fn forward_bond(&self, j: usize) -> f64 {
        self.t + self.gamma * j as f64
    }

    /// Hopping on `c_{j+1}† c_j` for the 1-based bond `j`.
    pub fn backward_bond(&self, j: usize) -> f64 {
        self.t - self.gamma * j as f64
    }

    pub fn regime(&self) -> Regime {
        classify_regime(self)
    }
}

/// Which gauge reduction applies to the open chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Regime {
    /// `γ = 0`.
    Hermitian,
    /// `|t/γ| ≥ L`: every bond has positive product, one real-symmetric block.
    FullyHermitizable,
    /// `|t/γ| = m < L` exactly: bond `m` is one-directional and the chain splits.
    IntegerSplit { m: usize },
    /// `s = ⌊|t/γ|⌋ < L` with a non-integer ratio: coupled blocks.
    NonIntegerSplit { s: usize },
    /// `|γ| > |t|`: every bond has negative product.
    FullyAntiHermitizable,
}

impl Regime {
    /// Size of the Hermitian (real-spectrum) block, if the regime has one.
    pub fn split_index(&self, length: usize) -> usize {
        match *self {
            Regime::Hermitian | Regime::FullyHermitizable => length,
            Regime::IntegerSplit { m } => m,
            Regime::NonIntegerSplit { s } => s,
            Regime::FullyAntiHermitizable => 0,
        }
    }

    /// True when the gauge transform yields exactly decoupled blocks.
    pub fn is_decoupled(&self) -> bool {
        !matches!(self, Regime::NonIntegerSplit { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Regime::Hermitian => "hermitian",
            Regime::FullyHermitizable => "fully_hermitizable",
            Regime::IntegerSplit { .. } => "integer_split",
            Regime::NonIntegerSplit { .. } => "non_integer_split",
            Regime::FullyAntiHermitizable => "fully_anti_hermitizable",
        }
    }
}

/// Classifies the parameter regime from `|t/γ|`.
///
/// Negative `γ` is handled through the absolute ratio; the sign only enters
/// the gauge factors. `t = 0` with `γ ≠ 0` has ratio zero and lands in
/// [`Regime::FullyAntiHermitizable`].
pub fn classify_regime(params: &LatticeParams) -> Regime {
    if params.gamma == 0.0 {
        return Regime::Hermitian;
    }
    let ratio = (params.t / params.gamma).abs();
    let length = params.length;
    let nearest = ratio.round();
    let is_integer = (ratio - nearest).abs() < INTEGER_TOLERANCE * ratio.max(1.0);
    let effective = if is_integer { nearest } else { ratio };
    if effective >= length as f64 {
        return Regime::FullyHermitizable;
    }
    if is_integer {
        let m = nearest as usize;
        if m == 0 {
            Regime::FullyAntiHermitizable
        } else {
            Regime::IntegerSplit { m }
        }
    } else {
        let s = ratio.floor() as usize;
        if s == 0 {
            Regime::FullyAntiHermitizable
        } else {
            Regime::NonIntegerSplit { s }
        }
    }
}

/// Zero-diagonal tridiagonal matrix with optional periodic closure.
///
/// `upper[k]` is `H[k][k+1]` and `lower[k]` is `H[k+1][k]` (0-based `k`).
/// `corner_up` sits at `H[L-1][0]` (it continues the upper law onto the
/// closing bond) and `corner_down` at `H[0][L-1]`. When present, the corners
/// are stored with the boundary phase already applied.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedHamiltonian {
    pub upper: Vec<Complex64>,
    pub lower: Vec<Complex64>,
    pub corner_up: Option<Complex64>,
    pub corner_down: Option<Complex64>,
    pub boundary_phase: Complex64,
}

impl BandedHamiltonian {
    /// Open chain from explicit bond lists.
    pub fn from_bonds(upper: Vec<f64>, lower: Vec<f64>) -> Self {
        assert_eq!(
            upper.len(),
            lower.len(),
            "bond lists must have equal length"
        );
        BandedHamiltonian {
            upper: upper.into_iter().map(Complex64::from).collect(),
            lower: lower.into_iter().map(Complex64::from).collect(),
            corner_up: None,
            corner_down: None,
            boundary_phase: Complex64::new(1.0, 0.0),
        }
    }

    pub fn len(&self) -> usize {
        self.upper.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_periodic(&self) -> bool {
        self.corner_up.is_some() || self.corner_down.is_some()
    }

    /// All entries have zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.upper
            .iter()
            .chain(&self.lower)
            .chain(self.corner_up.iter())
            .chain(self.corner_down.iter())
            .all(|z| z.im == 0.0)
    }

    /// Entry `H[row][col]` (0-based).
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        let n = self.len();
        let mut value = Complex64::new(0.0, 0.0);
        if col == row + 1 {
            value += self.upper[row];
        } else if row == col + 1 {
            value += self.lower[col];
        }
        if row == n - 1 && col == 0 {
            if let Some(c) = self.corner_up {
                value += c;
            }
        }
        if row == 0 && col == n - 1 {
            if let Some(c) = self.corner_down {
                value += c;
            }
        }
        value
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let n = self.len();
        (0..n)
            .map(|row| (0..n).map(|col| self.get(row, col)).collect())
            .collect()
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.len();
        assert_eq!(v.len(), n);
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for k in 0..n - 1 {
            out[k] += self.upper[k] * v[k + 1];
            out[k + 1] += self.lower[k] * v[k];
        }
        if let Some(c) = self.corner_up {
            out[n - 1] += c * v[0];
        }
        if let Some(c) = self.corner_down {
            out[0] += c * v[n - 1];
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.upper
            .iter()
            .chain(&self.lower)
            .chain(self.corner_up.iter())
            .chain(self.corner_down.iter())
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

pub fn build_hamiltonian(params: &LatticeParams) -> Result<BandedHamiltonian, LatticeError> {
    params.validate()?;
    let n = params.length;
    let upper = (1..n).map(|j| params.forward_bond(j)).collect();
    let lower = (1..n).map(|j| params.backward_bond(j)).collect();
    let mut h = BandedHamiltonian::from_bonds(upper, lower);
    if params.boundary == Boundary::Pbc {
        h.corner_up = Some(Complex64::from(params.forward_bond(n)));
        h.corner_down = Some(Complex64::from(params.backward_bond(n)));
    }
    Ok(h)
}

/// Periodic chain threaded by flux `theta`: `corner_up · e^{iθ}`,
/// `corner_down · e^{−iθ}`.
pub fn build_flux_twisted(
    params: &LatticeParams,
    theta: f64,
) -> Result<BandedHamiltonian, LatticeError> {
    if params.boundary != Boundary::Pbc {
        return Err(LatticeError::NeedsPeriodic);
    }
    let mut h = build_hamiltonian(params)?;
    twist(&mut h, theta);
    Ok(h)
}

fn twist(h: &mut BandedHamiltonian, theta: f64) {
    let phase = Complex64::from_polar(1.0, theta);
    h.boundary_phase = phase;
    h.corner_up = h.corner_up.map(|c| c * phase);
    h.corner_down = h.corner_down.map(|c| c * phase.conj());
}

/// Constant-nonreciprocity chain with `H[j][j+1] = t − γ` and
/// `H[j+1][j] = t + γ`.
pub fn build_hatano_nelson(
    t: f64,
    gamma: f64,
    length: usize,
    boundary: Boundary,
) -> Result<BandedHamiltonian, LatticeError> {
    LatticeParams::new(t, gamma, length, boundary)?;
    let mut h =
        BandedHamiltonian::from_bonds(vec![t - gamma; length - 1], vec![t + gamma; length - 1]);
    if boundary == Boundary::Pbc {
        h.corner_up = Some(Complex64::from(t - gamma));
        h.corner_down = Some(Complex64::from(t + gamma));
    }
    Ok(h)
}

/// Flux-twisted Hatano–Nelson ring.
pub fn build_hatano_nelson_twisted(
    t: f64,
    gamma: f64,
    length: usize,
    theta: f64,
) -> Result<BandedHamiltonian, LatticeError> {
    let mut h = build_hatano_nelson(t, gamma, length, Boundary::Pbc)?;
    twist(&mut h, theta);
    Ok(h)
}
