use std::ops::{Add, Mul, Neg};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::lattice::BandedHamiltonian;

/// `mantissa · 2^exponent`, for determinants that overflow `f64`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledComplex {
    pub mantissa: Complex64,
    pub exponent: i64,
}

impl ScaledComplex {
    pub const ZERO: ScaledComplex = ScaledComplex {
        mantissa: Complex64::new(0.0, 0.0),
        exponent: 0,
    };

    pub fn new(mantissa: Complex64, exponent: i64) -> Self {
        let mut s = ScaledComplex { mantissa, exponent };
        s.renormalize();
        s
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z, 0)
    }

    fn renormalize(&mut self) {
        let m = self.mantissa.re.abs().max(self.mantissa.im.abs());
        if m == 0.0 || !m.is_finite() {
            if m == 0.0 {
                self.exponent = 0;
            }
            return;
        }
        let e = m.log2().floor() as i64;
        self.mantissa = scale_pow2(self.mantissa, -e);
        self.exponent += e;
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == Complex64::new(0.0, 0.0)
    }

    /// Natural log of the magnitude; `-inf` for zero.
    pub fn log_abs(&self) -> f64 {
        self.mantissa.norm().ln() + self.exponent as f64 * std::f64::consts::LN_2
    }

    pub fn phase(&self) -> f64 {
        self.mantissa.arg()
    }

    /// Plain complex value; may overflow to infinity or underflow to zero.
    pub fn to_complex(&self) -> Complex64 {
        scale_pow2(self.mantissa, self.exponent)
    }

    pub fn scale(self, z: Complex64) -> ScaledComplex {
        ScaledComplex::new(self.mantissa * z, self.exponent)
    }
}

impl Mul for ScaledComplex {
    type Output = ScaledComplex;

    fn mul(self, other: ScaledComplex) -> ScaledComplex {
        ScaledComplex::new(
            self.mantissa * other.mantissa,
            self.exponent + other.exponent,
        )
    }
}

impl Add for ScaledComplex {
    type Output = ScaledComplex;

    fn add(self, other: ScaledComplex) -> ScaledComplex {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let e = self.exponent.max(other.exponent);
        let a = scale_pow2(self.mantissa, self.exponent - e);
        let b = scale_pow2(other.mantissa, other.exponent - e);
        ScaledComplex::new(a + b, e)
    }
}

impl Neg for ScaledComplex {
    type Output = ScaledComplex;

    fn neg(self) -> ScaledComplex {
        ScaledComplex {
            mantissa: -self.mantissa,
            exponent: self.exponent,
        }
    }
}

fn scale_pow2(z: Complex64, e: i64) -> Complex64 {
    // stepwise so that intermediate powers of two stay representable
    let mut z = z;
    let mut e = e;
    while e > 1000 {
        z *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        z *= 2f64.powi(-1000);
        e += 1000;
    }
    z * 2f64.powi(e as i32)
}

/// Continuant `det(T[first..=last] − z)` of the tridiagonal part.
fn continuant(h: &BandedHamiltonian, z: Complex64, first: usize, last: usize) -> ScaledComplex {
    if first > last {
        return ScaledComplex::from_complex(Complex64::new(1.0, 0.0));
    }
    let diag = -z;
    // prev = f_{k-1}, cur = f_k, sharing `exponent`
    let mut prev = Complex64::new(1.0, 0.0);
    let mut cur = diag;
    let mut exponent = 0i64;
    for k in first + 1..=last {
        let product = h.upper[k - 1] * h.lower[k - 1];
        let next = diag * cur - product * prev;
        prev = cur;
        cur = next;
        let m = cur.norm().max(prev.norm());
        if m > 2f64.powi(200) || (m < 2f64.powi(-200) && m > 0.0) {
            let e = m.log2().floor() as i64;
            cur = scale_pow2(cur, -e);
            prev = scale_pow2(prev, -e);
            exponent += e;
        }
    }
    ScaledComplex::new(cur, exponent)
}

fn product(values: &[Complex64]) -> ScaledComplex {
    values.iter().fold(
        ScaledComplex::from_complex(Complex64::new(1.0, 0.0)),
        |acc, &v| acc.scale(v),
    )
}

/// `det(H − zI)` by the three-term continuant recurrence.
///
/// With periodic corners `α = H[L-1][0]` and `β = H[0][L-1]`:
/// `det = D(1..L) − αβ·D(2..L−1) + (−1)^{L−1}(α·Πupper + β·Πlower)`.
pub fn det_shifted(h: &BandedHamiltonian, z: Complex64) -> ScaledComplex {
    let n = h.len();
    let alpha = h.corner_up.unwrap_or_default();
    let beta = h.corner_down.unwrap_or_default();
    if !h.is_periodic() {
        return continuant(h, z, 0, n - 1);
    }
    if n < 3 {
        // corners land on the ordinary off-diagonals
        let mut folded = h.clone();
        folded.corner_up = None;
        folded.corner_down = None;
        if n == 2 {
            folded.lower[0] += alpha;
            folded.upper[0] += beta;
            return continuant(&folded, z, 0, 1);
        }
        return ScaledComplex::from_complex(alpha + beta - z);
    }
    let full = continuant(h, z, 0, n - 1);
    let inner = -continuant(h, z, 1, n - 2).scale(alpha * beta);
    let sign = if (n - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    let cyc_up = product(&h.upper).scale(alpha * sign);
    let cyc_down = product(&h.lower).scale(beta * sign);
    full + inner + cyc_up + cyc_down
}

/// Exact trace identities of a zero-diagonal Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralMoments {
    pub trace: f64,
    /// `tr H² = 2 Σ upper·lower` over every bond, closure included.
    pub trace_sq: f64,
    pub log_abs_det: f64,
    pub det_phase: f64,
}

pub fn spectral_moments(h: &BandedHamiltonian) -> SpectralMoments {
    let mut trace_sq: Complex64 = h.upper.iter().zip(&h.lower).map(|(u, l)| u * l * 2.0).sum();
    if let (Some(a), Some(b)) = (h.corner_up, h.corner_down) {
        if h.len() >= 3 {
            trace_sq += a * b * 2.0;
        } else {
            // folded two-site ring: (u+β)(l+α) replaces u·l
            trace_sq = (h.upper[0] + b) * (h.lower[0] + a) * 2.0;
        }
    }
    let det = det_shifted(h, Complex64::new(0.0, 0.0));
    SpectralMoments {
        trace: 0.0,
        trace_sq: trace_sq.re,
        log_abs_det: det.log_abs(),
        det_phase: det.phase(),
    }
}
