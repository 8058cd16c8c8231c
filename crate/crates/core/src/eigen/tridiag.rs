use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{normalize, residual_tolerance, Spectrum, SpectrumSource, SWEEPS_PER_DIMENSION};
use crate::error::EigenError;

/// Real symmetric tridiagonal matrix.
///
/// With `imaginary` set, the physical block is `i·T` and its eigenvalues are
/// `i` times those of the stored matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
    pub imaginary: bool,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Self {
        assert!(
            diag.is_empty() && offdiag.is_empty() || offdiag.len() + 1 == diag.len(),
            "offdiagonal must be one shorter than the diagonal"
        );
        SymTridiag {
            diag,
            offdiag,
            imaginary: false,
        }
    }

    pub fn zero_diagonal(offdiag: Vec<f64>) -> Self {
        let n = offdiag.len() + 1;
        Self::new(vec![0.0; n], offdiag)
    }

    pub fn empty() -> Self {
        Self::new(Vec::new(), Vec::new())
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn frobenius_norm(&self) -> f64 {
        let d: f64 = self.diag.iter().map(|x| x * x).sum();
        let e: f64 = self.offdiag.iter().map(|x| x * x).sum();
        (d + 2.0 * e).sqrt()
    }

    /// `T v` for the stored real matrix (the `i` factor is not applied).
    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.len();
        let mut out: Vec<Complex64> = self.diag.iter().zip(v).map(|(d, x)| x * d).collect();
        for k in 0..n.saturating_sub(1) {
            out[k] += v[k + 1] * self.offdiag[k];
            out[k + 1] += v[k] * self.offdiag[k];
        }
        out
    }

    fn factor(&self) -> Complex64 {
        if self.imaginary {
            Complex64::new(0.0, 1.0)
        } else {
            Complex64::new(1.0, 0.0)
        }
    }
}

/// Implicit-shift QL iteration with Wilkinson shifts and deflation.
///
/// Eigenvalues come back ascending (by imaginary part for an imaginary block);
/// eigenvectors, if requested, are orthonormal columns of the stored matrix.
pub fn eig_sym_tridiag(m: &SymTridiag, want_vectors: bool) -> Result<Spectrum, EigenError> {
    let n = m.len();
    if n == 0 {
        return Ok(Spectrum {
            eigenvalues: Vec::new(),
            eigenvectors: want_vectors.then(Vec::new),
            residuals: Vec::new(),
            flagged: Vec::new(),
            source: SpectrumSource::SymTridiag,
        });
    }
    let mut d = m.diag.clone();
    let mut e = m.offdiag.clone();
    e.push(0.0);
    let mut z = if want_vectors {
        let mut z = vec![0.0; n * n];
        for k in 0..n {
            z[k * n + k] = 1.0;
        }
        Some(z)
    } else {
        None
    };
    ql_implicit(&mut d, &mut e, z.as_deref_mut(), n)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let factor = m.factor();
    let eigenvalues: Vec<Complex64> = order.iter().map(|&k| factor * d[k]).collect();

    let (eigenvectors, residuals) = match z {
        Some(z) => {
            let vectors: Vec<Vec<Complex64>> = order
                .iter()
                .map(|&col| {
                    let mut v: Vec<Complex64> = (0..n)
                        .map(|row| Complex64::from(z[row * n + col]))
                        .collect();
                    normalize(&mut v);
                    v
                })
                .collect();
            let residuals = vectors
                .iter()
                .zip(&order)
                .map(|(v, &k)| {
                    let tv = m.matvec(v);
                    let r: f64 = tv
                        .iter()
                        .zip(v)
                        .map(|(a, b)| (a - b * d[k]).norm_sqr())
                        .sum();
                    r.sqrt()
                })
                .collect::<Vec<f64>>();
            (Some(vectors), residuals)
        }
        None => (None, Vec::new()),
    };
    let tol = residual_tolerance(m.frobenius_norm());
    let flagged = if residuals.is_empty() {
        vec![false; n]
    } else {
        residuals.iter().map(|&r| r > tol).collect()
    };
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        residuals,
        flagged,
        source: SpectrumSource::SymTridiag,
    })
}

/// QL sweeps in place. `e[k]` couples `d[k]` and `d[k+1]`; `e[n-1]` is scratch.
/// `z` is row-major `n × n` and accumulates the rotations column-wise.
fn ql_implicit(
    d: &mut [f64],
    e: &mut [f64],
    mut z: Option<&mut [f64]>,
    n: usize,
) -> Result<(), EigenError> {
    let scale = d
        .iter()
        .map(|x| x.abs())
        .chain(e.iter().map(|x| 2.0 * x.abs()))
        .fold(0.0, f64::max);
    let floor = f64::EPSILON * scale;
    let cap = SWEEPS_PER_DIMENSION * n;
    let mut sweeps = 0usize;

    for l in 0..n {
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > cap {
                return Err(EigenError::ConvergenceFailure { sweeps: cap });
            }
            // Wilkinson shift from the leading 2×2 of the unreduced block
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0f64, 1.0f64, 0.0f64);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        let zf = z[k * n + i + 1];
                        let zi = z[k * n + i];
                        z[k * n + i + 1] = s * zi + c * zf;
                        z[k * n + i] = c * zi - s * zf;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
