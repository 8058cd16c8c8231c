//! General complex eigensolver.
//!
//! Pipeline: Osborne balancing (2-norm, continuous factors), Householder
//! reduction to upper Hessenberg form, implicit single-shift complex QR with
//! Wilkinson shifts, then inverse iteration on the Hessenberg matrix for the
//! eigenvectors. Vectors are mapped back through the Householder and balancing
//! transforms and their residuals are measured on the original matrix.
//!
//! Continuous balancing matters here: radix-2 balancing leaves the
//! linear-hopping chains far enough from normal that eigenvalues pick up
//! spurious imaginary parts of order 1e-2 at L = 100.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SWEEPS_PER_DIMENSION;
use super::{
    normalize, residual_dense, residual_tolerance, vector_norm, CMatrix, Spectrum, SpectrumSource,
};
use crate::error::EigenError;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralOptions {
    pub want_vectors: bool,
    /// Seed for the inverse-iteration start vectors.
    pub seed: u64,
    /// Fresh random restarts after the first inverse-iteration attempt.
    pub restarts: usize,
}

impl Default for GeneralOptions {
    fn default() -> Self {
        GeneralOptions {
            want_vectors: false,
            seed: 0,
            restarts: 3,
        }
    }
}

/// Eigen-decomposition of a dense complex matrix with default options.
pub fn eig_general(a: &CMatrix, want_vectors: bool) -> Result<Spectrum, EigenError> {
    eig_general_with(
        a,
        GeneralOptions {
            want_vectors,
            ..GeneralOptions::default()
        },
    )
}

pub fn eig_general_with(a: &CMatrix, opts: GeneralOptions) -> Result<Spectrum, EigenError> {
    let n = a.dim();
    if n == 0 {
        return Err(EigenError::Empty);
    }
    let mut work = a.clone();
    let scales = balance(&mut work);
    let (mut hess, q) = hessenberg(&work, opts.want_vectors);
    let reduced = hess.clone();
    let eigenvalues = hessenberg_qr(&mut hess)?;

    let mut spectrum = if opts.want_vectors {
        let q = q.expect("reflectors accumulated when vectors requested");
        let tol = residual_tolerance(a.frobenius_norm());
        let mut vectors = Vec::with_capacity(n);
        let mut residuals = Vec::with_capacity(n);
        let mut flagged = Vec::with_capacity(n);
        for (index, &lambda) in eigenvalues.iter().enumerate() {
            let (y, stalled) = inverse_iteration(&reduced, lambda, opts, index);
            // v = D Q y
            let mut v = q.matvec(&y);
            for (z, d) in v.iter_mut().zip(&scales) {
                *z *= d;
            }
            normalize(&mut v);
            let r = residual_dense(a, lambda, &v).unwrap_or(f64::INFINITY);
            // a NaN residual counts as unconverged
            flagged.push(stalled || r.is_nan() || r > tol);
            residuals.push(r);
            vectors.push(v);
        }
        Spectrum {
            eigenvalues,
            eigenvectors: Some(vectors),
            residuals,
            flagged,
            source: SpectrumSource::GeneralQr,
        }
    } else {
        Spectrum {
            flagged: vec![false; eigenvalues.len()],
            eigenvalues,
            eigenvectors: None,
            residuals: Vec::new(),
            source: SpectrumSource::GeneralQr,
        }
    };
    spectrum.sort_lexicographic();
    Ok(spectrum)
}

/// Osborne balancing in place: `A ← D⁻¹ A D`, returning the diagonal of `D`.
///
/// Works on the off-diagonal sparsity pattern, so a sweep over a banded
/// matrix costs O(nnz).
pub fn balance(a: &mut CMatrix) -> Vec<f64> {
    let n = a.dim();
    let mut scales = vec![1.0; n];
    if n < 2 {
        return scales;
    }
    let mut row_nz: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut col_nz: Vec<Vec<usize>> = vec![Vec::new(); n];
    for r in 0..n {
        for c in 0..n {
            if r != c && a[(r, c)] != ZERO {
                row_nz[r].push(c);
                col_nz[c].push(r);
            }
        }
    }
    let max_sweeps = 500 + 20 * n;
    const LOG_LIMIT: f64 = 300.0;
    for _ in 0..max_sweeps {
        let mut largest_step = 0.0f64;
        for i in 0..n {
            let col: f64 = col_nz[i].iter().map(|&r| a[(r, i)].norm_sqr()).sum();
            let row: f64 = row_nz[i].iter().map(|&c| a[(i, c)].norm_sqr()).sum();
            if col == 0.0 || row == 0.0 || !col.is_finite() || !row.is_finite() {
                continue;
            }
            let f = (row / col).sqrt().sqrt();
            if (f - 1.0).abs() < 1e-14 {
                continue;
            }
            let next = scales[i] * f;
            if next.ln().abs() > LOG_LIMIT {
                continue;
            }
            for &r in &col_nz[i] {
                a[(r, i)] *= f;
            }
            for &c in &row_nz[i] {
                a[(i, c)] /= f;
            }
            scales[i] = next;
            largest_step = largest_step.max(f.ln().abs());
        }
        if largest_step < 1e-12 {
            break;
        }
    }
    scales
}

/// Householder reduction `H = Qᴴ A Q`; `Q` is returned when requested.
fn hessenberg(a: &CMatrix, want_q: bool) -> (CMatrix, Option<CMatrix>) {
    let n = a.dim();
    let mut h = a.clone();
    let mut q = want_q.then(|| CMatrix::identity(n));
    for k in 0..n.saturating_sub(2) {
        let alpha_norm = (k + 1..n).map(|r| h[(r, k)].norm_sqr()).sum::<f64>().sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let tail: f64 = (k + 2..n).map(|r| h[(r, k)].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0 == ZERO {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * alpha_norm;
        let mut v: Vec<Complex64> = (k + 1..n).map(|r| h[(r, k)]).collect();
        v[0] -= alpha;
        let vnorm = vector_norm(&v);
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // H ← (I − 2vvᴴ) H on rows k+1..n
        for c in 0..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(i, vi)| vi.conj() * h[(k + 1 + i, c)])
                .sum();
            let dot2 = dot * 2.0;
            for (i, vi) in v.iter().enumerate() {
                h[(k + 1 + i, c)] -= vi * dot2;
            }
        }
        // H ← H (I − 2vvᴴ) on columns k+1..n
        for r in 0..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(i, vi)| h[(r, k + 1 + i)] * vi)
                .sum();
            let dot2 = dot * 2.0;
            for (i, vi) in v.iter().enumerate() {
                h[(r, k + 1 + i)] -= dot2 * vi.conj();
            }
        }
        for r in k + 2..n {
            h[(r, k)] = ZERO;
        }
        h[(k + 1, k)] = alpha;
        if let Some(q) = q.as_mut() {
            for r in 0..n {
                let dot: Complex64 = v
                    .iter()
                    .enumerate()
                    .map(|(i, vi)| q[(r, k + 1 + i)] * vi)
                    .sum();
                let dot2 = dot * 2.0;
                for (i, vi) in v.iter().enumerate() {
                    q[(r, k + 1 + i)] -= dot2 * vi.conj();
                }
            }
        }
    }
    (h, q)
}

fn abs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Eigenvalues of an upper Hessenberg matrix (destroyed in the process).
fn hessenberg_qr(h: &mut CMatrix) -> Result<Vec<Complex64>, EigenError> {
    let n = h.dim();
    let mut eig = vec![ZERO; n];
    let norm = h.frobenius_norm();
    let cap = SWEEPS_PER_DIMENSION * n;
    let mut sweeps = 0usize;
    let mut its = 0usize;
    let mut hi = n - 1;
    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        // locate the bottom of the active unreduced block
        let mut lo = hi;
        while lo > 0 {
            let mut s = abs1(h[(lo - 1, lo - 1)]) + abs1(h[(lo, lo)]);
            if s == 0.0 {
                s = norm;
            }
            if abs1(h[(lo, lo - 1)]) <= f64::EPSILON * s {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            its = 0;
            continue;
        }
        sweeps += 1;
        its += 1;
        if sweeps > cap {
            return Err(EigenError::ConvergenceFailure { sweeps: cap });
        }
        let shift = if its.is_multiple_of(10) {
            // exceptional shift
            h[(hi, hi)] + 0.75 * h[(hi, hi - 1)].re.abs()
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        qr_sweep(h, lo, hi, shift);
    }
    Ok(eig)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let (m1, m2) = (mid + disc, mid - disc);
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

/// Givens pair `(c, s)` with real `c` such that
/// `[c, s; −s̄, c]·[x; y] = [r; 0]`.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, ZERO);
    }
    if ax == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let r = ax.hypot(ay);
    (ax / r, (x / ax) * y.conj() / r)
}

/// One implicit single-shift bulge chase over rows/columns `lo..=hi`.
fn qr_sweep(h: &mut CMatrix, lo: usize, hi: usize, shift: Complex64) {
    let mut x = h[(lo, lo)] - shift;
    let mut y = h[(lo + 1, lo)];
    for k in lo..hi {
        if k > lo {
            x = h[(k, k - 1)];
            y = h[(k + 1, k - 1)];
        }
        let (c, s) = givens(x, y);
        let first = if k > lo { k - 1 } else { lo };
        for col in first..=hi {
            let a = h[(k, col)];
            let b = h[(k + 1, col)];
            h[(k, col)] = a * c + s * b;
            h[(k + 1, col)] = -s.conj() * a + b * c;
        }
        let last = (k + 2).min(hi);
        for row in lo..=last {
            let a = h[(row, k)];
            let b = h[(row, k + 1)];
            h[(row, k)] = a * c + b * s.conj();
            h[(row, k + 1)] = -a * s + b * c;
        }
        if k > lo {
            h[(k + 1, k - 1)] = ZERO;
        }
    }
}

/// Inverse iteration on the Hessenberg matrix. Returns the vector and
/// whether every attempt stalled.
fn inverse_iteration(
    h: &CMatrix,
    lambda: Complex64,
    opts: GeneralOptions,
    index: usize,
) -> (Vec<Complex64>, bool) {
    let n = h.dim();
    let norm = h.frobenius_norm().max(f64::MIN_POSITIVE);
    let tol = residual_tolerance(norm) * 1e-2;
    let lu = HessLu::factor(h, lambda, norm);
    let mut rng =
        ChaCha8Rng::seed_from_u64(opts.seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    for _attempt in 0..=opts.restarts {
        let mut x: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        normalize(&mut x);
        for _ in 0..4 {
            lu.solve(&mut x);
            if !x.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                break;
            }
            normalize(&mut x);
            let r = residual_dense(h, lambda, &x).unwrap_or(f64::INFINITY);
            if best.as_ref().is_none_or(|(b, _)| r < *b) {
                best = Some((r, x.clone()));
            }
            if r <= tol {
                return (x, false);
            }
        }
    }
    match best {
        Some((r, x)) => (x, r > residual_tolerance(norm)),
        None => {
            let mut e = vec![ZERO; n];
            e[0] = Complex64::new(1.0, 0.0);
            (e, true)
        }
    }
}

/// LU factors of `H − λI` for upper Hessenberg `H`, with adjacent-row pivoting.
struct HessLu {
    n: usize,
    u: CMatrix,
    multipliers: Vec<Complex64>,
    swapped: Vec<bool>,
}

impl HessLu {
    fn factor(h: &CMatrix, lambda: Complex64, norm: f64) -> Self {
        let n = h.dim();
        let mut u = h.clone();
        for k in 0..n {
            u[(k, k)] -= lambda;
        }
        let tiny = f64::EPSILON * norm;
        let mut multipliers = vec![ZERO; n.saturating_sub(1)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for k in 0..n.saturating_sub(1) {
            if u[(k + 1, k)].norm() > u[(k, k)].norm() {
                for c in k..n {
                    let tmp = u[(k, c)];
                    u[(k, c)] = u[(k + 1, c)];
                    u[(k + 1, c)] = tmp;
                }
                swapped[k] = true;
            }
            if u[(k, k)].norm() < tiny {
                u[(k, k)] = Complex64::new(tiny, 0.0);
            }
            let m = u[(k + 1, k)] / u[(k, k)];
            multipliers[k] = m;
            u[(k + 1, k)] = ZERO;
            if m != ZERO {
                for c in k + 1..n {
                    let upd = m * u[(k, c)];
                    u[(k + 1, c)] -= upd;
                }
            }
        }
        if u[(n - 1, n - 1)].norm() < tiny {
            u[(n - 1, n - 1)] = Complex64::new(tiny, 0.0);
        }
        HessLu {
            n,
            u,
            multipliers,
            swapped,
        }
    }

    fn solve(&self, x: &mut [Complex64]) {
        let n = self.n;
        for k in 0..n.saturating_sub(1) {
            if self.swapped[k] {
                x.swap(k, k + 1);
            }
            let upd = self.multipliers[k] * x[k];
            x[k + 1] -= upd;
        }
        for k in (0..n).rev() {
            let mut acc = x[k];
            for (c, xc) in x.iter().enumerate().skip(k + 1) {
                acc -= self.u[(k, c)] * xc;
            }
            x[k] = acc / self.u[(k, k)];
            // rescale to keep the back substitution finite near exact eigenvalues
            if x[k].norm() > 1e150 {
                let s = 1.0 / x[k].norm();
                for z in x.iter_mut() {
                    *z *= s;
                }
            }
        }
    }
}
