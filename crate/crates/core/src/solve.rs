//! Spectrum of a chain, routed through the cheapest reliable solver.
//!
//! Open chains whose gauged blocks decouple are solved block by block with
//! the symmetric tridiagonal solver. Coupled open chains and every periodic
//! chain go through the general complex solver.

use num_complex::Complex64;
use thiserror::Error;

use crate::eigen::{
    eig_general_with, eig_sym_tridiag, normalize, residual, residual_tolerance, solve_end,
    tridiagonal_eigenvector, twisted_null_vector, CMatrix, End, GeneralOptions, LogAmplitude,
    Spectrum, SpectrumSource, SymTridiag,
};
use crate::error::{EigenError, GaugeError, LatticeError};
use crate::gauge::{hermitize, ungauge_log, BlockDecomposition};
use crate::lattice::{build_hamiltonian, BandedHamiltonian, Boundary, LatticeParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Gauge(#[from] GaugeError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveOptions {
    pub want_vectors: bool,
    /// Seed for inverse-iteration start vectors.
    pub seed: u64,
    /// Forces the general solver even where the block route applies.
    pub force_general: bool,
}

impl SolveOptions {
    pub fn with_vectors(seed: u64) -> Self {
        SolveOptions {
            want_vectors: true,
            seed,
            force_general: false,
        }
    }
}

/// Eigenvalues (and optionally eigenvectors) of the chain described by `params`.
///
/// Block-route spectra list the Hermitian block (ascending real part) before
/// the anti-Hermitian block (ascending imaginary part); general-route spectra
/// are sorted by `(Re, Im)`.
pub fn solve(params: &LatticeParams, opts: SolveOptions) -> Result<Spectrum, SolveError> {
    params.validate()?;
    let h = build_hamiltonian(params)?;
    let block_route =
        params.boundary == Boundary::Obc && params.regime().is_decoupled() && !opts.force_general;
    if block_route {
        match hermitize(params) {
            Ok(blocks) => return solve_blocks(&h, &blocks, opts.want_vectors),
            // a vanishing hop inside a block (t = 0) leaves only the general route
            Err(GaugeError::DegenerateBond { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    solve_matrix(&h, opts)
}

/// General-solver spectrum of an arbitrary banded Hamiltonian.
pub fn solve_matrix(h: &BandedHamiltonian, opts: SolveOptions) -> Result<Spectrum, SolveError> {
    let general = GeneralOptions {
        want_vectors: opts.want_vectors,
        seed: opts.seed,
        ..GeneralOptions::default()
    };
    let mut spectrum = eig_general_with(&CMatrix::from(h), general)?;
    if opts.want_vectors && !h.is_periodic() {
        refine_open_chain_vectors(h, &mut spectrum)?;
    }
    Ok(spectrum)
}

/// Replaces inverse-iteration vectors of an open chain by twisted-factorization
/// vectors wherever that lowers the residual.
fn refine_open_chain_vectors(
    h: &BandedHamiltonian,
    spectrum: &mut Spectrum,
) -> Result<(), SolveError> {
    let tol = residual_tolerance(h.frobenius_norm());
    let vectors = spectrum.eigenvectors.as_mut().expect("vectors requested");
    for (k, lambda) in spectrum.eigenvalues.iter().enumerate() {
        let v = tridiagonal_eigenvector(h, *lambda)?;
        let r = residual(h, *lambda, &v)?;
        if r < spectrum.residuals[k] {
            vectors[k] = v;
            spectrum.residuals[k] = r;
            spectrum.flagged[k] = r > tol;
        }
    }
    Ok(())
}

/// Eigenvalues of the two gauged blocks taken on their own, ignoring the
/// coupling. Returns `(Hermitian block, anti-Hermitian block)`.
pub fn block_spectra(
    params: &LatticeParams,
) -> Result<(Vec<Complex64>, Vec<Complex64>), SolveError> {
    let blocks = hermitize(params)?;
    let a = eig_sym_tridiag(&blocks.block_a, false)?.eigenvalues;
    let b = eig_sym_tridiag(&blocks.block_b, false)?.eigenvalues;
    Ok((a, b))
}

fn solve_blocks(
    h: &BandedHamiltonian,
    blocks: &BlockDecomposition,
    want_vectors: bool,
) -> Result<Spectrum, SolveError> {
    let sa = eig_sym_tridiag(&blocks.block_a, false)?;
    let sb = eig_sym_tridiag(&blocks.block_b, false)?;
    let n = h.len();
    let m = blocks.split();
    let eigenvalues: Vec<Complex64> = sa
        .eigenvalues
        .iter()
        .chain(&sb.eigenvalues)
        .copied()
        .collect();
    if !want_vectors {
        return Ok(Spectrum {
            flagged: vec![false; n],
            eigenvalues,
            eigenvectors: None,
            residuals: Vec::new(),
            source: SpectrumSource::SymTridiag,
        });
    }

    let c = &blocks.coupling;
    let shifted = |t: &SymTridiag, lambda: Complex64| -> (Vec<Complex64>, Vec<Complex64>) {
        let f = if t.imaginary {
            Complex64::i()
        } else {
            Complex64::new(1.0, 0.0)
        };
        (
            t.diag.iter().map(|&d| f * d - lambda).collect(),
            t.offdiag.iter().map(|&e| f * e).collect(),
        )
    };
    let mut gauged: Vec<(Vec<LogAmplitude>, bool)> = Vec::with_capacity(n);
    for lambda in &sa.eigenvalues {
        // (s, w) with (i·B − λ) w = −b s_m e_1
        let mut full = block_eigenvector(&blocks.block_a, lambda.re);
        let mut singular = false;
        if m < n {
            let mut tail = vec![LogAmplitude::ZERO; n - m];
            if c.hop_backward != 0.0 {
                let rhs = LogAmplitude {
                    log_mag: full[m - 1].log_mag + c.hop_backward.abs().ln() + c.log_gauge,
                    phase: -full[m - 1].phase * c.hop_backward.signum(),
                };
                let (diag, off) = shifted(&blocks.block_b, *lambda);
                match solve_end(&diag, &off, &off, rhs, End::First) {
                    Some(w) => tail = w,
                    None => singular = true,
                }
            }
            full.extend(tail);
        }
        gauged.push((full, singular));
    }
    for lambda in &sb.eigenvalues {
        // (x, y) with (A − λ) x = −a y_1 e_m
        let y = block_eigenvector(&blocks.block_b, lambda.im);
        let mut full = vec![LogAmplitude::ZERO; m];
        let mut singular = false;
        if m > 0 && c.hop_forward != 0.0 {
            let rhs = LogAmplitude {
                log_mag: y[0].log_mag + c.hop_forward.abs().ln() - c.log_gauge,
                phase: -y[0].phase * c.hop_forward.signum(),
            };
            let (diag, off) = shifted(&blocks.block_a, *lambda);
            match solve_end(&diag, &off, &off, rhs, End::Last) {
                Some(x) => full = x,
                None => singular = true,
            }
        }
        full.extend(y);
        gauged.push((full, singular));
    }

    let tol = residual_tolerance(h.frobenius_norm());
    let mut vectors = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    let mut flagged = Vec::with_capacity(n);
    for ((g, singular), lambda) in gauged.into_iter().zip(&eigenvalues) {
        let mut v = ungauge_log(&blocks.gauge, &g)?;
        normalize(&mut v);
        let r = residual(h, *lambda, &v)?;
        flagged.push(singular || r > tol);
        residuals.push(r);
        vectors.push(v);
    }
    Ok(Spectrum {
        eigenvalues,
        eigenvectors: Some(vectors),
        residuals,
        flagged,
        source: SpectrumSource::SymTridiag,
    })
}

/// Eigenvector of the stored real matrix `t` for eigenvalue `mu`, in log form.
pub(crate) fn block_eigenvector(t: &SymTridiag, mu: f64) -> Vec<LogAmplitude> {
    let diag: Vec<Complex64> = t.diag.iter().map(|&d| Complex64::from(d - mu)).collect();
    let off: Vec<Complex64> = t.offdiag.iter().map(|&e| Complex64::from(e)).collect();
    twisted_null_vector(&diag, &off, &off)
}
