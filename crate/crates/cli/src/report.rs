//! Computations behind each command, collected into serializable reports.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use skinlab::analysis::{
    classify, fit_envelope, global_envelope, level_spacings, localization, phase_trace_with,
    winding_number_with, ClassifiedEntry, ClassifiedSpectrum, EigenClass, EnvelopeFit, LadderStats,
    PhaseSample,
};
use skinlab::lattice::{build_flux_twisted, build_hatano_nelson_twisted, BandedHamiltonian};
use skinlab::solve::{block_spectra, solve, SolveError, SolveOptions};
use skinlab::{Boundary, GaugeError, LatticeParams, Regime};

use crate::args::Selection;
use crate::error::CliError;

/// Echo of the inputs that produced a document.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub t: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    pub length: usize,
    pub boundary: Boundary,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub select: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<&'static str>,
}

impl RunConfig {
    pub fn new(command: &'static str, params: &LatticeParams, seed: u64) -> Self {
        RunConfig {
            command,
            t: params.t,
            gamma: Some(params.gamma),
            length: params.length,
            boundary: params.boundary,
            seed,
            select: None,
            gamma_grid: None,
            base: None,
            theta_steps: None,
            model: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenRow {
    pub index: usize,
    pub re: f64,
    pub im: f64,
    pub class: &'static str,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockRow {
    /// `A` for the Hermitian block, `B` for the anti-Hermitian one.
    pub block: &'static str,
    pub index: usize,
    pub re: f64,
    pub im: f64,
    /// Distance to the nearest eigenvalue of the full chain.
    pub distance: f64,
    pub matched: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockReport {
    pub tolerance: f64,
    pub mismatch: bool,
    pub rows: Vec<BlockRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LadderReport {
    pub real: Option<LadderStats>,
    pub imaginary: Option<LadderStats>,
    /// Every consecutive spacing per class, for plotting.
    #[serde(skip)]
    pub all_spacings: Vec<(&'static str, Vec<f64>)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    pub amplitude: f64,
    pub center: f64,
    pub width_param: f64,
    pub target_width: f64,
    pub width_ratio: f64,
    pub rms_error: f64,
    pub support_sites: usize,
}

impl From<&EnvelopeFit> for FitReport {
    fn from(f: &EnvelopeFit) -> Self {
        FitReport {
            amplitude: f.amplitude,
            center: f.center,
            width_param: f.width_param,
            target_width: f.target_width,
            width_ratio: f.width_ratio(),
            rms_error: f.rms_error,
            support_sites: f.support_sites(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StateReport {
    pub state_id: usize,
    pub eigen_re: f64,
    pub eigen_im: f64,
    pub class: &'static str,
    pub residual: f64,
    pub flagged: bool,
    pub centroid: f64,
    pub ipr: f64,
    pub argmax_site: usize,
    pub fit: Option<FitReport>,
    /// `|ψ_j| / max |ψ|` for sites `j = 1..L`.
    pub profile: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeReport {
    pub profile: Vec<f64>,
    pub fit: Option<FitReport>,
    /// Centre used for `reference`: fixed by the caller or taken from the fit.
    pub reference_center: f64,
    /// `A exp(−(|γ|/2)(j − x0)²)` with the fitted amplitude.
    pub reference: Vec<f64>,
    /// The fitted Gaussian itself.
    pub fitted: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WindingReport {
    pub winding: i32,
    pub point_gap: bool,
    pub theta_steps_used: usize,
    pub min_ratio: f64,
    pub total_phase: f64,
    pub trace: Vec<PhaseSample>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Analysis {
    pub ladder: Option<LadderReport>,
    pub envelopes: Option<EnvelopeReport>,
    pub winding: Option<WindingReport>,
    pub blocks: Option<BlockReport>,
}

/// The single document written by spectrum, states and winding runs.
#[derive(Debug, Clone, Serialize)]
pub struct Document {
    pub config: RunConfig,
    pub regime: Option<Regime>,
    pub eigenvalues: Vec<EigenRow>,
    pub states: Vec<StateReport>,
    pub analysis: Analysis,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepEigen {
    pub index: usize,
    pub re: f64,
    pub im: f64,
    pub class: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub gamma: f64,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub regime: Option<Regime>,
    pub n_real: usize,
    pub n_imaginary: usize,
    pub n_complex: usize,
    pub eigenvalues: Vec<SweepEigen>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepDocument {
    pub config: RunConfig,
    pub points: Vec<SweepPoint>,
}

pub fn params(
    t: f64,
    gamma: f64,
    length: usize,
    boundary: Boundary,
) -> Result<LatticeParams, CliError> {
    Ok(LatticeParams::new(t, gamma, length, boundary)?)
}

fn eigen_rows(classified: &ClassifiedSpectrum, residuals: &[f64]) -> Vec<EigenRow> {
    classified
        .entries
        .iter()
        .enumerate()
        .map(|(index, e)| EigenRow {
            index,
            re: e.value.re,
            im: e.value.im,
            class: e.class.name(),
            residual: residuals.get(e.source_index).copied().unwrap_or(f64::NAN),
        })
        .collect()
}

fn ladder(classified: &ClassifiedSpectrum) -> LadderReport {
    let all = |class: EigenClass| {
        let values = classified.axis_values(class);
        let spacings = values.windows(2).map(|w| w[1] - w[0]).collect();
        (class.name(), spacings)
    };
    LadderReport {
        real: level_spacings(classified, EigenClass::Real).ok(),
        imaginary: level_spacings(classified, EigenClass::Imaginary).ok(),
        all_spacings: vec![all(EigenClass::Real), all(EigenClass::Imaginary)],
    }
}

fn blocks(
    params: &LatticeParams,
    full: &[Complex64],
    radius: f64,
) -> Result<Option<BlockReport>, CliError> {
    if params.boundary == Boundary::Pbc {
        return Ok(None);
    }
    let (a, b) = match block_spectra(params) {
        Ok(ab) => ab,
        Err(SolveError::Gauge(GaugeError::DegenerateBond { .. })) => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let tolerance = 1e-8 * radius.max(1.0);
    let sort = |mut v: Vec<Complex64>| {
        v.sort_by(|x, y| {
            (x.re, x.im)
                .partial_cmp(&(y.re, y.im))
                .expect("finite eigenvalues")
        });
        v
    };
    let (a, b) = (sort(a), sort(b));
    let rows: Vec<BlockRow> = a
        .iter()
        .map(|z| ("A", z))
        .chain(b.iter().map(|z| ("B", z)))
        .scan((None, 0), |(last, k), (block, z)| {
            if *last != Some(block) {
                *last = Some(block);
                *k = 0;
            }
            *k += 1;
            Some((block, *k - 1, *z))
        })
        .map(|(block, index, z)| {
            let distance = full
                .iter()
                .map(|e| (e - z).norm())
                .fold(f64::INFINITY, f64::min);
            BlockRow {
                block,
                index,
                re: z.re,
                im: z.im,
                distance,
                matched: distance <= tolerance,
            }
        })
        .collect();
    Ok(Some(BlockReport {
        tolerance,
        mismatch: rows.iter().any(|r| !r.matched),
        rows,
    }))
}

pub fn spectrum_document(params: &LatticeParams, seed: u64) -> Result<Document, CliError> {
    let spectrum = solve(params, SolveOptions::with_vectors(seed))?;
    let classified = classify(&spectrum);
    let blocks = blocks(params, &spectrum.eigenvalues, spectrum.spectral_radius())?;
    Ok(Document {
        config: RunConfig::new("spectrum", params, seed),
        regime: Some(params.regime()),
        eigenvalues: eigen_rows(&classified, &spectrum.residuals),
        states: Vec::new(),
        analysis: Analysis {
            ladder: Some(ladder(&classified)),
            blocks,
            ..Analysis::default()
        },
    })
}

fn select<'a>(
    classified: &'a ClassifiedSpectrum,
    selection: &Selection,
) -> Vec<(usize, &'a ClassifiedEntry)> {
    let indexed = classified.entries.iter().enumerate();
    match selection {
        Selection::All => indexed.collect(),
        Selection::Real => indexed
            .filter(|(_, e)| e.class == EigenClass::Real)
            .collect(),
        Selection::Imaginary => indexed
            .filter(|(_, e)| e.class == EigenClass::Imaginary)
            .collect(),
        Selection::Nearest(targets) => {
            let mut picked: Vec<(usize, &ClassifiedEntry)> = Vec::new();
            for z in targets {
                let best = classified
                    .entries
                    .iter()
                    .enumerate()
                    .min_by(|(_, a), (_, b)| (a.value - z).norm().total_cmp(&(b.value - z).norm()));
                if let Some(best) = best {
                    if !picked.iter().any(|(i, _)| *i == best.0) {
                        picked.push(best);
                    }
                }
            }
            picked
        }
    }
}

fn gaussian(amplitude: f64, center: f64, width: f64, length: usize) -> Vec<f64> {
    (1..=length)
        .map(|j| amplitude * (-width * (j as f64 - center).powi(2)).exp())
        .collect()
}

pub fn states_document(
    params: &LatticeParams,
    selection: &Selection,
    envelope_center: Option<f64>,
    seed: u64,
) -> Result<Document, CliError> {
    if let Some(x0) = envelope_center {
        if !x0.is_finite() {
            return Err(CliError::Invalid(format!(
                "envelope centre must be finite, got {x0}"
            )));
        }
    }
    let spectrum = solve(params, SolveOptions::with_vectors(seed))?;
    let classified = classify(&spectrum);
    let vectors = spectrum.eigenvectors.as_ref().expect("vectors requested");
    let chosen = select(&classified, selection);
    if chosen.is_empty() {
        return Err(CliError::Invalid(format!(
            "selection {} matches no eigenvalue",
            selection.describe()
        )));
    }

    let mut states = Vec::with_capacity(chosen.len());
    let mut picked_vectors = Vec::with_capacity(chosen.len());
    for (state_id, entry) in chosen {
        let v = &vectors[entry.source_index];
        let metrics = localization(v)?;
        let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        states.push(StateReport {
            state_id,
            eigen_re: entry.value.re,
            eigen_im: entry.value.im,
            class: entry.class.name(),
            residual: spectrum.residuals[entry.source_index],
            flagged: spectrum.flagged[entry.source_index],
            centroid: metrics.centroid,
            ipr: metrics.ipr,
            argmax_site: metrics.argmax_site,
            fit: fit_envelope(v, params.gamma)
                .ok()
                .as_ref()
                .map(FitReport::from),
            profile: v.iter().map(|z| z.norm() / max).collect(),
        });
        picked_vectors.push(v.clone());
    }

    let profile = global_envelope(&picked_vectors)?;
    let fit = EnvelopeFit::of_profile(&profile, params.gamma).ok();
    let peak = profile
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map_or(1.0, |(i, _)| (i + 1) as f64);
    let reference_center = envelope_center
        .or(fit.as_ref().map(|f| f.center))
        .unwrap_or(peak);
    let amplitude = fit.as_ref().map_or(1.0, |f| f.amplitude);
    let n = params.length;
    let envelopes = EnvelopeReport {
        reference: gaussian(amplitude, reference_center, params.gamma.abs() / 2.0, n),
        fitted: fit.as_ref().map_or_else(
            || vec![f64::NAN; n],
            |f| gaussian(f.amplitude, f.center, f.width_param, n),
        ),
        fit: fit.as_ref().map(FitReport::from),
        reference_center,
        profile,
    };

    let mut config = RunConfig::new("states", params, seed);
    config.select = Some(selection.describe());
    Ok(Document {
        config,
        regime: Some(params.regime()),
        eigenvalues: eigen_rows(&classified, &spectrum.residuals),
        states,
        analysis: Analysis {
            ladder: Some(ladder(&classified)),
            envelopes: Some(envelopes),
            ..Analysis::default()
        },
    })
}

/// Ring family `θ ↦ H(θ)` for a winding run.
#[derive(Debug, Clone, Copy)]
pub enum Ring {
    Graded(LatticeParams),
    HatanoNelson { t: f64, gamma: f64, length: usize },
}

impl Ring {
    fn build(&self, theta: f64) -> BandedHamiltonian {
        match *self {
            Ring::Graded(p) => build_flux_twisted(&p, theta).expect("validated ring"),
            Ring::HatanoNelson { t, gamma, length } => {
                build_hatano_nelson_twisted(t, gamma, length, theta).expect("validated ring")
            }
        }
    }
}

pub fn winding_document(
    ring: Ring,
    base: Complex64,
    theta_steps: usize,
    seed: u64,
) -> Result<Document, CliError> {
    let (params, model) = match ring {
        Ring::Graded(p) => (p, "graded"),
        Ring::HatanoNelson { t, gamma, length } => {
            (LatticeParams::pbc(t, gamma, length)?, "hatano_nelson")
        }
    };
    if params.boundary != Boundary::Pbc {
        return Err(CliError::Invalid("winding needs --boundary pbc".into()));
    }
    if !(base.re.is_finite() && base.im.is_finite()) {
        return Err(CliError::Invalid("base point must be finite".into()));
    }
    // validate before the builder's expect
    ring.build(0.0);
    let r = winding_number_with(|th| ring.build(th), base, theta_steps)?;
    let trace = phase_trace_with(|th| ring.build(th), base, r.theta_steps_used);
    let mut config = RunConfig::new("winding", &params, seed);
    config.base = Some([base.re, base.im]);
    config.theta_steps = Some(theta_steps);
    config.model = Some(model);
    Ok(Document {
        config,
        regime: matches!(ring, Ring::Graded(_)).then(|| params.regime()),
        eigenvalues: Vec::new(),
        states: Vec::new(),
        analysis: Analysis {
            winding: Some(WindingReport {
                winding: r.winding,
                point_gap: r.winding != 0,
                theta_steps_used: r.theta_steps_used,
                min_ratio: r.min_ratio,
                total_phase: r.total_phase,
                trace,
            }),
            ..Analysis::default()
        },
    })
}

/// `steps` evenly spaced values from `min` to `max` inclusive.
pub fn gamma_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if !(min.is_finite() && max.is_finite()) {
        return Err(CliError::Invalid("gamma range must be finite".into()));
    }
    match steps {
        0 => Err(CliError::Invalid("gamma grid is empty".into())),
        1 if min == max => Ok(vec![min]),
        1 => Err(CliError::Invalid(
            "a one-point grid needs --gamma-min equal to --gamma-max".into(),
        )),
        _ if max < min => Err(CliError::Invalid("--gamma-max is below --gamma-min".into())),
        _ => {
            let h = (max - min) / (steps - 1) as f64;
            Ok((0..steps)
                .map(|k| {
                    if k == steps - 1 {
                        max
                    } else {
                        min + h * k as f64
                    }
                })
                .collect())
        }
    }
}

fn sweep_point(t: f64, gamma: f64, length: usize, boundary: Boundary) -> SweepPoint {
    let failed = |gamma: f64, e: String| SweepPoint {
        gamma,
        status: "failed",
        error: Some(e),
        regime: None,
        n_real: 0,
        n_imaginary: 0,
        n_complex: 0,
        eigenvalues: Vec::new(),
    };
    let p = match LatticeParams::new(t, gamma, length, boundary) {
        Ok(p) => p,
        Err(e) => return failed(gamma, e.to_string()),
    };
    match solve(&p, SolveOptions::default()) {
        Ok(s) => {
            let c = classify(&s);
            SweepPoint {
                gamma,
                status: "ok",
                error: None,
                regime: Some(p.regime()),
                n_real: c.counts.n_real,
                n_imaginary: c.counts.n_imaginary,
                n_complex: c.counts.n_complex,
                eigenvalues: c
                    .entries
                    .iter()
                    .enumerate()
                    .map(|(index, e)| SweepEigen {
                        index,
                        re: e.value.re,
                        im: e.value.im,
                        class: e.class.name(),
                    })
                    .collect(),
            }
        }
        Err(e) => failed(gamma, e.to_string()),
    }
}

pub fn sweep_document(
    t: f64,
    length: usize,
    boundary: Boundary,
    grid: Vec<f64>,
    workers: usize,
) -> Result<SweepDocument, CliError> {
    // one representative point validates t, length and boundary up front
    let first = params(t, grid[0], length, boundary)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Invalid(format!("cannot start {workers} workers: {e}")))?;
    let points = pool.install(|| {
        grid.par_iter()
            .map(|&gamma| sweep_point(t, gamma, length, boundary))
            .collect()
    });
    let mut config = RunConfig::new("sweep", &first, 0);
    config.gamma = None;
    config.gamma_grid = Some(grid);
    Ok(SweepDocument { config, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_are_exact() {
        let g = gamma_grid(0.0, 1.2, 241).unwrap();
        assert_eq!(g.len(), 241);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[240], 1.2);
        assert!((g[2] - 0.01).abs() < 1e-15);
        assert_eq!(gamma_grid(0.3, 0.3, 1).unwrap(), vec![0.3]);
        assert!(gamma_grid(0.3, 0.4, 1).is_err());
        assert!(gamma_grid(0.4, 0.3, 5).is_err());
        assert!(gamma_grid(0.0, f64::NAN, 5).is_err());
    }

    #[test]
    fn nearest_selection_picks_each_target_once() {
        let p = LatticeParams::obc(1.0, 0.011, 100).unwrap();
        let targets = vec![Complex64::new(0.0, 0.6864), Complex64::new(0.0, -0.6864)];
        let doc = states_document(&p, &Selection::Nearest(targets), None, 0).unwrap();
        assert_eq!(doc.states.len(), 2);
        for s in &doc.states {
            assert!((s.eigen_im.abs() - 0.6864).abs() < 1e-3);
            assert_eq!(s.class, "imaginary");
        }
    }

    #[test]
    fn failed_points_carry_a_marker() {
        let p = sweep_point(f64::NAN, 0.1, 10, Boundary::Obc);
        assert_eq!(p.status, "failed");
        assert!(p.error.is_some());
        assert!(p.eigenvalues.is_empty());
    }
}
