use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigen::Spectrum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenClass {
    Real,
    Imaginary,
    Complex,
}

impl EigenClass {
    pub fn name(self) -> &'static str {
        match self {
            EigenClass::Real => "real",
            EigenClass::Imaginary => "imaginary",
            EigenClass::Complex => "complex",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedEntry {
    pub value: Complex64,
    pub class: EigenClass,
    /// Position within its class, in class order.
    pub index_in_class: usize,
    /// Position in the source spectrum.
    pub source_index: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub n_real: usize,
    pub n_imaginary: usize,
    pub n_complex: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedSpectrum {
    /// Real (ascending Re), then imaginary (ascending Im), then complex (by Re, Im).
    pub entries: Vec<ClassifiedEntry>,
    pub counts: ClassCounts,
    pub tolerance: f64,
}

impl ClassifiedSpectrum {
    pub fn of_class(&self, class: EigenClass) -> impl Iterator<Item = &ClassifiedEntry> {
        self.entries.iter().filter(move |e| e.class == class)
    }

    /// Real parts of real entries or imaginary parts of imaginary entries.
    pub fn axis_values(&self, class: EigenClass) -> Vec<f64> {
        self.of_class(class)
            .map(|e| match class {
                EigenClass::Imaginary => e.value.im,
                _ => e.value.re,
            })
            .collect()
    }
}

/// `1e-6 · max(1, spectral radius)`.
pub fn class_tolerance(spectral_radius: f64) -> f64 {
    1e-6 * spectral_radius.max(1.0)
}

/// Sorts eigenvalues into real, imaginary and complex classes. Values within
/// tolerance of zero count as real.
pub fn classify(spectrum: &Spectrum) -> ClassifiedSpectrum {
    classify_values(&spectrum.eigenvalues)
}

pub fn classify_values(values: &[Complex64]) -> ClassifiedSpectrum {
    let radius = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tol = class_tolerance(radius);
    let class_of = |z: &Complex64| {
        if z.im.abs() <= tol {
            EigenClass::Real
        } else if z.re.abs() <= tol {
            EigenClass::Imaginary
        } else {
            EigenClass::Complex
        }
    };
    let mut order: Vec<(EigenClass, usize)> = values
        .iter()
        .enumerate()
        .map(|(k, z)| (class_of(z), k))
        .collect();
    let rank = |c: EigenClass| c as u8;
    order.sort_by(|&(ca, a), &(cb, b)| {
        let (x, y) = (values[a], values[b]);
        rank(ca).cmp(&rank(cb)).then_with(|| match ca {
            EigenClass::Real => x.re.total_cmp(&y.re),
            EigenClass::Imaginary => x.im.total_cmp(&y.im),
            EigenClass::Complex => x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)),
        })
    });
    let mut counts = ClassCounts::default();
    let entries = order
        .into_iter()
        .map(|(class, k)| {
            let slot = match class {
                EigenClass::Real => &mut counts.n_real,
                EigenClass::Imaginary => &mut counts.n_imaginary,
                EigenClass::Complex => &mut counts.n_complex,
            };
            let index_in_class = *slot;
            *slot += 1;
            ClassifiedEntry {
                value: values[k],
                class,
                index_in_class,
                source_index: k,
            }
        })
        .collect();
    ClassifiedSpectrum {
        entries,
        counts,
        tolerance: tol,
    }
}
