//! Post-processing of spectra and eigenstates.

mod classify;
mod decoupling;
mod envelope;
mod ladder;
mod localization;
mod winding;

pub use classify::{
    class_tolerance, classify, classify_values, ClassCounts, ClassifiedEntry, ClassifiedSpectrum,
    EigenClass,
};
pub use decoupling::{decoupling_check, real_state_tails, DecouplingReport, RestrictedBlock};
pub use envelope::{fit_envelope, global_envelope, EnvelopeFit, SUPPORT_FRACTION};
pub use ladder::{level_spacings, spacings_of, LadderStats, INTERIOR_WINDOW, LADDER_THRESHOLD};
pub use localization::{localization, LocalizationMetrics};
pub use winding::{
    phase_trace_with, winding_number, winding_number_with, PhaseSample, WindingResult,
    DEFAULT_THETA_STEPS, MIN_THETA_STEPS,
};
