//! Parameter sets of the reproducible figures.

use num_complex::Complex64;
use serde::Serialize;
use skinlab::Boundary;

use crate::args::{FigureId, Selection};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "job", rename_all = "snake_case")]
pub enum Job {
    Spectrum {
        name: &'static str,
        t: f64,
        gamma: f64,
        length: usize,
        boundary: Boundary,
    },
    States {
        name: &'static str,
        t: f64,
        gamma: f64,
        length: usize,
        boundary: Boundary,
        #[serde(serialize_with = "selection_text")]
        select: Selection,
        envelope_center: Option<f64>,
    },
    Sweep {
        name: &'static str,
        t: f64,
        length: usize,
        boundary: Boundary,
        gamma_min: f64,
        gamma_max: f64,
        gamma_steps: usize,
    },
    Winding {
        name: &'static str,
        t: f64,
        gamma: f64,
        length: usize,
        base: [f64; 2],
    },
}

fn selection_text<S: serde::Serializer>(s: &Selection, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(&s.describe())
}

impl Job {
    pub fn name(&self) -> &'static str {
        match self {
            Job::Spectrum { name, .. }
            | Job::States { name, .. }
            | Job::Sweep { name, .. }
            | Job::Winding { name, .. } => name,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Preset {
    pub figure: &'static str,
    pub description: &'static str,
    pub jobs: Vec<Job>,
}

fn spectrum(name: &'static str, gamma: f64, length: usize, boundary: Boundary) -> Job {
    Job::Spectrum {
        name,
        t: 1.0,
        gamma,
        length,
        boundary,
    }
}

fn states(
    name: &'static str,
    gamma: f64,
    length: usize,
    boundary: Boundary,
    select: Selection,
) -> Job {
    Job::States {
        name,
        t: 1.0,
        gamma,
        length,
        boundary,
        select,
        envelope_center: None,
    }
}

/// OBC and PBC spectra with the OBC eigenstates.
fn panel_pair(gamma: f64, length: usize) -> Vec<Job> {
    vec![
        spectrum("obc_spectrum", gamma, length, Boundary::Obc),
        spectrum("pbc_spectrum", gamma, length, Boundary::Pbc),
        states("obc_states", gamma, length, Boundary::Obc, Selection::All),
    ]
}

pub fn preset(id: FigureId) -> Preset {
    use FigureId::*;
    let (description, jobs) = match id {
        F1a => (
            "OBC spectrum and block spectra, gamma = 0.01, L = 100",
            vec![spectrum("obc_spectrum", 0.01, 100, Boundary::Obc)],
        ),
        F1b => (
            "OBC spectrum and block spectra, gamma = 0.02, L = 100",
            vec![spectrum("obc_spectrum", 0.02, 100, Boundary::Obc)],
        ),
        F1c => (
            "OBC spectrum and block spectra, gamma = 0.07, L = 100",
            vec![spectrum("obc_spectrum", 0.07, 100, Boundary::Obc)],
        ),
        F2a | F2b => (
            "OBC eigenvalues against gamma in [0, 1.2], L = 100",
            vec![Job::Sweep {
                name: "sweep",
                t: 1.0,
                length: 100,
                boundary: Boundary::Obc,
                gamma_min: 0.0,
                gamma_max: 1.2,
                gamma_steps: 241,
            }],
        ),
        F2c => (
            "OBC spectrum, gamma = 0.001, L = 100",
            vec![spectrum("obc_spectrum", 0.001, 100, Boundary::Obc)],
        ),
        F2d => (
            "OBC eigenstates and global envelope with x0 = 1, gamma = 0.001, L = 100",
            vec![Job::States {
                name: "obc_states",
                t: 1.0,
                gamma: 0.001,
                length: 100,
                boundary: Boundary::Obc,
                select: Selection::All,
                envelope_center: Some(1.0),
            }],
        ),
        F2e => (
            "PBC spectrum and winding about E = 0, gamma = 0.001, L = 100",
            vec![
                spectrum("pbc_spectrum", 0.001, 100, Boundary::Pbc),
                Job::Winding {
                    name: "winding",
                    t: 1.0,
                    gamma: 0.001,
                    length: 100,
                    base: [0.0, 0.0],
                },
            ],
        ),
        F2f => (
            "PBC eigenstates, gamma = 0.001, L = 100",
            vec![states(
                "pbc_states",
                0.001,
                100,
                Boundary::Pbc,
                Selection::All,
            )],
        ),
        F3a => (
            "OBC and PBC spectra with OBC eigenstates, gamma = 0.01, L = 100",
            panel_pair(0.01, 100),
        ),
        F3b => {
            let mut jobs = panel_pair(0.011, 100);
            jobs.push(states(
                "pair_states",
                0.011,
                100,
                Boundary::Obc,
                Selection::Nearest(vec![
                    Complex64::new(0.0, 0.6864),
                    Complex64::new(0.0, -0.6864),
                ]),
            ));
            (
                "OBC and PBC spectra with OBC eigenstates and the +-0.6864i pair envelope, gamma = 0.011, L = 100",
                jobs,
            )
        }
        F3c => (
            "OBC and PBC spectra with OBC eigenstates, gamma = 0.02, L = 100",
            panel_pair(0.02, 100),
        ),
        F4a => (
            "Real-energy OBC eigenstates, gamma = 0.02, L = 100",
            vec![states(
                "real_states",
                0.02,
                100,
                Boundary::Obc,
                Selection::Real,
            )],
        ),
        F4b => (
            "Real-energy OBC eigenstates, gamma = 0.021, L = 100",
            vec![states(
                "real_states",
                0.021,
                100,
                Boundary::Obc,
                Selection::Real,
            )],
        ),
        F5a => (
            "OBC and PBC spectra with OBC eigenstates, gamma = 0.01, L = 200",
            panel_pair(0.01, 200),
        ),
        F5b => (
            "OBC and PBC spectra with OBC eigenstates, gamma = 0.01, L = 400",
            panel_pair(0.01, 400),
        ),
    };
    Preset {
        figure: id.label(),
        description,
        jobs,
    }
}
