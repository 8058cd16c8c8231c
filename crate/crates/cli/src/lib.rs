//! Command-line front end: argument handling, sweeps and file output.

pub mod args;
pub mod error;
pub mod figures;
pub mod output;
pub mod report;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::Parser;
use num_complex::Complex64;

use args::{Cli, Command, FigureArgs};
use error::CliError;
use figures::{preset, Job};
use output::{write_document, write_sweep, Target};
use report::{
    gamma_grid, params, spectrum_document, states_document, sweep_document, winding_document, Ring,
};

/// Environment variable consulted when `--workers` is absent.
pub const WORKERS_VAR: &str = "SKINLAB_WORKERS";

fn worker_count(flag: Option<usize>) -> Result<usize, CliError> {
    let n = match flag {
        Some(n) => n,
        None => match std::env::var(WORKERS_VAR) {
            Ok(v) => v.trim().parse().map_err(|_| {
                CliError::Invalid(format!(
                    "{WORKERS_VAR} must be a positive integer, got {v:?}"
                ))
            })?,
            Err(_) => std::thread::available_parallelism().map_or(1, |n| n.get()),
        },
    };
    if n == 0 {
        return Err(CliError::Invalid("worker count must be positive".into()));
    }
    Ok(n)
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("skinlab: {e}");
            e.exit_code()
        }
    }
}

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Spectrum(a) => {
            let c = &a.chain;
            let p = params(c.t, c.gamma, c.length, c.boundary.into())?;
            let doc = spectrum_document(&p, a.output.seed)?;
            write_document(
                &doc,
                a.output.format,
                &Target::from_option(a.output.out.as_deref()),
            )?;
        }
        Command::States(a) => {
            let c = &a.chain;
            let p = params(c.t, c.gamma, c.length, c.boundary.into())?;
            let doc = states_document(&p, &a.select, a.envelope_center, a.output.seed)?;
            write_document(
                &doc,
                a.output.format,
                &Target::from_option(a.output.out.as_deref()),
            )?;
        }
        Command::Sweep(a) => {
            let grid = gamma_grid(a.gamma_min, a.gamma_max, a.gamma_steps)?;
            let doc = sweep_document(
                a.t,
                a.length,
                a.boundary.into(),
                grid,
                worker_count(a.workers)?,
            )?;
            write_sweep(
                &doc,
                a.output.format,
                &Target::from_option(a.output.out.as_deref()),
            )?;
        }
        Command::Winding(a) => {
            let ring = if a.hatano_nelson {
                Ring::HatanoNelson {
                    t: a.t,
                    gamma: a.gamma,
                    length: a.length,
                }
            } else {
                Ring::Graded(params(a.t, a.gamma, a.length, a.boundary.into())?)
            };
            let base = Complex64::new(a.base_re, a.base_im);
            let doc = winding_document(ring, base, a.theta_steps, a.output.seed)?;
            write_document(
                &doc,
                a.output.format,
                &Target::from_option(a.output.out.as_deref()),
            )?;
        }
        Command::Figure(a) => {
            for path in run_figure(&a)? {
                println!("{}", path.display());
            }
        }
    }
    Ok(())
}

/// Runs every job of a figure preset into `args.out`; returns the files written.
pub fn run_figure(a: &FigureArgs) -> Result<Vec<PathBuf>, CliError> {
    let preset = preset(a.id);
    std::fs::create_dir_all(&a.out).map_err(|e| CliError::io(&a.out, e))?;
    let file =
        |dir: &Path, name: &str, ext: &str| dir.join(format!("fig{}_{name}.{ext}", preset.figure));
    let params_path = file(&a.out, "params", "json");
    let text = serde_json::to_string_pretty(&preset).expect("preset serializes") + "\n";
    std::fs::write(&params_path, text).map_err(|e| CliError::io(&params_path, e))?;

    let mut written = vec![params_path];
    let ext = a.format.extension();
    for job in &preset.jobs {
        let target = Target::File(file(&a.out, job.name(), ext));
        let files = match job {
            Job::Spectrum {
                t,
                gamma,
                length,
                boundary,
                ..
            } => write_document(
                &spectrum_document(&params(*t, *gamma, *length, *boundary)?, a.seed)?,
                a.format,
                &target,
            )?,
            Job::States {
                t,
                gamma,
                length,
                boundary,
                select,
                envelope_center,
                ..
            } => {
                let p = params(*t, *gamma, *length, *boundary)?;
                write_document(
                    &states_document(&p, select, *envelope_center, a.seed)?,
                    a.format,
                    &target,
                )?
            }
            Job::Sweep {
                t,
                length,
                boundary,
                gamma_min,
                gamma_max,
                gamma_steps,
                ..
            } => {
                let grid = gamma_grid(*gamma_min, *gamma_max, *gamma_steps)?;
                let doc = sweep_document(*t, *length, *boundary, grid, worker_count(a.workers)?)?;
                write_sweep(&doc, a.format, &target)?
            }
            Job::Winding {
                t,
                gamma,
                length,
                base,
                ..
            } => {
                let ring = Ring::Graded(params(*t, *gamma, *length, skinlab::Boundary::Pbc)?);
                let doc = winding_document(
                    ring,
                    Complex64::new(base[0], base[1]),
                    skinlab::analysis::DEFAULT_THETA_STEPS,
                    a.seed,
                )?;
                write_document(&doc, a.format, &target)?
            }
        };
        written.extend(files);
    }
    Ok(written)
}
