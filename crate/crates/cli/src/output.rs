//! CSV and JSON encodings of the reports.
//!
//! Floats are written in their shortest round-trip form, so both encodings
//! reproduce the computed values exactly. Non-finite values become empty CSV
//! fields and JSON nulls.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::args::Format;
use crate::error::CliError;
use crate::report::{Document, SweepDocument};

/// Where the main output of a command goes.
#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    Stdout,
    File(PathBuf),
}

impl Target {
    pub fn from_option(out: Option<&Path>) -> Self {
        out.map_or(Target::Stdout, |p| Target::File(p.to_path_buf()))
    }

    /// `dir/stem.tag.csv` next to a file target; none for standard output.
    fn sibling(&self, tag: &str) -> Option<PathBuf> {
        match self {
            Target::Stdout => None,
            Target::File(p) => {
                let stem = p
                    .file_stem()
                    .map_or_else(|| "out".into(), |s| s.to_string_lossy().into_owned());
                Some(p.with_file_name(format!("{stem}.{tag}.csv")))
            }
        }
    }

    fn describe(&self) -> PathBuf {
        match self {
            Target::Stdout => PathBuf::from("<stdout>"),
            Target::File(p) => p.clone(),
        }
    }
}

fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:?}")
    } else {
        String::new()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, num)
}

struct Sink {
    path: PathBuf,
    inner: Box<dyn Write>,
}

impl Sink {
    fn open(target: &Target) -> Result<Sink, CliError> {
        let inner: Box<dyn Write> = match target {
            Target::Stdout => Box::new(io::stdout().lock()),
            Target::File(p) => Box::new(BufWriter::new(
                File::create(p).map_err(|e| CliError::io(p, e))?,
            )),
        };
        Ok(Sink {
            path: target.describe(),
            inner,
        })
    }

    fn err(&self, e: impl Into<io::Error>) -> CliError {
        CliError::io(&self.path, e.into())
    }
}

fn write_json<T: Serialize>(target: &Target, value: &T) -> Result<(), CliError> {
    let mut sink = Sink::open(target)?;
    serde_json::to_writer_pretty(&mut sink.inner, value).map_err(|e| sink.err(e))?;
    writeln!(sink.inner).map_err(|e| sink.err(e))?;
    sink.inner.flush().map_err(|e| sink.err(e))
}

/// Writes a header and rows; `trailer` lines follow the table verbatim.
fn write_csv(
    target: &Target,
    header: &[&str],
    rows: &[Vec<String>],
    trailer: &[String],
) -> Result<(), CliError> {
    let sink = Sink::open(target)?;
    let path = sink.path.clone();
    let fail = |e: csv::Error| CliError::io(&path, e.into());
    let mut w = csv::Writer::from_writer(sink.inner);
    w.write_record(header).map_err(fail)?;
    for row in rows {
        w.write_record(row).map_err(fail)?;
    }
    let mut inner = w
        .into_inner()
        .map_err(|e| CliError::io(&path, e.into_error()))?;
    for line in trailer {
        writeln!(inner, "{line}").map_err(|e| CliError::io(&path, e))?;
    }
    inner.flush().map_err(|e| CliError::io(&path, e))
}

/// Writes `doc` and returns every file created.
pub fn write_document(
    doc: &Document,
    format: Format,
    target: &Target,
) -> Result<Vec<PathBuf>, CliError> {
    let mut written = vec![target.describe()];
    if format == Format::Json {
        write_json(target, doc)?;
        return Ok(written);
    }
    let mut aux = |tag: &str, header: &[&str], rows: Vec<Vec<String>>| -> Result<(), CliError> {
        if let Some(p) = target.sibling(tag) {
            write_csv(&Target::File(p.clone()), header, &rows, &[])?;
            written.push(p);
        }
        Ok(())
    };
    match doc.config.command {
        "spectrum" => {
            let rows = doc
                .eigenvalues
                .iter()
                .map(|e| {
                    vec![
                        e.index.to_string(),
                        num(e.re),
                        num(e.im),
                        e.class.into(),
                        num(e.residual),
                    ]
                })
                .collect::<Vec<_>>();
            write_csv(
                target,
                &["index", "re", "im", "class", "residual"],
                &rows,
                &[],
            )?;
            if let Some(b) = &doc.analysis.blocks {
                let rows = b
                    .rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.block.into(),
                            r.index.to_string(),
                            num(r.re),
                            num(r.im),
                            num(r.distance),
                            r.matched.to_string(),
                        ]
                    })
                    .collect();
                aux(
                    "blocks",
                    &["block", "index", "re", "im", "distance", "matched"],
                    rows,
                )?;
            }
            if let Some(l) = &doc.analysis.ladder {
                let rows = l
                    .all_spacings
                    .iter()
                    .flat_map(|(class, s)| {
                        s.iter()
                            .enumerate()
                            .map(move |(k, x)| vec![class.to_string(), k.to_string(), num(*x)])
                    })
                    .collect();
                aux("spacings", &["class", "index", "spacing"], rows)?;
            }
        }
        "states" => {
            let rows = doc
                .states
                .iter()
                .flat_map(|s| {
                    s.profile.iter().enumerate().map(move |(j, a)| {
                        vec![
                            s.state_id.to_string(),
                            num(s.eigen_re),
                            num(s.eigen_im),
                            (j + 1).to_string(),
                            num(*a),
                        ]
                    })
                })
                .collect::<Vec<_>>();
            write_csv(
                target,
                &["state_id", "eigen_re", "eigen_im", "site", "amplitude"],
                &rows,
                &[],
            )?;
            let rows = doc
                .states
                .iter()
                .map(|s| {
                    let f = s.fit.as_ref();
                    vec![
                        s.state_id.to_string(),
                        num(s.eigen_re),
                        num(s.eigen_im),
                        s.class.into(),
                        num(s.residual),
                        s.flagged.to_string(),
                        num(s.centroid),
                        num(s.ipr),
                        s.argmax_site.to_string(),
                        opt(f.map(|f| f.amplitude)),
                        opt(f.map(|f| f.center)),
                        opt(f.map(|f| f.width_param)),
                        opt(f.map(|f| f.target_width)),
                        opt(f.map(|f| f.width_ratio)),
                        opt(f.map(|f| f.rms_error)),
                        f.map_or_else(String::new, |f| f.support_sites.to_string()),
                    ]
                })
                .collect();
            aux(
                "metrics",
                &[
                    "state_id",
                    "eigen_re",
                    "eigen_im",
                    "class",
                    "residual",
                    "flagged",
                    "centroid",
                    "ipr",
                    "argmax_site",
                    "fit_amplitude",
                    "fit_center",
                    "fit_width",
                    "target_width",
                    "width_ratio",
                    "fit_rms",
                    "support_sites",
                ],
                rows,
            )?;
            if let Some(env) = &doc.analysis.envelopes {
                let rows = (0..env.profile.len())
                    .map(|j| {
                        vec![
                            (j + 1).to_string(),
                            num(env.profile[j]),
                            num(env.fitted[j]),
                            num(env.reference[j]),
                            num(env.reference_center),
                        ]
                    })
                    .collect();
                aux(
                    "envelope",
                    &[
                        "site",
                        "amplitude",
                        "fitted",
                        "reference",
                        "reference_center",
                    ],
                    rows,
                )?;
            }
        }
        "winding" => {
            let w = doc.analysis.winding.as_ref().expect("winding report");
            let rows = w
                .trace
                .iter()
                .map(|s| vec![num(s.theta), num(s.det_log_abs), num(s.det_phase)])
                .collect::<Vec<_>>();
            let summary = format!(
                "# winding={} point_gap={} theta_steps={} min_ratio={} total_phase={}",
                w.winding,
                w.point_gap,
                w.theta_steps_used,
                num(w.min_ratio),
                num(w.total_phase)
            );
            write_csv(
                target,
                &["theta", "det_log_abs", "det_phase"],
                &rows,
                &[summary],
            )?;
        }
        other => unreachable!("no CSV layout for {other}"),
    }
    Ok(written)
}

pub fn write_sweep(
    doc: &SweepDocument,
    format: Format,
    target: &Target,
) -> Result<Vec<PathBuf>, CliError> {
    if format == Format::Json {
        write_json(target, doc)?;
    } else {
        let mut rows = Vec::new();
        for p in &doc.points {
            if p.status != "ok" {
                rows.push(vec![
                    num(p.gamma),
                    String::new(),
                    String::new(),
                    String::new(),
                    "failed".into(),
                    String::new(),
                    String::new(),
                ]);
                continue;
            }
            for e in &p.eigenvalues {
                rows.push(vec![
                    num(p.gamma),
                    e.index.to_string(),
                    num(e.re),
                    num(e.im),
                    e.class.into(),
                    p.n_real.to_string(),
                    p.n_imaginary.to_string(),
                ]);
            }
        }
        write_csv(
            target,
            &[
                "gamma",
                "eigen_index",
                "re",
                "im",
                "class",
                "n_real",
                "n_imaginary",
            ],
            &rows,
            &[],
        )?;
    }
    Ok(vec![target.describe()])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [
            0.1,
            -2.0 * (std::f64::consts::PI / 5.0).cos(),
            1e-300,
            6.02e23,
        ] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(f64::NAN), "");
        assert_eq!(num(f64::INFINITY), "");
    }

    #[test]
    fn siblings_share_the_stem() {
        let t = Target::File(PathBuf::from("runs/chain.csv"));
        assert_eq!(
            t.sibling("blocks"),
            Some(PathBuf::from("runs/chain.blocks.csv"))
        );
        assert_eq!(Target::Stdout.sibling("blocks"), None);
    }
}
