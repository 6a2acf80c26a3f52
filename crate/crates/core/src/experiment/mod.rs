//! Seeded experiment sweeps over `(n, density)` cells, run in parallel over
//! trials and written in `(cell, trial)` order as CSV or JSON Lines.

mod record;
mod spec;
mod trial;

pub use record::{columns, csv_header, ExperimentRecord, Outcome, RunOutcome};
pub use spec::{
    Cell, Density, ExperimentKind, ExperimentSpec, InitialKind, OutputFormat, DEFAULT_KAPPA_GRID,
};
pub use trial::{run_trial, selected_for_verification, verify_trace};

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::solver::Status;

fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidSpec(format!("thread pool: {e}")))
}

fn run_cell(spec: &ExperimentSpec, cell: &Cell, pool: &rayon::ThreadPool) -> Result<Vec<ExperimentRecord>> {
    pool.install(|| {
        (0..spec.trials)
            .into_par_iter()
            .map(|t| run_trial(spec, cell, t))
            .collect()
    })
}

/// All records of `spec`, in `(cell, trial)` order.
pub fn run_records(spec: &ExperimentSpec) -> Result<Vec<ExperimentRecord>> {
    let pool = pool(spec.threads)?;
    let mut out = Vec::new();
    for cell in spec.cells()? {
        out.extend(run_cell(spec, &cell, &pool)?);
    }
    Ok(out)
}

/// Streams records of the cells from `first_cell` on to `w`, flushing after
/// each record. The header (CSV only) is written when `header` is set.
/// Returns the number of records written.
pub fn run_to_writer(
    spec: &ExperimentSpec,
    w: &mut dyn Write,
    label: &Path,
    first_cell: usize,
    header: bool,
) -> Result<usize> {
    let io = |e| Error::io(label, e);
    let pool = pool(spec.threads)?;
    if header && spec.format == OutputFormat::Csv {
        writeln!(w, "{}", csv_header(spec.kind)).map_err(io)?;
        w.flush().map_err(io)?;
    }
    let mut written = 0;
    for cell in spec.cells()?.iter().skip(first_cell) {
        for r in run_cell(spec, cell, &pool)? {
            writeln!(w, "{}", r.render(spec.format)).map_err(io)?;
            w.flush().map_err(io)?;
            written += 1;
        }
    }
    Ok(written)
}

fn record_cell(line: &str, format: OutputFormat) -> Option<usize> {
    match format {
        OutputFormat::Csv => line.split(',').next()?.parse().ok(),
        OutputFormat::Json => serde_json::from_str::<serde_json::Value>(line)
            .ok()?
            .get("cell")?
            .as_u64()
            .map(|c| c as usize),
    }
}

/// Keeps the leading complete cells of an interrupted output and returns
/// the retained text and the index of the first missing cell.
fn complete_prefix(spec: &ExperimentSpec, text: &str) -> Result<(String, usize)> {
    let mut lines = text.lines();
    let mut kept = String::new();
    if spec.format == OutputFormat::Csv {
        match lines.next() {
            None => return Ok((String::new(), 0)),
            Some(h) if h == csv_header(spec.kind) => {
                kept.push_str(h);
                kept.push('\n');
            }
            Some(_) => {
                return Err(Error::InvalidSpec(
                    "existing output has a different header; refusing to resume".into(),
                ))
            }
        }
    }
    let mut next_cell = 0;
    let mut buffer = Vec::new();
    for line in lines {
        match record_cell(line, spec.format) {
            Some(c) if c == next_cell => {
                buffer.push(line);
                if buffer.len() == spec.trials {
                    for l in buffer.drain(..) {
                        kept.push_str(l);
                        kept.push('\n');
                    }
                    next_cell += 1;
                }
            }
            _ => break,
        }
    }
    Ok((kept, next_cell))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepSummary {
    pub cells: usize,
    pub resumed_cells: usize,
    pub records_written: usize,
}

/// Runs `spec` into `path`. With `resume`, complete cells already in the
/// file are kept and only the remaining cells are run; a partial cell is
/// discarded and rerun. The result is byte-identical to a fresh run.
pub fn run_to_path(spec: &ExperimentSpec, path: &Path, resume: bool) -> Result<SweepSummary> {
    let cells = spec.cells()?.len();
    let (kept, first) = if resume && path.exists() {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        complete_prefix(spec, &text)?
    } else {
        (String::new(), 0)
    };
    fs::write(path, &kept).map_err(|e| Error::io(path, e))?;
    let file = OpenOptions::new()
        .append(true)
        .open(path)
        .map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let header = kept.is_empty();
    let written = run_to_writer(spec, &mut w, path, first, header)?;
    Ok(SweepSummary {
        cells,
        resumed_cells: first,
        records_written: written,
    })
}

/// Renders records as a complete output document.
pub fn render_all(kind: ExperimentKind, records: &[ExperimentRecord], format: OutputFormat) -> String {
    let mut s = String::new();
    if format == OutputFormat::Csv {
        s.push_str(&csv_header(kind));
        s.push('\n');
    }
    for r in records {
        s.push_str(&r.render(format));
        s.push('\n');
    }
    s
}

pub fn write_records(
    path: &Path,
    kind: ExperimentKind,
    records: &[ExperimentRecord],
    format: OutputFormat,
) -> Result<()> {
    let mut f = File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(render_all(kind, records, format).as_bytes())
        .map_err(|e| Error::io(path, e))
}

/// Fraction of satisfied runs per cell, for run-based kinds.
pub fn success_by_cell(records: &[ExperimentRecord]) -> BTreeMap<usize, f64> {
    let mut acc: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for r in records {
        if let Outcome::Transition(o) | Outcome::MinimaGeometry(o) = &r.outcome {
            let e = acc.entry(r.cell).or_default();
            e.0 += o.success() as usize;
            e.1 += 1;
        }
    }
    acc.into_iter()
        .map(|(c, (s, t))| (c, s as f64 / t as f64))
        .collect()
}

/// Ones-count histogram of the proper local minima reached.
pub fn proper_minima_histogram(records: &[ExperimentRecord]) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for r in records {
        if let Outcome::Transition(o) | Outcome::MinimaGeometry(o) = &r.outcome {
            if o.status == Status::ProperLocalMinimum {
                *h.entry(o.final_ones).or_default() += 1;
            }
        }
    }
    h
}

/// Values of a numeric column across records, skipping nulls.
pub fn column(records: &[ExperimentRecord], name: &str) -> Vec<f64> {
    records.iter().filter_map(|r| r.number(name)).collect()
}
