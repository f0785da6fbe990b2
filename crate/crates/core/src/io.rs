//! File formats: weight matrices (headerless CSV or JSON), result tables
//! (CSV), and per-run JSON manifests.
//!
//! Floats are written with Rust's shortest round-trip formatting and parsed
//! back bit-exactly, so generate → run pipelines never drift. Manifests
//! carry no timestamps: running the same command twice must produce
//! byte-identical files.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::{AverageCaseReport, FigureRow, WorstCaseReport};
use crate::model::WeightMatrix;

/// Writes `w` as headerless CSV, one user per row, one basestation per
/// column.
pub fn write_matrix_csv<W: Write>(w: &WeightMatrix, out: W) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    for row in w.rows() {
        wtr.write_record(row.iter().map(|v| v.to_string()))?;
    }
    wtr.flush()?;
    Ok(())
}

/// Parses a headerless numeric CSV into a matrix; every row must have the
/// same number of columns.
pub fn read_matrix_csv<R: Read>(input: R) -> Result<WeightMatrix> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true) // shape errors are reported as ShapeMismatch below
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut data = Vec::new();
    let mut m = 0usize;
    let mut n = 0usize;
    for record in rdr.records() {
        let record = record?;
        if n == 0 {
            m = record.len();
        } else if record.len() != m {
            return Err(Error::ShapeMismatch(format!(
                "row {} has {} columns, first row has {m}",
                n + 1,
                record.len()
            )));
        }
        for field in record.iter() {
            let v: f64 = field.parse().map_err(|_| {
                Error::ShapeMismatch(format!("'{field}' in row {} is not a number", n + 1))
            })?;
            data.push(v);
        }
        n += 1;
    }
    WeightMatrix::new(n, m, data)
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    m: usize,
    w: Vec<Vec<f64>>,
}

/// Writes `w` as pretty JSON `{"n": .., "m": .., "w": [[..], ..]}`.
pub fn write_matrix_json<W: Write>(w: &WeightMatrix, out: W) -> Result<()> {
    let doc = MatrixJson {
        n: w.n(),
        m: w.m(),
        w: w.rows().map(<[f64]>::to_vec).collect(),
    };
    let mut out = out;
    serde_json::to_writer_pretty(&mut out, &doc)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn read_matrix_json<R: Read>(input: R) -> Result<WeightMatrix> {
    let doc: MatrixJson = serde_json::from_reader(input)?;
    let mut data = Vec::with_capacity(doc.n * doc.m);
    for (i, row) in doc.w.iter().enumerate() {
        if row.len() != doc.m {
            return Err(Error::ShapeMismatch(format!(
                "row {} has {} entries, header says m={}",
                i + 1,
                row.len(),
                doc.m
            )));
        }
        data.extend_from_slice(row);
    }
    if doc.w.len() != doc.n {
        return Err(Error::ShapeMismatch(format!(
            "{} rows, header says n={}",
            doc.w.len(),
            doc.n
        )));
    }
    WeightMatrix::new(doc.n, doc.m, data)
}

fn is_json_path(path: &Path) -> bool {
    path.extension()
        .map(|e| e.eq_ignore_ascii_case("json"))
        .unwrap_or(false)
}

/// Writes a matrix to `path`, picking JSON for `.json` and CSV otherwise.
pub fn write_matrix_path(w: &WeightMatrix, path: &Path) -> Result<()> {
    let file = BufWriter::new(File::create(path)?);
    if is_json_path(path) {
        write_matrix_json(w, file)
    } else {
        write_matrix_csv(w, file)
    }
}

/// Reads a matrix from `path`, picking the format from the extension.
pub fn read_matrix_path(path: &Path) -> Result<WeightMatrix> {
    let file = BufReader::new(File::open(path)?);
    if is_json_path(path) {
        read_matrix_json(file)
    } else {
        read_matrix_csv(file)
    }
}

/// Stable row identifier: enough of the config to tell result rows apart.
pub fn run_id(report: &AverageCaseReport) -> String {
    format!(
        "{}-{}-n{}-m{}-t{}-s{}",
        report.algorithm, report.model, report.n, report.m, report.trials, report.seed
    )
}

const REPORT_HEADER: [&str; 19] = [
    "run_id",
    "algorithm",
    "model",
    "n",
    "m",
    "r_or_p",
    "trials",
    "seed",
    "rho_mean",
    "rho_se",
    "eta_mean",
    "eta_se",
    "baseline",
    "baseline_is_exact",
    "rho_of_means",
    "eta_of_means",
    "mean_alg",
    "mean_baseline",
    "warnings",
];

fn report_record(report: &AverageCaseReport) -> Vec<String> {
    let r = &report.ratios;
    vec![
        run_id(report),
        report.algorithm.clone(),
        report.model.clone(),
        report.n.to_string(),
        report.m.to_string(),
        report.r_or_p.clone(),
        report.trials.to_string(),
        report.seed.to_string(),
        r.rho.mean.to_string(),
        r.rho.se.to_string(),
        r.eta.mean.to_string(),
        r.eta.se.to_string(),
        report.baseline.to_string(),
        // mwm-upper rows on allocation runs are bound-relative
        if report.baseline_is_exact {
            "true".into()
        } else {
            "upper-bound baseline".into()
        },
        r.rho_of_means.to_string(),
        r.eta_of_means.to_string(),
        r.mean_alg.to_string(),
        r.mean_base.to_string(),
        report.warnings.join("; "),
    ]
}

/// Writes average-case reports as CSV, one row per report.
pub fn write_reports_csv<W: Write>(reports: &[AverageCaseReport], out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(REPORT_HEADER)?;
    for report in reports {
        wtr.write_record(report_record(report))?;
    }
    wtr.flush()?;
    Ok(())
}

/// Writes figure rows: the report columns prefixed by the figure name.
pub fn write_figures_csv<W: Write>(rows: &[FigureRow], out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    let mut header = vec!["figure"];
    header.extend(REPORT_HEADER);
    wtr.write_record(&header)?;
    for row in rows {
        let mut record = vec![row.figure.to_string()];
        record.extend(report_record(&row.report));
        wtr.write_record(&record)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Writes a worst-case sweep: one row per family member plus a flag on the
/// worst one. `eta` may print as `inf` for extreme members; `log_eta` is
/// always finite.
pub fn write_worst_case_csv<W: Write>(report: &WorstCaseReport, out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record([
        "family",
        "algorithm",
        "n",
        "m",
        "trials",
        "seed",
        "member",
        "log_opt",
        "log_alg",
        "log_eta",
        "eta",
        "is_worst",
    ])?;
    for (i, member) in report.members.iter().enumerate() {
        wtr.write_record([
            report.family.clone(),
            report.algorithm.clone(),
            report.n.to_string(),
            report.m.to_string(),
            report.trials.to_string(),
            report.seed.to_string(),
            member.member.to_string(),
            member.log_opt.to_string(),
            member.log_alg.to_string(),
            member.log_eta.to_string(),
            member.eta.to_string(),
            (i == report.worst).to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Writes the JSON manifest accompanying a result file: artifact version,
/// the command that produced it, a full config echo, and the output paths.
/// Deliberately timestamp-free so reruns are byte-identical.
pub fn write_manifest<W: Write>(
    command: &str,
    config: &serde_json::Value,
    outputs: &[String],
    out: W,
) -> Result<()> {
    let doc = serde_json::json!({
        "artifact": {
            "name": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
        },
        "command": command,
        "config": config,
        "outputs": outputs,
    });
    let mut out = out;
    serde_json::to_writer_pretty(&mut out, &doc)?;
    out.write_all(b"\n")?;
    Ok(())
}
