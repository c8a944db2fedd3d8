//! Sample files and result tables.
//!
//! Sample CSV: one sample per row, d numeric columns, optional single header
//! row. Result CSV: a `# cfwgan <version> config: <json>` line, then an
//! RFC 4180 table. Floats are written with 17 significant digits.

use crate::error::{CliError, CliResult};
use cfwgan_core::distributions::{Provenance, SampleMatrix};
use serde::Serialize;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Round-trip decimal form of a float.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn bad_file(path: &Path, what: impl std::fmt::Display) -> CliError {
    CliError::Precondition(format!("{}: {what}", path.display()))
}

/// Reads a sample matrix; a first row that does not parse as numbers is a header.
pub fn read_samples(path: &Path) -> CliResult<SampleMatrix> {
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| CliError::io(format!("cannot read {}", path.display()), e))?;
    parse_samples(&text, path)
}

fn parse_samples(text: &str, path: &Path) -> CliResult<SampleMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut data = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| bad_file(path, e))?;
        let parsed: Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        let values = match parsed {
            Ok(v) => v,
            Err(_) if i == 0 => continue,
            Err(e) => return Err(bad_file(path, format!("row {}: {e}", i + 1))),
        };
        if values.iter().any(|x| !x.is_finite()) {
            return Err(bad_file(path, format!("row {}: non-finite value", i + 1)));
        }
        match cols {
            None => cols = Some(values.len()),
            Some(c) if c != values.len() => {
                return Err(bad_file(
                    path,
                    format!("row {} has {} columns, expected {c}", i + 1, values.len()),
                ))
            }
            _ => {}
        }
        data.extend(values);
        rows += 1;
    }
    let cols = cols.ok_or_else(|| bad_file(path, "no samples"))?;
    Ok(SampleMatrix::new(
        rows,
        cols,
        data,
        Provenance::File(path.display().to_string()),
    )?)
}

/// Writes one sample per row.
pub fn write_samples(path: &Path, x: &SampleMatrix) -> CliResult<()> {
    let ctx = || format!("cannot write {}", path.display());
    let f = File::create(path).map_err(|e| CliError::io(ctx(), e))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(f));
    for i in 0..x.rows() {
        w.write_record(x.row(i).iter().map(|&v| fmt_float(v)))
            .map_err(|e| CliError::io(ctx(), e.into()))?;
    }
    w.flush().map_err(|e| CliError::io(ctx(), e))
}

/// A result table with the resolved configuration in its first line.
pub struct ResultTable {
    config_line: String,
    writer: csv::Writer<Vec<u8>>,
}

impl ResultTable {
    pub fn new(config: &impl Serialize, header: &[&str]) -> CliResult<Self> {
        let json = serde_json::to_string(config).map_err(|e| CliError::Numeric(e.to_string()))?;
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record(header)
            .map_err(|e| CliError::io("csv", e.into()))?;
        Ok(Self {
            config_line: format!("# cfwgan {VERSION} config: {json}\n"),
            writer,
        })
    }

    pub fn row<I, S>(&mut self, fields: I) -> CliResult<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer
            .write_record(fields)
            .map_err(|e| CliError::io("csv", e.into()))
    }

    pub fn into_string(self) -> CliResult<String> {
        let body = self
            .writer
            .into_inner()
            .map_err(|e| CliError::io("csv", e.into_error()))?;
        Ok(self.config_line + &String::from_utf8(body).expect("csv output is utf-8"))
    }
}

/// Writes to the file, or to stdout when no path is given.
pub fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::io(format!("cannot write {}", p.display()), e)),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("stdout", e)),
    }
}

/// Splits a result file into its config JSON and the table body.
pub fn split_result(text: &str) -> Option<(&str, &str)> {
    let (first, rest) = text.split_once('\n')?;
    let json = first.strip_prefix("# cfwgan ")?.split_once(" config: ")?.1;
    Some((json, rest))
}
