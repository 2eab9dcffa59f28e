//! One CSV row per (side, algo, delta, step) observation.

use std::io::{Read, Write};
use std::path::Path;

use anyhow::Context;
use serde::{Deserialize, Serialize, Serializer};

use crate::config::Algo;

/// Bumped whenever a column is added, removed or reinterpreted.
pub const CSV_SCHEMA_VERSION: u32 = 1;

pub const CSV_COLUMNS: [&str; 16] = [
    "side",
    "N",
    "algo",
    "delta",
    "steps",
    "time_steps_charged",
    "marked_probability",
    "overlap_target",
    "alpha_predicted",
    "alpha_dense",
    "T_predicted",
    "T_peak_empirical",
    "wall_clock",
    "c_delta",
    "row",
    "peak_at_boundary",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowKind {
    /// A point of the step window.
    Window,
    /// The best probe of the run.
    Peak,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub side: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub algo: Algo,
    /// Control angle; zero for the uncontrolled walk.
    #[serde(serialize_with = "sci")]
    pub delta: f64,
    pub steps: usize,
    pub time_steps_charged: u64,
    #[serde(serialize_with = "sci")]
    pub marked_probability: f64,
    /// `|<t|psi>|` for the algorithm's effective target.
    #[serde(serialize_with = "sci")]
    pub overlap_target: f64,
    #[serde(serialize_with = "sci")]
    pub alpha_predicted: f64,
    #[serde(serialize_with = "sci_opt")]
    pub alpha_dense: Option<f64>,
    #[serde(rename = "T_predicted")]
    pub t_predicted: usize,
    #[serde(rename = "T_peak_empirical", serialize_with = "sci")]
    pub t_peak_empirical: f64,
    /// Seconds for the whole run this row belongs to.
    #[serde(serialize_with = "sci")]
    pub wall_clock: f64,
    #[serde(serialize_with = "sci_opt")]
    pub c_delta: Option<f64>,
    pub row: RowKind,
    pub peak_at_boundary: bool,
}

fn sci<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{x:e}"))
}

fn sci_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_str(&format!("{v:e}")),
        None => s.serialize_str(""),
    }
}

impl ExperimentRecord {
    /// Sort key used to merge concurrent results.
    pub fn sort_key(&self) -> (usize, Algo, u64, usize, RowKind) {
        (self.side, self.algo, self.delta.to_bits(), self.steps, self.row)
    }

    /// Same record with the wall clock zeroed, for determinism checks.
    pub fn without_timing(&self) -> Self {
        Self {
            wall_clock: 0.0,
            ..self.clone()
        }
    }
}

pub fn write_csv<W: Write>(writer: W, records: &[ExperimentRecord]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if records.is_empty() {
        w.write_record(CSV_COLUMNS)?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(reader: R) -> anyhow::Result<Vec<ExperimentRecord>> {
    let mut r = csv::Reader::from_reader(reader);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_COLUMNS {
        anyhow::bail!("unexpected CSV header {header:?}, expected {CSV_COLUMNS:?}");
    }
    let mut out = Vec::new();
    for (i, row) in r.deserialize().enumerate() {
        out.push(row.with_context(|| format!("CSV row {}", i + 1))?);
    }
    Ok(out)
}

pub fn write_csv_file(path: &Path, records: &[ExperimentRecord]) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let file = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    write_csv(std::io::BufWriter::new(file), records)
}

pub fn read_csv_file(path: &Path) -> anyhow::Result<Vec<ExperimentRecord>> {
    let file = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_csv(std::io::BufReader::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ExperimentRecord {
        ExperimentRecord {
            side: 16,
            n: 256,
            algo: Algo::Controlled,
            delta: 1.0471975511965976,
            steps: 41,
            time_steps_charged: 114,
            marked_probability: 0.123456789012345678,
            overlap_target: 1.0 / 3.0,
            alpha_predicted: 0.0387,
            alpha_dense: None,
            t_predicted: 41,
            t_peak_empirical: 40.75,
            wall_clock: 0.01,
            c_delta: Some(1.0),
            row: RowKind::Peak,
            peak_at_boundary: false,
        }
    }

    #[test]
    fn header_matches_field_order() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &[sample()]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_COLUMNS.join(","));
        assert!(text.contains("3.3333333333333331e-1") || text.contains("3.333333333333333e-1"));
    }

    #[test]
    fn empty_file_still_has_a_header() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().trim(), CSV_COLUMNS.join(","));
    }

    #[test]
    fn wrong_header_is_rejected() {
        assert!(read_csv("a,b\n1,2\n".as_bytes()).is_err());
    }
}
