//! Spectra tables and JSON documents.
//!
//! The spectra table has one row per eigenvalue with the columns
//! `run_id, source, re, im, is_stationary`. CSV floats are written with 17
//! significant digits so that values round-trip exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use denoiser_core::SpectrumSample;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;
pub const CSV_COLUMNS: [&str; 5] = ["run_id", "source", "re", "im", "is_stationary"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub run_id: String,
    pub source: String,
    pub re: f64,
    pub im: f64,
    pub is_stationary: bool,
}

pub fn rows_from_sample(run_id: &str, sample: &SpectrumSample) -> Vec<SpectrumRow> {
    sample
        .eigenvalues
        .iter()
        .zip(&sample.stationary)
        .map(|(z, &s)| SpectrumRow {
            run_id: run_id.to_owned(),
            source: sample.source.clone(),
            re: z.re,
            im: z.im,
            is_stationary: s,
        })
        .collect()
}

pub fn csv_string(rows: &[SpectrumRow]) -> String {
    let mut out = CSV_COLUMNS.join(",");
    out.push('\n');
    for r in rows {
        writeln!(out, "{},{},{:.16e},{:.16e},{}", r.run_id, r.source, r.re, r.im, r.is_stationary).expect("writing to a String");
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<SpectrumRow>, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty spectra table")?;
    if header.split(',').ne(CSV_COLUMNS) {
        return Err(format!("unexpected header `{header}`"));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != CSV_COLUMNS.len() {
                return Err(format!("line {}: expected {} fields", i + 2, CSV_COLUMNS.len()));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|e| format!("line {}: {e}", i + 2));
            Ok(SpectrumRow {
                run_id: f[0].to_owned(),
                source: f[1].to_owned(),
                re: num(f[2])?,
                im: num(f[3])?,
                is_stationary: f[4].parse().map_err(|e| format!("line {}: {e}", i + 2))?,
            })
        })
        .collect()
}

#[derive(Serialize)]
struct SpectraDocument<'a> {
    schema_version: u32,
    columns: [&'static str; 5],
    rows: &'a [SpectrumRow],
}

pub fn json_spectra_string(rows: &[SpectrumRow]) -> CliResult<String> {
    to_json(&SpectraDocument { schema_version: SCHEMA_VERSION, columns: CSV_COLUMNS, rows })
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn csv_round_trips_exactly(
            values in prop::collection::vec((any::<f64>().prop_filter("finite", |x| x.is_finite()), -1e300f64..1e300, any::<bool>()), 0..20)
        ) {
            let rows: Vec<SpectrumRow> = values
                .iter()
                .enumerate()
                .map(|(i, &(re, im, s))| SpectrumRow { run_id: format!("r{i}"), source: "denoiser".into(), re, im, is_stationary: s })
                .collect();
            let parsed = parse_csv(&csv_string(&rows)).unwrap();
            prop_assert_eq!(parsed.len(), rows.len());
            for (a, b) in parsed.iter().zip(&rows) {
                prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
                prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
                prop_assert_eq!(a.is_stationary, b.is_stationary);
            }
        }
    }

    #[test]
    fn header_is_fixed() {
        assert!(csv_string(&[]).starts_with("run_id,source,re,im,is_stationary\n"));
        assert!(parse_csv("a,b\n").is_err());
    }
}
