//! Abundance CSV input: a `species,count` header followed by one row per
//! species in order of appearance.

use std::collections::HashMap;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};
use crate::sample::{summarize_sample, SampleSummary};

/// One parsed abundance row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbundanceRow {
    pub species: String,
    pub count: u64,
}

pub fn ingest(path: &Path) -> Result<SampleSummary> {
    let file = std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let rows = read_abundances(file, &path.display().to_string())?;
    let counts: Vec<u64> = rows.iter().map(|r| r.count).collect();
    summarize_sample(&counts)
}

/// Parses abundance rows; `origin` names the source in error messages.
pub fn read_abundances<R: Read>(input: R, origin: &str) -> Result<Vec<AbundanceRow>> {
    let data_err = |line: u64, message: String| Error::Data {
        path: origin.to_string(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);

    let headers = reader
        .headers()
        .map_err(|e| data_err(1, format!("unreadable header: {e}")))?
        .clone();
    let header: Vec<&str> = headers.iter().collect();
    if header != ["species", "count"] {
        return Err(data_err(
            1,
            format!("expected header `species,count`, found `{}`", header.join(",")),
        ));
    }

    let mut rows = Vec::new();
    let mut seen: HashMap<String, u64> = HashMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            data_err(line, format!("malformed row: {e}"))
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != 2 {
            return Err(data_err(line, format!("expected 2 fields, found {}", record.len())));
        }
        let species = record[0].to_string();
        if species.is_empty() {
            return Err(data_err(line, "empty species label".into()));
        }
        let count: i64 = record[1]
            .parse()
            .map_err(|_| data_err(line, format!("count `{}` is not an integer", &record[1])))?;
        if count < 1 {
            return Err(data_err(
                line,
                format!("count for `{species}` must be positive, got {count}"),
            ));
        }
        if let Some(first) = seen.insert(species.clone(), line) {
            return Err(data_err(
                line,
                format!("duplicate species `{species}` (first seen on line {first})"),
            ));
        }
        rows.push(AbundanceRow {
            species,
            count: count as u64,
        });
    }
    Ok(rows)
}
