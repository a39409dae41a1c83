//! Measurement records: per-trial energy and runtime observations keyed by
//! model and workload point.

use std::io::Read;

use crate::error::{Error, Result};

/// One benchmark observation.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub model: String,
    pub tau_in: u32,
    pub tau_out: u32,
    pub energy_j: f64,
    pub runtime_s: f64,
    pub trial: u32,
}

const HEADER: [&str; 6] = [
    "model",
    "tau_in",
    "tau_out",
    "energy_j",
    "runtime_s",
    "trial",
];

/// Reads `model,tau_in,tau_out,energy_j,runtime_s,trial` rows in file order.
pub fn read_measurements(reader: impl Read) -> Result<Vec<MeasurementRecord>> {
    let mut csv_reader = csv::Reader::from_reader(reader);
    {
        let headers = csv_reader
            .headers()
            .map_err(|e| Error::parse(1, e.to_string()))?;
        if headers.iter().collect::<Vec<_>>() != HEADER {
            return Err(Error::parse(
                1,
                format!(
                    "expected header `{}`, got `{}`",
                    HEADER.join(","),
                    headers.iter().collect::<Vec<_>>().join(",")
                ),
            ));
        }
    }
    let mut records = Vec::new();
    for row in csv_reader.records() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, csv::Position::line);
            Error::parse(line, e.to_string())
        })?;
        let line = row.position().map_or(0, csv::Position::line);
        if row.len() != HEADER.len() {
            return Err(Error::parse(
                line,
                format!("expected {} fields, got {}", HEADER.len(), row.len()),
            ));
        }
        let model = row[0].trim().to_string();
        if model.is_empty() {
            return Err(Error::parse(line, "empty model name".to_string()));
        }
        let tau_in = parse_u32(&row[1], "tau_in", line)?;
        let tau_out = parse_u32(&row[2], "tau_out", line)?;
        let energy_j = parse_f64(&row[3], "energy_j", line)?;
        let runtime_s = parse_f64(&row[4], "runtime_s", line)?;
        if energy_j < 0.0 {
            return Err(Error::parse(line, format!("negative energy_j {energy_j}")));
        }
        if runtime_s < 0.0 {
            return Err(Error::parse(
                line,
                format!("negative runtime_s {runtime_s}"),
            ));
        }
        records.push(MeasurementRecord {
            model,
            tau_in,
            tau_out,
            energy_j,
            runtime_s,
            trial: parse_u32(&row[5], "trial", line)?,
        });
    }
    if records.is_empty() {
        return Err(Error::InsufficientData(
            "measurement file has no data rows".to_string(),
        ));
    }
    Ok(records)
}

/// Distinct model names in first-appearance order.
pub fn model_names(records: &[MeasurementRecord]) -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    for record in records {
        if !names.iter().any(|n| n == &record.model) {
            names.push(record.model.clone());
        }
    }
    names
}

fn parse_u32(field: &str, name: &str, line: u64) -> Result<u32> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid {name} `{}`", field.trim())))
}

fn parse_f64(field: &str, name: &str, line: u64) -> Result<f64> {
    let value: f64 = field
        .trim()
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid {name} `{}`", field.trim())))?;
    if !value.is_finite() {
        return Err(Error::parse(
            line,
            format!("non-finite {name} `{}`", field.trim()),
        ));
    }
    Ok(value)
}
