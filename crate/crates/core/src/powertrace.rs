//! CPU power timecharts, core-residency filtering, energy integration, and
//! the adaptive trial-stopping rule.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;

use crate::error::{Error, Result};
use crate::stats::t_quantile;

/// One polled power reading for one core.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSample {
    pub time_s: f64,
    pub core_id: u32,
    pub power_w: f64,
}

/// A half-open window `[start_s, end_s)` during which a core was serving
/// the inference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidencyInterval {
    pub core_id: u32,
    pub start_s: f64,
    pub end_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopVerdict {
    Continue,
    StopConfident,
    StopMaxTrials,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopDecision {
    pub verdict: StopVerdict,
    pub mean_runtime_s: f64,
    pub ci_half_width_s: f64,
}

/// Stopping-rule parameters: stop once the two-sided t-interval half-width
/// drops to `half_width_s`, or unconditionally at `max_trials`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopRule {
    pub confidence: f64,
    pub half_width_s: f64,
    pub max_trials: usize,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            confidence: 0.95,
            half_width_s: 0.5,
            max_trials: 25,
        }
    }
}

/// Integrates per-core power over the residency windows.
///
/// Power is held piecewise-constant: sample `i` applies over
/// `[t_i, t_{i+1})`, and the last sample of a core contributes nothing.
/// Each step contributes `power * |step window ∩ residency|`, so residency
/// edges are honored at sub-interval precision instead of snapping to
/// sample boundaries.
pub fn integrate_cpu_energy(trace: &[PowerSample], residency: &[ResidencyInterval]) -> Result<f64> {
    if trace.is_empty() {
        return Err(Error::invalid("power trace is empty"));
    }
    for sample in trace {
        let in_domain = sample.time_s.is_finite()
            && sample.time_s >= 0.0
            && sample.power_w.is_finite()
            && sample.power_w >= 0.0;
        if !in_domain {
            return Err(Error::invalid(format!(
                "power sample (t={}, core={}, p={}) out of domain",
                sample.time_s, sample.core_id, sample.power_w
            )));
        }
    }
    let mut per_core: BTreeMap<u32, Vec<(f64, f64)>> = BTreeMap::new();
    for sample in trace {
        per_core
            .entry(sample.core_id)
            .or_default()
            .push((sample.time_s, sample.power_w));
    }
    for (core, samples) in &per_core {
        if samples.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::invalid(format!(
                "core {core} samples are not strictly increasing in time"
            )));
        }
    }
    let missing: BTreeSet<u32> = residency
        .iter()
        .map(|r| r.core_id)
        .filter(|core| !per_core.contains_key(core))
        .collect();
    if !missing.is_empty() {
        let ids: Vec<String> = missing.iter().map(u32::to_string).collect();
        return Err(Error::invalid(format!(
            "residency references cores absent from trace: {}",
            ids.join(", ")
        )));
    }
    for interval in residency {
        let ordered = interval.start_s.is_finite()
            && interval.end_s.is_finite()
            && interval.start_s < interval.end_s;
        if !ordered {
            return Err(Error::invalid(format!(
                "residency interval for core {} has start {} >= end {}",
                interval.core_id, interval.start_s, interval.end_s
            )));
        }
    }

    let mut energy_j = 0.0f64;
    for (core, samples) in &per_core {
        let windows: Vec<&ResidencyInterval> =
            residency.iter().filter(|r| r.core_id == *core).collect();
        if windows.is_empty() {
            continue;
        }
        for step in samples.windows(2) {
            let (t0, power) = step[0];
            let t1 = step[1].0;
            for window in &windows {
                let overlap = t1.min(window.end_s) - t0.max(window.start_s);
                if overlap > 0.0 {
                    energy_j += power * overlap;
                }
            }
        }
    }
    Ok(energy_j)
}

/// Total inference energy: integrated CPU joules plus externally metered
/// GPU joules.
pub fn total_energy(cpu_j: f64, gpu_j: f64) -> Result<f64> {
    for (label, value) in [("cpu_j", cpu_j), ("gpu_j", gpu_j)] {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::invalid(format!(
                "{label} must be finite and nonnegative, got {value}"
            )));
        }
    }
    Ok(cpu_j + gpu_j)
}

/// Decides whether another benchmark trial is needed.
///
/// Order of precedence: hitting `max_trials` always stops; otherwise the
/// confidence test needs at least 2 trials (one sample has no variance
/// estimate, reported as an infinite half-width).
pub fn stopping_decision(runtimes_s: &[f64], rule: &StopRule) -> Result<StopDecision> {
    if runtimes_s.is_empty() {
        return Err(Error::invalid("stopping rule needs at least one runtime"));
    }
    if !(rule.confidence > 0.0 && rule.confidence < 1.0) {
        return Err(Error::invalid(format!(
            "confidence must be in (0,1), got {}",
            rule.confidence
        )));
    }
    if runtimes_s.iter().any(|r| !r.is_finite() || *r < 0.0) {
        return Err(Error::invalid("runtimes must be finite and nonnegative"));
    }
    let n = runtimes_s.len();
    let mean = runtimes_s.iter().sum::<f64>() / n as f64;
    let half_width = if n >= 2 {
        let var = runtimes_s
            .iter()
            .map(|r| (r - mean) * (r - mean))
            .sum::<f64>()
            / (n - 1) as f64;
        let p = 1.0 - (1.0 - rule.confidence) / 2.0;
        let t = t_quantile(p, (n - 1) as u32)?;
        (var / n as f64).sqrt() * t
    } else {
        f64::INFINITY
    };
    let verdict = if n >= rule.max_trials {
        StopVerdict::StopMaxTrials
    } else if half_width <= rule.half_width_s {
        StopVerdict::StopConfident
    } else {
        StopVerdict::Continue
    };
    Ok(StopDecision {
        verdict,
        mean_runtime_s: mean,
        ci_half_width_s: half_width,
    })
}

/// Reads `time_s,core_id,power_w` rows.
pub fn read_timechart(reader: impl Read) -> Result<Vec<PowerSample>> {
    read_rows(reader, ["time_s", "core_id", "power_w"], |fields, line| {
        Ok(PowerSample {
            time_s: parse_f64(fields[0], "time_s", line)?,
            core_id: parse_u32(fields[1], "core_id", line)?,
            power_w: parse_f64(fields[2], "power_w", line)?,
        })
    })
}

/// Reads `core_id,start_s,end_s` rows.
pub fn read_residency(reader: impl Read) -> Result<Vec<ResidencyInterval>> {
    read_rows(reader, ["core_id", "start_s", "end_s"], |fields, line| {
        Ok(ResidencyInterval {
            core_id: parse_u32(fields[0], "core_id", line)?,
            start_s: parse_f64(fields[1], "start_s", line)?,
            end_s: parse_f64(fields[2], "end_s", line)?,
        })
    })
}

fn read_rows<T, const W: usize>(
    reader: impl Read,
    header: [&str; W],
    parse: impl Fn(&[&str; W], u64) -> Result<T>,
) -> Result<Vec<T>> {
    let mut csv_reader = csv::Reader::from_reader(reader);
    {
        let got = csv_reader
            .headers()
            .map_err(|e| Error::parse(1, e.to_string()))?;
        if got.iter().collect::<Vec<_>>() != header {
            return Err(Error::parse(
                1,
                format!(
                    "expected header `{}`, got `{}`",
                    header.join(","),
                    got.iter().collect::<Vec<_>>().join(",")
                ),
            ));
        }
    }
    let mut rows = Vec::new();
    for record in csv_reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, csv::Position::line);
            Error::parse(line, e.to_string())
        })?;
        let line = record.position().map_or(0, csv::Position::line);
        if record.len() != W {
            return Err(Error::parse(
                line,
                format!("expected {W} fields, got {}", record.len()),
            ));
        }
        let mut fields = [""; W];
        for (slot, field) in fields.iter_mut().zip(record.iter()) {
            *slot = field.trim();
        }
        rows.push(parse(&fields, line)?);
    }
    Ok(rows)
}

fn parse_u32(field: &str, name: &str, line: u64) -> Result<u32> {
    field
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid {name} `{field}`")))
}

fn parse_f64(field: &str, name: &str, line: u64) -> Result<f64> {
    let value: f64 = field
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid {name} `{field}`")))?;
    if !value.is_finite() {
        return Err(Error::parse(line, format!("non-finite {name} `{field}`")));
    }
    Ok(value)
}
