//! Queries and workloads: the atomic units routed across a fleet.

use std::io::Read;

use crate::error::{Error, Result};

/// An inference request, characterized solely by its input and output
/// token counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Query {
    pub tau_in: u32,
    pub tau_out: u32,
}

impl Query {
    pub fn new(tau_in: u32, tau_out: u32) -> Self {
        Query { tau_in, tau_out }
    }

    /// Combined token count, used by the accuracy proxy.
    pub fn total_tokens(&self) -> u64 {
        u64::from(self.tau_in) + u64::from(self.tau_out)
    }

    /// A (0, 0) query costs zero under every model and is not schedulable.
    pub fn is_degenerate(&self) -> bool {
        self.tau_in == 0 && self.tau_out == 0
    }
}

/// An ordered multiset of queries. Indices are dense `0..m`; duplicate
/// queries are distinct schedulable units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Workload {
    queries: Vec<Query>,
}

impl Workload {
    /// Builds a workload, rejecting degenerate (0, 0) queries so the
    /// router never sees zero-cost ties.
    pub fn new(queries: Vec<Query>) -> Result<Self> {
        if let Some(idx) = queries.iter().position(Query::is_degenerate) {
            return Err(Error::invalid(format!(
                "query {idx} has zero input and output tokens"
            )));
        }
        Ok(Workload { queries })
    }

    pub fn len(&self) -> usize {
        self.queries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queries.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<Query> {
        self.queries.get(index).copied()
    }

    pub fn queries(&self) -> &[Query] {
        &self.queries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Query> {
        self.queries.iter()
    }

    /// Parses the `tau_in,tau_out` CSV format, preserving row order.
    pub fn from_csv(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);

        {
            let headers = rdr.headers().map_err(|e| Error::parse(1, e.to_string()))?;
            let expected = ["tau_in", "tau_out"];
            if headers.len() != 2 || headers.iter().ne(expected) {
                return Err(Error::parse(
                    1,
                    format!(
                        "expected header `tau_in,tau_out`, got `{}`",
                        headers.iter().collect::<Vec<_>>().join(",")
                    ),
                ));
            }
        }

        let mut queries = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| {
                let line = e.position().map_or(0, csv::Position::line);
                Error::parse(line, e.to_string())
            })?;
            let line = record.position().map_or(0, csv::Position::line);
            if record.len() != 2 {
                return Err(Error::parse(
                    line,
                    format!("expected 2 fields, got {}", record.len()),
                ));
            }
            let parse_field = |name: &str, raw: &str| -> Result<u32> {
                raw.parse::<u32>().map_err(|_| {
                    Error::parse(
                        line,
                        format!("{name} must be a nonnegative integer, got `{raw}`"),
                    )
                })
            };
            let query = Query::new(
                parse_field("tau_in", &record[0])?,
                parse_field("tau_out", &record[1])?,
            );
            if query.is_degenerate() {
                return Err(Error::parse(
                    line,
                    "query has zero input and output tokens".to_string(),
                ));
            }
            queries.push(query);
        }
        Ok(Workload { queries })
    }

    /// Serializes back to the CSV ingestion format (round-trips with
    /// [`Workload::from_csv`] modulo a trailing newline).
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("tau_in,tau_out\n");
        for q in &self.queries {
            out.push_str(&format!("{},{}\n", q.tau_in, q.tau_out));
        }
        out
    }
}

impl<'a> IntoIterator for &'a Workload {
    type Item = &'a Query;
    type IntoIter = std::slice::Iter<'a, Query>;

    fn into_iter(self) -> Self::IntoIter {
        self.queries.iter()
    }
}
