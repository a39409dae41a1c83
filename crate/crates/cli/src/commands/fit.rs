use std::path::PathBuf;

use clap::{Args, ValueEnum};
use wattroute::{model_names, ols_fit_no_intercept, read_measurements, MeasurementRecord, Result};

use crate::output::{f6, open_input, write_output, Table};

/// Fit per-model bilinear energy and runtime predictors from measurements.
#[derive(Args)]
#[command(long_about = "\
Fit per-model bilinear no-intercept predictors from repeated measurements.

The measurement CSV must have the header
`model,tau_in,tau_out,energy_j,runtime_s,trial`; rows are grouped by model
name and each group is fit separately. Output is one CSV row per model with
the three coefficients (input-token, output-token, and interaction terms),
the uncentered R^2, and the overall F statistic with its p-value. With
`--metric both` (the default) a leading `metric` column distinguishes the
energy rows from the runtime rows.")]
pub struct FitArgs {
    /// Measurement CSV (header: model,tau_in,tau_out,energy_j,runtime_s,trial).
    #[arg(long, value_name = "PATH")]
    pub measurements: PathBuf,

    /// Which response column to fit.
    #[arg(long, value_enum, default_value_t = Metric::Both)]
    pub metric: Metric,

    /// Write the CSV here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Render a markdown table instead of CSV.
    #[arg(long)]
    pub markdown: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    Energy,
    Runtime,
    Both,
}

type Extractor = fn(&MeasurementRecord) -> f64;

pub fn run(args: &FitArgs) -> Result<()> {
    let records = read_measurements(open_input(&args.measurements)?)?;
    let names = model_names(&records);

    let metrics: &[(&str, Extractor)] = match args.metric {
        Metric::Energy => &[("energy", |r| r.energy_j)],
        Metric::Runtime => &[("runtime", |r| r.runtime_s)],
        Metric::Both => &[("energy", |r| r.energy_j), ("runtime", |r| r.runtime_s)],
    };
    let both = args.metric == Metric::Both;

    let base = ["model", "a0", "a1", "a2", "r2", "f", "p"];
    let mut table = if both {
        Table::new(std::iter::once("metric").chain(base))
    } else {
        Table::new(base)
    };

    for (metric_name, extract) in metrics {
        for name in &names {
            let rows: Vec<(u32, u32, f64)> = records
                .iter()
                .filter(|r| r.model == *name)
                .map(|r| (r.tau_in, r.tau_out, extract(r)))
                .collect();
            let fit = ols_fit_no_intercept(&rows)?;
            let mut row = Vec::new();
            if both {
                row.push((*metric_name).to_owned());
            }
            row.push(name.clone());
            row.extend(fit.coeffs.iter().map(|&c| f6(c)));
            row.push(f6(fit.r_squared));
            row.push(f6(fit.f_statistic));
            row.push(f6(fit.p_value));
            table.push_row(row);
        }
    }

    write_output(args.out.as_deref(), &table.render(args.markdown))
}
