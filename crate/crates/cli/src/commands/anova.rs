use std::path::PathBuf;

use clap::{Args, ValueEnum};
use wattroute::{model_names, read_measurements, two_way_anova, Result};

use crate::output::{f6, open_input, write_output, Table};

/// Two-way ANOVA of a measured metric over token-count levels.
#[derive(Args)]
#[command(long_about = "\
Run a balanced two-way ANOVA per model, with input-token and output-token
counts as the factors and trials as replicates.

The measurement CSV must have the header
`model,tau_in,tau_out,energy_j,runtime_s,trial` and must form a full grid:
every (tau_in, tau_out) level pair present for a model needs the same number
of replicate rows, and at least two replicates are required so the
interaction term leaves error degrees of freedom. Output is one CSV row per
variance source (input_tokens, output_tokens, interaction, error, total) per
model; the error and total rows have empty F and p columns.")]
pub struct AnovaArgs {
    /// Measurement CSV (header: model,tau_in,tau_out,energy_j,runtime_s,trial).
    #[arg(long, value_name = "PATH")]
    pub measurements: PathBuf,

    /// Which response column to analyze.
    #[arg(long, value_enum)]
    pub metric: Metric,

    /// Render a markdown table instead of CSV.
    #[arg(long)]
    pub markdown: bool,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Metric {
    Energy,
    Runtime,
}

pub fn run(args: &AnovaArgs) -> Result<()> {
    let records = read_measurements(open_input(&args.measurements)?)?;
    let names = model_names(&records);

    let mut table = Table::new(["model", "source", "sum_squares", "dof", "f", "p"]);
    for name in &names {
        let rows: Vec<(u32, u32, f64)> = records
            .iter()
            .filter(|r| r.model == *name)
            .map(|r| {
                let y = match args.metric {
                    Metric::Energy => r.energy_j,
                    Metric::Runtime => r.runtime_s,
                };
                (r.tau_in, r.tau_out, y)
            })
            .collect();
        let anova = two_way_anova(&rows)?;
        let total_dof: u32 = anova.rows().iter().map(|(_, row)| row.dof).sum();
        for (source, row) in anova.rows() {
            table.push_row(vec![
                name.clone(),
                source.to_owned(),
                f6(row.sum_squares),
                row.dof.to_string(),
                row.f_statistic.map_or_else(String::new, f6),
                row.p_value.map_or_else(String::new, f6),
            ]);
        }
        table.push_row(vec![
            name.clone(),
            "total".to_owned(),
            f6(anova.total_sum_squares),
            total_dof.to_string(),
            String::new(),
            String::new(),
        ]);
    }

    write_output(None, &table.render(args.markdown))
}
