use std::path::PathBuf;

use clap::Args;
use wattroute::{CapacityMode, Fleet, Result, RoutingConstraints, Workload};

use crate::output::{f6, open_input, read_input, write_output, Table};

/// Solve the routing problem across a grid of zeta values.
#[derive(Args)]
#[command(long_about = "\
Solve the routing problem at each zeta on an inclusive LO:HI:STEP grid and
emit one CSV row per grid point: the zeta value, summed predicted energy,
mean predicted runtime, summed accuracy proxy, and one count_<model> column
per fleet member giving how many queries that model received.

Inputs are the same profile TOML and workload CSV as `route`. With --jobs N
grid points are solved on N worker threads; the output row order is
identical regardless of N. Within one fleet and workload, the energy column
is non-increasing in zeta and so is the accuracy column.")]
pub struct SweepArgs {
    /// Fleet profile TOML.
    #[arg(long, value_name = "PATH")]
    pub profiles: PathBuf,

    /// Workload CSV (header: tau_in,tau_out).
    #[arg(long, value_name = "PATH")]
    pub workload: PathBuf,

    /// Inclusive zeta grid, e.g. 0:1:0.1 for eleven points.
    #[arg(long, value_name = "LO:HI:STEP", value_parser = parse_grid)]
    pub grid: Grid,

    /// Cap each model's share at its gamma fraction from the profile TOML.
    #[arg(long)]
    pub use_gamma: bool,

    /// Minimum number of queries each model must receive.
    #[arg(long, value_name = "N", default_value_t = 1)]
    pub min_per_model: usize,

    /// Number of worker threads solving grid points concurrently.
    #[arg(long, value_name = "N", default_value_t = 1)]
    pub jobs: usize,

    /// Write the CSV here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Render a markdown table instead of CSV.
    #[arg(long)]
    pub markdown: bool,
}

#[derive(Clone)]
pub struct Grid(pub Vec<f64>);

fn parse_grid(s: &str) -> std::result::Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, step] = parts[..] else {
        return Err(format!("expected LO:HI:STEP, got `{s}`"));
    };
    let lo: f64 = lo
        .parse()
        .map_err(|e| format!("bad grid start `{lo}`: {e}"))?;
    let hi: f64 = hi
        .parse()
        .map_err(|e| format!("bad grid end `{hi}`: {e}"))?;
    let step: f64 = step
        .parse()
        .map_err(|e| format!("bad grid step `{step}`: {e}"))?;
    if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) {
        return Err(format!("grid endpoints must lie in [0, 1], got {lo}:{hi}"));
    }
    if lo > hi {
        return Err(format!("grid start {lo} exceeds end {hi}"));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(format!(
            "grid step must be a finite positive number, got {step}"
        ));
    }
    let mut points = Vec::new();
    for i in 0.. {
        // Recompute from lo each time; repeated addition drifts.
        let z = lo + i as f64 * step;
        if z > hi + step * 1e-9 {
            break;
        }
        points.push(z.min(hi));
    }
    Ok(Grid(points))
}

pub fn run(args: &SweepArgs) -> Result<()> {
    let fleet = Fleet::from_toml_str(&read_input(&args.profiles)?)?;
    let workload = Workload::from_csv(open_input(&args.workload)?)?;
    let constraints = RoutingConstraints {
        min_per_model: args.min_per_model,
        capacity_mode: if args.use_gamma {
            CapacityMode::FractionCap
        } else {
            CapacityMode::Unbounded
        },
    };

    let rows =
        wattroute::sweep_zeta_with_jobs(&fleet, &workload, &constraints, &args.grid.0, args.jobs)?;

    let mut header = vec![
        "zeta".to_owned(),
        "total_energy_j".to_owned(),
        "mean_runtime_s".to_owned(),
        "total_accuracy".to_owned(),
    ];
    header.extend(fleet.models().iter().map(|m| format!("count_{}", m.name)));
    let mut table = Table::new(header);
    for (zeta, metrics) in &rows {
        let mut row = vec![
            f6(*zeta),
            f6(metrics.total_energy_j),
            f6(metrics.mean_runtime_s),
            f6(metrics.total_accuracy),
        ];
        row.extend(metrics.per_model_counts.iter().map(|(_, c)| c.to_string()));
        table.push_row(row);
    }

    write_output(args.out.as_deref(), &table.render(args.markdown))
}
