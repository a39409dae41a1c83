use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::Args;
use wattroute::{
    evaluate, random_assign, round_robin, single_model, solve_offline, Assignment, CapacityMode,
    Fleet, Metrics, Result, RoutingConstraints, Workload,
};

use crate::output::{f6, open_input, read_input, write_output, Table};

/// Route a workload across the fleet at a fixed zeta, or score a baseline.
#[derive(Args)]
#[command(long_about = "\
Assign every query in the workload to a model, minimizing the summed
per-query cost zeta * e_hat - (1 - zeta) * a_hat, where e_hat and a_hat are
the predicted energy and the accuracy proxy, each normalized by its maximum
over the fleet and workload. zeta = 1 routes purely for energy, zeta = 0
purely for accuracy.

The profile TOML lists one [[model]] block per fleet member (name,
accuracy_const, alpha and beta coefficient triples, optional gamma capacity
fraction); the workload CSV has the header `tau_in,tau_out`. The assignment
CSV (`query_index,model`) goes to --out when given, otherwise to standard
output; a one-row metrics CSV follows on standard output either way.

With --baseline the solver is bypassed and the named reference policy is
scored instead: `roundrobin` cycles through the fleet, `random` draws
uniformly (requires --seed), and `single:K` sends everything to the model at
index K in profile order. Baselines ignore --min-per-model and --use-gamma.")]
pub struct RouteArgs {
    /// Fleet profile TOML.
    #[arg(long, value_name = "PATH")]
    pub profiles: PathBuf,

    /// Workload CSV (header: tau_in,tau_out).
    #[arg(long, value_name = "PATH")]
    pub workload: PathBuf,

    /// Energy weight in [0, 1]; accuracy weight is its complement.
    #[arg(long, value_name = "F")]
    pub zeta: f64,

    /// Minimum number of queries each model must receive.
    #[arg(long, value_name = "N", default_value_t = 1)]
    pub min_per_model: usize,

    /// Cap each model's share at its gamma fraction from the profile TOML.
    #[arg(long)]
    pub use_gamma: bool,

    /// Score a reference policy instead of solving.
    #[arg(long, value_name = "roundrobin|random|single:K")]
    pub baseline: Option<Baseline>,

    /// RNG seed; required by `--baseline random`.
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,

    /// Write the assignment CSV here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Render markdown tables instead of CSV.
    #[arg(long)]
    pub markdown: bool,
}

#[derive(Clone, Copy)]
pub enum Baseline {
    RoundRobin,
    Random,
    Single(usize),
}

impl FromStr for Baseline {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "roundrobin" => Ok(Baseline::RoundRobin),
            "random" => Ok(Baseline::Random),
            _ => match s.strip_prefix("single:") {
                Some(index) => index
                    .parse()
                    .map(Baseline::Single)
                    .map_err(|e| format!("bad model index `{index}`: {e}")),
                None => Err(format!(
                    "expected roundrobin, random, or single:K, got `{s}`"
                )),
            },
        }
    }
}

impl fmt::Display for Baseline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Baseline::RoundRobin => write!(f, "roundrobin"),
            Baseline::Random => write!(f, "random"),
            Baseline::Single(k) => write!(f, "single:{k}"),
        }
    }
}

pub fn run(args: &RouteArgs) -> Result<()> {
    if matches!(args.baseline, Some(Baseline::Random)) && args.seed.is_none() {
        usage_error("--seed is required with --baseline random");
    }

    let fleet = Fleet::from_toml_str(&read_input(&args.profiles)?)?;
    let workload = Workload::from_csv(open_input(&args.workload)?)?;

    let (assignment, metrics) = match args.baseline {
        None => {
            let constraints = RoutingConstraints {
                min_per_model: args.min_per_model,
                capacity_mode: capacity_mode(args.use_gamma),
            };
            solve_offline(&fleet, &workload, args.zeta, &constraints)?
        }
        Some(baseline) => {
            let assignment = match baseline {
                Baseline::RoundRobin => round_robin(&workload, &fleet)?,
                Baseline::Random => {
                    random_assign(&workload, &fleet, args.seed.expect("checked above"))?
                }
                Baseline::Single(k) => single_model(&workload, &fleet, k)?,
            };
            let metrics = evaluate(&assignment, &fleet, &workload, args.zeta)?;
            (assignment, metrics)
        }
    };

    let assignment_table = assignment_table(&assignment, &fleet);
    let metrics_table = metrics_table(&metrics, args.zeta);

    match &args.out {
        Some(path) => {
            write_output(Some(path), &assignment_table.render(args.markdown))?;
            print!("{}", metrics_table.render(args.markdown));
        }
        None => {
            print!("{}", assignment_table.render(args.markdown));
            println!();
            print!("{}", metrics_table.render(args.markdown));
        }
    }
    Ok(())
}

fn capacity_mode(use_gamma: bool) -> CapacityMode {
    if use_gamma {
        CapacityMode::FractionCap
    } else {
        CapacityMode::Unbounded
    }
}

fn assignment_table(assignment: &Assignment, fleet: &Fleet) -> Table {
    let mut table = Table::new(["query_index", "model"]);
    for (query, &model) in assignment.as_slice().iter().enumerate() {
        table.push_row(vec![query.to_string(), fleet.models()[model].name.clone()]);
    }
    table
}

fn metrics_table(metrics: &Metrics, zeta: f64) -> Table {
    let mut header = vec![
        "zeta".to_owned(),
        "total_energy_j".to_owned(),
        "mean_runtime_s".to_owned(),
        "total_accuracy".to_owned(),
        "objective_value".to_owned(),
    ];
    header.extend(
        metrics
            .per_model_counts
            .iter()
            .map(|(name, _)| format!("count_{name}")),
    );
    let mut row = vec![
        f6(zeta),
        f6(metrics.total_energy_j),
        f6(metrics.mean_runtime_s),
        f6(metrics.total_accuracy),
        f6(metrics.objective_value),
    ];
    row.extend(metrics.per_model_counts.iter().map(|(_, c)| c.to_string()));
    let mut table = Table::new(header);
    table.push_row(row);
    table
}

/// Reports a usage error through clap so it carries the conventional exit
/// status 2, like any other bad flag combination.
fn usage_error(message: &str) -> ! {
    use clap::CommandFactory;
    let mut cmd = crate::Cli::command();
    cmd.error(clap::error::ErrorKind::MissingRequiredArgument, message)
        .exit()
}
