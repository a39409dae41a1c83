use std::path::PathBuf;

use clap::Args;
use wattroute::{generate_workload, Result, TokenDistribution};

use crate::output::write_output;

/// Generate a synthetic workload CSV from a token-count distribution.
#[derive(Args)]
#[command(long_about = "\
Draw a reproducible synthetic workload and write it as a CSV with the header
`tau_in,tau_out`. Input and output token counts are drawn independently from
the same distribution.

Distribution specs:
  uniform:LO,HI          integers in [LO, HI], LO >= 1
  lognormal:MU,SIGMA,CAP log-normal rounded to an integer, clamped to [1, CAP]

The same --count, --seed, and --dist always produce a byte-identical file.")]
pub struct GenArgs {
    /// Number of queries to generate.
    #[arg(long, value_name = "N")]
    pub count: usize,

    /// RNG seed; fixes the output exactly.
    #[arg(long, value_name = "N")]
    pub seed: u64,

    /// Token distribution, e.g. uniform:32,512 or lognormal:5.0,0.8,2048.
    #[arg(long, value_name = "SPEC")]
    pub dist: TokenDistribution,

    /// Output workload CSV path.
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

pub fn run(args: &GenArgs) -> Result<()> {
    let workload = generate_workload(args.count, args.dist, args.seed)?;
    write_output(Some(&args.out), &workload.to_csv_string())
}
