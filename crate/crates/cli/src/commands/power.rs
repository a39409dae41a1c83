use std::path::PathBuf;

use clap::Args;
use wattroute::{integrate_cpu_energy, total_energy, Result};

use crate::output::open_input;

/// Integrate CPU power samples against residency intervals into joules.
#[derive(Args)]
#[command(long_about = "\
Integrate per-core power samples over the spans where the measured process
was actually resident on each core, then print total joules (CPU plus an
optional externally measured GPU term) to six decimal places.

The timechart CSV has the header `time_s,core_id,power_w`: each sample
holds until the core's next sample and the last sample of a core marks the
end of its trace. The residency CSV has the header `core_id,start_s,end_s`
with non-overlapping intervals per core; power outside them is not
attributed.")]
pub struct PowerArgs {
    /// Power sample CSV (header: time_s,core_id,power_w).
    #[arg(long, value_name = "PATH")]
    pub timechart: PathBuf,

    /// Residency interval CSV (header: core_id,start_s,end_s).
    #[arg(long, value_name = "PATH")]
    pub residency: PathBuf,

    /// Externally measured GPU energy to add, in joules.
    #[arg(long, value_name = "F", default_value_t = 0.0)]
    pub gpu_joules: f64,
}

pub fn run(args: &PowerArgs) -> Result<()> {
    let samples = wattroute::read_timechart(open_input(&args.timechart)?)?;
    let residency = wattroute::read_residency(open_input(&args.residency)?)?;
    let cpu = integrate_cpu_energy(&samples, &residency)?;
    let total = total_energy(cpu, args.gpu_joules)?;
    println!("{total:.6}");
    Ok(())
}
