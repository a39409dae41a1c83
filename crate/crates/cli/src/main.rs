//! `wattroute`: fit workload-based energy/runtime models and route queries
//! across a fleet under an energy-vs-accuracy tradeoff.

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "wattroute",
    version,
    about = "Workload-based energy models and energy-aware query routing for LLM fleets",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    Fit(commands::fit::FitArgs),
    Anova(commands::anova::AnovaArgs),
    Route(commands::route::RouteArgs),
    Sweep(commands::sweep::SweepArgs),
    Gen(commands::gen::GenArgs),
    Power(commands::power::PowerArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Fit(args) => commands::fit::run(&args),
        Command::Anova(args) => commands::anova::run(&args),
        Command::Route(args) => commands::route::run(&args),
        Command::Sweep(args) => commands::sweep::run(&args),
        Command::Gen(args) => commands::gen::run(&args),
        Command::Power(args) => commands::power::run(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

/// BSD sysexits-style mapping: 65 for bad data (parse, invalid, infeasible),
/// 66 for a missing input file, 74 for other I/O failures.
fn exit_code(err: &wattroute::Error) -> u8 {
    match err {
        wattroute::Error::Io(io) if io.kind() == std::io::ErrorKind::NotFound => 66,
        wattroute::Error::Io(_) => 74,
        _ => 65,
    }
}
