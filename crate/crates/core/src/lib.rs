//! Workload-based energy and runtime models for hosted LLM inference, plus
//! an offline energy-vs-accuracy query router.
//!
//! The crate covers the full pipeline:
//!
//! 1. ingest benchmark measurements and fit per-model bilinear energy and
//!    runtime predictors ([`stats::ols_fit_no_intercept`]),
//! 2. check which workload factors matter via two-way ANOVA
//!    ([`stats::two_way_anova`]),
//! 3. integrate power timecharts into per-query energy
//!    ([`powertrace::integrate_cpu_energy`]),
//! 4. score every (query, model) pair on a tunable energy-vs-accuracy
//!    objective ([`models::build_cost_matrix`]), and
//! 5. solve the resulting assignment problem exactly
//!    ([`scheduler::solve_offline`]) or via reference baselines.
//!
//! The tuning knob `zeta` ranges over `[0, 1]`: 0 routes purely for
//! accuracy, 1 purely for energy.

pub mod assignment;
pub mod error;
pub mod generate;
pub mod measurement;
pub mod models;
pub mod powertrace;
pub mod profile;
pub mod scheduler;
pub mod stats;
pub mod workload;

pub use assignment::Assignment;
pub use error::{Error, Result};
pub use generate::{generate_workload, TokenDistribution};
pub use measurement::{model_names, read_measurements, MeasurementRecord};
pub use models::{build_cost_matrix, compute_normalizers, CostMatrix, Normalizers};
pub use powertrace::{
    integrate_cpu_energy, read_residency, read_timechart, stopping_decision, total_energy,
    PowerSample, ResidencyInterval, StopDecision, StopRule, StopVerdict,
};
pub use profile::{Fleet, ModelProfile};
pub use scheduler::{
    brute_force, evaluate, random_assign, round_robin, single_model, solve_offline, sweep_zeta,
    sweep_zeta_with_jobs, CapacityMode, Metrics, RoutingConstraints,
};
pub use stats::{f_cdf, ols_fit_no_intercept, t_quantile, two_way_anova, AnovaTable, FitResult};
pub use workload::{Query, Workload};
