//! Offline query routing: exact assignment solving, reference baselines, a
//! brute-force oracle, workload evaluation, and the zeta sweep.

mod mcmf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assignment::Assignment;
use crate::error::{Error, Result};
use crate::models::{
    accuracy_score, build_cost_matrix, predict_energy, predict_runtime, CostMatrix,
};
use crate::profile::Fleet;
use crate::workload::Workload;
use mcmf::MinCostFlow;

/// Whether per-model capacity fractions are enforced as count caps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CapacityMode {
    #[default]
    Unbounded,
    /// Cap model K at `ceil(gamma_K * m)` queries; models without a
    /// fraction stay uncapped.
    FractionCap,
}

/// Partition constraints: every model must serve at least `min_per_model`
/// queries, and at most its capacity cap when `FractionCap` is on.
///
/// The default `min_per_model` of 1 reflects the strict partition reading
/// (every model serves a nonempty share); 0 relaxes it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoutingConstraints {
    pub min_per_model: usize,
    pub capacity_mode: CapacityMode,
}

impl Default for RoutingConstraints {
    fn default() -> Self {
        RoutingConstraints {
            min_per_model: 1,
            capacity_mode: CapacityMode::Unbounded,
        }
    }
}

/// Workload-level outcomes of an assignment, in physical units plus the
/// normalized objective actually minimized.
#[derive(Debug, Clone, PartialEq)]
pub struct Metrics {
    pub total_energy_j: f64,
    pub mean_runtime_s: f64,
    pub total_accuracy: f64,
    /// (model name, query count) in fleet order; counts sum to m.
    pub per_model_counts: Vec<(String, usize)>,
    pub objective_value: f64,
}

/// Per-model count caps implied by the constraints, validated for
/// feasibility against the workload size.
fn validated_caps(
    fleet: &Fleet,
    num_queries: usize,
    constraints: &RoutingConstraints,
) -> Result<Vec<usize>> {
    let num_models = fleet.len();
    let caps: Vec<usize> = match constraints.capacity_mode {
        CapacityMode::Unbounded => vec![num_queries; num_models],
        CapacityMode::FractionCap => fleet
            .iter()
            .map(|p| {
                p.capacity_fraction
                    .map_or(num_queries, |g| fraction_cap(g, num_queries))
            })
            .collect(),
    };
    let min_total = constraints.min_per_model.saturating_mul(num_models);
    if min_total > num_queries {
        return Err(Error::Infeasible(format!(
            "min_per_model {} across {num_models} models requires {min_total} queries, \
             workload has {num_queries}",
            constraints.min_per_model
        )));
    }
    for (profile, &cap) in fleet.iter().zip(&caps) {
        if cap < constraints.min_per_model {
            return Err(Error::Infeasible(format!(
                "model `{}` capacity cap {cap} is below min_per_model {}",
                profile.name, constraints.min_per_model
            )));
        }
    }
    let cap_total: usize = caps.iter().sum();
    if cap_total < num_queries {
        return Err(Error::Infeasible(format!(
            "capacity caps sum to {cap_total}, workload has {num_queries} queries"
        )));
    }
    Ok(caps)
}

/// `ceil(gamma * m)` with a snap for products that are integers up to float
/// rounding (0.2 * 500 must cap at 100, not 101).
fn fraction_cap(gamma: f64, num_queries: usize) -> usize {
    let raw = gamma * num_queries as f64;
    let snapped = raw.round();
    let cap = if (raw - snapped).abs() < 1e-9 {
        snapped
    } else {
        raw.ceil()
    };
    (cap as usize).min(num_queries)
}

/// Solves the routing problem exactly: minimize the summed cost-matrix
/// entries over all assignments satisfying the count constraints.
///
/// The count-capacitated problem is a transportation problem; successive
/// shortest-path min-cost flow solves it exactly, with minimum counts
/// handled by splitting each model's sink capacity into a forced part
/// (must saturate) and a shared optional part.
pub fn solve_offline(
    fleet: &Fleet,
    workload: &Workload,
    zeta: f64,
    constraints: &RoutingConstraints,
) -> Result<(Assignment, Metrics)> {
    if workload.is_empty() {
        return Err(Error::invalid("cannot route an empty workload"));
    }
    let caps = validated_caps(fleet, workload.len(), constraints)?;
    let matrix = build_cost_matrix(fleet, workload, zeta)?;
    let assignment = assign_min_cost(&matrix, &caps, constraints.min_per_model)?;
    let metrics = metrics_for(&assignment, fleet, workload, &matrix);
    Ok((assignment, metrics))
}

fn assign_min_cost(
    matrix: &CostMatrix,
    caps: &[usize],
    min_per_model: usize,
) -> Result<Assignment> {
    let m = matrix.num_queries();
    let k = matrix.num_models();
    // Nodes: source, sink, spill, then queries, then models. Max flow of m
    // saturates every edge into the sink, which is what forces each model's
    // `min_per_model` floor.
    let source = 0;
    let sink = 1;
    let spill = 2;
    let query_node = |i: usize| 3 + i;
    let model_node = |kk: usize| 3 + m + kk;
    let mut flow = MinCostFlow::new(3 + m + k);
    for i in 0..m {
        flow.add_edge(source, query_node(i), 1, 0.0);
    }
    let mut pair_edges = vec![usize::MAX; m * k];
    for i in 0..m {
        for kk in 0..k {
            pair_edges[i * k + kk] =
                flow.add_edge(query_node(i), model_node(kk), 1, matrix.entry(i, kk));
        }
    }
    for (kk, &cap) in caps.iter().enumerate() {
        if min_per_model > 0 {
            flow.add_edge(model_node(kk), sink, min_per_model as i64, 0.0);
        }
        let slack = cap - min_per_model;
        if slack > 0 {
            flow.add_edge(model_node(kk), spill, slack as i64, 0.0);
        }
    }
    let forced_total = min_per_model * k;
    if m > forced_total {
        flow.add_edge(spill, sink, (m - forced_total) as i64, 0.0);
    }
    let routed = flow.run(source, sink, m as i64);
    if routed < m as i64 {
        return Err(Error::Infeasible(format!(
            "could only route {routed} of {m} queries under the given constraints"
        )));
    }
    let mut model_of = vec![usize::MAX; m];
    for i in 0..m {
        for kk in 0..k {
            if flow.flow_on(pair_edges[i * k + kk]) == 1 {
                model_of[i] = kk;
                break;
            }
        }
    }
    Assignment::new(model_of, k)
}

fn metrics_for(
    assignment: &Assignment,
    fleet: &Fleet,
    workload: &Workload,
    matrix: &CostMatrix,
) -> Metrics {
    let mut total_energy_j = 0.0;
    let mut runtime_sum = 0.0;
    let mut total_accuracy = 0.0;
    let mut objective_value = 0.0;
    let mut counts = vec![0usize; fleet.len()];
    for (i, &q) in workload.iter().enumerate() {
        let kk = assignment.model_of(i);
        let profile = fleet.get(kk).expect("assignment validated against fleet");
        total_energy_j += predict_energy(profile, q);
        runtime_sum += predict_runtime(profile, q);
        total_accuracy += accuracy_score(profile, q);
        objective_value += matrix.entry(i, kk);
        counts[kk] += 1;
    }
    Metrics {
        total_energy_j,
        mean_runtime_s: runtime_sum / workload.len() as f64,
        total_accuracy,
        per_model_counts: fleet
            .iter()
            .zip(counts)
            .map(|(p, c)| (p.name.clone(), c))
            .collect(),
        objective_value,
    }
}

/// Scores an existing assignment against a fleet and workload at `zeta`.
pub fn evaluate(
    assignment: &Assignment,
    fleet: &Fleet,
    workload: &Workload,
    zeta: f64,
) -> Result<Metrics> {
    if assignment.num_queries() != workload.len() || assignment.num_models() != fleet.len() {
        return Err(Error::invalid(format!(
            "assignment covers {} queries over {} models; instance has {} queries over {}",
            assignment.num_queries(),
            assignment.num_models(),
            workload.len(),
            fleet.len()
        )));
    }
    let matrix = build_cost_matrix(fleet, workload, zeta)?;
    Ok(metrics_for(assignment, fleet, workload, &matrix))
}

const BRUTE_FORCE_GUARD: f64 = 1e7;

/// Exhaustive reference solver. Visits assignment vectors in lexicographic
/// order and keeps the first minimum, so ties resolve to the smallest
/// vector.
pub fn brute_force(
    fleet: &Fleet,
    workload: &Workload,
    zeta: f64,
    constraints: &RoutingConstraints,
) -> Result<(Assignment, Metrics)> {
    if workload.is_empty() {
        return Err(Error::invalid("cannot route an empty workload"));
    }
    let m = workload.len();
    let k = fleet.len();
    if (k as f64).powi(m as i32) > BRUTE_FORCE_GUARD {
        return Err(Error::TooLarge(format!(
            "brute force over {k}^{m} assignments exceeds the 1e7 guard"
        )));
    }
    let caps = validated_caps(fleet, m, constraints)?;
    let matrix = build_cost_matrix(fleet, workload, zeta)?;
    let mut current = vec![0usize; m];
    let mut counts = vec![0usize; k];
    counts[0] = m;
    let mut best: Option<(Vec<usize>, f64)> = None;
    loop {
        let feasible = counts
            .iter()
            .zip(&caps)
            .all(|(&c, &cap)| c >= constraints.min_per_model && c <= cap);
        if feasible {
            let objective: f64 = current
                .iter()
                .enumerate()
                .map(|(i, &kk)| matrix.entry(i, kk))
                .sum();
            if best.as_ref().is_none_or(|(_, b)| objective < *b) {
                best = Some((current.clone(), objective));
            }
        }
        // Odometer increment, rightmost digit fastest: lexicographic order.
        let mut advanced = false;
        for digit in (0..m).rev() {
            counts[current[digit]] -= 1;
            if current[digit] + 1 < k {
                current[digit] += 1;
                counts[current[digit]] += 1;
                advanced = true;
                break;
            }
            current[digit] = 0;
            counts[0] += 1;
        }
        if !advanced {
            break;
        }
    }
    let (model_of, _) = best
        .ok_or_else(|| Error::Infeasible("no assignment satisfies the constraints".to_string()))?;
    let assignment = Assignment::new(model_of, k)?;
    let metrics = metrics_for(&assignment, fleet, workload, &matrix);
    Ok((assignment, metrics))
}

/// Query i goes to model `i mod |fleet|`.
pub fn round_robin(workload: &Workload, fleet: &Fleet) -> Result<Assignment> {
    Assignment::new(
        (0..workload.len()).map(|i| i % fleet.len()).collect(),
        fleet.len(),
    )
}

/// Independent uniform choice per query, deterministic per seed.
pub fn random_assign(workload: &Workload, fleet: &Fleet, seed: u64) -> Result<Assignment> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Assignment::new(
        (0..workload.len())
            .map(|_| rng.gen_range(0..fleet.len()))
            .collect(),
        fleet.len(),
    )
}

/// Everything to one model.
pub fn single_model(workload: &Workload, fleet: &Fleet, model_index: usize) -> Result<Assignment> {
    if model_index >= fleet.len() {
        return Err(Error::invalid(format!(
            "model index {model_index} out of range for a fleet of {}",
            fleet.len()
        )));
    }
    Assignment::new(vec![model_index; workload.len()], fleet.len())
}

/// One exact solve per grid point, rows in grid order.
pub fn sweep_zeta(
    fleet: &Fleet,
    workload: &Workload,
    constraints: &RoutingConstraints,
    grid: &[f64],
) -> Result<Vec<(f64, Metrics)>> {
    sweep_zeta_with_jobs(fleet, workload, constraints, grid, 1)
}

/// [`sweep_zeta`] with up to `jobs` grid points solved concurrently. Every
/// solve is independent and deterministic, so the row content does not
/// depend on `jobs`.
pub fn sweep_zeta_with_jobs(
    fleet: &Fleet,
    workload: &Workload,
    constraints: &RoutingConstraints,
    grid: &[f64],
    jobs: usize,
) -> Result<Vec<(f64, Metrics)>> {
    for pair in grid.windows(2) {
        if pair[0] > pair[1] {
            return Err(Error::invalid(format!(
                "zeta grid must be sorted ascending, saw {} after {}",
                pair[1], pair[0]
            )));
        }
    }
    if let Some(bad) = grid.iter().find(|z| !(0.0..=1.0).contains(*z)) {
        return Err(Error::invalid(format!(
            "zeta grid value {bad} outside [0,1]"
        )));
    }
    let jobs = jobs.max(1).min(grid.len().max(1));
    let mut slots: Vec<Option<Result<(f64, Metrics)>>> = Vec::new();
    slots.resize_with(grid.len(), || None);
    if jobs == 1 {
        for (slot, &zeta) in slots.iter_mut().zip(grid) {
            *slot = Some(
                solve_offline(fleet, workload, zeta, constraints)
                    .map(|(_, metrics)| (zeta, metrics)),
            );
        }
    } else {
        std::thread::scope(|scope| {
            let mut handles = Vec::with_capacity(jobs);
            for worker in 0..jobs {
                handles.push(scope.spawn(move || {
                    let mut out = Vec::new();
                    for idx in (worker..grid.len()).step_by(jobs) {
                        let row = solve_offline(fleet, workload, grid[idx], constraints)
                            .map(|(_, metrics)| (grid[idx], metrics));
                        out.push((idx, row));
                    }
                    out
                }));
            }
            for handle in handles {
                for (idx, row) in handle.join().expect("sweep worker panicked") {
                    slots[idx] = Some(row);
                }
            }
        });
    }
    let rows: Vec<(f64, Metrics)> = slots
        .into_iter()
        .map(|slot| slot.expect("every grid index visited"))
        .collect::<Result<_>>()?;
    debug_assert!(
        sweep_is_monotone(&rows),
        "sweep violated the tradeoff ordering"
    );
    Ok(rows)
}

/// Exchange-argument consequence: as zeta grows, optimal energy and
/// accuracy are both non-increasing (up to float noise in the entries).
fn sweep_is_monotone(rows: &[(f64, Metrics)]) -> bool {
    rows.windows(2).all(|pair| {
        let (lo, hi) = (&pair[0].1, &pair[1].1);
        let e_slack = 1e-9 * lo.total_energy_j.abs().max(1.0);
        let a_slack = 1e-9 * lo.total_accuracy.abs().max(1.0);
        hi.total_energy_j <= lo.total_energy_j + e_slack
            && hi.total_accuracy <= lo.total_accuracy + a_slack
    })
}
