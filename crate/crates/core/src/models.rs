//! Per-model predictors, accuracy proxy, dynamic normalization, and the
//! per-(query, model) cost entries the router minimizes.

use crate::error::{Error, Result};
use crate::profile::{Fleet, ModelProfile};
use crate::workload::{Query, Workload};

/// Predicted energy in joules: `a0*tau_in + a1*tau_out + a2*tau_in*tau_out`.
pub fn predict_energy(profile: &ModelProfile, q: Query) -> f64 {
    bilinear(&profile.energy_coeffs, q)
}

/// Predicted runtime in seconds, same form over the runtime coefficients.
pub fn predict_runtime(profile: &ModelProfile, q: Query) -> f64 {
    bilinear(&profile.runtime_coeffs, q)
}

fn bilinear(coeffs: &[f64; 3], q: Query) -> f64 {
    let ti = f64::from(q.tau_in);
    let to = f64::from(q.tau_out);
    coeffs[0] * ti + coeffs[1] * to + coeffs[2] * (ti * to)
}

/// Accuracy proxy: the model's published accuracy constant times the total
/// token count, symmetric in input and output.
pub fn accuracy_score(profile: &ModelProfile, q: Query) -> f64 {
    profile.accuracy_const * (f64::from(q.tau_in) + f64::from(q.tau_out))
}

/// Fleet-and-workload-wide maxima used to put energy and accuracy on a
/// common scale before mixing them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalizers {
    pub max_energy_j: f64,
    pub max_accuracy: f64,
}

/// Scans every (model, query) pair for the largest predicted energy and
/// accuracy. Recomputed per routing call: normalization is relative to the
/// current fleet and workload, not a fixed reference.
///
/// A non-positive maximum (possible when fitted coefficients are negative)
/// is rejected: dividing by it would be meaningless, and it signals a fit
/// bad enough that routing on it would be too.
pub fn compute_normalizers(fleet: &Fleet, workload: &Workload) -> Result<Normalizers> {
    if workload.is_empty() {
        return Err(Error::invalid("cannot normalize over an empty workload"));
    }
    let mut max_energy_j = f64::NEG_INFINITY;
    let mut max_accuracy = f64::NEG_INFINITY;
    for profile in fleet.iter() {
        for &q in workload.iter() {
            max_energy_j = max_energy_j.max(predict_energy(profile, q));
            max_accuracy = max_accuracy.max(accuracy_score(profile, q));
        }
    }
    if !(max_energy_j.is_finite() && max_energy_j > 0.0) {
        return Err(Error::invalid(format!(
            "maximum predicted energy over the fleet and workload is {max_energy_j}; \
             normalization needs a finite positive maximum"
        )));
    }
    if !(max_accuracy.is_finite() && max_accuracy > 0.0) {
        return Err(Error::invalid(format!(
            "maximum accuracy over the fleet and workload is {max_accuracy}; \
             normalization needs a finite positive maximum"
        )));
    }
    Ok(Normalizers {
        max_energy_j,
        max_accuracy,
    })
}

/// Dense per-(query, model) routing costs at a fixed `zeta`.
///
/// `entry(i, K) = zeta * e_K(q_i)/max_e - (1 - zeta) * a_K(q_i)/max_a`.
/// Entries are kept signed; the solver handles negative costs.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    entries: Vec<f64>,
    num_models: usize,
    zeta: f64,
    normalizers: Normalizers,
}

impl CostMatrix {
    pub fn entry(&self, query: usize, model: usize) -> f64 {
        debug_assert!(model < self.num_models);
        self.entries[query * self.num_models + model]
    }

    pub fn num_queries(&self) -> usize {
        self.entries.len() / self.num_models
    }

    pub fn num_models(&self) -> usize {
        self.num_models
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn normalizers(&self) -> Normalizers {
        self.normalizers
    }
}

/// Builds the routing cost matrix for `zeta` in [0, 1].
pub fn build_cost_matrix(fleet: &Fleet, workload: &Workload, zeta: f64) -> Result<CostMatrix> {
    if !(0.0..=1.0).contains(&zeta) {
        return Err(Error::invalid(format!("zeta must be in [0,1], got {zeta}")));
    }
    let normalizers = compute_normalizers(fleet, workload)?;
    let mut entries = Vec::with_capacity(workload.len() * fleet.len());
    for &q in workload.iter() {
        for profile in fleet.iter() {
            let e_hat = predict_energy(profile, q) / normalizers.max_energy_j;
            let a_hat = accuracy_score(profile, q) / normalizers.max_accuracy;
            entries.push(zeta * e_hat - (1.0 - zeta) * a_hat);
        }
    }
    Ok(CostMatrix {
        entries,
        num_models: fleet.len(),
        zeta,
        normalizers,
    })
}
