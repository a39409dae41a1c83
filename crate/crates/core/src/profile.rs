//! Per-model cost profiles and fleet ingestion.

use serde::Deserialize;

use crate::error::{Error, Result};

/// One hosted model: its leaderboard accuracy constant, fitted energy and
/// runtime coefficients, and an optional capacity fraction.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelProfile {
    pub name: String,
    /// Published average accuracy in percent. Kept on its native percent
    /// scale; cost normalization cancels the units.
    pub accuracy_const: f64,
    /// Energy predictor coefficients `[per input token, per output token,
    /// per input*output token pair]`, in joules.
    pub energy_coeffs: [f64; 3],
    /// Runtime predictor coefficients, same layout, in seconds.
    pub runtime_coeffs: [f64; 3],
    /// Fraction of the workload this model's partition can absorb.
    /// `None` means uncapped.
    pub capacity_fraction: Option<f64>,
}

impl ModelProfile {
    fn validate(&self) -> Result<()> {
        if !(self.accuracy_const > 0.0 && self.accuracy_const <= 100.0) {
            return Err(Error::invalid(format!(
                "model `{}`: accuracy_const must be in (0, 100], got {}",
                self.name, self.accuracy_const
            )));
        }
        for (label, coeffs) in [
            ("alpha", &self.energy_coeffs),
            ("beta", &self.runtime_coeffs),
        ] {
            if coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::invalid(format!(
                    "model `{}`: {label} coefficients must be finite",
                    self.name
                )));
            }
        }
        if let Some(gamma) = self.capacity_fraction {
            if !(gamma > 0.0 && gamma <= 1.0) {
                return Err(Error::invalid(format!(
                    "model `{}`: gamma must be in (0, 1], got {gamma}",
                    self.name
                )));
            }
        }
        Ok(())
    }
}

/// A validated, nonempty collection of model profiles.
#[derive(Debug, Clone, PartialEq)]
pub struct Fleet {
    models: Vec<ModelProfile>,
}

const GAMMA_SUM_TOLERANCE: f64 = 1e-9;

impl Fleet {
    /// Validates per-model invariants, name uniqueness, and — when every
    /// profile carries a capacity fraction — that the fractions sum to 1.
    pub fn new(models: Vec<ModelProfile>) -> Result<Self> {
        if models.is_empty() {
            return Err(Error::invalid("fleet has no model profiles"));
        }
        for profile in &models {
            profile.validate()?;
        }
        for (i, profile) in models.iter().enumerate() {
            if models[..i].iter().any(|p| p.name == profile.name) {
                return Err(Error::invalid(format!(
                    "duplicate model name `{}`",
                    profile.name
                )));
            }
        }
        if models.iter().all(|p| p.capacity_fraction.is_some()) {
            let sum: f64 = models.iter().filter_map(|p| p.capacity_fraction).sum();
            if (sum - 1.0).abs() > GAMMA_SUM_TOLERANCE {
                return Err(Error::invalid(format!(
                    "capacity fractions sum to {}",
                    round_for_display(sum)
                )));
            }
        }
        Ok(Fleet { models })
    }

    /// Parses the profile document format: TOML with one `[[model]]` block
    /// per profile carrying `name`, `accuracy_const`, `alpha`, `beta`, and
    /// an optional `gamma`.
    pub fn from_toml_str(doc: &str) -> Result<Self> {
        let parsed: ProfileDoc = toml::from_str(doc)
            .map_err(|e| Error::invalid(format!("profile document: {}", e.message())))?;
        let models = parsed
            .model
            .into_iter()
            .map(|raw| ModelProfile {
                name: raw.name,
                accuracy_const: raw.accuracy_const,
                energy_coeffs: raw.alpha,
                runtime_coeffs: raw.beta,
                capacity_fraction: raw.gamma,
            })
            .collect();
        Fleet::new(models)
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, index: usize) -> Option<&ModelProfile> {
        self.models.get(index)
    }

    pub fn models(&self) -> &[ModelProfile] {
        &self.models
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ModelProfile> {
        self.models.iter()
    }

    /// True when every profile carries a capacity fraction.
    pub fn fully_fractioned(&self) -> bool {
        self.models.iter().all(|p| p.capacity_fraction.is_some())
    }
}

// Keeps "sum to 1.2" readable instead of leaking 1.2000000000000002.
fn round_for_display(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

#[derive(Deserialize)]
struct ProfileDoc {
    #[serde(default)]
    model: Vec<RawProfile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProfile {
    name: String,
    accuracy_const: f64,
    alpha: [f64; 3],
    beta: [f64; 3],
    gamma: Option<f64>,
}
