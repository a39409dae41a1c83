//! Synthetic workload generation.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal};

use crate::error::{Error, Result};
use crate::workload::{Query, Workload};

/// Token-length distribution, applied independently to input and output
/// lengths. Parses from `uniform:LO,HI` or `lognormal:MU,SIGMA,CAP`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TokenDistribution {
    Uniform {
        lo: u32,
        hi: u32,
    },
    /// Lognormal(mu, sigma) truncated to `[1, cap]`.
    LogNormal {
        mu: f64,
        sigma: f64,
        cap: u32,
    },
}

impl TokenDistribution {
    pub fn uniform(lo: u32, hi: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::invalid(format!(
                "uniform bounds reversed: {lo} > {hi}"
            )));
        }
        if lo == 0 {
            return Err(Error::invalid("uniform lower bound must be at least 1"));
        }
        Ok(TokenDistribution::Uniform { lo, hi })
    }

    pub fn lognormal(mu: f64, sigma: f64, cap: u32) -> Result<Self> {
        if cap < 1 {
            return Err(Error::invalid(format!(
                "lognormal cap must be at least 1, got {cap}"
            )));
        }
        if !mu.is_finite() || !sigma.is_finite() || sigma < 0.0 {
            return Err(Error::invalid(format!(
                "lognormal parameters must be finite with sigma >= 0, got mu={mu} sigma={sigma}"
            )));
        }
        Ok(TokenDistribution::LogNormal { mu, sigma, cap })
    }

    fn sample(self, rng: &mut ChaCha8Rng) -> u32 {
        match self {
            TokenDistribution::Uniform { lo, hi } => rng.gen_range(lo..=hi),
            TokenDistribution::LogNormal { mu, sigma, cap } => {
                let dist = LogNormal::new(mu, sigma).expect("parameters validated at construction");
                // Rejection-sample into [1, cap]; a pathological (mu, sigma)
                // that almost never lands in range falls back to clamping.
                for _ in 0..1000 {
                    let tokens = dist.sample(rng).round();
                    if tokens >= 1.0 && tokens <= f64::from(cap) {
                        return tokens as u32;
                    }
                }
                let tokens = dist.sample(rng).round();
                tokens.clamp(1.0, f64::from(cap)) as u32
            }
        }
    }
}

impl FromStr for TokenDistribution {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let (kind, args) = spec
            .split_once(':')
            .ok_or_else(|| Error::invalid(format!("distribution spec `{spec}` missing `:`")))?;
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        match kind.trim() {
            "uniform" => {
                if parts.len() != 2 {
                    return Err(Error::invalid(format!("uniform takes LO,HI, got `{args}`")));
                }
                let lo = parse_num(parts[0], spec)?;
                let hi = parse_num(parts[1], spec)?;
                TokenDistribution::uniform(lo, hi)
            }
            "lognormal" => {
                if parts.len() != 3 {
                    return Err(Error::invalid(format!(
                        "lognormal takes MU,SIGMA,CAP, got `{args}`"
                    )));
                }
                let mu = parse_num(parts[0], spec)?;
                let sigma = parse_num(parts[1], spec)?;
                let cap = parse_num(parts[2], spec)?;
                TokenDistribution::lognormal(mu, sigma, cap)
            }
            other => Err(Error::invalid(format!("unknown distribution `{other}`"))),
        }
    }
}

fn parse_num<T: FromStr>(field: &str, spec: &str) -> Result<T> {
    field.parse().map_err(|_| {
        Error::invalid(format!(
            "bad number `{field}` in distribution spec `{spec}`"
        ))
    })
}

/// Draws `count` queries, sampling `tau_in` then `tau_out` from `dist` for
/// each. Pure in `(count, dist, seed)`.
pub fn generate_workload(count: usize, dist: TokenDistribution, seed: u64) -> Result<Workload> {
    if count == 0 {
        return Err(Error::invalid("workload count must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let queries = (0..count)
        .map(|_| Query::new(dist.sample(&mut rng), dist.sample(&mut rng)))
        .collect();
    Workload::new(queries)
}
