//! Monte Carlo estimation of time-averaged unavailability.
//!
//! Each replication starts in the initial marking and runs to `t_end` with the
//! competing-exponentials kernel: dwell `~ Exp(Λ)`, winner chosen with
//! probability `rate / Λ`, then a case drawn from the case distribution.
//! Replication `r` uses ChaCha8 seeded with `seed` on stream `r`, so the
//! estimate does not depend on how replications are scheduled.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};
use thiserror::Error;

use crate::san::{Bindings, CompiledModel, CompiledReward, SanError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error(transparent)]
    San(#[from] SanError),
    #[error("invalid simulation config: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    pub t_end: f64,
    pub confidence_level: f64,
    pub relative_half_width: f64,
    pub min_replications: usize,
    pub max_replications: usize,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            t_end: 1e7,
            confidence_level: 0.95,
            relative_half_width: 0.1,
            min_replications: 10,
            max_replications: 100_000,
            seed: 1,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |m: &str| Err(SimError::Config(m.to_string()));
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad("t_end must be positive");
        }
        if !(self.confidence_level > 0.0 && self.confidence_level < 1.0) {
            return bad("confidence_level must lie in (0, 1)");
        }
        if self.relative_half_width.is_nan() || self.relative_half_width <= 0.0 {
            return bad("relative_half_width must be positive");
        }
        if self.min_replications == 0 || self.max_replications == 0 {
            return bad("replication bounds must be positive");
        }
        if self.min_replications > self.max_replications {
            return bad("min_replications exceeds max_replications");
        }
        Ok(())
    }
}

/// Confidence-interval estimate. The interval fields are `None` when fewer
/// than two replications were run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub half_width: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    /// `ci_low` clamped at 0.
    pub ci_low_clamped: Option<f64>,
    pub replications: usize,
    pub converged: bool,
}

impl Estimate {
    fn new(mean: f64, half_width: Option<f64>, replications: usize, converged: bool) -> Self {
        Estimate {
            mean,
            half_width,
            ci_low: half_width.map(|h| mean - h),
            ci_high: half_width.map(|h| mean + h),
            ci_low_clamped: half_width.map(|h| (mean - h).max(0.0)),
            replications,
            converged,
        }
    }

    /// Whether `x` lies in the closed interval.
    pub fn contains(&self, x: f64) -> bool {
        matches!((self.ci_low, self.ci_high), (Some(lo), Some(hi)) if lo <= x && x <= hi)
    }
}

/// Generator for replication `r` under `seed`.
pub fn replication_rng(seed: u64, r: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(r);
    rng
}

/// Seed for the `index`-th independent experiment under a master `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    replication_rng(seed, u64::MAX - index).gen()
}

/// Fraction of `[0, t_end]` spent in markings satisfying `reward`.
pub fn simulate_replication<R: Rng + ?Sized>(
    model: &CompiledModel,
    b: &Bindings,
    reward: &CompiledReward,
    t_end: f64,
    rng: &mut R,
) -> Result<f64, SanError> {
    let mut m = model.initial_marking(b)?;
    let mut t = 0.0;
    let mut down = 0.0;
    let mut probs = Vec::new();
    loop {
        let rates = model.enabled_rates(&m, b)?;
        let total: f64 = rates.iter().map(|r| r.1).sum();
        let hit = reward.eval(&m, b);
        if total <= 0.0 {
            if hit {
                down += t_end - t;
            }
            break;
        }
        let dwell = rng.sample::<f64, _>(Exp1) / total;
        if t + dwell >= t_end {
            if hit {
                down += t_end - t;
            }
            break;
        }
        if hit {
            down += dwell;
        }
        t += dwell;
        let mut u = rng.gen::<f64>() * total;
        let mut winner = rates[rates.len() - 1].0;
        for &(a, r) in &rates {
            if u < r {
                winner = a;
                break;
            }
            u -= r;
        }
        model.case_probs_into(winner, &m, b, &mut probs)?;
        let case = if probs.len() == 1 {
            0
        } else {
            let mut u = rng.gen::<f64>() * probs.iter().sum::<f64>();
            let mut chosen = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
            for (c, &p) in probs.iter().enumerate() {
                if p > 0.0 && u < p {
                    chosen = c;
                    break;
                }
                u -= p;
            }
            chosen
        };
        m = model.fire(winner, case, &m, b)?;
    }
    Ok(down / t_end)
}

fn t_quantile(level: f64, dof: f64) -> f64 {
    StudentsT::new(0.0, 1.0, dof).expect("positive degrees of freedom").inverse_cdf(0.5 + level / 2.0)
}

/// Runs replications until the Student-t half-width relative to `|mean|` is
/// at most `relative_half_width` (checked from `min_replications` on), or
/// `max_replications` is reached.
///
/// Replications are evaluated in parallel batches and folded in replication
/// order, so the stopping point and the estimate are independent of the
/// thread count.
pub fn run_estimate(
    model: &CompiledModel,
    b: &Bindings,
    reward: &CompiledReward,
    cfg: &SimConfig,
) -> Result<Estimate, SimError> {
    cfg.validate()?;
    let mut n = 0usize;
    let mut mean = 0.0;
    let mut m2 = 0.0;
    let threads = rayon::current_num_threads().max(1);
    while n < cfg.max_replications {
        let batch = (threads * 8).max(n / 8).max(cfg.min_replications.saturating_sub(n)).min(cfg.max_replications - n);
        let values: Vec<f64> = (n..n + batch)
            .into_par_iter()
            .map(|r| simulate_replication(model, b, reward, cfg.t_end, &mut replication_rng(cfg.seed, r as u64)))
            .collect::<Result<_, _>>()?;
        for x in values {
            n += 1;
            let d = x - mean;
            mean += d / n as f64;
            m2 += d * (x - mean);
            if n >= cfg.min_replications && n >= 2 && mean != 0.0 {
                let hw = t_quantile(cfg.confidence_level, (n - 1) as f64) * (m2 / (n - 1) as f64).sqrt() / (n as f64).sqrt();
                if hw <= cfg.relative_half_width * mean.abs() {
                    return Ok(Estimate::new(mean, Some(hw), n, true));
                }
            }
        }
    }
    let hw = (n >= 2).then(|| t_quantile(cfg.confidence_level, (n - 1) as f64) * (m2 / (n - 1) as f64).sqrt() / (n as f64).sqrt());
    Ok(Estimate::new(mean, hw, n, false))
}
