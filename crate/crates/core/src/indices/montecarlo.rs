//! Sampling estimators with an (ε, δ) guarantee.
//!
//! Each sample is a Bernoulli variable in {0, 1} whose mean is the index, so
//! the two-sided Hoeffding bound `P(|β̂ − β| > ε) ≤ 2·exp(−2mε²)` gives
//! `m = ⌈ln(2/δ) / (2ε²)⌉` samples for accuracy ε with confidence 1 − δ.
//!
//! Sample `k` draws its randomness from a ChaCha8 stream keyed by
//! `(seed, k)`, so estimates are reproducible regardless of how samples are
//! spread across threads.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{IndexKind, IndexVector, Method};
use crate::domain::{ConnectivityDomain, Evaluator};
use crate::error::{Error, Result};
use crate::number::Number;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApproxParams {
    epsilon: f64,
    delta: f64,
    seed: u64,
}

impl ApproxParams {
    /// `epsilon` in (0, 1], `delta` in (0, 1).
    pub fn new(epsilon: f64, delta: f64, seed: u64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie in (0, 1], got {epsilon}"
            )));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "delta must lie in (0, 1), got {delta}"
            )));
        }
        Ok(ApproxParams {
            epsilon,
            delta,
            seed,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn samples(&self) -> u64 {
        let m = ((2.0 / self.delta).ln() / (2.0 * self.epsilon * self.epsilon)).ceil();
        (m as u64).max(1)
    }
}

fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Counts samples for which `hit` returns true; the sum is independent of
/// the work split.
fn count_hits<F>(domain: &ConnectivityDomain, params: &ApproxParams, hit: F) -> u64
where
    F: Fn(&mut Evaluator<'_>, &mut Vec<bool>, &mut ChaCha8Rng) -> bool + Sync,
{
    (0..params.samples())
        .into_par_iter()
        .map_init(
            || (domain.evaluator(), vec![false; domain.agent_count()]),
            |(eval, members), k| {
                let mut rng = sample_rng(params.seed, k);
                u64::from(hit(eval, members, &mut rng))
            },
        )
        .sum()
}

/// Fraction of sampled coalitions of the other agents (each included with
/// probability 1/2) in which `agent` is critical once added.
pub fn banzhaf_mc(domain: &ConnectivityDomain, agent: usize, params: &ApproxParams) -> Result<f64> {
    domain.check_agent(agent)?;
    let hits = count_hits(domain, params, |eval, members, rng| {
        for m in members.iter_mut() {
            *m = rng.gen();
        }
        members[agent] = true;
        if !eval.wins(members.as_slice()) {
            return false;
        }
        members[agent] = false;
        !eval.wins(members.as_slice())
    });
    Ok(hits as f64 / params.samples() as f64)
}

/// Average marginal contribution of `agent` over sampled orderings.
pub fn shapley_mc(domain: &ConnectivityDomain, agent: usize, params: &ApproxParams) -> Result<f64> {
    domain.check_agent(agent)?;
    let n = domain.agent_count();
    let hits = count_hits(domain, params, |eval, members, rng| {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        members.fill(false);
        for &a in order.iter().take_while(|&&a| a != agent) {
            members[a] = true;
        }
        if eval.wins(members.as_slice()) {
            return false;
        }
        members[agent] = true;
        eval.wins(members.as_slice())
    });
    Ok(hits as f64 / params.samples() as f64)
}

fn all_agents(
    domain: &ConnectivityDomain,
    params: &ApproxParams,
    kind: IndexKind,
    estimate: fn(&ConnectivityDomain, usize, &ApproxParams) -> Result<f64>,
) -> Result<IndexVector> {
    let values = (0..domain.agent_count())
        .map(|a| estimate(domain, a, params).map(Number::Float))
        .collect::<Result<_>>()?;
    Ok(IndexVector {
        kind,
        method: Method::MonteCarlo,
        values,
        samples: Some(params.samples()),
        seed: Some(params.seed),
    })
}

pub fn banzhaf_mc_all(domain: &ConnectivityDomain, params: &ApproxParams) -> Result<IndexVector> {
    all_agents(domain, params, IndexKind::Banzhaf, banzhaf_mc)
}

pub fn shapley_mc_all(domain: &ConnectivityDomain, params: &ApproxParams) -> Result<IndexVector> {
    all_agents(domain, params, IndexKind::Shapley, shapley_mc)
}
