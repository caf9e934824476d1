//! Maximal excess and ε-core membership (ECM).
//!
//! For a nonnegative imputation every losing coalition has excess
//! `−p(C) ≤ 0 = e(∅)`, so the maximal excess is either 0 or `1 − p(C*)`
//! for a cheapest winning coalition `C*`. That coalition is found by a
//! depth-first branch and bound over agents sorted by payoff; arbitrary real
//! payoffs fall back to a scan of all 2ⁿ coalitions.
//!
//! Witness ties are broken by smaller coalition size, then smaller encoding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{refuse_degenerate, Imputation};
use crate::coalition::Coalition;
use crate::domain::{ConnectivityDomain, Evaluator};
use crate::enumerate::{Limits, ValueTable};
use crate::error::Result;
use crate::number::tolerance;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExcessReport {
    #[serde(serialize_with = "ser_ratio")]
    pub max_excess: BigRational,
    pub witness: Coalition,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_verdict: Option<bool>,
}

fn ser_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::number::format_ratio(r))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExcessConfig {
    pub limits: Limits,
    /// Reject negative payoffs (the default). When false, any real payoffs
    /// are accepted and every coalition is scanned.
    pub nonnegative: bool,
}

impl Default for ExcessConfig {
    fn default() -> Self {
        ExcessConfig {
            limits: Limits::default(),
            nonnegative: true,
        }
    }
}

pub fn max_excess(domain: &ConnectivityDomain, imputation: &Imputation) -> Result<ExcessReport> {
    max_excess_with(domain, imputation, &ExcessConfig::default())
}

pub fn max_excess_with(
    domain: &ConnectivityDomain,
    imputation: &Imputation,
    config: &ExcessConfig,
) -> Result<ExcessReport> {
    config.limits.check_exact(domain.agent_count())?;
    imputation.check(domain)?;
    let (weights, scale) = integer_weights(imputation.payoffs());
    let (excess_scaled, witness) = if config.nonnegative {
        imputation.check_nonnegative()?;
        if weights.iter().all(|w| !w.is_negative()) {
            cheapest_winning(domain, &weights, &scale)
        } else {
            // tiny negatives within tolerance
            full_scan(domain, &weights, &scale)
        }
    } else {
        full_scan(domain, &weights, &scale)
    };
    Ok(ExcessReport {
        max_excess: BigRational::new(excess_scaled, scale),
        witness,
        epsilon_verdict: None,
    })
}

/// Whether the imputation lies in the ε-core: max excess ≤ ε (+ tolerance).
pub fn ecm(
    domain: &ConnectivityDomain,
    imputation: &Imputation,
    epsilon: &BigRational,
) -> Result<bool> {
    ecm_with(domain, imputation, epsilon, &ExcessConfig::default())
        .map(|r| r.epsilon_verdict == Some(true))
}

/// [`ecm`] returning the full excess report.
pub fn ecm_with(
    domain: &ConnectivityDomain,
    imputation: &Imputation,
    epsilon: &BigRational,
    config: &ExcessConfig,
) -> Result<ExcessReport> {
    refuse_degenerate(domain)?;
    let mut report = max_excess_with(domain, imputation, config)?;
    report.epsilon_verdict = Some(report.max_excess <= epsilon + tolerance());
    Ok(report)
}

/// Payoffs scaled to integers by the lcm of their denominators.
fn integer_weights(payoffs: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let scale = payoffs
        .iter()
        .fold(BigInt::one(), |acc, p| acc.lcm(p.denom()));
    let weights = payoffs
        .iter()
        .map(|p| p.numer() * (&scale / p.denom()))
        .collect();
    (weights, scale)
}

/// Key ordering candidate witnesses: larger excess first, then smaller
/// size, then smaller encoding.
fn better(a: &(BigInt, Coalition), b: &(BigInt, Coalition)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && (a.1.len(), a.1) < (b.1.len(), b.1))
}

fn full_scan(
    domain: &ConnectivityDomain,
    weights: &[BigInt],
    scale: &BigInt,
) -> (BigInt, Coalition) {
    let table = ValueTable::build(domain);
    let candidate = |bits: u64| {
        let c = Coalition::from_bits(bits);
        let pay = c.iter().fold(BigInt::zero(), |acc, i| acc + &weights[i]);
        let value = if table.wins(c) {
            scale.clone()
        } else {
            BigInt::zero()
        };
        (value - pay, c)
    };
    (0..table.len())
        .into_par_iter()
        .map(candidate)
        .reduce_with(|a, b| if better(&b, &a) { b } else { a })
        .expect("at least the empty coalition")
}

fn cheapest_winning(
    domain: &ConnectivityDomain,
    weights: &[BigInt],
    scale: &BigInt,
) -> (BigInt, Coalition) {
    let n = domain.agent_count();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| weights[a].cmp(&weights[b]).then(a.cmp(&b)));
    // suffix[k]: agents order[k..]
    let mut suffix = vec![0u64; n + 1];
    for k in (0..n).rev() {
        suffix[k] = suffix[k + 1] | 1 << order[k];
    }
    let mut search = Search {
        eval: domain.evaluator(),
        weights,
        order,
        suffix,
        best: None,
    };
    search.visit(0, BigInt::zero(), 0);

    let empty = (BigInt::zero(), Coalition::empty());
    match search.best {
        Some((pay, size, bits)) => {
            let winner = (scale - pay, Coalition::from_bits(bits));
            debug_assert_eq!(size, winner.1.len());
            if better(&winner, &empty) {
                winner
            } else {
                empty
            }
        }
        None => empty,
    }
}

struct Search<'a, 'd> {
    eval: Evaluator<'d>,
    weights: &'a [BigInt],
    order: Vec<usize>,
    suffix: Vec<u64>,
    // (payment, size, encoding) of the cheapest winning coalition so far
    best: Option<(BigInt, usize, u64)>,
}

impl Search<'_, '_> {
    fn visit(&mut self, set: u64, pay: BigInt, next: usize) {
        let size = set.count_ones() as usize;
        if let Some((best_pay, best_size, _)) = &self.best {
            if (&pay, size) > (best_pay, *best_size) {
                return;
            }
        }
        if self.eval.wins(&Coalition::from_bits(set)) {
            let improves = match &self.best {
                None => true,
                Some((bp, bs, bb)) => (&pay, size, set) < (bp, *bs, *bb),
            };
            if improves {
                self.best = Some((pay, size, set));
            }
            return;
        }
        if !self
            .eval
            .wins(&Coalition::from_bits(set | self.suffix[next]))
        {
            return;
        }
        for k in next..self.order.len() {
            let agent = self.order[k];
            let extended = &pay + &self.weights[agent];
            if let Some((best_pay, _, _)) = &self.best {
                // agents are sorted by payoff, later ones cost at least as much
                if extended > *best_pay {
                    break;
                }
            }
            self.visit(set | 1 << agent, extended, k + 1);
        }
    }
}
