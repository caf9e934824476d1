//! Stable payoff divisions: the core, ε-core membership and the least core.
//!
//! In a simple game the core is nonempty exactly when some agent is a veto
//! player, and then the core is the set of nonnegative imputations paying
//! the whole unit to veto players. Agent `i` is a veto player iff the
//! coalition of everyone else loses, so the core is described with `n`
//! connectivity checks.
//!
//! Core questions are refused on degenerate domains (see
//! [`Degeneracy`]): with every coalition winning the empty coalition blocks
//! every imputation, and with every coalition losing there is nothing to
//! divide.

mod excess;
mod least_core;
mod simplex;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::classify::{classify, Degeneracy};
use crate::coalition::Everyone;
use crate::domain::ConnectivityDomain;
use crate::error::{Error, Result};
use crate::number::{approx_eq, format_ratio, is_nonneg_within_tol};

pub use excess::{ecm, ecm_with, max_excess, max_excess_with, ExcessConfig, ExcessReport};
pub use least_core::{
    least_core_value, least_core_value_with, LeastCore, LpMethod, EXACT_LP_AGENTS,
};

/// A division of the grand coalition's value among the agents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Imputation {
    payoffs: Vec<BigRational>,
}

impl Imputation {
    /// Wraps payoffs without checking them; solvers check against the domain.
    pub fn new(payoffs: Vec<BigRational>) -> Self {
        Imputation { payoffs }
    }

    /// Converts floats exactly (at their binary value).
    pub fn from_f64(payoffs: &[f64]) -> Result<Self> {
        payoffs
            .iter()
            .map(|&x| {
                BigRational::from_float(x)
                    .ok_or_else(|| Error::InvalidImputation(format!("non-finite payoff {x}")))
            })
            .collect::<Result<_>>()
            .map(Imputation::new)
    }

    /// `(1/n, …, 1/n)`.
    pub fn equal(agents: usize) -> Self {
        let share = BigRational::new(1.into(), agents.max(1).into());
        Imputation::new(vec![share; agents])
    }

    pub fn payoffs(&self) -> &[BigRational] {
        &self.payoffs
    }

    pub fn len(&self) -> usize {
        self.payoffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.payoffs.is_empty()
    }

    pub fn total(&self) -> BigRational {
        self.payoffs.iter().sum()
    }

    /// Total paid to the members of `coalition`.
    pub fn payment(&self, agents: impl IntoIterator<Item = usize>) -> BigRational {
        agents
            .into_iter()
            .fold(BigRational::zero(), |acc, i| acc + &self.payoffs[i])
    }

    pub fn is_nonnegative(&self) -> bool {
        self.payoffs.iter().all(is_nonneg_within_tol)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.payoffs.iter().map(format_ratio).collect()
    }

    /// Length matches the agent count and the payoffs sum to v(I) within
    /// the tolerance.
    pub fn check(&self, domain: &ConnectivityDomain) -> Result<()> {
        let n = domain.agent_count();
        if self.len() != n {
            return Err(Error::InvalidImputation(format!(
                "{} payoffs given for {n} agents",
                self.len()
            )));
        }
        let grand = BigRational::from_integer(domain.coalition_value(&Everyone).into());
        let total = self.total();
        if !approx_eq(&total, &grand) {
            return Err(Error::InvalidImputation(format!(
                "payoffs sum to {} but the grand coalition is worth {}",
                format_ratio(&total),
                format_ratio(&grand)
            )));
        }
        Ok(())
    }

    pub(crate) fn check_nonnegative(&self) -> Result<()> {
        match self.payoffs.iter().position(|p| !is_nonneg_within_tol(p)) {
            Some(i) => Err(Error::InvalidImputation(format!(
                "payoff of agent {i} is negative ({})",
                format_ratio(&self.payoffs[i])
            ))),
            None => Ok(()),
        }
    }
}

/// Veto players and whether the core is empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoreDescription {
    pub veto_agents: Vec<usize>,
    pub is_empty: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degeneracy: Option<Degeneracy>,
}

pub fn veto_players(domain: &ConnectivityDomain) -> CoreDescription {
    let degeneracy = classify(domain).degeneracy();
    if degeneracy == Some(Degeneracy::AllWin) {
        // v(∅) = 1 blocks every imputation.
        return CoreDescription {
            veto_agents: vec![],
            is_empty: true,
            degeneracy,
        };
    }
    let n = domain.agent_count();
    let mut eval = domain.evaluator();
    let mut members = vec![true; n];
    let veto_agents: Vec<usize> = (0..n)
        .filter(|&i| {
            members[i] = false;
            let loses = !eval.wins(members.as_slice());
            members[i] = true;
            loses
        })
        .collect();
    CoreDescription {
        is_empty: veto_agents.is_empty(),
        veto_agents,
        degeneracy,
    }
}

/// Core membership: all of v(I) goes to veto players and no payoff is
/// negative (singletons already demand p_i ≥ v({i}) ≥ 0).
pub fn is_in_core(domain: &ConnectivityDomain, imputation: &Imputation) -> Result<bool> {
    refuse_degenerate(domain)?;
    imputation.check(domain)?;
    let core = veto_players(domain);
    let veto_total = imputation.payment(core.veto_agents.iter().copied());
    Ok(approx_eq(&veto_total, &BigRational::from_integer(1.into())) && imputation.is_nonnegative())
}

pub(crate) fn refuse_degenerate(domain: &ConnectivityDomain) -> Result<()> {
    match classify(domain).degeneracy() {
        Some(d) => Err(Error::Degenerate(d)),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::fixtures::*;
    use crate::number::ratio;
    use crate::oracle;
    use crate::reductions::{self, VertexCoverInstance};
    use rand::SeedableRng;

    fn imp(values: &[(i64, i64)]) -> Imputation {
        Imputation::new(values.iter().map(|&(n, d)| ratio(n, d)).collect())
    }

    #[test]
    fn veto_examples() {
        let core = veto_players(&path4());
        assert_eq!(core.veto_agents, vec![0, 1]);
        assert!(!core.is_empty);
        let core = veto_players(&cycle4());
        assert!(core.veto_agents.is_empty());
        assert!(core.is_empty);
        let k3 = VertexCoverInstance::new(3, vec![[0, 1], [1, 2], [0, 2]], 2).unwrap();
        let (domain, _, _) = reductions::vertexcover_to_ecm(&k3).unwrap();
        assert!(veto_players(&domain).veto_agents.is_empty());
    }

    #[test]
    fn degenerate_veto_reports() {
        let all_win = ConnectivityDomain::builder(2)
            .primary([0])
            .standard([1])
            .build()
            .unwrap();
        let core = veto_players(&all_win);
        assert_eq!(core.degeneracy, Some(Degeneracy::AllWin));
        assert!(core.veto_agents.is_empty() && core.is_empty);
        assert!(matches!(
            is_in_core(&all_win, &imp(&[(1, 1)])),
            Err(Error::Degenerate(Degeneracy::AllWin))
        ));
        let all_lose = ConnectivityDomain::builder(3)
            .primary([0, 1])
            .standard([2])
            .build()
            .unwrap();
        assert_eq!(
            veto_players(&all_lose).degeneracy,
            Some(Degeneracy::AllLose)
        );
    }

    #[test]
    fn core_membership_examples() {
        assert!(is_in_core(&path4(), &imp(&[(1, 2), (1, 2)])).unwrap());
        assert!(is_in_core(&path4(), &imp(&[(1, 1), (0, 1)])).unwrap());
        let d = reductions::add_dummy(&path4());
        assert!(!is_in_core(&d, &imp(&[(1, 2), (0, 1), (1, 2)])).unwrap());
        // negative payoffs are never in the core
        assert!(!is_in_core(&path4(), &imp(&[(3, 2), (-1, 2)])).unwrap());
    }

    #[test]
    fn non_imputations_rejected() {
        assert!(matches!(
            is_in_core(&path4(), &imp(&[(1, 2), (1, 4)])),
            Err(Error::InvalidImputation(_))
        ));
        assert!(is_in_core(&path4(), &imp(&[(1, 1)])).is_err());
        // float input within tolerance is accepted
        assert!(is_in_core(&path4(), &Imputation::from_f64(&[0.1 + 0.2, 0.7]).unwrap()).unwrap());
    }

    #[test]
    fn veto_matches_definition_and_core_duality() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for seed in 0..80 {
            let d = oracle::random_domain(seed, 12, 9);
            let core = veto_players(&d);
            if core.degeneracy.is_some() {
                continue;
            }
            assert_eq!(
                core.veto_agents,
                oracle::veto_by_definition(&d),
                "seed {seed}"
            );
            for _ in 0..20 {
                let p = oracle::random_imputation(&mut rng, d.agent_count(), &core.veto_agents);
                let p = Imputation::new(p);
                assert_eq!(
                    is_in_core(&d, &p).unwrap(),
                    oracle::in_core_by_definition(&d, p.payoffs()),
                    "seed {seed} payoffs {:?}",
                    p.to_strings()
                );
            }
        }
    }
}
