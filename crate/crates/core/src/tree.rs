//! Polynomial solvers for tree domains.
//!
//! In a tree there is one simple path between any two primaries, so every
//! standard vertex on such a path is needed by every winning coalition, and
//! those vertices together already win. These *essential* vertices are the
//! standard vertices of the smallest subtree spanning the primaries, found
//! by repeatedly deleting non-primary leaves. With `m` essential agents:
//!
//! * Shapley value: `1/m` for essential agents, 0 otherwise;
//! * Banzhaf index: `2^(1−m)` for essential agents, 0 otherwise;
//! * the core is nonempty: the essential agents are the veto players;
//! * an imputation lies in the ε-core iff the essential agents receive at
//!   least `1 − ε` in total.
//!
//! "Tree" means acyclic here: extra components without primaries are
//! allowed, while non-degeneracy keeps all primaries in one component. All
//! functions run on the domain after primary merging.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::classify::classify;
use crate::domain::{ConnectivityDomain, VertexKind};
use crate::error::{Error, Result};
use crate::indices::{IndexKind, IndexVector, Method};
use crate::number::tolerance;
use crate::stability::{CoreDescription, Imputation};

/// Agents owning essential vertices, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct EssentialSet {
    pub members: Vec<usize>,
}

impl EssentialSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, agent: usize) -> bool {
        self.members.binary_search(&agent).is_ok()
    }
}

/// Checks the preconditions and returns the merged domain.
fn tree_domain(domain: &ConnectivityDomain) -> Result<ConnectivityDomain> {
    let class = classify(domain);
    if !class.is_tree {
        return Err(Error::NotATree);
    }
    if let Some(d) = class.degeneracy() {
        return Err(Error::Degenerate(d));
    }
    Ok(class.merged.unwrap_or_else(|| domain.clone()))
}

pub fn essential_vertices(domain: &ConnectivityDomain) -> Result<EssentialSet> {
    let tree = tree_domain(domain)?;
    let n = tree.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|v| tree.degree(v)).collect();
    let mut removed = vec![false; n];
    let prunable = |v: usize| tree.kind(v) != VertexKind::Primary;
    let mut leaves: VecDeque<usize> = (0..n).filter(|&v| prunable(v) && degree[v] <= 1).collect();
    while let Some(v) = leaves.pop_front() {
        if removed[v] {
            continue;
        }
        removed[v] = true;
        for &w in tree.neighbors(v) {
            if removed[w] {
                continue;
            }
            degree[w] -= 1;
            if prunable(w) && degree[w] <= 1 {
                leaves.push_back(w);
            }
        }
    }
    let members = (0..tree.agent_count())
        .filter(|&a| !removed[tree.agent_vertex(a)])
        .collect();
    Ok(EssentialSet { members })
}

fn closed_form(domain: &ConnectivityDomain, kind: IndexKind) -> Result<IndexVector> {
    let essential = essential_vertices(domain)?;
    let m = essential.len();
    let share = match kind {
        IndexKind::Shapley => BigRational::new(BigInt::one(), BigInt::from(m)),
        IndexKind::Banzhaf => BigRational::new(BigInt::one(), BigInt::one() << (m - 1)),
    };
    let values = (0..domain.agent_count())
        .map(|a| {
            if essential.contains(a) {
                share.clone()
            } else {
                BigRational::zero()
            }
        })
        .collect();
    Ok(IndexVector::exact(kind, Method::TreeClosedForm, values))
}

pub fn tree_shapley(domain: &ConnectivityDomain) -> Result<IndexVector> {
    closed_form(domain, IndexKind::Shapley)
}

pub fn tree_banzhaf(domain: &ConnectivityDomain) -> Result<IndexVector> {
    closed_form(domain, IndexKind::Banzhaf)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TreeCore {
    pub core: CoreDescription,
    /// Equal split among essential agents.
    pub canonical: Imputation,
}

pub fn tree_core(domain: &ConnectivityDomain) -> Result<TreeCore> {
    let essential = essential_vertices(domain)?;
    let share = BigRational::new(BigInt::one(), BigInt::from(essential.len()));
    let canonical = Imputation::new(
        (0..domain.agent_count())
            .map(|a| {
                if essential.contains(a) {
                    share.clone()
                } else {
                    BigRational::zero()
                }
            })
            .collect(),
    );
    Ok(TreeCore {
        core: CoreDescription {
            veto_agents: essential.members,
            is_empty: false,
            degeneracy: None,
        },
        canonical,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeEcmReport {
    /// Total paid to essential agents.
    pub essential_payment: BigRational,
    /// `1 − ε`.
    pub threshold: BigRational,
    pub in_epsilon_core: bool,
}

/// ε-core membership on trees: `p(essential) ≥ 1 − ε`, with the same
/// tolerance as the general test. The boundary is inclusive.
pub fn tree_ecm(
    domain: &ConnectivityDomain,
    imputation: &Imputation,
    epsilon: &BigRational,
) -> Result<bool> {
    tree_ecm_report(domain, imputation, epsilon).map(|r| r.in_epsilon_core)
}

pub fn tree_ecm_report(
    domain: &ConnectivityDomain,
    imputation: &Imputation,
    epsilon: &BigRational,
) -> Result<TreeEcmReport> {
    let essential = essential_vertices(domain)?;
    imputation.check(domain)?;
    imputation.check_nonnegative()?;
    let essential_payment = imputation.payment(essential.members.iter().copied());
    let threshold = BigRational::one() - epsilon;
    let in_epsilon_core = essential_payment >= &threshold - tolerance();
    Ok(TreeEcmReport {
        essential_payment,
        threshold,
        in_epsilon_core,
    })
}
