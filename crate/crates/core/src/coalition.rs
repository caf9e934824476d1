//! Coalitions of agents.
//!
//! Exact solvers enumerate coalitions as bit masks: agent `i` is bit `i`,
//! which is also the position of its vertex in the domain's `standard` list.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Anything that answers "is agent `i` a member?".
pub trait AgentSet {
    fn contains(&self, agent: usize) -> bool;
}

/// A set of at most 64 agents encoded as a bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coalition(u64);

impl Coalition {
    pub const MAX_AGENTS: usize = 64;

    pub const fn empty() -> Self {
        Coalition(0)
    }

    /// The grand coalition of `n` agents.
    pub fn grand(n: usize) -> Self {
        assert!(n <= Self::MAX_AGENTS, "coalitions hold at most 64 agents");
        if n == Self::MAX_AGENTS {
            Coalition(u64::MAX)
        } else {
            Coalition((1u64 << n) - 1)
        }
    }

    pub const fn from_bits(bits: u64) -> Self {
        Coalition(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn from_agents<I: IntoIterator<Item = usize>>(agents: I) -> Self {
        agents.into_iter().fold(Coalition(0), |c, a| c.with(a))
    }

    #[must_use]
    pub fn with(self, agent: usize) -> Self {
        assert!(agent < Self::MAX_AGENTS);
        Coalition(self.0 | (1 << agent))
    }

    #[must_use]
    pub fn without(self, agent: usize) -> Self {
        assert!(agent < Self::MAX_AGENTS);
        Coalition(self.0 & !(1 << agent))
    }

    #[must_use]
    pub fn union(self, other: Self) -> Self {
        Coalition(self.0 | other.0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Members in increasing order.
    pub fn iter(self) -> Members {
        Members(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl AgentSet for Coalition {
    #[inline]
    fn contains(&self, agent: usize) -> bool {
        agent < Self::MAX_AGENTS && self.0 >> agent & 1 == 1
    }
}

/// Every agent; the grand coalition of any size.
#[derive(Clone, Copy, Debug)]
pub struct Everyone;

impl AgentSet for Everyone {
    #[inline]
    fn contains(&self, _agent: usize) -> bool {
        true
    }
}

impl AgentSet for [bool] {
    #[inline]
    fn contains(&self, agent: usize) -> bool {
        self.get(agent).copied().unwrap_or(false)
    }
}

impl AgentSet for Vec<bool> {
    #[inline]
    fn contains(&self, agent: usize) -> bool {
        AgentSet::contains(self.as_slice(), agent)
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for Coalition {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Coalition::from_agents(iter)
    }
}

impl Serialize for Coalition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for Coalition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let agents = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = agents.iter().find(|&&a| a >= Self::MAX_AGENTS) {
            return Err(serde::de::Error::custom(format!(
                "agent index {bad} exceeds 63"
            )));
        }
        Ok(Coalition::from_agents(agents))
    }
}

pub struct Members(u64);

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}
