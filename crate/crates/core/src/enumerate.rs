//! Exhaustive coalition enumeration.
//!
//! The exact solvers first evaluate every one of the 2ⁿ coalitions once and
//! store the results in a bit table ([`ValueTable`]); criticality of agent
//! `i` in `C` is then a table lookup of `C \ {i}`. Evaluation is split across
//! rayon workers by ranges of coalition encodings, and every reduction is a
//! sum, so results do not depend on the number of threads.

use rayon::prelude::*;

use crate::coalition::Coalition;
use crate::domain::ConnectivityDomain;
use crate::error::{Error, Result};

/// Absolute ceiling for exhaustive enumeration regardless of configuration;
/// the value table for 32 agents already takes 512 MiB.
pub const HARD_EXACT_LIMIT: usize = 32;

/// Size caps for the exponential solvers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest agent count for exhaustive enumeration (indices, max excess).
    pub exact_agents: usize,
    /// Largest agent count for the least-core linear program.
    pub lp_agents: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            exact_agents: 24,
            lp_agents: 16,
        }
    }
}

impl Limits {
    pub fn check_exact(&self, agents: usize) -> Result<()> {
        let cap = self.exact_agents.min(HARD_EXACT_LIMIT);
        if agents > cap {
            return Err(Error::TooLarge { agents, cap });
        }
        Ok(())
    }

    pub fn check_lp(&self, agents: usize) -> Result<()> {
        let cap = self.lp_agents.min(HARD_EXACT_LIMIT);
        if agents > cap {
            return Err(Error::TooLarge { agents, cap });
        }
        Ok(())
    }
}

/// Win/lose bit for every coalition of a domain.
pub struct ValueTable {
    agents: usize,
    words: Vec<u64>,
}

impl ValueTable {
    /// Evaluates all coalitions. Callers enforce [`Limits`] first.
    pub fn build(domain: &ConnectivityDomain) -> Self {
        let agents = domain.agent_count();
        assert!(
            agents <= HARD_EXACT_LIMIT,
            "value table limited to {HARD_EXACT_LIMIT} agents"
        );
        let total = 1u64 << agents;
        let per_word = total.min(64);
        let word_count = (total / per_word) as usize;
        let words = (0..word_count)
            .into_par_iter()
            .map_init(
                || domain.evaluator(),
                |eval, w| {
                    let base = w as u64 * 64;
                    (0..per_word).fold(0u64, |word, b| {
                        if eval.wins(&Coalition::from_bits(base + b)) {
                            word | 1 << b
                        } else {
                            word
                        }
                    })
                },
            )
            .collect();
        ValueTable { agents, words }
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    #[inline]
    pub fn wins(&self, coalition: Coalition) -> bool {
        let bits = coalition.bits();
        self.words[(bits >> 6) as usize] >> (bits & 63) & 1 == 1
    }

    pub fn len(&self) -> u64 {
        1u64 << self.agents
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of winning coalitions containing `agent` in which it is
    /// critical, split by coalition size: `counts[agent][size]`.
    pub fn critical_counts(&self) -> Vec<Vec<u64>> {
        let n = self.agents;
        let blank = || vec![vec![0u64; n + 1]; n];
        self.par_ranges()
            .fold(blank, |mut acc, range| {
                for bits in range {
                    let c = Coalition::from_bits(bits);
                    if !self.wins(c) {
                        continue;
                    }
                    let size = c.len();
                    for i in c.iter() {
                        if !self.wins(c.without(i)) {
                            acc[i][size] += 1;
                        }
                    }
                }
                acc
            })
            .reduce(blank, |mut a, b| {
                for (row_a, row_b) in a.iter_mut().zip(b) {
                    for (x, y) in row_a.iter_mut().zip(row_b) {
                        *x += y;
                    }
                }
                a
            })
    }

    /// Winning coalitions in which every member is critical, in increasing
    /// encoding order.
    pub fn minimal_winning(&self) -> Vec<Coalition> {
        let mut found: Vec<Coalition> = self
            .par_ranges()
            .flat_map_iter(|range| {
                range
                    .map(Coalition::from_bits)
                    .filter(|&c| self.wins(c) && c.iter().all(|i| !self.wins(c.without(i))))
                    .collect::<Vec<_>>()
            })
            .collect();
        found.sort_unstable();
        found
    }

    fn par_ranges(&self) -> impl ParallelIterator<Item = std::ops::Range<u64>> + '_ {
        const CHUNK: u64 = 1 << 12;
        let total = self.len();
        let chunks = total.div_ceil(CHUNK);
        (0..chunks)
            .into_par_iter()
            .map(move |k| k * CHUNK..((k + 1) * CHUNK).min(total))
    }
}
