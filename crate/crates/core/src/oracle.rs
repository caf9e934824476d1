//! Brute-force reference implementations for tests.
//!
//! Nothing here shares code with the solvers: connectivity is checked pair
//! by pair with a fresh search per primary, indices follow their textbook
//! definitions, and stability checks scan every coalition.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coalition::{AgentSet, Coalition};
use crate::domain::{ConnectivityDomain, DomainFile, VertexKind};

/// Coalition value by checking that every primary reaches every other one.
pub fn wins_all_pairs(domain: &ConnectivityDomain, coalition: Coalition) -> bool {
    let usable = |v: usize| match domain.kind(v) {
        VertexKind::Standard => coalition.contains(domain.vertex_agent(v).unwrap()),
        _ => true,
    };
    let primaries = domain.primaries();
    primaries.iter().all(|&source| {
        let mut seen = vec![false; domain.vertex_count()];
        let mut queue = VecDeque::from([source]);
        seen[source] = true;
        while let Some(u) = queue.pop_front() {
            for &w in domain.neighbors(u) {
                if !seen[w] && usable(w) {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        primaries.iter().all(|&t| seen[t])
    })
}

/// Values of all coalitions, indexed by encoding.
pub fn value_list(domain: &ConnectivityDomain) -> Vec<bool> {
    let n = domain.agent_count();
    assert!(n <= 20, "oracle enumeration is for small games");
    (0..1u64 << n)
        .map(|bits| wins_all_pairs(domain, Coalition::from_bits(bits)))
        .collect()
}

/// Banzhaf index straight from its definition.
pub fn banzhaf(domain: &ConnectivityDomain) -> Vec<BigRational> {
    let values = value_list(domain);
    let n = domain.agent_count();
    (0..n)
        .map(|i| {
            let swings = (0..1u64 << n)
                .filter(|bits| bits >> i & 1 == 0)
                .filter(|&bits| values[(bits | 1 << i) as usize] && !values[bits as usize])
                .count();
            BigRational::new(BigInt::from(swings), BigInt::one() << (n - 1))
        })
        .collect()
}

/// Shapley value as the average marginal contribution over all n!
/// orderings (Heap's algorithm).
pub fn shapley_permutations(domain: &ConnectivityDomain) -> Vec<BigRational> {
    let n = domain.agent_count();
    assert!(n <= 10, "n! enumeration is for small games");
    let values = value_list(domain);
    let mut totals = vec![0u64; n];
    let mut count = 0u64;
    let mut order: Vec<usize> = (0..n).collect();
    let mut visit = |order: &[usize]| {
        count += 1;
        let mut before = 0u64;
        for &agent in order {
            let after = before | 1 << agent;
            if values[after as usize] && !values[before as usize] {
                totals[agent] += 1;
            }
            before = after;
        }
    };
    // Heap's algorithm, iterative form.
    let mut c = vec![0usize; n];
    visit(&order);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                order.swap(0, i);
            } else {
                order.swap(c[i], i);
            }
            visit(&order);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    totals
        .into_iter()
        .map(|t| BigRational::new(BigInt::from(t), BigInt::from(count)))
        .collect()
}

/// Agents present in every winning coalition.
pub fn veto_by_definition(domain: &ConnectivityDomain) -> Vec<usize> {
    let values = value_list(domain);
    let n = domain.agent_count();
    (0..n)
        .filter(|&i| {
            values
                .iter()
                .enumerate()
                .all(|(bits, &wins)| !wins || bits >> i & 1 == 1)
        })
        .collect()
}

fn payment(payoffs: &[BigRational], bits: u64) -> BigRational {
    Coalition::from_bits(bits)
        .iter()
        .fold(BigRational::zero(), |acc, i| acc + &payoffs[i])
}

/// p(C) ≥ v(C) for every coalition C.
pub fn in_core_by_definition(domain: &ConnectivityDomain, payoffs: &[BigRational]) -> bool {
    let one = BigRational::one();
    value_list(domain)
        .iter()
        .enumerate()
        .all(|(bits, &wins)| !wins || payment(payoffs, bits as u64) >= one)
        && payoffs.iter().all(|p| *p >= BigRational::zero())
}

/// Maximum of v(C) − p(C) over all coalitions, with the witness of smallest
/// size and then smallest encoding.
pub fn max_excess_scan(
    domain: &ConnectivityDomain,
    payoffs: &[BigRational],
) -> (BigRational, Coalition) {
    let values = value_list(domain);
    let mut best: Option<(BigRational, Coalition)> = None;
    for (bits, &wins) in values.iter().enumerate() {
        let v = if wins {
            BigRational::one()
        } else {
            BigRational::zero()
        };
        let excess = v - payment(payoffs, bits as u64);
        let c = Coalition::from_bits(bits as u64);
        let better = match &best {
            None => true,
            Some((e, w)) => excess > *e || (excess == *e && (c.len(), c) < (w.len(), *w)),
        };
        if better {
            best = Some((excess, c));
        }
    }
    best.unwrap()
}

/// Standard vertices whose removal (from the full graph) disconnects two
/// primaries.
pub fn essential_by_removal(domain: &ConnectivityDomain) -> Vec<usize> {
    let n = domain.agent_count();
    (0..n)
        .filter(|&i| {
            let everyone_else = Coalition::grand(n).without(i);
            !wins_all_pairs(domain, everyone_else)
        })
        .collect()
}

/// Random domain on `vertices` vertices with at most `max_agents` agents:
/// two or three primaries (occasionally one), a few backbones, sparse
/// random edges.
pub fn random_domain(seed: u64, vertices: usize, max_agents: usize) -> ConnectivityDomain {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vertices = vertices.max(3);
    let mut ids: Vec<usize> = (0..vertices).collect();
    ids.shuffle(&mut rng);
    let primaries = match rng.gen_range(0..10) {
        0 => 1,
        1..=6 => 2,
        _ => 3,
    };
    let mut file = DomainFile {
        vertices,
        ..DomainFile::default()
    };
    for (k, &v) in ids.iter().enumerate() {
        if k < primaries {
            file.primary.push(v);
        } else if file.standard.len() < max_agents && rng.gen_bool(0.8) {
            file.standard.push(v);
        } else {
            file.backbone.push(v);
        }
    }
    let p = 2.6 / vertices as f64;
    for u in 0..vertices {
        for v in u + 1..vertices {
            if rng.gen_bool(p.min(1.0)) {
                file.edges.push([u, v]);
            }
        }
    }
    ConnectivityDomain::from_file(file).unwrap()
}

/// Random forest on `vertices` vertices: a random tree with probability
/// 3/4, otherwise a tree plus a few isolated vertices. At least two
/// primaries and at most `max_agents` agents.
pub fn random_tree_domain(seed: u64, vertices: usize, max_agents: usize) -> ConnectivityDomain {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vertices = vertices.max(3);
    let isolated = if rng.gen_bool(0.25) {
        rng.gen_range(1..=2).min(vertices - 3)
    } else {
        0
    };
    let tree_size = vertices - isolated;
    let mut file = DomainFile {
        vertices,
        ..DomainFile::default()
    };
    for v in 1..tree_size {
        let parent = rng.gen_range(0..v);
        file.edges.push([parent, v]);
    }
    let mut ids: Vec<usize> = (0..tree_size).collect();
    ids.shuffle(&mut rng);
    let primaries = rng.gen_range(2..=4.min(tree_size));
    for (k, &v) in ids.iter().enumerate() {
        if k < primaries {
            file.primary.push(v);
        } else if file.standard.len() < max_agents && rng.gen_bool(0.85) {
            file.standard.push(v);
        } else {
            file.backbone.push(v);
        }
    }
    for v in tree_size..vertices {
        if file.standard.len() < max_agents {
            file.standard.push(v);
        } else {
            file.backbone.push(v);
        }
    }
    file.standard.shuffle(&mut rng);
    ConnectivityDomain::from_file(file).unwrap()
}

/// Random nonnegative imputation summing to one. With probability 1/3 the
/// whole payoff goes to agents in `favored`.
pub fn random_imputation(rng: &mut impl Rng, agents: usize, favored: &[usize]) -> Vec<BigRational> {
    let support: Vec<usize> = if !favored.is_empty() && rng.gen_bool(1.0 / 3.0) {
        favored.to_vec()
    } else {
        (0..agents).filter(|_| rng.gen_bool(0.7)).collect()
    };
    let support = if support.is_empty() {
        vec![rng.gen_range(0..agents)]
    } else {
        support
    };
    let weights: Vec<u32> = support.iter().map(|_| rng.gen_range(0..=6)).collect();
    let total: u32 = weights.iter().sum();
    let mut payoffs = vec![BigRational::zero(); agents];
    if total == 0 {
        payoffs[support[0]] = BigRational::one();
        return payoffs;
    }
    for (&agent, &w) in support.iter().zip(&weights) {
        payoffs[agent] = BigRational::new(BigInt::from(w), BigInt::from(total));
    }
    payoffs
}
