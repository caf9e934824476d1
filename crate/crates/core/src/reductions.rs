//! Set-cover and vertex-cover instances as connectivity games.
//!
//! [`setcover_to_cg`] builds a game in which a coalition containing the
//! target agent `v_a` is one where `v_a` is critical exactly when its set
//! agents form a cover, so `#covers = β_a · 2^(m−1)` with `m` agents.
//! [`vertexcover_to_ecm`] builds a game whose winning coalitions are exactly
//! the vertex covers; under the equal imputation a winning coalition of size
//! `s` has excess `1 − s/n`, so the maximal excess is `1 − τ/n` for the
//! minimum cover size τ.
//!
//! The brute-force counters [`count_set_covers`] and [`min_vertex_cover`]
//! serve as independent checks of the game solvers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::domain::{ConnectivityDomain, DomainFile};
use crate::error::{Error, Result};
use crate::number::tolerance;
use crate::stability::{max_excess, Imputation};

/// Largest instance the brute-force oracles accept.
pub const ORACLE_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSetCover")]
pub struct SetCoverInstance {
    universe: usize,
    sets: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct RawSetCover {
    universe: usize,
    sets: Vec<Vec<usize>>,
}

impl TryFrom<RawSetCover> for SetCoverInstance {
    type Error = Error;

    fn try_from(raw: RawSetCover) -> Result<Self> {
        SetCoverInstance::new(raw.universe, raw.sets)
    }
}

impl SetCoverInstance {
    /// Items are `0..universe`; every listed item must be in range.
    pub fn new(universe: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        for (i, set) in sets.iter().enumerate() {
            if let Some(&item) = set.iter().find(|&&t| t >= universe) {
                return Err(Error::InvalidInstance(format!(
                    "set {i} contains item {item} outside a universe of {universe}"
                )));
            }
        }
        Ok(SetCoverInstance { universe, sets })
    }

    /// Items t1..t5 with S1 = {t1,t3}, S2 = {t1,t2,t3}, S3 = {t3,t5},
    /// S4 = {t3,t4,t5} (zero-based here).
    pub fn four_set_example() -> Self {
        SetCoverInstance {
            universe: 5,
            sets: vec![vec![0, 2], vec![0, 1, 2], vec![2, 4], vec![2, 3, 4]],
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// Items contained in no set; with any of these no cover exists.
    pub fn uncovered_items(&self) -> Vec<usize> {
        let mut covered = vec![false; self.universe];
        for &t in self.sets.iter().flatten() {
            covered[t] = true;
        }
        (0..self.universe).filter(|&t| !covered[t]).collect()
    }

    fn masks(&self) -> Vec<u64> {
        self.sets
            .iter()
            .map(|s| s.iter().fold(0u64, |m, &t| m | 1 << t))
            .collect()
    }
}

/// Builds the counting game. Vertex order: one vertex per set, then `v_a`,
/// then one per item, then `v_b`. Set vertices and `v_a` form a clique,
/// `v_a`–`v_b` is the only edge at `v_b`, and each set vertex is joined to
/// its items. Items and `v_b` are primary, there is no backbone, and the
/// agents are the sets (in order) followed by `v_a`.
///
/// Returns the domain and the agent index of `v_a`.
pub fn setcover_to_cg(instance: &SetCoverInstance) -> (ConnectivityDomain, usize) {
    let n = instance.sets.len();
    let k = instance.universe;
    let target_vertex = n;
    let item = |t: usize| n + 1 + t;
    let sink = n + 1 + k;
    let mut file = DomainFile {
        vertices: n + k + 2,
        ..DomainFile::default()
    };
    for u in 0..=n {
        for v in u + 1..=n {
            file.edges.push([u, v]);
        }
    }
    file.edges.push([target_vertex, sink]);
    for (i, set) in instance.sets.iter().enumerate() {
        let mut items = set.clone();
        items.sort_unstable();
        items.dedup();
        file.edges.extend(items.into_iter().map(|t| [i, item(t)]));
    }
    file.primary = (0..k).map(item).chain([sink]).collect();
    file.standard = (0..=n).collect();
    file.meta = Some(serde_json::json!({
        "reduction": "setcover",
        "target_agent": n,
    }));
    let domain = ConnectivityDomain::from_file(file).expect("generated domain is valid");
    (domain, n)
}

/// Number of subcollections covering the universe, by enumeration.
pub fn count_set_covers(instance: &SetCoverInstance) -> Result<u64> {
    let n = instance.sets.len();
    if n > ORACLE_LIMIT {
        return Err(Error::TooLarge {
            agents: n,
            cap: ORACLE_LIMIT,
        });
    }
    if instance.universe > 64 {
        return Err(Error::InvalidInstance(
            "universe larger than 64 items".into(),
        ));
    }
    let masks = instance.masks();
    let full = if instance.universe == 64 {
        u64::MAX
    } else {
        (1u64 << instance.universe) - 1
    };
    Ok((0..1u64 << n)
        .filter(|&choice| {
            let covered = (0..n)
                .filter(|i| choice >> i & 1 == 1)
                .fold(0u64, |acc, i| acc | masks[i]);
            covered == full
        })
        .count() as u64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawVertexCover")]
pub struct VertexCoverInstance {
    vertices: usize,
    edges: Vec<[usize; 2]>,
    t: usize,
}

#[derive(Deserialize)]
struct RawVertexCover {
    vertices: usize,
    edges: Vec<[usize; 2]>,
    t: usize,
}

impl TryFrom<RawVertexCover> for VertexCoverInstance {
    type Error = Error;

    fn try_from(raw: RawVertexCover) -> Result<Self> {
        VertexCoverInstance::new(raw.vertices, raw.edges, raw.t)
    }
}

impl VertexCoverInstance {
    /// A simple undirected graph on `0..vertices` and the threshold `t`.
    pub fn new(vertices: usize, edges: Vec<[usize; 2]>, t: usize) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for &[u, v] in &edges {
            if u >= vertices || v >= vertices {
                return Err(Error::InvalidInstance(format!(
                    "edge [{u}, {v}] references a missing vertex"
                )));
            }
            if u == v {
                return Err(Error::InvalidInstance(format!("self-loop at vertex {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidInstance(format!("duplicate edge [{u}, {v}]")));
            }
        }
        Ok(VertexCoverInstance { vertices, edges, t })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn threshold(&self) -> usize {
        self.t
    }

    #[must_use]
    pub fn with_threshold(mut self, t: usize) -> Self {
        self.t = t;
        self
    }

    /// Conditions under which the construction loses its meaning.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.edges.len() < 2 {
            w.push(format!(
                "graph has {} edge(s); the construction needs at least two, \
                 otherwise the game is degenerate",
                self.edges.len()
            ));
        }
        if self.t > self.vertices {
            w.push(format!(
                "threshold {} exceeds the vertex count {}",
                self.t, self.vertices
            ));
        }
        w
    }
}

/// Builds the ε-core membership instance. Vertex order: the original
/// vertices (standard, agent `i` = vertex `i`), one primary vertex per
/// original edge, then a single backbone vertex joined to every original
/// vertex. Each original edge `(u, w)` becomes the path `u – v_e – w`.
///
/// Returns the domain, the equal imputation and `ε = 1 − t/n`.
pub fn vertexcover_to_ecm(
    instance: &VertexCoverInstance,
) -> Result<(ConnectivityDomain, Imputation, BigRational)> {
    let n = instance.vertices;
    if n == 0 {
        return Err(Error::InvalidInstance("graph has no vertices".into()));
    }
    let m = instance.edges.len();
    let backbone = n + m;
    let mut file = DomainFile {
        vertices: n + m + 1,
        ..DomainFile::default()
    };
    for (e, &[u, w]) in instance.edges.iter().enumerate() {
        file.edges.push([u, n + e]);
        file.edges.push([w, n + e]);
    }
    file.edges.extend((0..n).map(|v| [v, backbone]));
    file.standard = (0..n).collect();
    file.primary = (n..n + m).collect();
    file.backbone = vec![backbone];
    file.meta = Some(serde_json::json!({ "reduction": "vertexcover", "t": instance.t }));
    let domain = ConnectivityDomain::from_file(file).expect("generated domain is valid");
    let epsilon = BigRational::one() - BigRational::new(BigInt::from(instance.t), BigInt::from(n));
    Ok((domain, Imputation::equal(n), epsilon))
}

/// Size of a smallest vertex cover, by enumeration.
pub fn min_vertex_cover(instance: &VertexCoverInstance) -> Result<usize> {
    let n = instance.vertices;
    if n > ORACLE_LIMIT {
        return Err(Error::TooLarge {
            agents: n,
            cap: ORACLE_LIMIT,
        });
    }
    Ok((0..1u64 << n)
        .filter(|&chosen| {
            instance
                .edges
                .iter()
                .all(|&[u, w]| chosen >> u & 1 == 1 || chosen >> w & 1 == 1)
        })
        .map(|chosen| chosen.count_ones() as usize)
        .min()
        .expect("the full vertex set is a cover"))
}

/// Whether some coalition has excess of at least ε under `imputation`, i.e.
/// the answer of the decision problem produced by [`vertexcover_to_ecm`]:
/// true iff the original graph has a vertex cover with at most `t`
/// vertices. This is the complement of strict ε-core membership.
pub fn excess_reaches(
    domain: &ConnectivityDomain,
    imputation: &Imputation,
    epsilon: &BigRational,
) -> Result<bool> {
    let report = max_excess(domain, imputation)?;
    Ok(report.max_excess >= epsilon - tolerance())
}

/// The domain plus one isolated standard vertex, owned by a new last agent.
pub fn add_dummy(domain: &ConnectivityDomain) -> ConnectivityDomain {
    let mut file = domain.to_file();
    file.standard.push(file.vertices);
    file.vertices += 1;
    ConnectivityDomain::from_file(file).expect("adding an isolated vertex keeps the domain valid")
}

/// Seeded random instances for the identity checks.
pub mod random {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::{SetCoverInstance, VertexCoverInstance};

    /// `1..=max_sets` sets over `1..=max_items` items (both uniform); each
    /// item joins each set independently with probability 0.4.
    pub fn setcover(seed: u64, max_sets: usize, max_items: usize) -> SetCoverInstance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sets = rng.gen_range(1..=max_sets);
        let items = rng.gen_range(1..=max_items);
        let sets = (0..sets)
            .map(|_| (0..items).filter(|_| rng.gen_bool(0.4)).collect())
            .collect();
        SetCoverInstance::new(items, sets).expect("items are in range")
    }

    /// `3..=max_vertices` vertices (uniform); each pair is an edge with
    /// probability 0.4, redrawn until there are at least two edges. The
    /// threshold is uniform in `0..=vertices`.
    pub fn graph(seed: u64, max_vertices: usize) -> VertexCoverInstance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(3..=max_vertices.max(3));
        loop {
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.4) {
                        edges.push([u, v]);
                    }
                }
            }
            if edges.len() >= 2 {
                let t = rng.gen_range(0..=n);
                return VertexCoverInstance::new(n, edges, t).expect("simple graph");
            }
        }
    }
}
