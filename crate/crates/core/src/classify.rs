//! Degeneracy detection, tree detection and primary merging.

use std::fmt;

use serde::Serialize;

use crate::coalition::{Coalition, Everyone};
use crate::domain::{ConnectivityDomain, DomainFile, VertexKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Degeneracy {
    /// Fewer than two primaries, or the empty coalition already connects them.
    AllWin,
    /// Even the grand coalition fails to connect the primaries.
    AllLose,
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Degeneracy::AllWin => "every coalition wins",
            Degeneracy::AllLose => "every coalition loses",
        })
    }
}

#[derive(Clone, Debug)]
pub struct DomainClassification {
    pub degenerate_all_win: bool,
    pub degenerate_all_lose: bool,
    /// The graph is acyclic. Components without primaries are allowed, so a
    /// forest counts; non-degeneracy then forces the primaries into one tree.
    pub is_tree: bool,
    pub is_connected: bool,
    /// Present when some primaries were joined by backbone/primary-only paths
    /// and got contracted into one primary vertex.
    pub merged: Option<ConnectivityDomain>,
}

impl DomainClassification {
    pub fn degeneracy(&self) -> Option<Degeneracy> {
        if self.degenerate_all_win {
            Some(Degeneracy::AllWin)
        } else if self.degenerate_all_lose {
            Some(Degeneracy::AllLose)
        } else {
            None
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.degeneracy().is_some()
    }
}

pub fn classify(domain: &ConnectivityDomain) -> DomainClassification {
    let mut eval = domain.evaluator();
    let degenerate_all_win = domain.primaries().len() < 2 || eval.wins(&Coalition::empty());
    let degenerate_all_lose = !eval.wins(&Everyone);

    let mut forest = DisjointSet::new(domain.vertex_count());
    let mut is_tree = true;
    for &[u, v] in domain.edges() {
        if !forest.union(u, v) {
            is_tree = false;
        }
    }
    let is_connected = forest.components <= 1;

    DomainClassification {
        degenerate_all_win,
        degenerate_all_lose,
        is_tree,
        is_connected,
        merged: merge_primaries(domain),
    }
}

/// Contracts every connected group of primary and backbone vertices that
/// contains a primary into a single primary vertex. Agent numbering is kept.
/// Returns `None` when nothing would change.
pub fn merge_primaries(domain: &ConnectivityDomain) -> Option<ConnectivityDomain> {
    let n = domain.vertex_count();
    let mut groups = DisjointSet::new(n);
    for &[u, v] in domain.edges() {
        if domain.vertex_agent(u).is_none() && domain.vertex_agent(v).is_none() {
            groups.union(u, v);
        }
    }
    let mut has_primary = vec![false; n];
    let mut size = vec![0usize; n];
    for v in 0..n {
        let root = groups.find(v);
        size[root] += 1;
        if domain.kind(v) == VertexKind::Primary {
            has_primary[root] = true;
        }
    }
    let contracted = |root: usize| has_primary[root] && size[root] > 1;
    if !(0..n).any(|v| contracted(groups.find(v))) {
        return None;
    }

    let mut new_id = Vec::with_capacity(n);
    let mut root_id = vec![usize::MAX; n];
    let mut file = DomainFile::default();
    for v in 0..n {
        let root = groups.find(v);
        if contracted(root) {
            if root_id[root] == usize::MAX {
                root_id[root] = file.vertices;
                file.primary.push(file.vertices);
                file.vertices += 1;
            }
            new_id.push(root_id[root]);
        } else {
            new_id.push(file.vertices);
            match domain.kind(v) {
                VertexKind::Primary => file.primary.push(file.vertices),
                VertexKind::Backbone => file.backbone.push(file.vertices),
                VertexKind::Standard => {}
            }
            file.vertices += 1;
        }
    }
    file.standard = (0..domain.agent_count())
        .map(|a| new_id[domain.agent_vertex(a)])
        .collect();
    let mut seen = std::collections::HashSet::new();
    for &[u, v] in domain.edges() {
        let (a, b) = (new_id[u], new_id[v]);
        if a != b && seen.insert((a.min(b), a.max(b))) {
            file.edges.push([a, b]);
        }
    }
    Some(ConnectivityDomain::from_file(file).expect("contraction keeps the domain valid"))
}

struct DisjointSet {
    parent: Vec<usize>,
    components: usize,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            components: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        self.components -= 1;
        true
    }
}
