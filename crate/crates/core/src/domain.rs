//! Connectivity game domains and the characteristic function.
//!
//! # JSON format
//!
//! ```json
//! { "vertices": 4,
//!   "edges": [[0, 1], [1, 2], [2, 3], [3, 0]],
//!   "primary": [0, 2],
//!   "backbone": [],
//!   "standard": [1, 3] }
//! ```
//!
//! The three id lists must partition `0..vertices`. Agent `i` owns the vertex
//! at position `i` of `"standard"`; that position is also the agent's bit in
//! coalition encodings. An optional `"meta"` object is carried through
//! untouched (generators use it to record e.g. the target agent).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coalition::{AgentSet, Coalition};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Primary,
    Backbone,
    Standard,
}

/// Unvalidated on-disk form of a domain.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DomainFile {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub primary: Vec<usize>,
    #[serde(default)]
    pub backbone: Vec<usize>,
    #[serde(default)]
    pub standard: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// A vertex with zero or several kind labels.
    NonPartitionLabel {
        vertex: usize,
        labels: usize,
    },
    /// An id in a label list outside `0..vertices`.
    LabelOutOfRange {
        list: &'static str,
        id: usize,
    },
    EdgeOutOfRange {
        edge: [usize; 2],
    },
    SelfLoop {
        vertex: usize,
    },
    DuplicateEdge {
        edge: [usize; 2],
    },
    /// A standard vertex listed more than once, so agents and standard
    /// vertices are not in bijection.
    NonBijectiveAgentMap {
        vertex: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonPartitionLabel { vertex, labels } => {
                write!(
                    f,
                    "non-partition label: vertex {vertex} has {labels} kind labels"
                )
            }
            Violation::LabelOutOfRange { list, id } => {
                write!(f, "label out of range: {list} lists vertex {id}")
            }
            Violation::EdgeOutOfRange { edge } => {
                write!(
                    f,
                    "bad edge id: edge [{}, {}] references a missing vertex",
                    edge[0], edge[1]
                )
            }
            Violation::SelfLoop { vertex } => write!(f, "self-loop at vertex {vertex}"),
            Violation::DuplicateEdge { edge } => {
                write!(f, "duplicate edge [{}, {}]", edge[0], edge[1])
            }
            Violation::NonBijectiveAgentMap { vertex } => {
                write!(
                    f,
                    "non-bijective agent map: standard vertex {vertex} listed twice"
                )
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks a domain file; violations are returned as data.
pub fn validate(file: &DomainFile) -> ValidationReport {
    let n = file.vertices;
    let mut violations = Vec::new();
    let mut labels = vec![0usize; n];
    for (list, ids) in [
        ("primary", &file.primary),
        ("backbone", &file.backbone),
        ("standard", &file.standard),
    ] {
        for &id in ids {
            match labels.get_mut(id) {
                Some(count) => *count += 1,
                None => violations.push(Violation::LabelOutOfRange { list, id }),
            }
        }
    }
    let mut seen_standard = vec![false; n];
    for &id in &file.standard {
        if id < n {
            if seen_standard[id] {
                violations.push(Violation::NonBijectiveAgentMap { vertex: id });
            }
            seen_standard[id] = true;
        }
    }
    for (vertex, &count) in labels.iter().enumerate() {
        if count != 1 {
            violations.push(Violation::NonPartitionLabel {
                vertex,
                labels: count,
            });
        }
    }
    let mut seen_edges = std::collections::HashSet::new();
    for &[u, v] in &file.edges {
        if u >= n || v >= n {
            violations.push(Violation::EdgeOutOfRange { edge: [u, v] });
        } else if u == v {
            violations.push(Violation::SelfLoop { vertex: u });
        } else if !seen_edges.insert((u.min(v), u.max(v))) {
            violations.push(Violation::DuplicateEdge { edge: [u, v] });
        }
    }
    ValidationReport { violations }
}

/// A validated connectivity game domain. Immutable once built.
#[derive(Clone, Debug)]
pub struct ConnectivityDomain {
    kinds: Vec<VertexKind>,
    edges: Vec<[usize; 2]>,
    // agent -> vertex, in "standard" list order
    agents: Vec<usize>,
    // vertex -> agent
    agent_of: Vec<Option<usize>>,
    primaries: Vec<usize>,
    backbones: Vec<usize>,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    meta: Option<serde_json::Value>,
}

impl PartialEq for ConnectivityDomain {
    fn eq(&self, other: &Self) -> bool {
        self.to_file() == other.to_file()
    }
}

impl ConnectivityDomain {
    pub fn builder(vertices: usize) -> DomainBuilder {
        DomainBuilder {
            file: DomainFile {
                vertices,
                ..DomainFile::default()
            },
        }
    }

    pub fn from_file(file: DomainFile) -> Result<Self> {
        let report = validate(&file);
        if !report.is_ok() {
            return Err(Error::InvalidDomain(report));
        }
        let n = file.vertices;
        let mut kinds = vec![VertexKind::Standard; n];
        for &v in &file.primary {
            kinds[v] = VertexKind::Primary;
        }
        for &v in &file.backbone {
            kinds[v] = VertexKind::Backbone;
        }
        let mut agent_of = vec![None; n];
        for (agent, &v) in file.standard.iter().enumerate() {
            agent_of[v] = Some(agent);
        }
        let mut degree = vec![0usize; n];
        for &[u, v] in &file.edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0; offsets[n]];
        for &[u, v] in &file.edges {
            targets[fill[u]] = v;
            fill[u] += 1;
            targets[fill[v]] = u;
            fill[v] += 1;
        }
        Ok(ConnectivityDomain {
            primaries: file.primary.clone(),
            backbones: file.backbone.clone(),
            kinds,
            edges: file.edges,
            agents: file.standard,
            agent_of,
            offsets,
            targets,
            meta: file.meta,
        })
    }

    pub fn from_json(json: &str) -> Result<Self> {
        Self::from_file(serde_json::from_str(json)?)
    }

    pub fn to_file(&self) -> DomainFile {
        DomainFile {
            vertices: self.kinds.len(),
            edges: self.edges.clone(),
            primary: self.primaries.clone(),
            backbone: self.backbones.clone(),
            standard: self.agents.clone(),
            meta: self.meta.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("domain serializes")
    }

    #[must_use]
    pub fn with_meta(mut self, meta: serde_json::Value) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn meta(&self) -> Option<&serde_json::Value> {
        self.meta.as_ref()
    }

    pub fn vertex_count(&self) -> usize {
        self.kinds.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of agents, i.e. standard vertices.
    pub fn agent_count(&self) -> usize {
        self.agents.len()
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn kind(&self, vertex: usize) -> VertexKind {
        self.kinds[vertex]
    }

    pub fn primaries(&self) -> &[usize] {
        &self.primaries
    }

    pub fn backbones(&self) -> &[usize] {
        &self.backbones
    }

    /// The vertex owned by `agent`.
    pub fn agent_vertex(&self, agent: usize) -> usize {
        self.agents[agent]
    }

    pub fn vertex_agent(&self, vertex: usize) -> Option<usize> {
        self.agent_of[vertex]
    }

    pub fn neighbors(&self, vertex: usize) -> &[usize] {
        &self.targets[self.offsets[vertex]..self.offsets[vertex + 1]]
    }

    pub fn degree(&self, vertex: usize) -> usize {
        self.offsets[vertex + 1] - self.offsets[vertex]
    }

    pub fn grand_coalition(&self) -> Coalition {
        Coalition::grand(self.agent_count().min(Coalition::MAX_AGENTS))
    }

    pub fn evaluator(&self) -> Evaluator<'_> {
        Evaluator::new(self)
    }

    /// Whether `coalition` connects every pair of primary vertices.
    pub fn wins<S: AgentSet + ?Sized>(&self, coalition: &S) -> bool {
        self.evaluator().wins(coalition)
    }

    /// The characteristic function: 1 for winning coalitions, else 0.
    pub fn coalition_value<S: AgentSet + ?Sized>(&self, coalition: &S) -> u8 {
        u8::from(self.wins(coalition))
    }

    /// `agent` is critical in `coalition` if the coalition wins and loses
    /// without it.
    pub fn is_critical(&self, agent: usize, coalition: Coalition) -> Result<bool> {
        self.check_agent(agent)?;
        if !coalition.contains(agent) {
            return Err(Error::NotAMember(agent));
        }
        let mut eval = self.evaluator();
        Ok(eval.wins(&coalition) && !eval.wins(&coalition.without(agent)))
    }

    pub(crate) fn check_agent(&self, agent: usize) -> Result<()> {
        if agent >= self.agent_count() {
            return Err(Error::AgentOutOfRange {
                agent,
                agents: self.agent_count(),
            });
        }
        Ok(())
    }

    pub(crate) fn is_usable<S: AgentSet + ?Sized>(&self, vertex: usize, coalition: &S) -> bool {
        match self.agent_of[vertex] {
            Some(agent) => coalition.contains(agent),
            None => true,
        }
    }
}

pub struct DomainBuilder {
    file: DomainFile,
}

impl DomainBuilder {
    pub fn primary(mut self, ids: impl IntoIterator<Item = usize>) -> Self {
        self.file.primary.extend(ids);
        self
    }

    pub fn backbone(mut self, ids: impl IntoIterator<Item = usize>) -> Self {
        self.file.backbone.extend(ids);
        self
    }

    /// Agents are numbered in the order standard vertices are added.
    pub fn standard(mut self, ids: impl IntoIterator<Item = usize>) -> Self {
        self.file.standard.extend(ids);
        self
    }

    pub fn edges(mut self, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        self.file
            .edges
            .extend(edges.into_iter().map(|(u, v)| [u, v]));
        self
    }

    pub fn build(self) -> Result<ConnectivityDomain> {
        ConnectivityDomain::from_file(self.file)
    }
}

/// Reusable scratch space for evaluating many coalitions on one domain.
///
/// A coalition wins iff a single traversal from one primary vertex, over
/// vertices that are primary, backbone or owned by a member, reaches every
/// other primary vertex.
pub struct Evaluator<'a> {
    domain: &'a ConnectivityDomain,
    mark: Vec<u32>,
    stamp: u32,
    stack: Vec<usize>,
}

impl<'a> Evaluator<'a> {
    pub fn new(domain: &'a ConnectivityDomain) -> Self {
        Evaluator {
            domain,
            mark: vec![0; domain.vertex_count()],
            stamp: 0,
            stack: Vec::with_capacity(domain.vertex_count()),
        }
    }

    pub fn domain(&self) -> &'a ConnectivityDomain {
        self.domain
    }

    pub fn wins<S: AgentSet + ?Sized>(&mut self, coalition: &S) -> bool {
        let d = self.domain;
        let Some((&start, rest)) = d.primaries.split_first() else {
            return true;
        };
        if rest.is_empty() {
            return true;
        }
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.mark.fill(0);
            self.stamp = 1;
        }
        let stamp = self.stamp;
        let mut missing = rest.len();
        self.stack.clear();
        self.stack.push(start);
        self.mark[start] = stamp;
        while let Some(u) = self.stack.pop() {
            for &w in d.neighbors(u) {
                if self.mark[w] == stamp || !d.is_usable(w, coalition) {
                    continue;
                }
                self.mark[w] = stamp;
                if d.kinds[w] == VertexKind::Primary {
                    missing -= 1;
                    if missing == 0 {
                        return true;
                    }
                }
                self.stack.push(w);
            }
        }
        false
    }

    pub fn value<S: AgentSet + ?Sized>(&mut self, coalition: &S) -> u8 {
        u8::from(self.wins(coalition))
    }
}
