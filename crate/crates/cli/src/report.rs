//! Analysis reports and their text, JSON and CSV renderings.

use std::fmt::Write as _;

use conngame::number::{format_ratio, to_f64};
use conngame::{ConnectivityDomain, DomainClassification, IndexVector, Number};
use num_rational::BigRational;
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// A number with its exact form when there is one.
#[derive(Debug, Serialize)]
pub struct Scalar {
    pub rational: Option<String>,
    pub value: f64,
}

impl Scalar {
    pub fn exact(r: &BigRational) -> Self {
        Scalar {
            rational: Some(format_ratio(r)),
            value: to_f64(r),
        }
    }

    pub fn number(n: &Number) -> Self {
        Scalar {
            rational: n.rational_string(),
            value: n.to_f64(),
        }
    }

    fn show(&self) -> String {
        match &self.rational {
            Some(r) if r.contains('/') => format!("{r} ({})", self.value),
            Some(r) => r.clone(),
            None => format!("{}", self.value),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DomainSummary {
    pub agents: usize,
    pub vertices: usize,
    pub edges: usize,
    pub degeneracy: Option<conngame::Degeneracy>,
    pub is_tree: bool,
    pub is_connected: bool,
}

impl DomainSummary {
    pub fn new(domain: &ConnectivityDomain, class: &DomainClassification) -> Self {
        DomainSummary {
            agents: domain.agent_count(),
            vertices: domain.vertex_count(),
            edges: domain.edge_count(),
            degeneracy: class.degeneracy(),
            is_tree: class.is_tree,
            is_connected: class.is_connected,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct IndexEntry {
    pub agent: usize,
    pub vertex: usize,
    pub rational: Option<String>,
    pub value: f64,
    pub method: &'static str,
}

#[derive(Debug, Serialize)]
pub struct IndexReport {
    pub kind: &'static str,
    pub method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// Agents by decreasing index.
    pub ranked: Vec<IndexEntry>,
}

impl IndexReport {
    pub fn new(domain: &ConnectivityDomain, v: &IndexVector, accuracy: Option<(f64, f64)>) -> Self {
        let method = v.method.name();
        IndexReport {
            kind: v.kind.name(),
            method,
            samples: v.samples,
            seed: v.seed,
            epsilon: accuracy.map(|a| a.0),
            delta: accuracy.map(|a| a.1),
            ranked: v
                .ranking()
                .into_iter()
                .map(|agent| IndexEntry {
                    agent,
                    vertex: domain.agent_vertex(agent),
                    rational: v.values[agent].rational_string(),
                    value: v.values[agent].to_f64(),
                    method,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CoreReport {
    pub method: &'static str,
    pub veto_agents: Vec<usize>,
    pub is_empty: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub imputation_in_core: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct EcmReport {
    pub method: &'static str,
    pub epsilon: Scalar,
    pub in_epsilon_core: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_excess: Option<Scalar>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub essential_payment: Option<Scalar>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<Scalar>,
}

#[derive(Debug, Serialize)]
pub struct LeastCoreReport {
    pub method: &'static str,
    pub value: Scalar,
    pub imputation: Vec<Scalar>,
}

#[derive(Debug, Serialize)]
pub struct GenerateReport {
    pub reduction: &'static str,
    pub domain_file: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_agent: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub imputation_file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Scalar>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Default, Serialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub indices: Vec<IndexReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub core: Option<CoreReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ecm: Option<EcmReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub least_core: Option<LeastCoreReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated: Option<GenerateReport>,
}

impl AnalysisReport {
    pub fn new(command: &'static str) -> Self {
        AnalysisReport {
            schema_version: SCHEMA_VERSION,
            command,
            ..AnalysisReport::default()
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Text => self.text(),
            Format::Csv => self.csv(),
        }
    }

    fn text(&self) -> String {
        let mut out = String::new();
        if let Some(d) = &self.domain {
            let degeneracy = d.degeneracy.map_or("none".to_string(), |g| g.to_string());
            let _ = writeln!(
                out,
                "domain: {} agents, {} vertices, {} edges; tree: {}; degenerate: {}",
                d.agents, d.vertices, d.edges, d.is_tree, degeneracy
            );
        }
        for ix in &self.indices {
            let _ = write!(out, "{} index via {}", ix.kind, ix.method);
            if let (Some(samples), Some(seed)) = (ix.samples, ix.seed) {
                let _ = write!(out, " ({samples} samples, seed {seed})");
            }
            out.push('\n');
            for e in &ix.ranked {
                let value = match &e.rational {
                    Some(r) => format!("{r} ({})", e.value),
                    None => format!("{}", e.value),
                };
                let _ = writeln!(
                    out,
                    "  agent {:>3} (vertex {:>3}): {value}",
                    e.agent, e.vertex
                );
            }
        }
        if let Some(c) = &self.core {
            let _ = writeln!(out, "veto agents: {:?}", c.veto_agents);
            let _ = writeln!(out, "core empty: {}", c.is_empty);
            if let Some(v) = c.imputation_in_core {
                let _ = writeln!(out, "in core: {v}");
            }
        }
        if let Some(e) = &self.ecm {
            let _ = writeln!(out, "epsilon: {}", e.epsilon.show());
            if let Some(m) = &e.max_excess {
                let _ = writeln!(out, "max excess: {}", m.show());
            }
            if let Some(w) = &e.witness {
                let _ = writeln!(out, "witness coalition: {w:?}");
            }
            if let (Some(p), Some(t)) = (&e.essential_payment, &e.threshold) {
                let _ = writeln!(out, "payment to essential agents: {}", p.show());
                let _ = writeln!(out, "threshold (1 - epsilon): {}", t.show());
            }
            let _ = writeln!(
                out,
                "in epsilon-core: {} (via {})",
                e.in_epsilon_core, e.method
            );
        }
        if let Some(l) = &self.least_core {
            let _ = writeln!(
                out,
                "least core value: {} (via {})",
                l.value.show(),
                l.method
            );
            let payoffs: Vec<String> = l.imputation.iter().map(Scalar::show).collect();
            let _ = writeln!(out, "imputation: [{}]", payoffs.join(", "));
        }
        if let Some(g) = &self.generated {
            let _ = writeln!(
                out,
                "{} reduction written to {}",
                g.reduction, g.domain_file
            );
            if let Some(t) = g.target_agent {
                let _ = writeln!(out, "target agent: {t}");
            }
            if let Some(f) = &g.imputation_file {
                let _ = writeln!(out, "imputation written to {f}");
            }
            if let Some(e) = &g.epsilon {
                let _ = writeln!(out, "epsilon: {}", e.show());
            }
        }
        out
    }

    fn csv(&self) -> String {
        let mut out = String::new();
        if !self.indices.is_empty() {
            out.push_str("agent,vertex,index_kind,value_rational,value_float,method\n");
            for ix in &self.indices {
                for e in &ix.ranked {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        e.agent,
                        e.vertex,
                        ix.kind,
                        e.rational.as_deref().unwrap_or(""),
                        e.value,
                        e.method
                    );
                }
            }
            return out;
        }
        out.push_str("key,value_rational,value_float\n");
        let mut row = |key: &str, rational: &str, float: &str| {
            let _ = writeln!(out, "{key},{rational},{float}");
        };
        let scalar = |s: &Scalar| (s.rational.clone().unwrap_or_default(), s.value.to_string());
        if let Some(c) = &self.core {
            let veto: Vec<String> = c.veto_agents.iter().map(usize::to_string).collect();
            row("veto_agents", &veto.join(" "), "");
            row("core_empty", &c.is_empty.to_string(), "");
            if let Some(v) = c.imputation_in_core {
                row("in_core", &v.to_string(), "");
            }
        }
        if let Some(e) = &self.ecm {
            let (r, f) = scalar(&e.epsilon);
            row("epsilon", &r, &f);
            if let Some(m) = &e.max_excess {
                let (r, f) = scalar(m);
                row("max_excess", &r, &f);
            }
            if let Some(w) = &e.witness {
                let w: Vec<String> = w.iter().map(usize::to_string).collect();
                row("witness", &w.join(" "), "");
            }
            if let Some(p) = &e.essential_payment {
                let (r, f) = scalar(p);
                row("essential_payment", &r, &f);
            }
            row("in_epsilon_core", &e.in_epsilon_core.to_string(), "");
        }
        if let Some(l) = &self.least_core {
            let (r, f) = scalar(&l.value);
            row("least_core_value", &r, &f);
            for (i, p) in l.imputation.iter().enumerate() {
                let (r, f) = scalar(p);
                row(&format!("payoff_{i}"), &r, &f);
            }
        }
        if let Some(g) = &self.generated {
            row("domain_file", &g.domain_file, "");
            if let Some(t) = g.target_agent {
                row("target_agent", &t.to_string(), "");
            }
            if let Some(e) = &g.epsilon {
                let (r, f) = scalar(e);
                row("epsilon", &r, &f);
            }
        }
        out
    }
}
