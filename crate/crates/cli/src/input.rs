use std::fs;
use std::path::Path;

use conngame::number::{parse_ratio, Real};
use conngame::reductions::{SetCoverInstance, VertexCoverInstance};
use conngame::{ConnectivityDomain, DomainFile, Imputation};
use num_rational::BigRational;
use serde::Deserialize;

use crate::Failure;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path, what: &str) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::input(format!("malformed {what} file {}: {e}", path.display())))
}

pub fn domain(path: &Path) -> Result<ConnectivityDomain, Failure> {
    let file: DomainFile = parse(path, "domain")?;
    ConnectivityDomain::from_file(file).map_err(Failure::from)
}

/// Either a bare array of payoffs or `{"payoffs": [...], "epsilon": ...}`.
#[derive(Deserialize)]
#[serde(untagged)]
enum ImputationFile {
    Bare(Vec<Real>),
    Object {
        payoffs: Vec<Real>,
        #[serde(default)]
        epsilon: Option<Real>,
    },
}

pub fn imputation(path: &Path) -> Result<(Imputation, Option<BigRational>), Failure> {
    let (payoffs, epsilon) = match parse::<ImputationFile>(path, "imputation")? {
        ImputationFile::Bare(p) => (p, None),
        ImputationFile::Object { payoffs, epsilon } => (payoffs, epsilon.map(|e| e.0)),
    };
    Ok((
        Imputation::new(payoffs.into_iter().map(|r| r.0).collect()),
        epsilon,
    ))
}

pub fn setcover(path: &Path) -> Result<SetCoverInstance, Failure> {
    parse(path, "set-cover instance")
}

pub fn vertexcover(path: &Path) -> Result<VertexCoverInstance, Failure> {
    parse(path, "vertex-cover instance")
}

pub fn real(text: &str) -> Result<BigRational, Failure> {
    parse_ratio(text).ok_or_else(|| Failure::input(format!("not a real number: {text:?}")))
}
