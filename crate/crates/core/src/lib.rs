//! Reward sharing in vertex connectivity games.
//!
//! A [`ConnectivityDomain`] is an undirected graph whose vertices are split
//! into *primary* vertices (which must all be able to reach one another),
//! *backbone* vertices (always available as relays) and *standard* vertices,
//! each owned by one agent. A coalition of agents wins when its vertices,
//! together with every backbone and primary vertex, connect all primaries.
//!
//! The crate computes fair shares of the unit reward (Banzhaf index and
//! Shapley value; exact, closed form on trees, or Monte Carlo) and stable
//! shares (veto players and the core, maximal excess and ε-core membership,
//! the least core). The [`reductions`] module builds set-cover and
//! vertex-cover instances into connectivity games, with brute-force counters
//! that cross-check the solvers.
//!
//! ```
//! use conngame::{ConnectivityDomain, indices};
//!
//! // a - x - b - y - a, with a and b primary.
//! let domain = ConnectivityDomain::builder(4)
//!     .primary([0, 2])
//!     .standard([1, 3])
//!     .edges([(0, 1), (1, 2), (2, 3), (3, 0)])
//!     .build()
//!     .unwrap();
//! let banzhaf = indices::banzhaf_exact(&domain).unwrap();
//! assert_eq!(banzhaf.to_string_list(), ["1/2", "1/2"]);
//! ```

pub mod classify;
pub mod coalition;
pub mod domain;
pub mod enumerate;
mod error;
pub mod indices;
pub mod number;
#[cfg(feature = "oracles")]
pub mod oracle;
pub mod reductions;
pub mod stability;
pub mod tree;

pub use classify::{classify, Degeneracy, DomainClassification};
pub use coalition::{AgentSet, Coalition};
pub use domain::{
    ConnectivityDomain, DomainFile, Evaluator, ValidationReport, VertexKind, Violation,
};
pub use enumerate::Limits;
pub use error::{Error, Result};
pub use indices::{ApproxParams, IndexKind, IndexVector, Method};
pub use number::Number;
pub use stability::{CoreDescription, ExcessReport, Imputation, LeastCore};
pub use tree::EssentialSet;
