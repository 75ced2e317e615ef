//! Fairness and efficiency measurement over utility sets.
//!
//! The crate evaluates aggregation indexes (sum, product, min, Jain, OWA,
//! ...), extracts Pareto fronts and ε-approximations from finite point
//! clouds, applies allocation policies, and computes three inefficiency
//! measures of a chosen allocation: the per-index ratio to the optimum, the
//! selfishness degradation factor, and the log-space distance to the front.
//! [`demos`] and [`verify`] turn the known structural facts about these
//! objects into executable checks.

pub mod demos;
pub mod error;
pub mod indexes;
pub mod inefficiency;
pub mod pareto;
pub mod policies;
pub mod utility_model;
pub mod verify;

pub use error::{Error, Result};
pub use indexes::{eval_index, IndexSpec};
pub use pareto::{pareto_filter, ParetoFront};
pub use policies::{apply_policy, PolicySpec, SmnAllocation, TieBreak};
pub use utility_model::{FiniteUtilitySet, HalfspaceSet, MetricChoice, SmnFamily, UtilityPoint};
