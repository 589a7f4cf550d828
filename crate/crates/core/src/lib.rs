//! Multi-robot routing on graphs where adjacent robots may exchange places.
//!
//! Only vertex collisions are forbidden. The crate provides instance
//! generation and parsing, a plan validator, the swap-need and swap-risk
//! predicates, the RIP and bubbletree solvers, sorting-network baselines,
//! an exhaustive optimal solver for tiny instances, and benchmark sweeps.

pub mod analysis;
pub mod baselines;
pub mod bench;
pub mod bubbletree;
pub mod graph;
pub mod instance;
pub mod optimal;
pub mod plan;
pub mod rip;
pub mod rng;

pub use graph::{Graph, GraphError, NodeId, Path, Tree};
pub use instance::{Instance, InstanceError, ParseError};
pub use plan::{validate_plan, Plan, PlanError, PlanMetrics};
