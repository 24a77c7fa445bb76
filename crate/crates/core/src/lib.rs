//! Exact solvers for (Weighted) Subset Feedback Vertex Set on
//! (sP1+P4)-free graphs.
//!
//! The problem is solved in its maximisation form: find a maximum-weight
//! vertex set `F` whose induced subgraph has no cycle through a terminal
//! (a *T-forest*); the deleted set `V \ F` is then a minimum-weight
//! T-feedback vertex set.

pub mod audit;
pub mod checker;
pub mod config;
pub mod core_incomplete;
pub mod cotree;
pub mod error;
pub mod flow_cut;
pub mod graph;
pub mod instance;
pub mod io;
pub mod oracle;
pub mod part_solvers;
pub mod pipeline;
pub mod reduced_solver;
pub mod set;
pub mod stats;
pub mod weight;

pub use error::{Result, SfvsError};
pub use graph::Graph;
pub use instance::{Instance, Solution};
pub use set::VertexSet;
pub use weight::Weight;
