//! Greedy and generous maximum matchings for the Student/Project Allocation
//! problem, with and without lecturer lower quotas.
//!
//! The exact solvers build a flow network from the instance and repeatedly
//! augment along a best-profile augmenting path. A min-cost max-flow
//! baseline, a brute-force oracle, a random instance generator and a
//! benchmark harness sit alongside them.

pub mod bench;
pub mod error;
pub mod format;
pub mod generator;
pub mod instance;
pub mod mcmf;
pub mod network;
pub mod oracle;
pub mod profile;
pub mod search;
pub mod solver;

pub use error::{Result, SpaError};
pub use instance::{Lecturer, Matching, MatchingStats, Project, SpaInstance, Student};
pub use network::{AugPath, Flow, FlowNetwork, Node};
pub use profile::{Criterion, Profile};
