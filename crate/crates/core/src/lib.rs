//! Exact minimum-cardinality ground-station selection under per-period
//! site-diversity availability requirements.
//!
//! The probability-domain problem ([`instance::ProblemInstance`]) is mapped to
//! a binary integer linear program ([`transform::BilpInstance`]) by taking
//! logarithms of the outage products. The program is then solved to global
//! optimality by a FIFO branch-and-bound ([`bnb::solve`]) that bounds every
//! node from below with an LP relaxation ([`lp::solve_lp`]) and from above
//! with a cost-function greedy ([`greedy::run_greedy`]).
//!
//! [`oracle::solve_exhaustive`] is a subset enumerator used as ground truth,
//! and [`bench`] runs seeded scenario batches and aggregates iteration
//! statistics.

pub mod bench;
pub mod bnb;
pub mod error;
pub mod greedy;
pub mod instance;
pub mod lp;
pub mod oracle;
pub mod tolerance;
pub mod transform;

pub use bnb::{solve, SolveResult, SolveStatus, TraceEvent, TraceRecord};
pub use error::{Error, Result};
pub use instance::{NodeCoverGraph, ProblemInstance, Selection};
pub use transform::BilpInstance;

/// Version tag written into every JSON document this crate produces.
pub const FORMAT_VERSION: u32 = 1;
