//! Complexity-stratified evaluation of algorithmic reasoning.
//!
//! The crate synthesizes in-distribution (ID) and out-of-distribution (OOD)
//! instances of twenty algorithmic tasks, grades subject completions with
//! exhaustive oracles, and reports accuracy gaps, generalization scores,
//! critical complexity, and probe-task complexity estimates.
//!
//! Runnable walkthroughs live in `examples/`; `algoeval --help` drives the
//! full pipeline from a config file.

// symmetric matrix fills read better with explicit indices
#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod error;
pub mod gateway;
pub mod instance;
pub mod metrics;
pub mod oracle;
pub mod prompting;
pub mod runner;
pub mod seeds;
pub mod synthesis;

pub use catalog::{ComplexityClass, ComplexityInterval, TaskId, TaskRole, TaskSpec};
pub use error::{Error, Result};
pub use instance::{Payload, ProblemInstance, Split};
pub use oracle::{AnswerValue, AnswerVerdict, CandidateAnswer, Outcome};
