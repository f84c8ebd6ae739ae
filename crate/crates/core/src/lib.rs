//! Sequential-pattern analytics for coded student/assistant chat logs.
//!
//! The pipeline runs codebook validation, PrefixSpan mining, per-student
//! occurrence counting, K-means clustering and two-group rank tests, plus the
//! inter-rater agreement statistics used to validate a coding scheme and a
//! Markov-chain cohort simulator for end-to-end checks.

pub mod agreement;
pub mod cluster;
pub mod corpus;
pub mod error;
pub mod miner;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
pub use ndarray;
