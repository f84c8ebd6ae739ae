//! Seeded synthetic cohorts drawn from first-order Markov chains over codes,
//! with ground-truth profile labels for end-to-end recovery checks.

mod benchmark;
mod generate;
mod profile;

pub use benchmark::{recovery_benchmark, RecoveryReport};
pub use generate::{generate, SynthCohort};
pub use profile::{BehaviorProfile, DEFAULT_LENGTH_RANGE, MAX_LENGTH};
