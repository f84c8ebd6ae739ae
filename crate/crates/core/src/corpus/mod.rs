//! Codebook, interaction-log and essay-score data model, with ingestion and
//! validation.

mod codebook;
mod log;
mod scores;
mod sequence;

pub use codebook::{CodeDef, Codebook, Origin, Phase};
pub use log::{parse_event_log, write_event_log, CodedEvent, StudentSession};
pub use scores::{
    load_scores, unmatched_students, weighted_total, write_scores, Dimension, EssayScores, RubricWeights, SCORE_MAX,
    SCORE_MIN,
};
pub use sequence::{flatten, IntraEventOrder, SequenceDatabase, StudentSequence};
