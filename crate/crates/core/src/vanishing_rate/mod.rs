//! Single-logical-qubit codes: every syndrome is produced by exactly two
//! Z-error patterns, so the logical state is a two-term superposition that
//! can be written down from the tableau alone.

mod classify;
mod predict;

pub use classify::{classify_syndromes, ActionKind, SyndromePairClassification};
pub use predict::{
    averaged_m2_prediction, class_summaries, class_weighted_m2, error_amplitude, group_classes_from,
    group_syndrome_classes, predicted_logical_state, taylor_m2_nats, vanishing_prediction,
    vanishing_prediction_from, write_classification_csv, AveragedM2Prediction, ClassSummary,
    PredictedLogical, SyndromePrediction, VanishingPrediction,
};
