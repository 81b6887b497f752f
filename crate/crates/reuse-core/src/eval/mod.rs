//! Measurement harness: synthetic corpora with known-relevant sets, per-method
//! retrieval metrics, and conformance checks against the published expectation
//! matrix.

mod corpus;
mod matrix;
mod metrics;
mod report;

pub use corpus::{generate_corpus, CorpusSpec, GroundTruthCorpus, GroundTruthQuery};
pub use matrix::{
    to_ordinal, ExpectationMatrix, ManagerialCriterion, OrdinalRating, TechnicalCriterion,
};
pub use metrics::{evaluate_method, evaluate_method_on, MethodEvaluation, MethodMetrics, RawRetrieval};
pub use report::{
    run_evaluation, CommittedCheck, EvalOptions, EvaluationReport, LatencyMeasurement,
    PairwiseCheck,
};

use crate::engines::MethodTag;

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    /// Corpus spec fails validation (sizes, density range, vocabulary).
    #[error("invalid corpus spec: {0}")]
    InvalidSpec(String),
    /// Argument outside its documented domain (e.g. non-ascending bin cuts).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// The corpus holds no queries for the requested method.
    #[error("no queries for method {0}")]
    NoData(MethodTag),
}
