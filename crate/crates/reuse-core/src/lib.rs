//! Repository engine for reusable software assets.
//!
//! Assets (code, specs, patterns, test plans, ...) are classified into a
//! controlled taxonomy, stored in an on-disk repository with per-method
//! indexes, and retrieved through six independent method families:
//!
//! - **informational** — tf-idf cosine over asset text
//! - **descriptive** — exact keyword/facet surrogates
//! - **operational** — executing candidate programs on I/O samples
//! - **denotational** — signature and spec-term matching over non-executables
//! - **topological** — edit-distance nearest neighbour over descriptors
//! - **structural** — pattern-shape matching with hole instantiation
//!
//! The [`pipeline`] module combines methods with reciprocal-rank fusion and
//! implements the search-or-register workflow; [`eval`] measures every method
//! on synthetic ground-truth corpora and compares the outcome against a
//! transcribed expectation matrix.

pub mod engines;
pub mod eval;
pub mod fold;
pub mod minilang;
pub mod model;
pub mod pipeline;
pub mod store;

pub use engines::{MethodTag, Query, QueryVariant, RankedHit, Tunables};
pub use eval::{
    generate_corpus, run_evaluation, CorpusSpec, EvalOptions, EvaluationReport,
    ExpectationMatrix, GroundTruthCorpus, MethodMetrics, OrdinalRating,
};
pub use pipeline::{run_query, search_or_register, PipelineOutcome, RegistrationStub, SearchRequest};
pub use model::{AssetFields, AssetId, AssetKind, AssetRecord, Category, Prefix};
pub use store::{Repository, Snapshot};
