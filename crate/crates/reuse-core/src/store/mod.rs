//! Durable repository: records log, manifest, rebuildable index caches,
//! and the immutable snapshot readers work from.

mod error;
mod index;
mod repository;
mod snapshot;

pub use error::StoreError;
pub use index::{surrogate_terms, text_terms, IndexSet, IndexStats};
pub use repository::{Clock, ListFilter, Repository};
pub use snapshot::Snapshot;
