//! Data model: identifiers, taxonomy, records, validation, classification.

mod classify;
mod id;
mod kind;
mod record;
mod validate;

pub use classify::{classify_asset, derive_facets, Classification};
pub use id::{AssetId, ParseIdError, Prefix};
pub use kind::{AssetKind, Category};
pub use record::{infer_prefix, AssetFields, AssetRecord, SemanticSignature};
pub use validate::{validate_record, ValidationFailed, Violation};
