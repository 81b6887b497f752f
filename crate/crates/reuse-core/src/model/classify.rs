//! Facet derivation: the classification surface the descriptive engine
//! indexes alongside literal keywords.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::kind::AssetKind;
use super::record::AssetRecord;
use super::validate::{validate_record, ValidationFailed};
use crate::fold::fold_phrase;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub kind: AssetKind,
    pub facets: BTreeSet<String>,
}

/// Derive the facet set for a valid record: category and subkind verbatim,
/// language and pattern family folded to query form. Pure function of the
/// record.
pub fn classify_asset(record: &AssetRecord) -> Result<Classification, ValidationFailed> {
    let violations = validate_record(record);
    if !violations.is_empty() {
        return Err(ValidationFailed(violations));
    }
    Ok(Classification {
        kind: record.fields.kind.clone(),
        facets: derive_facets(record),
    })
}

/// Facets without the validity gate; index maintenance uses this on records
/// already admitted into the store.
pub fn derive_facets(record: &AssetRecord) -> BTreeSet<String> {
    let mut facets = BTreeSet::new();
    facets.insert(record.fields.kind.category.render().to_string());
    facets.insert(record.fields.kind.subkind.clone());
    for field in [&record.fields.language, &record.fields.pattern_family] {
        if let Some(value) = field {
            let folded = fold_phrase(value);
            if !folded.is_empty() {
                facets.insert(folded);
            }
        }
    }
    facets
}
