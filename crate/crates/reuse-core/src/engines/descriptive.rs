//! Surrogate retrieval: exact match of folded keywords and facets against
//! the keyword index. Cost is proportional to the query, never the corpus.

use std::collections::BTreeMap;

use crate::fold::fold_phrase;
use crate::model::AssetId;
use crate::store::Snapshot;

use super::{finalize, DescriptiveQ, MethodTag, QueryError, RankedHit};

pub fn search_descriptive(
    snapshot: &Snapshot,
    query: &DescriptiveQ,
    k: usize,
) -> Result<Vec<RankedHit>, QueryError> {
    let mut wanted: Vec<String> = query
        .keywords
        .iter()
        .chain(query.facets.iter())
        .map(|s| fold_phrase(s))
        .filter(|s| !s.is_empty())
        .collect();
    wanted.sort();
    wanted.dedup();
    if wanted.is_empty() {
        return Err(QueryError::EmptyQuery("no keywords or facets"));
    }

    let index = &snapshot.indexes().keyword_index;
    let mut matched: BTreeMap<AssetId, Vec<&str>> = BTreeMap::new();
    for term in &wanted {
        if let Some(ids) = index.get(term) {
            for id in ids {
                matched.entry(*id).or_default().push(term);
            }
        }
    }

    let total = wanted.len() as f64;
    let mut hits = Vec::with_capacity(matched.len());
    for (id, terms) in matched {
        let Some(record) = snapshot.get(id) else {
            continue;
        };
        hits.push(RankedHit {
            id,
            name: record.fields.name.clone(),
            score: terms.len() as f64 / total,
            method: MethodTag::Descriptive,
            explanation: format!("matched {}/{}: {}", terms.len(), wanted.len(), terms.join(", ")),
        });
    }
    Ok(finalize(hits, k))
}
