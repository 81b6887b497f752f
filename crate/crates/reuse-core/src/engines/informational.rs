//! Free-text retrieval: TF-IDF cosine over the inverted text index.
//!
//! Weights are tf * ln(N/df) with raw counts and no smoothing. Documents
//! sharing no folded query term are excluded rather than scored zero.

use std::collections::BTreeMap;

use crate::fold::fold_tokens;
use crate::store::Snapshot;

use super::{finalize, InformationalQ, MethodTag, QueryError, RankedHit};

pub fn search_informational(
    snapshot: &Snapshot,
    query: &InformationalQ,
    k: usize,
) -> Result<Vec<RankedHit>, QueryError> {
    let tokens = fold_tokens(&query.text);
    if tokens.is_empty() {
        return Err(QueryError::EmptyQuery("text folds to no terms"));
    }
    let mut query_tf: BTreeMap<String, u32> = BTreeMap::new();
    for token in tokens {
        *query_tf.entry(token).or_insert(0) += 1;
    }

    let n = snapshot.len() as f64;
    let text_index = &snapshot.indexes().text_index;
    let idf = |term: &str| -> f64 {
        match text_index.get(term) {
            Some(postings) => (n / postings.len() as f64).ln(),
            None => 0.0,
        }
    };

    let mut query_norm_sq = 0.0;
    let mut dots: BTreeMap<crate::model::AssetId, f64> = BTreeMap::new();
    let mut shared: BTreeMap<crate::model::AssetId, Vec<&str>> = BTreeMap::new();
    for (term, tf) in &query_tf {
        let Some(postings) = text_index.get(term) else {
            continue;
        };
        let weight = f64::from(*tf) * idf(term);
        query_norm_sq += weight * weight;
        for (id, doc_tf) in postings {
            *dots.entry(*id).or_insert(0.0) += weight * f64::from(*doc_tf) * idf(term);
            shared.entry(*id).or_default().push(term);
        }
    }

    let mut hits = Vec::with_capacity(dots.len());
    for (id, dot) in dots {
        let Some(doc) = snapshot.doc_terms(id) else {
            continue;
        };
        let doc_norm_sq: f64 = doc
            .iter()
            .map(|(term, tf)| {
                let w = f64::from(*tf) * idf(term);
                w * w
            })
            .sum();
        let denom = (query_norm_sq * doc_norm_sq).sqrt();
        if denom == 0.0 {
            // every involved term appears in every document; cosine is 0/0
            continue;
        }
        let Some(record) = snapshot.get(id) else {
            continue;
        };
        hits.push(RankedHit {
            id,
            name: record.fields.name.clone(),
            score: dot / denom,
            method: MethodTag::Informational,
            explanation: format!("matched terms: {}", shared[&id].join(", ")),
        });
    }
    Ok(finalize(hits, k))
}
