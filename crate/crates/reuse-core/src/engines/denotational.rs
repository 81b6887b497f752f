//! Specification retrieval: match declared signatures and pre/post
//! vocabulary of non-executable assets.
//!
//! Score is 0.6 * signature compatibility + 0.4 * term Jaccard; when the
//! query carries only one of the two components the other's weight is
//! folded in so a perfect match still scores 1.0.

use std::collections::BTreeSet;

use crate::fold::{fold_phrase, fold_tokens};
use crate::model::{Prefix, SemanticSignature};
use crate::store::Snapshot;

use super::{DenotationalQ, MethodTag, QueryError, RankedHit, Tunables, finalize};

/// 1.0 for identical arity and types, 0.5 for matching arity alone,
/// otherwise 0.
pub fn signature_compatibility(query: &SemanticSignature, candidate: &SemanticSignature) -> f64 {
    if query.inputs.len() != candidate.inputs.len() {
        return 0.0;
    }
    if query.inputs == candidate.inputs && query.output == candidate.output {
        1.0
    } else {
        0.5
    }
}

fn folded_terms<S: AsRef<str> + Ord>(raw: &BTreeSet<S>) -> BTreeSet<String> {
    raw.iter().flat_map(|t| fold_tokens(t.as_ref())).collect()
}

fn jaccard(a: &BTreeSet<String>, b: &BTreeSet<String>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 0.0;
    }
    a.intersection(b).count() as f64 / union as f64
}

pub fn search_denotational(
    snapshot: &Snapshot,
    query: &DenotationalQ,
    k: usize,
    tunables: &Tunables,
) -> Result<Vec<RankedHit>, QueryError> {
    let hint = query
        .name_hint
        .as_deref()
        .map(fold_phrase)
        .filter(|h| !h.is_empty());
    let query_terms = folded_terms(&query.spec_terms);
    if hint.is_none() && query.signature.is_none() && query_terms.is_empty() {
        return Err(QueryError::EmptyQuery(
            "need a name hint, a signature, or spec terms",
        ));
    }

    let mut hits = Vec::new();
    for id in snapshot.ids_with_prefix(Prefix::NonExe) {
        let Some(record) = snapshot.get(id) else {
            continue;
        };
        if let Some(hint) = &hint {
            let name_match = fold_phrase(&record.fields.name).contains(hint.as_str());
            let spec_match = record
                .fields
                .non_executable_name
                .as_deref()
                .map(|n| fold_phrase(n).contains(hint.as_str()))
                .unwrap_or(false);
            if !name_match && !spec_match {
                continue;
            }
        }

        let mut weighted = 0.0;
        let mut weights = 0.0;
        let mut notes = Vec::new();
        if let Some(want) = &query.signature {
            let compat = record
                .fields
                .signature
                .as_ref()
                .map(|have| signature_compatibility(want, have))
                .unwrap_or(0.0);
            weighted += tunables.signature_weight * compat;
            weights += tunables.signature_weight;
            notes.push(match compat {
                c if c == 1.0 => "signature exact".to_string(),
                c if c == 0.5 => "signature arity".to_string(),
                _ => "signature mismatch".to_string(),
            });
        }
        if !query_terms.is_empty() {
            let have = record
                .fields
                .signature
                .as_ref()
                .map(|s| folded_terms(&s.terms()))
                .unwrap_or_default();
            let overlap = jaccard(&query_terms, &have);
            weighted += tunables.term_weight * overlap;
            weights += tunables.term_weight;
            notes.push(format!(
                "terms {}/{}",
                query_terms.intersection(&have).count(),
                query_terms.union(&have).count()
            ));
        }

        let score = if weights == 0.0 {
            // pure name-hint query: survival of the filter is the match
            notes.push(format!("name matched {:?}", query.name_hint.as_deref().unwrap_or("")));
            1.0
        } else {
            weighted / weights
        };
        if score == 0.0 {
            continue;
        }
        hits.push(RankedHit {
            id,
            name: record.fields.name.clone(),
            score,
            method: MethodTag::Denotational,
            explanation: notes.join(", "),
        });
    }
    Ok(finalize(hits, k))
}
