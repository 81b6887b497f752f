//! Proximity retrieval: rank every asset by the minimum normalized edit
//! distance between the folded query and the asset's folded descriptors
//! (name, identity, keywords). Deliberately a full scan — this method
//! trades time for coverage.

use crate::fold::fold_phrase;
use crate::store::Snapshot;

use super::{finalize, MethodTag, QueryError, RankedHit, TopologicalQ};

/// Classic two-row Levenshtein over unicode scalar values.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let subst = prev[j] + usize::from(ca != cb);
            cur[j + 1] = subst.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Edit distance scaled into [0, 1] by the longer operand.
pub fn normalized_distance(a: &str, b: &str) -> f64 {
    let longest = a.chars().count().max(b.chars().count());
    if longest == 0 {
        return 0.0;
    }
    levenshtein(a, b) as f64 / longest as f64
}

pub fn search_topological(
    snapshot: &Snapshot,
    query: &TopologicalQ,
    k: usize,
) -> Result<Vec<RankedHit>, QueryError> {
    let needle = fold_phrase(&query.text);
    if needle.is_empty() {
        return Err(QueryError::EmptyQuery("text folds to nothing"));
    }

    let mut hits = Vec::with_capacity(snapshot.len());
    for record in snapshot.records() {
        let mut best: Option<(f64, String, String)> = None;
        let mut consider = |kind: &str, raw: &str| {
            let folded = fold_phrase(raw);
            if folded.is_empty() {
                return;
            }
            let dist = normalized_distance(&needle, &folded);
            if best.as_ref().map(|(d, _, _)| dist < *d).unwrap_or(true) {
                best = Some((dist, kind.to_string(), folded));
            }
        };
        consider("name", &record.fields.name);
        if let Some(identity) = &record.fields.identity {
            consider("identity", identity);
        }
        for keyword in &record.fields.keywords {
            consider("keyword", keyword);
        }
        let Some((dist, kind, descriptor)) = best else {
            continue;
        };
        hits.push(RankedHit {
            id: record.id,
            name: record.fields.name.clone(),
            score: 1.0 - dist,
            method: MethodTag::Topological,
            explanation: format!("closest descriptor: {kind} {descriptor:?}"),
        });
    }
    Ok(finalize(hits, k))
}
