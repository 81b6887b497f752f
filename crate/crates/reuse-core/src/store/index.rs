//! The five per-method index structures. Indexes are rebuildable caches
//! over the records file, maintained incrementally on add/remove and
//! replayable from scratch; the two paths must agree exactly.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::fold::{fold_phrase, fold_tokens};
use crate::minilang::{self, BaseType};
use crate::model::{derive_facets, AssetId, AssetRecord};

/// Entry counts per index, as reported by `rebuild_indexes`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexStats {
    pub text_terms: usize,
    pub text_postings: usize,
    pub keyword_entries: usize,
    pub name_entries: usize,
    pub signature_entries: usize,
    pub structure_entries: usize,
}

/// All secondary indexes over the live records. Persistence lives in the
/// repository layer (tuple keys flatten to entry arrays there).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IndexSet {
    /// Folded term -> postings (id, raw term frequency), id-sorted.
    pub text_index: BTreeMap<String, Vec<(AssetId, u32)>>,
    /// Folded keyword or facet -> ids carrying it.
    pub keyword_index: BTreeMap<String, BTreeSet<AssetId>>,
    /// (folded name phrase, id), sorted.
    pub name_index: Vec<(String, AssetId)>,
    /// (arity, output type) of the declared signature -> ids.
    pub signature_index: BTreeMap<(u8, BaseType), BTreeSet<AssetId>>,
    /// (folded package, folded class) -> ids; one side may be empty.
    pub structure_index: BTreeMap<(String, String), BTreeSet<AssetId>>,
}

/// The folded text bag an asset contributes to the text index: name, label,
/// and payload comments.
pub fn text_terms(record: &AssetRecord) -> BTreeMap<String, u32> {
    let mut counts = BTreeMap::new();
    let mut feed = |text: &str| {
        for term in fold_tokens(text) {
            *counts.entry(term).or_insert(0) += 1;
        }
    };
    feed(&record.fields.name);
    if let Some(label) = &record.fields.label {
        feed(label);
    }
    if let Some(payload) = &record.fields.payload {
        for comment in minilang::extract_comments(payload) {
            feed(&comment);
        }
    }
    counts
}

/// Folded keyword ∪ facet surrogate set for the descriptive index.
pub fn surrogate_terms(record: &AssetRecord) -> BTreeSet<String> {
    let mut terms = BTreeSet::new();
    for keyword in &record.fields.keywords {
        let folded = fold_phrase(keyword);
        if !folded.is_empty() {
            terms.insert(folded);
        }
    }
    for facet in derive_facets(record) {
        let folded = fold_phrase(&facet);
        if !folded.is_empty() {
            terms.insert(folded);
        }
    }
    terms
}

fn structure_key(record: &AssetRecord) -> Option<(String, String)> {
    let package = record.fields.package.as_deref().map(fold_phrase);
    let class = record.fields.class_name.as_deref().map(fold_phrase);
    match (package, class) {
        (None, None) => None,
        (p, c) => Some((p.unwrap_or_default(), c.unwrap_or_default())),
    }
}

impl IndexSet {
    /// Index one record. Caller guarantees the id is not already indexed.
    pub fn apply(&mut self, record: &AssetRecord) {
        let id = record.id;
        for (term, tf) in text_terms(record) {
            let postings = self.text_index.entry(term).or_default();
            let at = postings.partition_point(|(pid, _)| *pid < id);
            postings.insert(at, (id, tf));
        }
        for term in surrogate_terms(record) {
            self.keyword_index.entry(term).or_default().insert(id);
        }
        let name_key = (fold_phrase(&record.fields.name), id);
        let at = self.name_index.partition_point(|e| *e < name_key);
        self.name_index.insert(at, name_key);
        if let Some(sig) = &record.fields.signature {
            self.signature_index
                .entry((sig.inputs.len() as u8, sig.output))
                .or_default()
                .insert(id);
        }
        if let Some(key) = structure_key(record) {
            self.structure_index.entry(key).or_default().insert(id);
        }
    }

    /// Remove one record's entries, dropping emptied buckets so the result
    /// is indistinguishable from never having indexed it.
    pub fn remove(&mut self, record: &AssetRecord) {
        let id = record.id;
        for (term, _) in text_terms(record) {
            if let Some(postings) = self.text_index.get_mut(&term) {
                postings.retain(|(pid, _)| *pid != id);
                if postings.is_empty() {
                    self.text_index.remove(&term);
                }
            }
        }
        for term in surrogate_terms(record) {
            if let Some(ids) = self.keyword_index.get_mut(&term) {
                ids.remove(&id);
                if ids.is_empty() {
                    self.keyword_index.remove(&term);
                }
            }
        }
        self.name_index.retain(|(_, nid)| *nid != id);
        if let Some(sig) = &record.fields.signature {
            let key = (sig.inputs.len() as u8, sig.output);
            if let Some(ids) = self.signature_index.get_mut(&key) {
                ids.remove(&id);
                if ids.is_empty() {
                    self.signature_index.remove(&key);
                }
            }
        }
        if let Some(key) = structure_key(record) {
            if let Some(ids) = self.structure_index.get_mut(&key) {
                ids.remove(&id);
                if ids.is_empty() {
                    self.structure_index.remove(&key);
                }
            }
        }
    }

    /// Replay every record through `apply` from an empty set.
    pub fn build<'a>(records: impl Iterator<Item = &'a AssetRecord>) -> IndexSet {
        let mut set = IndexSet::default();
        for record in records {
            set.apply(record);
        }
        set
    }

    pub fn stats(&self) -> IndexStats {
        IndexStats {
            text_terms: self.text_index.len(),
            text_postings: self.text_index.values().map(Vec::len).sum(),
            keyword_entries: self.keyword_index.len(),
            name_entries: self.name_index.len(),
            signature_entries: self.signature_index.values().map(BTreeSet::len).sum(),
            structure_entries: self.structure_index.values().map(BTreeSet::len).sum(),
        }
    }
}
