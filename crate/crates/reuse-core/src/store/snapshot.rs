//! Immutable read view of the repository: live records, the index set, and
//! derived per-record caches (text vectors, parsed payloads). Engines only
//! ever see a snapshot, so retrieval is a pure function of one of these.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::minilang::Program;
use crate::model::{AssetId, AssetRecord, Prefix};

use super::index::{text_terms, IndexSet};

#[derive(Debug, Clone, Default)]
pub struct Snapshot {
    records: BTreeMap<AssetId, Arc<AssetRecord>>,
    indexes: IndexSet,
    /// Forward text vectors (folded term -> raw tf) per record.
    doc_terms: HashMap<AssetId, Arc<BTreeMap<String, u32>>>,
    /// Parsed payloads, holes permitted; absent when no payload or malformed.
    programs: HashMap<AssetId, Arc<Program>>,
    by_prefix: HashMap<Prefix, BTreeSet<AssetId>>,
}

impl Snapshot {
    pub fn from_records(records: impl IntoIterator<Item = AssetRecord>) -> Snapshot {
        let mut snapshot = Snapshot::default();
        for record in records {
            snapshot.apply(Arc::new(record));
        }
        snapshot
    }

    /// Like `from_records` but trusting a pre-built index set (the loaded
    /// cache path). Derived caches are always recomputed.
    pub(crate) fn with_indexes(
        records: BTreeMap<AssetId, Arc<AssetRecord>>,
        indexes: IndexSet,
    ) -> Snapshot {
        let mut snapshot = Snapshot {
            indexes,
            ..Snapshot::default()
        };
        for record in records.into_values() {
            snapshot.apply_derived(&record);
            snapshot.records.insert(record.id, record);
        }
        snapshot
    }

    fn apply_derived(&mut self, record: &Arc<AssetRecord>) {
        let id = record.id;
        self.doc_terms.insert(id, Arc::new(text_terms(record)));
        if let Some(program) = record.parsed_payload() {
            self.programs.insert(id, Arc::new(program));
        }
        self.by_prefix.entry(id.prefix).or_default().insert(id);
    }

    /// Insert one record and index it. Caller guarantees the id is fresh.
    pub(crate) fn apply(&mut self, record: Arc<AssetRecord>) {
        self.indexes.apply(&record);
        self.apply_derived(&record);
        self.records.insert(record.id, record);
    }

    pub(crate) fn remove(&mut self, id: AssetId) -> Option<Arc<AssetRecord>> {
        let record = self.records.remove(&id)?;
        self.indexes.remove(&record);
        self.doc_terms.remove(&id);
        self.programs.remove(&id);
        if let Some(ids) = self.by_prefix.get_mut(&id.prefix) {
            ids.remove(&id);
            if ids.is_empty() {
                self.by_prefix.remove(&id.prefix);
            }
        }
        Some(record)
    }

    pub(crate) fn set_indexes(&mut self, indexes: IndexSet) {
        self.indexes = indexes;
    }

    pub fn get(&self, id: AssetId) -> Option<&Arc<AssetRecord>> {
        self.records.get(&id)
    }

    /// Live records in id order (rendered-form ascending).
    pub fn records(&self) -> impl Iterator<Item = &Arc<AssetRecord>> {
        self.records.values()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn indexes(&self) -> &IndexSet {
        &self.indexes
    }

    pub fn doc_terms(&self, id: AssetId) -> Option<&Arc<BTreeMap<String, u32>>> {
        self.doc_terms.get(&id)
    }

    pub fn program(&self, id: AssetId) -> Option<&Arc<Program>> {
        self.programs.get(&id)
    }

    /// Ids of one prefix in id order; the per-method candidate sets.
    pub fn ids_with_prefix(&self, prefix: Prefix) -> impl Iterator<Item = AssetId> + '_ {
        self.by_prefix
            .get(&prefix)
            .into_iter()
            .flat_map(|ids| ids.iter().copied())
    }

    pub fn sequences(&self) -> impl Iterator<Item = u64> + '_ {
        self.records.keys().map(|id| id.sequence)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AssetFields, AssetKind, Category};

    fn record(prefix: Prefix, seq: u64, name: &str) -> AssetRecord {
        let mut fields = AssetFields::new(name, AssetKind::new(Category::Implemented, "System"));
        if prefix == Prefix::Exe {
            fields.payload = Some("fn(x: Int) -> Int { x * 2 } // doubler".into());
        }
        AssetRecord {
            id: AssetId::new(prefix, seq),
            fields,
            created_at: 0,
        }
    }

    #[test]
    fn caches_track_membership() {
        let mut snapshot = Snapshot::from_records([
            record(Prefix::Text, 1, "alpha"),
            record(Prefix::Exe, 2, "doubler"),
        ]);
        assert_eq!(snapshot.len(), 2);
        let exe_id = AssetId::new(Prefix::Exe, 2);
        assert!(snapshot.program(exe_id).is_some());
        assert!(snapshot.doc_terms(exe_id).is_some());
        assert_eq!(snapshot.ids_with_prefix(Prefix::Exe).count(), 1);

        snapshot.remove(exe_id).unwrap();
        assert!(snapshot.program(exe_id).is_none());
        assert!(snapshot.doc_terms(exe_id).is_none());
        assert_eq!(snapshot.ids_with_prefix(Prefix::Exe).count(), 0);
        assert_eq!(snapshot.indexes().stats().name_entries, 1);
    }

    #[test]
    fn with_indexes_matches_from_records() {
        let records = vec![
            record(Prefix::Text, 1, "alpha"),
            record(Prefix::Exe, 2, "doubler"),
        ];
        let reference = Snapshot::from_records(records.clone());
        let map: BTreeMap<AssetId, Arc<AssetRecord>> = records
            .into_iter()
            .map(|r| (r.id, Arc::new(r)))
            .collect();
        let indexes = IndexSet::build(map.values().map(|r| r.as_ref()));
        let loaded = Snapshot::with_indexes(map, indexes);
        assert_eq!(loaded.indexes(), reference.indexes());
        assert_eq!(loaded.len(), reference.len());
    }
}
