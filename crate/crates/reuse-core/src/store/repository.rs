//! The durable store. Source of truth is `records.jsonl` (appended records
//! and tombstones); the manifest binds a checksum, the next sequence number,
//! and retired sequences; `index/` holds rebuildable caches. Writers take an
//! advisory file lock per mutation and re-read the log if another process
//! changed it; readers work from the in-memory snapshot.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::os::fd::AsRawFd;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::minilang::BaseType;
use crate::model::{
    infer_prefix, validate_record, AssetFields, AssetId, AssetRecord, Category, ValidationFailed,
};

use super::error::StoreError;
use super::index::{IndexSet, IndexStats};
use super::snapshot::Snapshot;

const FORMAT_VERSION: u32 = 1;
const RECORDS_FILE: &str = "records.jsonl";
const MANIFEST_FILE: &str = "manifest";
const INDEX_DIR: &str = "index";
const LOCK_FILE: &str = "lock";

/// Timestamp source; `Fixed` makes golden outputs reproducible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clock {
    System,
    Fixed(i64),
}

impl Clock {
    pub fn now(&self) -> i64 {
        match self {
            Clock::System => SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs() as i64)
                .unwrap_or(0),
            Clock::Fixed(t) => *t,
        }
    }
}

/// Filter for `list_assets`; empty filter admits everything. String
/// comparisons are fold-insensitive.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListFilter {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<Category>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subkind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prefix: Option<String>,
}

impl ListFilter {
    pub fn admits(&self, record: &AssetRecord) -> bool {
        use crate::fold::fold_phrase;
        if let Some(category) = self.category {
            if record.fields.kind.category != category {
                return false;
            }
        }
        if let Some(subkind) = &self.subkind {
            if fold_phrase(&record.fields.kind.subkind) != fold_phrase(subkind) {
                return false;
            }
        }
        if let Some(language) = &self.language {
            match &record.fields.language {
                Some(have) if fold_phrase(have) == fold_phrase(language) => {}
                _ => return false,
            }
        }
        if let Some(prefix) = &self.prefix {
            if record.id.prefix.render() != prefix {
                return false;
            }
        }
        true
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    format_version: u32,
    next_sequence: u64,
    dead_sequences: BTreeSet<u64>,
    records_sha256: String,
    record_count: usize,
}

/// New records and deletions share one log; a tombstone line is
/// `{"deleted":"<id>"}` and nothing else.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Tombstone {
    deleted: AssetId,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum LogLine {
    Tombstone(Tombstone),
    Record(AssetRecord),
}

#[derive(Debug, Serialize, Deserialize)]
struct IndexFile<T> {
    format_version: u32,
    records_sha256: String,
    entries: T,
}

#[derive(Debug)]
pub struct Repository {
    root: PathBuf,
    snapshot: Arc<Snapshot>,
    next_sequence: u64,
    dead_sequences: BTreeSet<u64>,
    live_sequences: BTreeSet<u64>,
    records_sha256: String,
    clock: Clock,
}

/// Everything derivable from the on-disk files; shared by open and resync.
struct LoadedState {
    snapshot: Snapshot,
    next_sequence: u64,
    dead_sequences: BTreeSet<u64>,
    live_sequences: BTreeSet<u64>,
    records_sha256: String,
}

impl Repository {
    pub fn open(root: impl Into<PathBuf>, create_if_missing: bool) -> Result<Repository, StoreError> {
        let root = root.into();
        let manifest_path = root.join(MANIFEST_FILE);
        let records_path = root.join(RECORDS_FILE);
        if !manifest_path.exists() {
            if records_path.exists() {
                return Err(StoreError::Corrupt {
                    file: manifest_path,
                    line: None,
                    detail: "records file present but manifest missing".into(),
                });
            }
            if !create_if_missing {
                return Err(StoreError::MissingRepository(root));
            }
            initialize(&root)?;
        }
        let state = load_state(&root)?;
        Ok(Repository {
            root,
            snapshot: Arc::new(state.snapshot),
            next_sequence: state.next_sequence,
            dead_sequences: state.dead_sequences,
            live_sequences: state.live_sequences,
            records_sha256: state.records_sha256,
            clock: Clock::System,
        })
    }

    pub fn with_clock(mut self, clock: Clock) -> Repository {
        self.clock = clock;
        self
    }

    pub fn set_clock(&mut self, clock: Clock) {
        self.clock = clock;
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Immutable view for engines; cheap to clone and hold across calls.
    pub fn snapshot(&self) -> Arc<Snapshot> {
        Arc::clone(&self.snapshot)
    }

    pub fn record_count(&self) -> usize {
        self.snapshot.len()
    }

    pub fn next_sequence(&self) -> u64 {
        self.next_sequence
    }

    pub fn add_asset(
        &mut self,
        fields: AssetFields,
        explicit_id: Option<AssetId>,
    ) -> Result<AssetId, StoreError> {
        let _lock = WriteLock::acquire(&self.root)?;
        self.resync_if_changed()?;

        let id = match explicit_id {
            Some(id) => {
                if self.live_sequences.contains(&id.sequence) {
                    return Err(StoreError::Conflict {
                        id,
                        detail: format!("sequence {} is already in use", id.sequence),
                    });
                }
                if self.dead_sequences.contains(&id.sequence) {
                    return Err(StoreError::Conflict {
                        id,
                        detail: format!("sequence {} was retired by a deletion", id.sequence),
                    });
                }
                id
            }
            None => AssetId::new(infer_prefix(&fields), self.next_sequence),
        };

        let record = AssetRecord {
            id,
            fields,
            created_at: self.clock.now(),
        };
        let violations = validate_record(&record);
        if !violations.is_empty() {
            return Err(ValidationFailed(violations).into());
        }

        let mut line = serde_json::to_string(&record).map_err(io_invalid)?;
        line.push('\n');
        append_fsync(&self.records_path(), line.as_bytes())?;

        Arc::make_mut(&mut self.snapshot).apply(Arc::new(record));
        self.live_sequences.insert(id.sequence);
        self.next_sequence = self.next_sequence.max(id.sequence + 1);
        self.persist_caches()?;
        Ok(id)
    }

    pub fn get_asset(&self, id: AssetId) -> Result<Arc<AssetRecord>, StoreError> {
        self.snapshot
            .get(id)
            .cloned()
            .ok_or(StoreError::UnknownId(id))
    }

    pub fn remove_asset(&mut self, id: AssetId) -> Result<AssetRecord, StoreError> {
        let _lock = WriteLock::acquire(&self.root)?;
        self.resync_if_changed()?;

        if self.snapshot.get(id).is_none() {
            return Err(StoreError::UnknownId(id));
        }
        let mut line = serde_json::to_string(&Tombstone { deleted: id }).map_err(io_invalid)?;
        line.push('\n');
        append_fsync(&self.records_path(), line.as_bytes())?;

        let removed = Arc::make_mut(&mut self.snapshot)
            .remove(id)
            .expect("checked live above");
        self.live_sequences.remove(&id.sequence);
        self.dead_sequences.insert(id.sequence);
        self.persist_caches()?;
        Ok(Arc::try_unwrap(removed).unwrap_or_else(|arc| (*arc).clone()))
    }

    pub fn list_assets(&self, filter: &ListFilter) -> Vec<Arc<AssetRecord>> {
        self.snapshot
            .records()
            .filter(|r| filter.admits(r))
            .cloned()
            .collect()
    }

    /// Replay all live records into fresh indexes, compact the log (drop
    /// tombstones), persist, and report per-index sizes.
    pub fn rebuild_indexes(&mut self) -> Result<IndexStats, StoreError> {
        let _lock = WriteLock::acquire(&self.root)?;
        self.resync_if_changed()?;

        let rebuilt = IndexSet::build(self.snapshot.records().map(|r| r.as_ref()));
        let snapshot = Arc::make_mut(&mut self.snapshot);
        snapshot.set_indexes(rebuilt);

        let mut content = String::new();
        for record in snapshot.records() {
            content.push_str(&serde_json::to_string(record.as_ref()).map_err(io_invalid)?);
            content.push('\n');
        }
        write_atomic(&self.records_path(), content.as_bytes())?;
        self.persist_caches()?;
        Ok(self.snapshot.indexes().stats())
    }

    fn records_path(&self) -> PathBuf {
        self.root.join(RECORDS_FILE)
    }

    /// Another process may have appended since we last read; reload when the
    /// log bytes changed. Called only under the write lock.
    fn resync_if_changed(&mut self) -> Result<(), StoreError> {
        let bytes = fs::read(self.records_path())?;
        if sha_hex(&bytes) == self.records_sha256 {
            return Ok(());
        }
        let state = load_state(&self.root)?;
        self.snapshot = Arc::new(state.snapshot);
        self.next_sequence = state.next_sequence;
        self.dead_sequences = state.dead_sequences;
        self.live_sequences = state.live_sequences;
        self.records_sha256 = state.records_sha256;
        Ok(())
    }

    /// Rewrite manifest and index files to match the current snapshot.
    fn persist_caches(&mut self) -> Result<(), StoreError> {
        let bytes = fs::read(self.records_path())?;
        self.records_sha256 = sha_hex(&bytes);
        persist_indexes(&self.root, self.snapshot.indexes(), &self.records_sha256)?;
        let manifest = Manifest {
            format_version: FORMAT_VERSION,
            next_sequence: self.next_sequence,
            dead_sequences: self.dead_sequences.clone(),
            records_sha256: self.records_sha256.clone(),
            record_count: self.snapshot.len(),
        };
        write_atomic(
            &self.root.join(MANIFEST_FILE),
            serde_json::to_string_pretty(&manifest)
                .map_err(io_invalid)?
                .as_bytes(),
        )?;
        Ok(())
    }
}

fn initialize(root: &Path) -> Result<(), StoreError> {
    fs::create_dir_all(root)?;
    fs::create_dir_all(root.join(INDEX_DIR))?;
    write_atomic(&root.join(RECORDS_FILE), b"")?;
    let sha = sha_hex(b"");
    persist_indexes(root, &IndexSet::default(), &sha)?;
    let manifest = Manifest {
        format_version: FORMAT_VERSION,
        next_sequence: 0,
        dead_sequences: BTreeSet::new(),
        records_sha256: sha,
        record_count: 0,
    };
    write_atomic(
        &root.join(MANIFEST_FILE),
        serde_json::to_string_pretty(&manifest)
            .map_err(io_invalid)?
            .as_bytes(),
    )?;
    Ok(())
}

fn load_state(root: &Path) -> Result<LoadedState, StoreError> {
    let manifest_path = root.join(MANIFEST_FILE);
    let manifest_bytes = fs::read(&manifest_path).map_err(|e| StoreError::Corrupt {
        file: manifest_path.clone(),
        line: None,
        detail: e.to_string(),
    })?;
    let manifest: Manifest =
        serde_json::from_slice(&manifest_bytes).map_err(|e| StoreError::Corrupt {
            file: manifest_path.clone(),
            line: None,
            detail: e.to_string(),
        })?;
    if manifest.format_version != FORMAT_VERSION {
        return Err(StoreError::Corrupt {
            file: manifest_path,
            line: None,
            detail: format!("unsupported format_version {}", manifest.format_version),
        });
    }

    let records_path = root.join(RECORDS_FILE);
    let bytes = fs::read(&records_path).map_err(|e| StoreError::Corrupt {
        file: records_path.clone(),
        line: None,
        detail: e.to_string(),
    })?;
    let records_sha256 = sha_hex(&bytes);

    let mut records: BTreeMap<AssetId, Arc<AssetRecord>> = BTreeMap::new();
    let mut dead_sequences = manifest.dead_sequences.clone();
    let mut max_sequence: Option<u64> = None;
    let text = String::from_utf8(bytes).map_err(|e| StoreError::Corrupt {
        file: records_path.clone(),
        line: None,
        detail: format!("not UTF-8: {e}"),
    })?;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx as u64 + 1;
        if line.trim().is_empty() {
            continue;
        }
        let corrupt = |detail: String| StoreError::Corrupt {
            file: records_path.clone(),
            line: Some(line_no),
            detail,
        };
        let parsed: LogLine = serde_json::from_str(line).map_err(|e| corrupt(e.to_string()))?;
        match parsed {
            LogLine::Record(record) => {
                let seq = record.id.sequence;
                max_sequence = Some(max_sequence.map_or(seq, |m| m.max(seq)));
                let duplicate = records.keys().any(|k| k.sequence == seq)
                    || dead_sequences.contains(&seq);
                if duplicate {
                    return Err(corrupt(format!(
                        "sequence {seq} appears more than once"
                    )));
                }
                records.insert(record.id, Arc::new(record));
            }
            LogLine::Tombstone(t) => {
                let removed = records.remove(&t.deleted).ok_or_else(|| {
                    corrupt(format!("tombstone for unknown id {}", t.deleted))
                })?;
                dead_sequences.insert(removed.id.sequence);
            }
        }
    }

    let next_sequence = manifest
        .next_sequence
        .max(max_sequence.map_or(0, |m| m + 1))
        .max(dead_sequences.iter().next_back().map_or(0, |m| m + 1));
    let live_sequences = records.keys().map(|id| id.sequence).collect();

    // A checksum mismatch means the log changed behind the manifest (crash
    // window or external edit): the index cache is stale, rebuild instead.
    let cached = if manifest.records_sha256 == records_sha256 {
        load_indexes(root, &records_sha256)
    } else {
        None
    };
    let indexes =
        cached.unwrap_or_else(|| IndexSet::build(records.values().map(|r| r.as_ref())));
    let snapshot = Snapshot::with_indexes(records, indexes);

    Ok(LoadedState {
        snapshot,
        next_sequence,
        dead_sequences,
        live_sequences,
        records_sha256,
    })
}

// --- index persistence -----------------------------------------------------
// Tuple keys flatten into entry arrays; each file records the log checksum it
// was built from so stale caches are detected and ignored.

type TextEntries = Vec<(String, Vec<(AssetId, u32)>)>;
type KeywordEntries = Vec<(String, Vec<AssetId>)>;
type NameEntries = Vec<(String, AssetId)>;
type SignatureEntries = Vec<(u8, BaseType, Vec<AssetId>)>;
type StructureEntries = Vec<(String, String, Vec<AssetId>)>;

fn persist_indexes(root: &Path, indexes: &IndexSet, sha: &str) -> Result<(), StoreError> {
    let dir = root.join(INDEX_DIR);
    fs::create_dir_all(&dir)?;
    let text: TextEntries = indexes
        .text_index
        .iter()
        .map(|(term, postings)| (term.clone(), postings.clone()))
        .collect();
    let keyword: KeywordEntries = indexes
        .keyword_index
        .iter()
        .map(|(term, ids)| (term.clone(), ids.iter().copied().collect()))
        .collect();
    let name: NameEntries = indexes.name_index.clone();
    let signature: SignatureEntries = indexes
        .signature_index
        .iter()
        .map(|((arity, output), ids)| (*arity, *output, ids.iter().copied().collect()))
        .collect();
    let structure: StructureEntries = indexes
        .structure_index
        .iter()
        .map(|((p, c), ids)| (p.clone(), c.clone(), ids.iter().copied().collect()))
        .collect();

    write_index_file(&dir.join("text.json"), sha, &text)?;
    write_index_file(&dir.join("keyword.json"), sha, &keyword)?;
    write_index_file(&dir.join("name.json"), sha, &name)?;
    write_index_file(&dir.join("signature.json"), sha, &signature)?;
    write_index_file(&dir.join("structure.json"), sha, &structure)?;
    Ok(())
}

fn write_index_file<T: Serialize>(path: &Path, sha: &str, entries: &T) -> Result<(), StoreError> {
    let file = IndexFile {
        format_version: FORMAT_VERSION,
        records_sha256: sha.to_string(),
        entries,
    };
    write_atomic(path, serde_json::to_string(&file).map_err(io_invalid)?.as_bytes())
}

/// Load the index cache if every file is present, parseable, and built from
/// the given log checksum; otherwise `None` (caller rebuilds). Damaged
/// caches are never an error.
fn load_indexes(root: &Path, sha: &str) -> Option<IndexSet> {
    let dir = root.join(INDEX_DIR);
    let text: TextEntries = read_index_file(&dir.join("text.json"), sha)?;
    let keyword: KeywordEntries = read_index_file(&dir.join("keyword.json"), sha)?;
    let name: NameEntries = read_index_file(&dir.join("name.json"), sha)?;
    let signature: SignatureEntries = read_index_file(&dir.join("signature.json"), sha)?;
    let structure: StructureEntries = read_index_file(&dir.join("structure.json"), sha)?;
    Some(IndexSet {
        text_index: text.into_iter().collect(),
        keyword_index: keyword
            .into_iter()
            .map(|(term, ids)| (term, ids.into_iter().collect()))
            .collect(),
        name_index: name,
        signature_index: signature
            .into_iter()
            .map(|(arity, output, ids)| ((arity, output), ids.into_iter().collect()))
            .collect(),
        structure_index: structure
            .into_iter()
            .map(|(p, c, ids)| ((p, c), ids.into_iter().collect()))
            .collect(),
    })
}

fn read_index_file<T: serde::de::DeserializeOwned>(path: &Path, sha: &str) -> Option<T> {
    let bytes = fs::read(path).ok()?;
    let file: IndexFile<T> = serde_json::from_slice(&bytes).ok()?;
    if file.format_version != FORMAT_VERSION || file.records_sha256 != sha {
        tracing::debug!(path = %path.display(), "stale index cache ignored");
        return None;
    }
    Some(file.entries)
}

// --- filesystem helpers ------------------------------------------------------

fn sha_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn io_invalid(e: serde_json::Error) -> StoreError {
    StoreError::Io(std::io::Error::new(std::io::ErrorKind::InvalidData, e))
}

fn append_fsync(path: &Path, bytes: &[u8]) -> Result<(), StoreError> {
    let mut file = OpenOptions::new().append(true).open(path)?;
    file.write_all(bytes)?;
    file.sync_all()?;
    Ok(())
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), StoreError> {
    let tmp = path.with_extension("tmp");
    {
        let mut file = File::create(&tmp)?;
        file.write_all(bytes)?;
        file.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    if let Some(parent) = path.parent() {
        if let Ok(dir) = File::open(parent) {
            let _ = dir.sync_all();
        }
    }
    Ok(())
}

/// Advisory exclusive lock on `<root>/lock`, released on drop. Non-blocking:
/// a held lock surfaces as `Busy` immediately.
struct WriteLock {
    _file: File,
}

impl WriteLock {
    fn acquire(root: &Path) -> Result<WriteLock, StoreError> {
        let path = root.join(LOCK_FILE);
        let file = OpenOptions::new()
            .create(true)
            .write(true)
            .truncate(false)
            .open(&path)?;
        let rc = unsafe { libc::flock(file.as_raw_fd(), libc::LOCK_EX | libc::LOCK_NB) };
        if rc != 0 {
            let err = std::io::Error::last_os_error();
            if err.raw_os_error() == Some(libc::EWOULDBLOCK) {
                return Err(StoreError::Busy(path));
            }
            return Err(err.into());
        }
        Ok(WriteLock { _file: file })
    }
}

impl Drop for WriteLock {
    fn drop(&mut self) {
        unsafe {
            libc::flock(self._file.as_raw_fd(), libc::LOCK_UN);
        }
    }
}
