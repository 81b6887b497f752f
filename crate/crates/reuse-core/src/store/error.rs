//! Store failure modes, mapped onto distinct CLI exit codes and HTTP
//! statuses by the front ends.

use std::path::PathBuf;

use crate::model::{AssetId, ValidationFailed};

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("no repository at {0}")]
    MissingRepository(PathBuf),

    #[error("no asset {0}")]
    UnknownId(AssetId),

    #[error("conflict on {id}: {detail}")]
    Conflict { id: AssetId, detail: String },

    #[error(transparent)]
    Invalid(#[from] ValidationFailed),

    #[error("corrupt store: {file}{}: {detail}", line.map(|n| format!(" line {n}")).unwrap_or_default())]
    Corrupt {
        file: PathBuf,
        line: Option<u64>,
        detail: String,
    },

    #[error("repository is locked by another writer: {0}")]
    Busy(PathBuf),

    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}
