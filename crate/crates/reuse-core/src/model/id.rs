//! Asset identifiers: a kind prefix plus a sequence number, rendered
//! `<prefix>_<sequence>`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Dominant-kind tag embedded in every asset id. The rendered spelling is
/// case-sensitive and part of the interchange format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Prefix {
    Text,
    Key,
    Exe,
    NonExe,
    Id,
    Pat,
}

impl Prefix {
    pub const ALL: [Prefix; 6] = [
        Prefix::Text,
        Prefix::Key,
        Prefix::Exe,
        Prefix::NonExe,
        Prefix::Id,
        Prefix::Pat,
    ];

    pub fn render(&self) -> &'static str {
        match self {
            Prefix::Text => "Text",
            Prefix::Key => "Key",
            Prefix::Exe => "Exe",
            Prefix::NonExe => "nonExe",
            Prefix::Id => "Id",
            Prefix::Pat => "Pat",
        }
    }

    pub fn parse(s: &str) -> Option<Prefix> {
        Prefix::ALL.into_iter().find(|p| p.render() == s)
    }
}

impl fmt::Display for Prefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.render())
    }
}

/// Unique asset address. Ordering follows the rendered string so listings
/// match what a user sees on disk (`Exe_10` sorts before `Exe_9`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AssetId {
    pub prefix: Prefix,
    pub sequence: u64,
}

impl AssetId {
    pub fn new(prefix: Prefix, sequence: u64) -> AssetId {
        AssetId { prefix, sequence }
    }

    pub fn render(&self) -> String {
        format!("{}_{}", self.prefix.render(), self.sequence)
    }
}

impl fmt::Display for AssetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.prefix.render(), self.sequence)
    }
}

impl PartialOrd for AssetId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AssetId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.render().cmp(&other.render())
    }
}

/// Why a string is not a valid asset id.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid asset id {input:?}: {reason}")]
pub struct ParseIdError {
    pub input: String,
    pub reason: &'static str,
}

impl FromStr for AssetId {
    type Err = ParseIdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason| ParseIdError {
            input: s.to_string(),
            reason,
        };
        let (prefix_part, seq_part) = s
            .split_once('_')
            .ok_or_else(|| err("expected <prefix>_<sequence>"))?;
        let prefix = Prefix::parse(prefix_part)
            .ok_or_else(|| err("unknown prefix (expected Text, Key, Exe, nonExe, Id, or Pat)"))?;
        if seq_part.is_empty() {
            return Err(err("missing sequence number"));
        }
        if seq_part.starts_with('-') {
            return Err(err("sequence must be non-negative"));
        }
        // Leading zeros would break render/parse round-tripping.
        if seq_part.len() > 1 && seq_part.starts_with('0') {
            return Err(err("sequence must not have leading zeros"));
        }
        let sequence: u64 = seq_part
            .parse()
            .map_err(|_| err("sequence is not a decimal integer in range"))?;
        Ok(AssetId { prefix, sequence })
    }
}

impl Serialize for AssetId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.render())
    }
}

impl<'de> Deserialize<'de> for AssetId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
