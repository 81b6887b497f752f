//! Asset records: the unit of storage and retrieval.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::id::{AssetId, Prefix};
use super::kind::AssetKind;
use crate::minilang::{self, BaseType, HoleMode};

/// Declared behaviourial interface of a non-executable asset: parameter and
/// result types plus free-form pre/post condition terms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemanticSignature {
    pub inputs: Vec<BaseType>,
    pub output: BaseType,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub pre_terms: BTreeSet<String>,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub post_terms: BTreeSet<String>,
}

impl SemanticSignature {
    pub const MAX_INPUTS: usize = 8;

    /// Union of pre and post condition terms; the denotational engine
    /// compares these as a single vocabulary.
    pub fn terms(&self) -> BTreeSet<&str> {
        self.pre_terms
            .iter()
            .chain(self.post_terms.iter())
            .map(String::as_str)
            .collect()
    }
}

/// Everything a caller supplies about an asset. The store adds the id and
/// timestamp. Unknown fields survive read/rewrite cycles via `extra`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssetFields {
    pub name: String,
    pub kind: AssetKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub keywords: BTreeSet<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub executable_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub non_executable_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub package: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern_family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payload: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<SemanticSignature>,
    #[serde(flatten)]
    pub extra: BTreeMap<String, serde_json::Value>,
}

impl AssetFields {
    pub fn new(name: impl Into<String>, kind: AssetKind) -> AssetFields {
        AssetFields {
            name: name.into(),
            kind,
            language: None,
            label: None,
            keywords: BTreeSet::new(),
            executable_name: None,
            non_executable_name: None,
            identity: None,
            package: None,
            class_name: None,
            pattern_family: None,
            payload: None,
            signature: None,
            extra: BTreeMap::new(),
        }
    }
}

/// A stored asset: caller fields plus the store-assigned id and timestamp
/// (integer UTC seconds).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssetRecord {
    pub id: AssetId,
    #[serde(flatten)]
    pub fields: AssetFields,
    pub created_at: i64,
}

impl AssetRecord {
    /// Payload parsed with holes permitted; `None` when absent or malformed
    /// (validation reports the latter).
    pub fn parsed_payload(&self) -> Option<minilang::Program> {
        let src = self.fields.payload.as_deref()?;
        minilang::parse_program(src, HoleMode::Allow).ok()
    }
}

/// Dominant-kind prefix for a generated id: pattern payloads win, then
/// executables, then specification carriers, then whichever descriptive
/// metadata field is populated (label before keywords before identity).
pub fn infer_prefix(fields: &AssetFields) -> Prefix {
    if let Some(payload) = &fields.payload {
        if let Ok(program) = minilang::parse_program(payload, HoleMode::Allow) {
            if program.body.contains_holes() {
                return Prefix::Pat;
            }
        }
        return Prefix::Exe;
    }
    if fields.signature.is_some() || fields.non_executable_name.is_some() {
        return Prefix::NonExe;
    }
    if fields.label.is_some() {
        return Prefix::Text;
    }
    if !fields.keywords.is_empty() {
        return Prefix::Key;
    }
    if fields.identity.is_some() {
        return Prefix::Id;
    }
    Prefix::Text
}

#[cfg(test)]
mod tests {
    use super::super::kind::Category;
    use super::*;

    fn base_fields() -> AssetFields {
        AssetFields::new("sample", AssetKind::new(Category::Implemented, "System"))
    }

    #[test]
    fn prefix_priority_ladder() {
        let mut f = base_fields();
        assert_eq!(infer_prefix(&f), Prefix::Text);

        f.identity = Some("alias".into());
        assert_eq!(infer_prefix(&f), Prefix::Id);

        f.keywords.insert("agility".into());
        assert_eq!(infer_prefix(&f), Prefix::Key);

        f.label = Some("free text".into());
        assert_eq!(infer_prefix(&f), Prefix::Text);

        f.non_executable_name = Some("spec".into());
        assert_eq!(infer_prefix(&f), Prefix::NonExe);

        f.payload = Some("fn(x: Int) -> Int { x }".into());
        assert_eq!(infer_prefix(&f), Prefix::Exe);

        f.payload = Some("fn(x: Int) -> Int { ?body }".into());
        assert_eq!(infer_prefix(&f), Prefix::Pat);
    }

    #[test]
    fn record_json_round_trips_and_preserves_unknown_fields() {
        let line = r#"{"id":"Key_6522","name":"feedback","kind":{"category":"Implemented","subkind":"System"},"language":"Java","keywords":["Agility"],"vendor_note":"kept","created_at":1700000000}"#;
        let record: AssetRecord = serde_json::from_str(line).unwrap();
        assert_eq!(record.id.render(), "Key_6522");
        assert_eq!(record.fields.extra["vendor_note"], "kept");

        let rewritten = serde_json::to_string(&record).unwrap();
        let reparsed: AssetRecord = serde_json::from_str(&rewritten).unwrap();
        assert_eq!(reparsed, record);
        assert!(rewritten.contains("vendor_note"));
    }

    #[test]
    fn empty_collections_are_omitted() {
        let record = AssetRecord {
            id: AssetId::new(Prefix::Text, 0),
            fields: base_fields(),
            created_at: 0,
        };
        let json = serde_json::to_string(&record).unwrap();
        assert!(!json.contains("keywords"));
        assert!(!json.contains("language"));
    }

    #[test]
    fn signature_terms_union() {
        let sig = SemanticSignature {
            inputs: vec![BaseType::Int, BaseType::Int],
            output: BaseType::Int,
            pre_terms: ["sorted".to_string()].into(),
            post_terms: ["sorted".to_string(), "sum".to_string()].into(),
        };
        let terms = sig.terms();
        assert_eq!(terms.len(), 2);
        assert!(terms.contains("sorted") && terms.contains("sum"));
    }
}
