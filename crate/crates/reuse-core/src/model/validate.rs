//! Record validation. Violations are data: callers decide whether to
//! reject, report, or repair.

use serde::{Deserialize, Serialize};

use super::id::Prefix;
use super::record::{AssetRecord, SemanticSignature};
use crate::minilang::{self, HoleMode};

/// One broken invariant: the field it concerns, a stable rule tag, and a
/// human-readable message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub field: &'static str,
    pub rule: &'static str,
    pub message: String,
}

impl Violation {
    fn new(field: &'static str, rule: &'static str, message: impl Into<String>) -> Violation {
        Violation {
            field,
            rule,
            message: message.into(),
        }
    }
}

/// Error wrapper for call sites that require a valid record.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ValidationFailed(pub Vec<Violation>);

impl std::fmt::Display for ValidationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "record failed validation:")?;
        for v in &self.0 {
            write!(f, " [{} {}: {}]", v.field, v.rule, v.message)?;
        }
        Ok(())
    }
}

/// Check every record invariant; an empty result means valid.
pub fn validate_record(record: &AssetRecord) -> Vec<Violation> {
    let mut out = Vec::new();
    let fields = &record.fields;

    if fields.name.trim().is_empty() {
        out.push(Violation::new("name", "empty-name", "name must be non-empty"));
    }

    if !fields.kind.in_vocabulary() {
        out.push(Violation::new(
            "kind",
            "kind-vocabulary-mismatch",
            format!(
                "subkind {:?} is not in the {} vocabulary",
                fields.kind.subkind,
                fields.kind.category
            ),
        ));
    }

    let parsed = fields
        .payload
        .as_deref()
        .map(|src| minilang::parse_program(src, HoleMode::Allow));
    let holes = match &parsed {
        Some(Ok(program)) => program.body.contains_holes(),
        _ => false,
    };
    if let Some(Err(e)) = &parsed {
        out.push(Violation::new(
            "payload",
            "payload-parse-error",
            e.to_string(),
        ));
    }

    match record.id.prefix {
        Prefix::Exe => {
            if parsed.is_none() {
                out.push(Violation::new(
                    "payload",
                    "missing-payload",
                    "Exe assets must carry an executable payload",
                ));
            } else if holes {
                out.push(Violation::new(
                    "payload",
                    "hole-in-executable",
                    "Exe payloads must be hole-free",
                ));
            }
        }
        Prefix::NonExe => {
            if parsed.is_some() {
                out.push(Violation::new(
                    "payload",
                    "unexpected-payload",
                    "nonExe assets must not carry a payload",
                ));
            }
            if fields.signature.is_none() && fields.non_executable_name.is_none() {
                out.push(Violation::new(
                    "signature",
                    "missing-specification",
                    "nonExe assets need a signature or a non_executable_name",
                ));
            }
        }
        Prefix::Pat => {
            if parsed.is_none() {
                out.push(Violation::new(
                    "payload",
                    "missing-payload",
                    "Pat assets must carry a pattern payload",
                ));
            } else if matches!(&parsed, Some(Ok(_))) && !holes {
                out.push(Violation::new(
                    "payload",
                    "missing-hole",
                    "Pat payloads must contain at least one hole",
                ));
            }
        }
        Prefix::Text | Prefix::Key | Prefix::Id => {
            if holes {
                out.push(Violation::new(
                    "payload",
                    "hole-outside-pattern",
                    "only Pat assets may contain pattern holes",
                ));
            }
        }
    }

    if let Some(sig) = &fields.signature {
        out.extend(validate_signature(sig));
    }

    out
}

fn validate_signature(sig: &SemanticSignature) -> Vec<Violation> {
    let mut out = Vec::new();
    if sig.inputs.len() > SemanticSignature::MAX_INPUTS {
        out.push(Violation::new(
            "signature",
            "too-many-inputs",
            format!(
                "{} inputs exceeds the maximum of {}",
                sig.inputs.len(),
                SemanticSignature::MAX_INPUTS
            ),
        ));
    }
    for term in sig.pre_terms.iter().chain(sig.post_terms.iter()) {
        if term.is_empty() {
            out.push(Violation::new(
                "signature",
                "empty-term",
                "signature terms must be non-empty",
            ));
        } else if *term != term.to_lowercase() {
            out.push(Violation::new(
                "signature",
                "term-not-lowercase",
                format!("term {term:?} must be stored lowercase"),
            ));
        }
    }
    out
}
