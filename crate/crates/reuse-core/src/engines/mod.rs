//! The six retrieval engines. Each is a pure function of an immutable
//! snapshot and a typed query, returning hits sorted by score descending
//! with ties broken by rendered id ascending.

mod denotational;
mod descriptive;
mod informational;
mod instantiate;
mod operational;
mod structural;
mod topological;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::minilang::{ParseError, Value};
use crate::model::{AssetId, SemanticSignature};

pub use denotational::search_denotational;
pub use descriptive::search_descriptive;
pub use informational::search_informational;
pub use instantiate::retrieve_and_instantiate;
pub use operational::search_operational;
pub use structural::search_structural;
pub use topological::{levenshtein, normalized_distance, search_topological};

/// Which engine produced a hit.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum MethodTag {
    Informational,
    Descriptive,
    Operational,
    Denotational,
    Topological,
    Structural,
}

impl MethodTag {
    pub const ALL: [MethodTag; 6] = [
        MethodTag::Informational,
        MethodTag::Descriptive,
        MethodTag::Operational,
        MethodTag::Denotational,
        MethodTag::Topological,
        MethodTag::Structural,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MethodTag::Informational => "informational",
            MethodTag::Descriptive => "descriptive",
            MethodTag::Operational => "operational",
            MethodTag::Denotational => "denotational",
            MethodTag::Topological => "topological",
            MethodTag::Structural => "structural",
        }
    }
}

impl std::fmt::Display for MethodTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for MethodTag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MethodTag::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method {s:?}"))
    }
}

/// One behaviour probe: argument vector and the output a matching program
/// must produce.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    pub args: Vec<Value>,
    pub expected: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InformationalQ {
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DescriptiveQ {
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub keywords: BTreeSet<String>,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub facets: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OperationalQ {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name_hint: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<Sample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DenotationalQ {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name_hint: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<SemanticSignature>,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub spec_terms: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologicalQ {
    pub text: String,
}

/// Structural selectors; `shape` is mini-language source, holes allowed.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct StructuralQ {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub package: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern_family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<String>,
}

/// A typed query, tagged for interchange with `method`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum QueryVariant {
    Informational(InformationalQ),
    Descriptive(DescriptiveQ),
    Operational(OperationalQ),
    Denotational(DenotationalQ),
    Topological(TopologicalQ),
    Structural(StructuralQ),
}

impl QueryVariant {
    pub fn method(&self) -> MethodTag {
        match self {
            QueryVariant::Informational(_) => MethodTag::Informational,
            QueryVariant::Descriptive(_) => MethodTag::Descriptive,
            QueryVariant::Operational(_) => MethodTag::Operational,
            QueryVariant::Denotational(_) => MethodTag::Denotational,
            QueryVariant::Topological(_) => MethodTag::Topological,
            QueryVariant::Structural(_) => MethodTag::Structural,
        }
    }
}

fn default_k() -> usize {
    10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Query {
    #[serde(flatten)]
    pub variant: QueryVariant,
    #[serde(default = "default_k")]
    pub k: usize,
}

impl Query {
    pub fn new(variant: QueryVariant) -> Query {
        Query {
            variant,
            k: default_k(),
        }
    }

    pub fn with_k(variant: QueryVariant, k: usize) -> Query {
        Query { variant, k }
    }
}

/// Engine configuration. Everything the paper leaves open is a knob here
/// rather than a constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tunables {
    pub step_budget: u64,
    pub signature_weight: f64,
    pub term_weight: f64,
    pub fusion_constant: f64,
    pub acceptance_threshold: f64,
    pub default_k: usize,
}

impl Default for Tunables {
    fn default() -> Self {
        Tunables {
            step_budget: 10_000,
            signature_weight: 0.6,
            term_weight: 0.4,
            fusion_constant: 60.0,
            acceptance_threshold: 0.5,
            default_k: 10,
        }
    }
}

/// One ranked result. Scores are printed (and serialized) at six decimal
/// places so golden outputs are byte-stable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedHit {
    pub id: AssetId,
    pub name: String,
    #[serde(with = "score_6dp")]
    pub score: f64,
    pub method: MethodTag,
    pub explanation: String,
}

mod score_6dp {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(score: &f64, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format!("{score:.6}"))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(f64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Number(n) => Ok(n),
        }
    }
}

/// Query-shape failures shared by all engines.
#[derive(Debug, thiserror::Error)]
pub enum QueryError {
    #[error("empty query: {0}")]
    EmptyQuery(&'static str),

    #[error("invalid samples: {0}")]
    InvalidSamples(String),

    #[error("shape does not parse: {0}")]
    BadShape(#[from] ParseError),

    #[error("no asset {0}")]
    UnknownId(AssetId),

    #[error("asset {id} is not a pattern asset (prefix {found})")]
    WrongKind { id: AssetId, found: &'static str },

    #[error("bindings missing for holes: {}", .0.join(", "))]
    IncompleteBindings(Vec<String>),

    #[error("ranking contract violated: {0}")]
    ContractViolation(String),
}

/// Sort by (score desc, rendered id asc), truncate to k. Every engine's
/// last step.
pub(crate) fn finalize(mut hits: Vec<RankedHit>, k: usize) -> Vec<RankedHit> {
    debug_assert!(hits.iter().all(|h| (0.0..=1.0).contains(&h.score)));
    hits.sort_by(|a, b| {
        b.score
            .partial_cmp(&a.score)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.id.cmp(&b.id))
    });
    hits.truncate(k);
    hits
}

/// True when every adjacent pair respects (score desc, id asc). Fusion
/// enforces this on its inputs.
pub fn is_ranked(hits: &[RankedHit]) -> bool {
    hits.windows(2).all(|w| {
        w[0].score > w[1].score || (w[0].score == w[1].score && w[0].id < w[1].id)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Prefix;

    #[test]
    fn query_serialization_carries_method_tag() {
        let q = Query::new(QueryVariant::Descriptive(DescriptiveQ {
            keywords: ["Agility".to_string()].into(),
            facets: BTreeSet::new(),
        }));
        let json = serde_json::to_string(&q).unwrap();
        assert!(json.contains("\"method\":\"descriptive\""));
        let back: Query = serde_json::from_str(&json).unwrap();
        assert_eq!(back, q);
        assert_eq!(back.k, 10);
    }

    #[test]
    fn hit_scores_serialize_at_six_places() {
        let hit = RankedHit {
            id: AssetId::new(Prefix::Id, 1213),
            name: "Support".into(),
            score: 4.0 / 7.0,
            method: MethodTag::Topological,
            explanation: "distance 3/7".into(),
        };
        let json = serde_json::to_string(&hit).unwrap();
        assert!(json.contains("\"score\":\"0.571429\""));
        let back: RankedHit = serde_json::from_str(&json).unwrap();
        assert!((back.score - hit.score).abs() < 1e-6);
    }

    #[test]
    fn finalize_orders_and_truncates() {
        let hit = |seq: u64, score: f64| RankedHit {
            id: AssetId::new(Prefix::Text, seq),
            name: String::new(),
            score,
            method: MethodTag::Informational,
            explanation: String::new(),
        };
        let out = finalize(vec![hit(2, 0.5), hit(1, 0.5), hit(3, 0.9)], 2);
        assert_eq!(out[0].id.sequence, 3);
        assert_eq!(out[1].id.sequence, 1);
        assert_eq!(out.len(), 2);
        assert!(is_ranked(&out));
    }

    #[test]
    fn sample_json_uses_plain_values() {
        let sample = Sample {
            args: vec![Value::Int(2), Value::Int(3)],
            expected: Value::Int(5),
        };
        assert_eq!(
            serde_json::to_string(&sample).unwrap(),
            r#"{"args":[2,3],"expected":5}"#
        );
    }
}
