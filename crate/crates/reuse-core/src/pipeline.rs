//! The search-or-register workflow: dispatch a request to one or more
//! engines, fuse the rankings, and either hand back hits or a registration
//! stub the caller can complete and `add`.
//!
//! Fusion is reciprocal-rank (score = Σ 1/(c + rank)); acceptance is
//! thresholded on the best *single-method* score of the top fused hit,
//! because fused scores are rank-based and not comparable to a fixed
//! cut-off. A pipeline call never mutates the store.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::engines::{
    is_ranked, search_denotational, search_descriptive, search_informational, search_operational,
    search_structural, search_topological, DescriptiveQ, InformationalQ, MethodTag, Query,
    QueryError, QueryVariant, RankedHit, Sample, TopologicalQ, Tunables,
};
use crate::fold::{fold_phrase, fold_tokens};
use crate::minilang::Value;
use crate::model::{AssetId, AssetKind, SemanticSignature};
use crate::store::Snapshot;

/// What the caller asked for: a typed single-method query or raw text to
/// spread across the text-shaped engines.
#[derive(Debug, Clone, PartialEq)]
pub enum SearchRequest {
    Typed(Query),
    Raw { text: String, k: usize },
}

impl SearchRequest {
    pub fn raw(text: impl Into<String>, k: usize) -> SearchRequest {
        SearchRequest::Raw {
            text: text.into(),
            k,
        }
    }

    pub fn k(&self) -> usize {
        match self {
            SearchRequest::Typed(q) => q.k,
            SearchRequest::Raw { k, .. } => *k,
        }
    }
}

/// Deterministic engine-selection rule. Typed queries go to their own
/// engine; raw text goes to the text engines, plus the surrogate index
/// when the text could be a single keyword.
pub fn dispatch(request: &SearchRequest) -> Vec<MethodTag> {
    match request {
        SearchRequest::Typed(q) => vec![q.variant.method()],
        SearchRequest::Raw { text, .. } => {
            let mut methods = vec![MethodTag::Informational, MethodTag::Topological];
            if fold_tokens(text).len() == 1 {
                methods.push(MethodTag::Descriptive);
            }
            methods
        }
    }
}

fn queries_for(request: &SearchRequest) -> Vec<QueryVariant> {
    match request {
        SearchRequest::Typed(q) => vec![q.variant.clone()],
        SearchRequest::Raw { text, .. } => dispatch(request)
            .into_iter()
            .map(|method| match method {
                MethodTag::Informational => {
                    QueryVariant::Informational(InformationalQ { text: text.clone() })
                }
                MethodTag::Topological => {
                    QueryVariant::Topological(TopologicalQ { text: text.clone() })
                }
                _ => QueryVariant::Descriptive(DescriptiveQ {
                    keywords: [text.clone()].into(),
                    facets: BTreeSet::new(),
                }),
            })
            .collect(),
    }
}

pub(crate) fn run_engine(
    snapshot: &Snapshot,
    variant: &QueryVariant,
    k: usize,
    tunables: &Tunables,
) -> Result<Vec<RankedHit>, QueryError> {
    match variant {
        QueryVariant::Informational(q) => search_informational(snapshot, q, k),
        QueryVariant::Descriptive(q) => search_descriptive(snapshot, q, k),
        QueryVariant::Operational(q) => search_operational(snapshot, q, k, tunables.step_budget),
        QueryVariant::Denotational(q) => search_denotational(snapshot, q, k, tunables),
        QueryVariant::Topological(q) => search_topological(snapshot, q, k),
        QueryVariant::Structural(q) => search_structural(snapshot, q, k),
    }
}

/// Run one typed query on its own engine; plain ranking, no threshold or
/// fusion semantics.
pub fn run_query(
    snapshot: &Snapshot,
    query: &Query,
    tunables: &Tunables,
) -> Result<Vec<RankedHit>, QueryError> {
    run_engine(snapshot, &query.variant, query.k, tunables)
}

/// Reciprocal-rank fusion of individually ranked lists. Each input list
/// must already obey the (score desc, id asc) contract; ranks are 1-based.
/// An asset present in several lists keeps the explanation (and method
/// tag) of its best single-method rank.
pub fn fuse_rankings(
    lists: &[Vec<RankedHit>],
    k: usize,
    fusion_constant: f64,
) -> Result<Vec<RankedHit>, QueryError> {
    for (i, list) in lists.iter().enumerate() {
        if !is_ranked(list) {
            return Err(QueryError::ContractViolation(format!(
                "input list {i} is not sorted by (score desc, id asc)"
            )));
        }
    }

    struct Fused {
        score: f64,
        best_rank: usize,
        best_list: usize,
        hit: RankedHit,
    }
    let mut fused: BTreeMap<AssetId, Fused> = BTreeMap::new();
    for (list_idx, list) in lists.iter().enumerate() {
        for (rank0, hit) in list.iter().enumerate() {
            let rank = rank0 + 1;
            let contribution = 1.0 / (fusion_constant + rank as f64);
            fused
                .entry(hit.id)
                .and_modify(|f| {
                    f.score += contribution;
                    if rank < f.best_rank {
                        f.best_rank = rank;
                        f.best_list = list_idx;
                        f.hit = hit.clone();
                    }
                })
                .or_insert_with(|| Fused {
                    score: contribution,
                    best_rank: rank,
                    best_list: list_idx,
                    hit: hit.clone(),
                });
        }
    }

    let mut merged: Vec<RankedHit> = fused
        .into_values()
        .map(|f| RankedHit {
            score: f.score,
            ..f.hit
        })
        .collect();
    merged.sort_by(|a, b| {
        b.score
            .partial_cmp(&a.score)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.id.cmp(&b.id))
    });
    merged.truncate(k);
    Ok(merged)
}

/// A partially filled record derived from an unanswered query. Field names
/// match the stored record schema so the completed stub can be piped
/// straight back into `add`. Classification is left open on purpose.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RegistrationStub {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<AssetKind>,
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
}

impl RegistrationStub {
    /// Finish the stub off as addable fields. The caller decides the
    /// classification; everything else carries over.
    pub fn into_fields(self, kind: AssetKind) -> crate::model::AssetFields {
        let mut fields = crate::model::AssetFields::new(self.name, kind);
        fields.language = self.language;
        fields.label = self.label;
        fields.keywords = self.keywords;
        fields.executable_name = self.executable_name;
        fields.non_executable_name = self.non_executable_name;
        fields.identity = self.identity;
        fields.package = self.package;
        fields.class_name = self.class_name;
        fields.pattern_family = self.pattern_family;
        fields.payload = self.payload;
        fields.signature = self.signature;
        fields
    }
}

fn or_unnamed(name: Option<String>, fallback: &str) -> String {
    name.map(|n| n.trim().to_string())
        .filter(|n| !n.is_empty())
        .unwrap_or_else(|| fallback.to_string())
}

/// Parameter names for skeleton payloads: single letters, then indexed.
fn skeleton_param(i: usize) -> String {
    const LETTERS: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];
    LETTERS
        .get(i)
        .map(|s| s.to_string())
        .unwrap_or_else(|| format!("p{i}"))
}

/// A compilable placeholder program typed after the samples; the developer
/// replaces the body.
fn skeleton_payload(samples: &[Sample]) -> Option<String> {
    let first = samples.first()?;
    let params: Vec<String> = first
        .args
        .iter()
        .enumerate()
        .map(|(i, v)| format!("{}: {}", skeleton_param(i), v.base_type()))
        .collect();
    let body = match first.expected {
        Value::Int(_) => "0",
        Value::Str(_) => "\"\"",
        Value::Bool(_) => "false",
    };
    Some(format!(
        "fn({}) -> {} {{ {body} }}",
        params.join(", "),
        first.expected.base_type()
    ))
}

fn folded_term_set(terms: &BTreeSet<String>) -> BTreeSet<String> {
    terms
        .iter()
        .map(|t| fold_phrase(t))
        .filter(|t| !t.is_empty())
        .collect()
}

/// Map an unanswered request onto record fields, guessing a name from the
/// query text. The stub is advisory: nothing is stored until the caller
/// completes it and calls `add`.
pub fn registration_stub(request: &SearchRequest) -> RegistrationStub {
    let mut stub = RegistrationStub::default();
    match request {
        SearchRequest::Raw { text, .. } => {
            stub.name = or_unnamed(Some(text.clone()), "unnamed-component");
            stub.label = Some(text.trim().to_string());
            if fold_tokens(text).len() == 1 {
                stub.keywords.insert(text.trim().to_string());
            }
        }
        SearchRequest::Typed(query) => match &query.variant {
            QueryVariant::Informational(q) => {
                stub.name = or_unnamed(Some(q.text.clone()), "unnamed-component");
                stub.label = Some(q.text.trim().to_string());
            }
            QueryVariant::Topological(q) => {
                stub.name = or_unnamed(Some(q.text.clone()), "unnamed-component");
                stub.identity = Some(q.text.trim().to_string());
            }
            QueryVariant::Descriptive(q) => {
                stub.name = or_unnamed(
                    q.keywords.iter().chain(q.facets.iter()).next().cloned(),
                    "unnamed-component",
                );
                stub.keywords = q.keywords.union(&q.facets).cloned().collect();
            }
            QueryVariant::Operational(q) => {
                stub.name = or_unnamed(q.name_hint.clone(), "unnamed-component");
                stub.executable_name = q.name_hint.clone();
                stub.payload = skeleton_payload(&q.samples);
            }
            QueryVariant::Denotational(q) => {
                stub.name = or_unnamed(
                    q.name_hint
                        .clone()
                        .or_else(|| q.spec_terms.iter().next().cloned()),
                    "unnamed-specification",
                );
                stub.non_executable_name = q.name_hint.clone();
                let folded = folded_term_set(&q.spec_terms);
                stub.signature = match &q.signature {
                    Some(sig) => Some(SemanticSignature {
                        inputs: sig.inputs.clone(),
                        output: sig.output,
                        pre_terms: folded_term_set(&sig.pre_terms)
                            .union(&folded)
                            .cloned()
                            .collect(),
                        post_terms: folded_term_set(&sig.post_terms),
                    }),
                    None if !folded.is_empty() => Some(SemanticSignature {
                        inputs: Vec::new(),
                        output: crate::minilang::BaseType::Int,
                        pre_terms: folded,
                        post_terms: BTreeSet::new(),
                    }),
                    None => None,
                };
                if stub.signature.is_none() && stub.non_executable_name.is_none() {
                    stub.non_executable_name = Some(stub.name.clone());
                }
            }
            QueryVariant::Structural(q) => {
                stub.name = or_unnamed(
                    q.class_name
                        .clone()
                        .or_else(|| q.package.clone())
                        .or_else(|| q.pattern_family.clone()),
                    "unnamed-pattern",
                );
                stub.package = q.package.clone();
                stub.class_name = q.class_name.clone();
                stub.pattern_family = q.pattern_family.clone();
                stub.payload = Some(
                    q.shape
                        .clone()
                        .unwrap_or_else(|| "fn(x: Int) -> Int { ?body }".to_string()),
                );
            }
        },
    }
    stub
}

/// Outcome of one workflow run. `found` carries hits ordered by fusion
/// but re-scored with each asset's best single-method score, so scores
/// stay in [0, 1] and the acceptance threshold reads directly off hit 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PipelineOutcome {
    Found {
        hits: Vec<RankedHit>,
        methods_used: Vec<MethodTag>,
    },
    NotFound {
        registration_stub: RegistrationStub,
    },
}

pub fn search_or_register(
    snapshot: &Snapshot,
    request: &SearchRequest,
    threshold: f64,
    tunables: &Tunables,
) -> Result<PipelineOutcome, QueryError> {
    let methods_used = dispatch(request);
    let k = request.k();
    let mut lists = Vec::new();
    for variant in queries_for(request) {
        lists.push(run_engine(snapshot, &variant, k, tunables)?);
    }
    let fused = fuse_rankings(&lists, k, tunables.fusion_constant)?;

    let best_single = |id: AssetId| -> f64 {
        lists
            .iter()
            .flatten()
            .filter(|h| h.id == id)
            .map(|h| h.score)
            .fold(0.0, f64::max)
    };
    let accepted = fused
        .first()
        .map(|top| best_single(top.id) >= threshold)
        .unwrap_or(false);
    if !accepted {
        return Ok(PipelineOutcome::NotFound {
            registration_stub: registration_stub(request),
        });
    }
    let hits = fused
        .into_iter()
        .map(|hit| RankedHit {
            score: best_single(hit.id),
            ..hit
        })
        .collect();
    Ok(PipelineOutcome::Found { hits, methods_used })
}
