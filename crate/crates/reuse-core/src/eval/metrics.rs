//! Retrieval metrics per method: macro-averaged precision and recall,
//! coverage ratio, and median per-query latency measured around the engine
//! call only. Raw (retrieved, relevant) pairs are kept so every figure can
//! be recomputed independently.

use std::collections::BTreeSet;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{EvalError, GroundTruthCorpus};
use crate::engines::{MethodTag, Tunables};
use crate::model::AssetId;
use crate::pipeline::run_engine;
use crate::store::Snapshot;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodMetrics {
    pub method: MethodTag,
    /// Mean over queries of |retrieved ∩ relevant| / |retrieved|. A query
    /// with an empty retrieval contributes 0 instead of being dropped, so
    /// methods cannot buy precision by answering nothing.
    pub precision: f64,
    /// Mean over queries of |retrieved ∩ relevant| / |relevant|.
    pub recall: f64,
    /// Fraction of queries with at least one relevant asset in the top-k.
    pub coverage_ratio: f64,
    /// Median wall time per query, microseconds.
    pub elapsed_us_median: f64,
    pub queries: usize,
    /// How many retrievals came back empty (their precision counted as 0).
    pub empty_retrievals: usize,
}

/// One query's outcome, kept verbatim for independent recomputation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawRetrieval {
    /// Index into `corpus.queries`.
    pub query_index: usize,
    pub retrieved: Vec<AssetId>,
    pub relevant: BTreeSet<AssetId>,
    pub elapsed_us: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodEvaluation {
    pub metrics: MethodMetrics,
    pub raw: Vec<RawRetrieval>,
}

pub(crate) fn median(mut values: Vec<f64>) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).expect("metric values are finite"));
    let n = values.len();
    if n == 0 {
        return 0.0;
    }
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

/// Run one method over every one of its corpus queries against a prebuilt
/// snapshot. Timing wraps only the engine call; snapshot construction and
/// truth bookkeeping stay outside the clock.
pub fn evaluate_method_on(
    snapshot: &Snapshot,
    corpus: &GroundTruthCorpus,
    method: MethodTag,
    k: usize,
    tunables: &Tunables,
) -> Result<MethodEvaluation, EvalError> {
    let mut raw = Vec::new();
    for (query_index, gt) in corpus.queries.iter().enumerate() {
        if gt.query.variant.method() != method {
            continue;
        }
        let started = Instant::now();
        let hits = run_engine(snapshot, &gt.query.variant, k, tunables);
        let elapsed_us = (started.elapsed().as_secs_f64() * 1e6).max(0.01);
        let hits = hits.map_err(|e| {
            EvalError::InvalidArgument(format!("engine failed on query {query_index}: {e}"))
        })?;
        raw.push(RawRetrieval {
            query_index,
            retrieved: hits.into_iter().map(|h| h.id).collect(),
            relevant: gt.relevant.clone(),
            elapsed_us,
        });
    }
    if raw.is_empty() {
        return Err(EvalError::NoData(method));
    }
    Ok(MethodEvaluation {
        metrics: metrics_from_raw(method, &raw),
        raw,
    })
}

/// Convenience entry point that builds the snapshot itself.
pub fn evaluate_method(
    method: MethodTag,
    corpus: &GroundTruthCorpus,
    k: usize,
) -> Result<MethodMetrics, EvalError> {
    let snapshot = Snapshot::from_records(corpus.assets.clone());
    evaluate_method_on(&snapshot, corpus, method, k, &Tunables::default()).map(|e| e.metrics)
}

fn metrics_from_raw(method: MethodTag, raw: &[RawRetrieval]) -> MethodMetrics {
    let mut precisions = Vec::with_capacity(raw.len());
    let mut recalls = Vec::new();
    let mut covered = 0usize;
    let mut empty_retrievals = 0usize;
    let mut elapsed = Vec::with_capacity(raw.len());

    for r in raw {
        let hit_set: BTreeSet<AssetId> = r.retrieved.iter().copied().collect();
        let inter = hit_set.intersection(&r.relevant).count();
        if r.retrieved.is_empty() {
            empty_retrievals += 1;
            precisions.push(0.0);
        } else {
            precisions.push(inter as f64 / r.retrieved.len() as f64);
        }
        if !r.relevant.is_empty() {
            recalls.push(inter as f64 / r.relevant.len() as f64);
        }
        if inter > 0 {
            covered += 1;
        }
        elapsed.push(r.elapsed_us);
    }

    let mean = |v: &[f64]| {
        if v.is_empty() {
            0.0
        } else {
            v.iter().sum::<f64>() / v.len() as f64
        }
    };
    MethodMetrics {
        method,
        precision: mean(&precisions),
        recall: mean(&recalls),
        coverage_ratio: covered as f64 / raw.len() as f64,
        elapsed_us_median: median(elapsed),
        queries: raw.len(),
        empty_retrievals,
    }
}
