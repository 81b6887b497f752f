//! Full evaluation run: metrics at a base corpus size, latency at the base
//! and a 4× corpus, ordinal binning, and conformance checks against the
//! expected ratings. Three latency orderings are gated (they decide the
//! eval exit status); everything else is diagnostic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::corpus::{generate_corpus, CorpusSpec, GroundTruthCorpus};
use super::matrix::{to_ordinal, ExpectationMatrix, OrdinalRating, TechnicalCriterion};
use super::metrics::{evaluate_method_on, median, MethodEvaluation, MethodMetrics};
use super::EvalError;
use crate::engines::{MethodTag, Tunables};
use crate::store::Snapshot;

/// Harness knobs. Timing always runs sequentially; `parallel_metrics` only
/// parallelizes the (untimed) metrics pass across methods.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    pub k: usize,
    /// Repetitions for latency; reported values are medians across runs.
    pub runs: usize,
    pub parallel_metrics: bool,
}

impl Default for EvalOptions {
    fn default() -> EvalOptions {
        EvalOptions {
            k: 10,
            runs: 5,
            parallel_metrics: false,
        }
    }
}

/// Median per-query latency at the base corpus and at 4× the base, plus the
/// observed growth. Growth approximates scaling behaviour; asymptotic class
/// is not directly measurable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatencyMeasurement {
    pub corpus_size: usize,
    pub scaled_size: usize,
    pub at_base_us: f64,
    pub at_scaled_us: f64,
    pub growth_ratio: f64,
}

/// One expected-ordering check: the ratings say `lower` should measure
/// strictly below `higher` on this criterion. Equal measured values count
/// as a violation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseCheck {
    pub criterion: TechnicalCriterion,
    pub lower: MethodTag,
    pub higher: MethodTag,
    pub lower_rating: OrdinalRating,
    pub higher_rating: OrdinalRating,
    pub lower_value: f64,
    pub higher_value: f64,
    pub holds: bool,
}

/// One gated latency ordering, checked on the scaled corpus with a margin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommittedCheck {
    pub faster: MethodTag,
    pub slower: MethodTag,
    pub faster_us: Option<f64>,
    pub slower_us: Option<f64>,
    pub ratio: Option<f64>,
    pub min_ratio: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub spec: CorpusSpec,
    pub seed: u64,
    pub k: usize,
    pub runs: usize,
    pub methods: BTreeMap<MethodTag, MethodMetrics>,
    pub latency: BTreeMap<MethodTag, LatencyMeasurement>,
    /// Measured values binned onto the VL–VH scale. Ratios use fixed cuts
    /// at 0.2/0.4/0.6/0.8; latency is first normalized by the slowest
    /// method so the slowest lands on VH.
    pub bins: BTreeMap<MethodTag, BTreeMap<TechnicalCriterion, OrdinalRating>>,
    pub checks: Vec<PairwiseCheck>,
    pub committed: Vec<CommittedCheck>,
    pub matrix: ExpectationMatrix,
}

const RATIO_CUTS: [f64; 4] = [0.2, 0.4, 0.6, 0.8];
const GATED_MIN_RATIO: f64 = 1.5;
const GATED_ORDERINGS: [(MethodTag, MethodTag); 3] = [
    (MethodTag::Descriptive, MethodTag::Informational),
    (MethodTag::Descriptive, MethodTag::Denotational),
    (MethodTag::Structural, MethodTag::Denotational),
];

impl EvaluationReport {
    /// The eval command's exit status hinges on this (unless suppressed).
    pub fn ordering_gate_passed(&self) -> bool {
        self.committed.iter().all(|c| c.holds)
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        let push = |out: &mut String, line: String| {
            out.push_str(&line);
            out.push('\n');
        };
        push(
            &mut out,
            format!(
                "corpus: {} assets (scaled run: {}), seed {}, k {}, timing runs {}",
                self.spec.corpus_size,
                self.spec.corpus_size * 4,
                self.seed,
                self.k,
                self.runs
            ),
        );
        push(&mut out, String::new());
        push(
            &mut out,
            format!(
                "{:<15} {:>7} {:>9} {:>7} {:>8} {:>6} {:>10} {:>10} {:>7}",
                "method",
                "queries",
                "precision",
                "recall",
                "coverage",
                "empty",
                "base_us",
                "scaled_us",
                "growth"
            ),
        );
        for (method, m) in &self.methods {
            let lat = self.latency.get(method);
            push(
                &mut out,
                format!(
                    "{:<15} {:>7} {:>9.3} {:>7.3} {:>8.3} {:>6} {:>10.1} {:>10.1} {:>6.1}x",
                    method.name(),
                    m.queries,
                    m.precision,
                    m.recall,
                    m.coverage_ratio,
                    m.empty_retrievals,
                    lat.map_or(f64::NAN, |l| l.at_base_us),
                    lat.map_or(f64::NAN, |l| l.at_scaled_us),
                    lat.map_or(f64::NAN, |l| l.growth_ratio),
                ),
            );
        }

        push(&mut out, String::new());
        push(
            &mut out,
            "measured bins (ratio cuts 0.2/0.4/0.6/0.8; latency relative to slowest):".into(),
        );
        push(
            &mut out,
            format!(
                "{:<15} {:>9} {:>7} {:>8} {:>7}",
                "method", "precision", "recall", "coverage", "time"
            ),
        );
        for (method, bins) in &self.bins {
            let b = |c: TechnicalCriterion| {
                bins.get(&c).map_or("-".to_string(), |r| r.to_string())
            };
            push(
                &mut out,
                format!(
                    "{:<15} {:>9} {:>7} {:>8} {:>7}",
                    method.name(),
                    b(TechnicalCriterion::Precision),
                    b(TechnicalCriterion::Recall),
                    b(TechnicalCriterion::CoverageRatio),
                    b(TechnicalCriterion::TimeComplexity),
                ),
            );
        }

        push(&mut out, String::new());
        let held = self.checks.iter().filter(|c| c.holds).count();
        push(
            &mut out,
            format!(
                "expected-ordering checks (diagnostic, strict <): {held}/{} hold",
                self.checks.len()
            ),
        );
        for c in &self.checks {
            push(
                &mut out,
                format!(
                    "  [{}] {}: {} ({}, {:.3}) < {} ({}, {:.3})",
                    if c.holds { "ok" } else { "violated" },
                    c.criterion.label(),
                    c.lower.name(),
                    c.lower_rating,
                    c.lower_value,
                    c.higher.name(),
                    c.higher_rating,
                    c.higher_value,
                ),
            );
        }

        push(&mut out, String::new());
        push(
            &mut out,
            format!(
                "gated latency orderings (scaled corpus, min ratio {GATED_MIN_RATIO}x): {}",
                if self.ordering_gate_passed() {
                    "pass"
                } else {
                    "FAIL"
                }
            ),
        );
        for c in &self.committed {
            let detail = match (c.faster_us, c.slower_us, c.ratio) {
                (Some(f), Some(s), Some(r)) => {
                    format!("{:.1}us vs {:.1}us ({:.1}x)", f, s, r)
                }
                _ => "not measurable on this corpus".to_string(),
            };
            push(
                &mut out,
                format!(
                    "  [{}] {} faster than {}: {detail}",
                    if c.holds { "ok" } else { "FAIL" },
                    c.faster.name(),
                    c.slower.name(),
                ),
            );
        }

        push(&mut out, String::new());
        push(&mut out, "expected ratings, technical:".into());
        push(
            &mut out,
            format!(
                "{:<15} {:>9} {:>7} {:>8} {:>6} {:>7} {:>10}",
                "method", "precision", "recall", "coverage", "time", "logic", "automation"
            ),
        );
        for method in MethodTag::ALL {
            let row: Vec<String> = TechnicalCriterion::ALL
                .into_iter()
                .map(|c| self.matrix.technical_rating(method, c).to_string())
                .collect();
            push(
                &mut out,
                format!(
                    "{:<15} {:>9} {:>7} {:>8} {:>6} {:>7} {:>10}",
                    method.name(),
                    row[0],
                    row[1],
                    row[2],
                    row[3],
                    row[4],
                    row[5]
                ),
            );
        }
        push(
            &mut out,
            "reference ratings, managerial/human (not measured by this harness):".into(),
        );
        push(
            &mut out,
            format!(
                "{:<15} {:>10} {:>9} {:>13} {:>11} {:>10} {:>12}",
                "method", "investment", "operating", "pervasiveness", "development", "difficulty", "transparency"
            ),
        );
        for method in MethodTag::ALL {
            let row: Vec<String> = super::matrix::ManagerialCriterion::ALL
                .into_iter()
                .map(|c| self.matrix.managerial_rating(method, c).to_string())
                .collect();
            push(
                &mut out,
                format!(
                    "{:<15} {:>10} {:>9} {:>13} {:>11} {:>10} {:>12}",
                    method.name(),
                    row[0],
                    row[1],
                    row[2],
                    row[3],
                    row[4],
                    row[5]
                ),
            );
        }
        out
    }
}

fn measured_value(m: &MethodMetrics, criterion: TechnicalCriterion) -> Option<f64> {
    match criterion {
        TechnicalCriterion::Precision => Some(m.precision),
        TechnicalCriterion::Recall => Some(m.recall),
        TechnicalCriterion::CoverageRatio => Some(m.coverage_ratio),
        TechnicalCriterion::TimeComplexity => Some(m.elapsed_us_median),
        _ => None,
    }
}

/// Pairwise ordering checks for every measured criterion: wherever two
/// methods carry different ratings (and neither is U), the lower-rated one
/// must measure strictly below the higher-rated one. For latency a lower
/// rating means faster, so the same direction applies throughout.
pub fn compare_with_expectation(
    metrics: &BTreeMap<MethodTag, MethodMetrics>,
    matrix: &ExpectationMatrix,
) -> Vec<PairwiseCheck> {
    let methods: Vec<MethodTag> = metrics.keys().copied().collect();
    let mut out = Vec::new();
    if methods.len() < 2 {
        return out;
    }
    for criterion in TechnicalCriterion::MEASURED {
        for i in 0..methods.len() {
            for j in (i + 1)..methods.len() {
                let (a, b) = (methods[i], methods[j]);
                let ra = matrix.technical_rating(a, criterion);
                let rb = matrix.technical_rating(b, criterion);
                let Some(ordering) = ra.partial_cmp_rating(&rb) else {
                    continue; // U is incomparable
                };
                let (lower, lower_rating, higher, higher_rating) = match ordering {
                    std::cmp::Ordering::Less => (a, ra, b, rb),
                    std::cmp::Ordering::Greater => (b, rb, a, ra),
                    std::cmp::Ordering::Equal => continue,
                };
                let lower_value = measured_value(&metrics[&lower], criterion)
                    .expect("MEASURED criteria have values");
                let higher_value = measured_value(&metrics[&higher], criterion)
                    .expect("MEASURED criteria have values");
                out.push(PairwiseCheck {
                    criterion,
                    lower,
                    higher,
                    lower_rating,
                    higher_rating,
                    lower_value,
                    higher_value,
                    holds: lower_value < higher_value,
                });
            }
        }
    }
    out
}

fn committed_checks(latency: &BTreeMap<MethodTag, LatencyMeasurement>) -> Vec<CommittedCheck> {
    GATED_ORDERINGS
        .into_iter()
        .map(|(faster, slower)| {
            let f = latency.get(&faster).map(|l| l.at_scaled_us);
            let s = latency.get(&slower).map(|l| l.at_scaled_us);
            let ratio = match (f, s) {
                (Some(f), Some(s)) if f > 0.0 => Some(s / f),
                _ => None,
            };
            CommittedCheck {
                faster,
                slower,
                faster_us: f,
                slower_us: s,
                ratio,
                min_ratio: GATED_MIN_RATIO,
                holds: ratio.is_some_and(|r| r >= GATED_MIN_RATIO),
            }
        })
        .collect()
}

fn methods_present(corpus: &GroundTruthCorpus) -> Vec<MethodTag> {
    MethodTag::ALL
        .into_iter()
        .filter(|&m| corpus.queries_for(m).next().is_some())
        .collect()
}

fn metrics_pass(
    snapshot: &Snapshot,
    corpus: &GroundTruthCorpus,
    present: &[MethodTag],
    k: usize,
    tunables: &Tunables,
    parallel: bool,
) -> Result<BTreeMap<MethodTag, MethodEvaluation>, EvalError> {
    if parallel {
        std::thread::scope(|scope| {
            let handles: Vec<_> = present
                .iter()
                .map(|&method| {
                    (
                        method,
                        scope.spawn(move || {
                            evaluate_method_on(snapshot, corpus, method, k, tunables)
                        }),
                    )
                })
                .collect();
            handles
                .into_iter()
                .map(|(method, handle)| {
                    handle
                        .join()
                        .expect("metrics worker panicked")
                        .map(|e| (method, e))
                })
                .collect()
        })
    } else {
        present
            .iter()
            .map(|&method| {
                evaluate_method_on(snapshot, corpus, method, k, tunables).map(|e| (method, e))
            })
            .collect()
    }
}

/// Generate corpora at the spec size and 4×, measure every method, bin the
/// results, and run the ordering checks.
pub fn run_evaluation(
    spec: &CorpusSpec,
    seed: u64,
    options: &EvalOptions,
) -> Result<EvaluationReport, EvalError> {
    if options.k < 1 {
        return Err(EvalError::InvalidArgument("k must be >= 1".into()));
    }
    if options.runs < 1 {
        return Err(EvalError::InvalidArgument("runs must be >= 1".into()));
    }
    let tunables = Tunables::default();

    let corpus_base = generate_corpus(spec, seed)?;
    let scaled_spec = CorpusSpec {
        corpus_size: spec.corpus_size * 4,
        ..spec.clone()
    };
    let corpus_scaled = generate_corpus(&scaled_spec, seed)?;
    let snapshot_base = Snapshot::from_records(corpus_base.assets.clone());
    let snapshot_scaled = Snapshot::from_records(corpus_scaled.assets.clone());

    let present_base = methods_present(&corpus_base);
    let present_scaled = methods_present(&corpus_scaled);

    let evals = metrics_pass(
        &snapshot_base,
        &corpus_base,
        &present_base,
        options.k,
        &tunables,
        options.parallel_metrics,
    )?;

    // Timing pass: strictly sequential, one method at a time, repeated.
    let mut base_times: BTreeMap<MethodTag, Vec<f64>> = BTreeMap::new();
    let mut scaled_times: BTreeMap<MethodTag, Vec<f64>> = BTreeMap::new();
    for _ in 0..options.runs {
        for &method in &present_base {
            let e = evaluate_method_on(&snapshot_base, &corpus_base, method, options.k, &tunables)?;
            base_times
                .entry(method)
                .or_default()
                .push(e.metrics.elapsed_us_median);
        }
        for &method in &present_scaled {
            let e = evaluate_method_on(
                &snapshot_scaled,
                &corpus_scaled,
                method,
                options.k,
                &tunables,
            )?;
            scaled_times
                .entry(method)
                .or_default()
                .push(e.metrics.elapsed_us_median);
        }
    }

    let mut methods: BTreeMap<MethodTag, MethodMetrics> = BTreeMap::new();
    for (method, eval) in evals {
        let mut m = eval.metrics;
        m.elapsed_us_median = median(base_times[&method].clone());
        methods.insert(method, m);
    }

    let mut latency = BTreeMap::new();
    for (&method, times) in &base_times {
        let Some(scaled) = scaled_times.get(&method) else {
            continue;
        };
        let at_base_us = median(times.clone());
        let at_scaled_us = median(scaled.clone());
        latency.insert(
            method,
            LatencyMeasurement {
                corpus_size: spec.corpus_size,
                scaled_size: scaled_spec.corpus_size,
                at_base_us,
                at_scaled_us,
                growth_ratio: if at_base_us > 0.0 {
                    at_scaled_us / at_base_us
                } else {
                    f64::NAN
                },
            },
        );
    }

    let slowest = methods
        .values()
        .map(|m| m.elapsed_us_median)
        .fold(0.0_f64, f64::max);
    let mut bins = BTreeMap::new();
    for (&method, m) in &methods {
        let mut row = BTreeMap::new();
        for criterion in TechnicalCriterion::MEASURED {
            let value = measured_value(m, criterion).expect("measured");
            let scaled = if criterion == TechnicalCriterion::TimeComplexity {
                if slowest > 0.0 {
                    value / slowest
                } else {
                    0.0
                }
            } else {
                value
            };
            row.insert(criterion, to_ordinal(scaled, RATIO_CUTS)?);
        }
        bins.insert(method, row);
    }

    let matrix = ExpectationMatrix::reference();
    let checks = compare_with_expectation(&methods, &matrix);
    let committed = committed_checks(&latency);

    Ok(EvaluationReport {
        spec: spec.clone(),
        seed,
        k: options.k,
        runs: options.runs,
        methods,
        latency,
        bins,
        checks,
        committed,
        matrix,
    })
}
