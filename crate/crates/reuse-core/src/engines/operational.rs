//! Behavioural retrieval: run executable payloads on caller-supplied
//! samples and rank by the fraction of exact output matches.
//!
//! Any evaluation failure — wrong arity, type error, arithmetic error,
//! exhausted step budget — counts as a miss for that sample.

use crate::fold::fold_phrase;
use crate::minilang::evaluate;
use crate::model::Prefix;
use crate::store::Snapshot;

use super::{finalize, MethodTag, OperationalQ, QueryError, RankedHit};

pub fn search_operational(
    snapshot: &Snapshot,
    query: &OperationalQ,
    k: usize,
    step_budget: u64,
) -> Result<Vec<RankedHit>, QueryError> {
    let hint = query
        .name_hint
        .as_deref()
        .map(fold_phrase)
        .filter(|h| !h.is_empty());
    if hint.is_none() && query.samples.is_empty() {
        return Err(QueryError::EmptyQuery("need a name hint or samples"));
    }
    if let Some(first) = query.samples.first() {
        let arity = first.args.len();
        if let Some(bad) = query.samples.iter().find(|s| s.args.len() != arity) {
            return Err(QueryError::InvalidSamples(format!(
                "mixed arity: {} then {}",
                arity,
                bad.args.len()
            )));
        }
    }

    let mut hits = Vec::new();
    for id in snapshot.ids_with_prefix(Prefix::Exe) {
        let Some(record) = snapshot.get(id) else {
            continue;
        };
        if let Some(hint) = &hint {
            let name_match = fold_phrase(&record.fields.name).contains(hint.as_str());
            let exe_match = record
                .fields
                .executable_name
                .as_deref()
                .map(|e| fold_phrase(e).contains(hint.as_str()))
                .unwrap_or(false);
            if !name_match && !exe_match {
                continue;
            }
        }
        if query.samples.is_empty() {
            hits.push(RankedHit {
                id,
                name: record.fields.name.clone(),
                score: 1.0,
                method: MethodTag::Operational,
                explanation: format!("name matched {:?}", query.name_hint.as_deref().unwrap_or("")),
            });
            continue;
        }
        let Some(program) = snapshot.program(id) else {
            continue;
        };
        let passed = query
            .samples
            .iter()
            .filter(|s| matches!(evaluate(&program, &s.args, step_budget), Ok(v) if v == s.expected))
            .count();
        if passed == 0 {
            continue;
        }
        hits.push(RankedHit {
            id,
            name: record.fields.name.clone(),
            score: passed as f64 / query.samples.len() as f64,
            method: MethodTag::Operational,
            explanation: format!("{passed}/{} samples passed", query.samples.len()),
        });
    }
    Ok(finalize(hits, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::Sample;
    use crate::minilang::Value;
    use crate::model::{AssetFields, AssetKind, Category};
    use crate::store::Snapshot;

    fn exe(seq: u64, name: &str, source: &str) -> crate::model::AssetRecord {
        let mut fields =
            AssetFields::new(name, AssetKind::new(Category::Implemented, "Libraries"));
        fields.payload = Some(source.to_string());
        fields.executable_name = Some(name.to_string());
        crate::model::AssetRecord {
            id: crate::model::AssetId::new(Prefix::Exe, seq),
            fields,
            created_at: 0,
        }
    }

    fn corpus() -> Snapshot {
        Snapshot::from_records(vec![
            exe(1, "adder", "fn(a: Int, b: Int) -> Int { a + b }"),
            exe(2, "subtract", "fn(a: Int, b: Int) -> Int { a - b }"),
            exe(3, "max", "fn(a: Int, b: Int) -> Int { if a > b then a else b }"),
            exe(4, "shout", "fn(s: Str) -> Str { concat(s, \"!\") }"),
        ])
    }

    fn samples(pairs: &[(&[i64], i64)]) -> Vec<Sample> {
        pairs
            .iter()
            .map(|(args, out)| Sample {
                args: args.iter().map(|v| Value::Int(*v)).collect(),
                expected: Value::Int(*out),
            })
            .collect()
    }

    /// Oracle: evaluate every executable payload directly and compare the
    /// engine's perfect-score set against that ground truth.
    #[test]
    fn perfect_scores_agree_with_direct_evaluation() {
        let snapshot = corpus();
        let probe = samples(&[(&[2, 3], 5), (&[10, -4], 6), (&[0, 0], 0)]);

        let mut oracle = Vec::new();
        for id in snapshot.ids_with_prefix(Prefix::Exe) {
            let program = snapshot.program(id).unwrap();
            if probe
                .iter()
                .all(|s| matches!(evaluate(&program, &s.args, 10_000), Ok(v) if v == s.expected))
            {
                oracle.push(id);
            }
        }
        assert_eq!(oracle.len(), 1, "only the adder satisfies all probes");

        let hits = search_operational(
            &snapshot,
            &OperationalQ {
                name_hint: None,
                samples: probe,
            },
            10,
            10_000,
        )
        .unwrap();
        let perfect: Vec<_> = hits
            .iter()
            .filter(|h| h.score == 1.0)
            .map(|h| h.id)
            .collect();
        assert_eq!(perfect, oracle);
    }

    #[test]
    fn partial_matches_rank_below_perfect() {
        // max(2,3)=3 disagrees with a+b=5 on the first probe only
        let probe = samples(&[(&[2, 3], 5), (&[4, 4], 8)]);
        let hits = search_operational(
            &corpus(),
            &OperationalQ {
                name_hint: None,
                samples: probe,
            },
            10,
            10_000,
        )
        .unwrap();
        assert_eq!(hits[0].name, "adder");
        assert!((hits[0].score - 1.0).abs() < 1e-12);
        // max passes (4,4)->8? max(4,4)=4, no. subtract? 4-4=0, no.
        assert_eq!(hits.len(), 1);
    }

    #[test]
    fn type_errors_count_as_failures() {
        let probe = vec![Sample {
            args: vec![Value::Str("hi".into())],
            expected: Value::Str("hi!".into()),
        }];
        let hits = search_operational(
            &corpus(),
            &OperationalQ {
                name_hint: None,
                samples: probe,
            },
            10,
            10_000,
        )
        .unwrap();
        // Int-typed candidates fail on arity/type instead of crashing
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].name, "shout");
    }

    #[test]
    fn name_hint_narrows_candidates() {
        let probe = samples(&[(&[2, 3], 5)]);
        let hits = search_operational(
            &corpus(),
            &OperationalQ {
                name_hint: Some("ADD".into()),
                samples: probe.clone(),
            },
            10,
            10_000,
        )
        .unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].name, "adder");

        // hint that matches nothing
        let hits = search_operational(
            &corpus(),
            &OperationalQ {
                name_hint: Some("sort".into()),
                samples: probe,
            },
            10,
            10_000,
        )
        .unwrap();
        assert!(hits.is_empty());
    }

    #[test]
    fn hint_only_query_scores_names() {
        let hits = search_operational(
            &corpus(),
            &OperationalQ {
                name_hint: Some("subtract".into()),
                samples: vec![],
            },
            10,
            10_000,
        )
        .unwrap();
        assert_eq!(hits.len(), 1);
        assert!((hits[0].score - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mixed_arity_samples_rejected() {
        let err = search_operational(
            &corpus(),
            &OperationalQ {
                name_hint: None,
                samples: vec![
                    Sample {
                        args: vec![Value::Int(1)],
                        expected: Value::Int(1),
                    },
                    Sample {
                        args: vec![Value::Int(1), Value::Int(2)],
                        expected: Value::Int(3),
                    },
                ],
            },
            10,
            10_000,
        )
        .unwrap_err();
        assert!(matches!(err, QueryError::InvalidSamples(_)));
    }

    #[test]
    fn empty_query_rejected() {
        let err = search_operational(&corpus(), &OperationalQ::default(), 10, 10_000).unwrap_err();
        assert!(matches!(err, QueryError::EmptyQuery(_)));
    }

    #[test]
    fn step_budget_limits_runaway_candidates() {
        // a deep but terminating expression: budget 3 is too small even
        // for the adder
        let probe = samples(&[(&[2, 3], 5)]);
        let hits = search_operational(
            &corpus(),
            &OperationalQ {
                name_hint: None,
                samples: probe,
            },
            10,
            2,
        )
        .unwrap();
        assert!(hits.is_empty(), "budget exhaustion is a miss, not an error");
    }
}
