//! Template retrieval: select pattern assets by packaging metadata and
//! payload shape. Metadata comparisons are case-insensitive; a shape, when
//! given, must match the candidate payload at the root and also admits
//! executable assets as candidates.

use std::collections::BTreeSet;

use crate::fold::fold_phrase;
use crate::minilang::{match_expr, parse_pattern_source, print_fragment, Expr};
use crate::model::{AssetId, Prefix};
use crate::store::Snapshot;

use super::{finalize, MethodTag, QueryError, RankedHit, StructuralQ};

pub fn search_structural(
    snapshot: &Snapshot,
    query: &StructuralQ,
    k: usize,
) -> Result<Vec<RankedHit>, QueryError> {
    let metadata: Vec<(&'static str, String)> = [
        ("package", &query.package),
        ("class", &query.class_name),
        ("family", &query.pattern_family),
    ]
    .into_iter()
    .filter_map(|(label, field)| {
        field
            .as_deref()
            .map(fold_phrase)
            .filter(|f| !f.is_empty())
            .map(|f| (label, f))
    })
    .collect();

    let shape: Option<Expr> = match &query.shape {
        Some(source) => Some(parse_pattern_source(source)?),
        None => None,
    };
    if metadata.is_empty() && shape.is_none() {
        return Err(QueryError::EmptyQuery("no structural selectors"));
    }
    if metadata.is_empty() {
        if let Some(shape) = &shape {
            if !shape.contains_holes() {
                tracing::warn!("degenerate structural query: hole-free shape with no metadata");
            }
        }
    }
    let selector_count = metadata.len() + usize::from(shape.is_some());

    let mut candidates: BTreeSet<AssetId> = snapshot.ids_with_prefix(Prefix::Pat).collect();
    if shape.is_some() {
        candidates.extend(snapshot.ids_with_prefix(Prefix::Exe));
    }

    let mut hits = Vec::new();
    for id in candidates {
        let Some(record) = snapshot.get(id) else {
            continue;
        };
        let mut matched = 0usize;
        let mut notes = Vec::new();
        for (label, wanted) in &metadata {
            let have = match *label {
                "package" => record.fields.package.as_deref(),
                "class" => record.fields.class_name.as_deref(),
                _ => record.fields.pattern_family.as_deref(),
            };
            if have.map(fold_phrase).as_deref() == Some(wanted.as_str()) {
                matched += 1;
                notes.push(format!("{label} {wanted:?}"));
            }
        }
        if let Some(shape) = &shape {
            let Some(program) = snapshot.program(id) else {
                continue;
            };
            // a shape is mandatory: candidates that don't carry it are out
            let Some(bindings) = match_expr(shape, &program.body) else {
                continue;
            };
            matched += 1;
            if bindings.is_empty() {
                notes.push("shape exact".to_string());
            } else {
                let rendered: Vec<String> = bindings
                    .iter()
                    .map(|(hole, fragment)| {
                        format!("{hole} = {}", print_fragment(fragment, &program))
                    })
                    .collect();
                notes.push(format!("shape bindings: {}", rendered.join("; ")));
            }
        }
        if matched == 0 {
            continue;
        }
        hits.push(RankedHit {
            id,
            name: record.fields.name.clone(),
            score: matched as f64 / selector_count as f64,
            method: MethodTag::Structural,
            explanation: notes.join(", "),
        });
    }
    Ok(finalize(hits, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AssetFields, AssetKind, Category};
    use crate::store::Snapshot;

    fn pattern(
        seq: u64,
        name: &str,
        package: Option<&str>,
        class_name: Option<&str>,
        family: Option<&str>,
        payload: &str,
    ) -> crate::model::AssetRecord {
        let mut fields = AssetFields::new(name, AssetKind::pattern_default());
        fields.package = package.map(str::to_string);
        fields.class_name = class_name.map(str::to_string);
        fields.pattern_family = family.map(str::to_string);
        fields.payload = Some(payload.to_string());
        fields.language = Some("Java".to_string());
        crate::model::AssetRecord {
            id: crate::model::AssetId::new(Prefix::Pat, seq),
            fields,
            created_at: 0,
        }
    }

    fn exe(seq: u64, name: &str, payload: &str) -> crate::model::AssetRecord {
        let mut fields =
            AssetFields::new(name, AssetKind::new(Category::Implemented, "Libraries"));
        fields.payload = Some(payload.to_string());
        crate::model::AssetRecord {
            id: crate::model::AssetId::new(Prefix::Exe, seq),
            fields,
            created_at: 0,
        }
    }

    fn corpus() -> Snapshot {
        Snapshot::from_records(vec![
            pattern(
                1,
                "City",
                Some("State"),
                Some("City"),
                Some("Object oriented"),
                "fn(n: Int) -> Int { ?seed + n }",
            ),
            pattern(
                2,
                "Router",
                Some("Net"),
                Some("Router"),
                Some("Object oriented"),
                "fn(n: Int) -> Int { ?base * n }",
            ),
            exe(3, "doubler", "fn(x: Int) -> Int { (x + 1) + (x + 1) }"),
            exe(4, "adder", "fn(a: Int, b: Int) -> Int { a + b }"),
        ])
    }

    #[test]
    fn metadata_match_is_case_insensitive() {
        let hits = search_structural(
            &corpus(),
            &StructuralQ {
                package: Some("state".into()),
                ..Default::default()
            },
            10,
        )
        .unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].name, "City");
        assert!((hits[0].score - 1.0).abs() < 1e-12);
    }

    #[test]
    fn score_is_matched_selector_fraction() {
        let hits = search_structural(
            &corpus(),
            &StructuralQ {
                package: Some("state".into()),
                pattern_family: Some("object ORIENTED".into()),
                ..Default::default()
            },
            10,
        )
        .unwrap();
        assert_eq!(hits[0].name, "City");
        assert!((hits[0].score - 1.0).abs() < 1e-12);
        assert_eq!(hits[1].name, "Router", "family matches, package does not");
        assert!((hits[1].score - 0.5).abs() < 1e-12);
    }

    /// Oracle: the doubled-addition shape matched by hand against every
    /// payload in the corpus picks out exactly the doubler.
    #[test]
    fn shape_matches_with_bindings_in_explanation() {
        let snapshot = corpus();
        let shape = parse_pattern_source("?a + ?a").unwrap();
        let manual: Vec<_> = snapshot
            .records()
            .filter_map(|r| snapshot.program(r.id).map(|p| (r.id, p)))
            .filter(|(_, p)| match_expr(&shape, &p.body).is_some())
            .map(|(id, _)| id)
            .collect();
        assert_eq!(manual.len(), 1);

        let hits = search_structural(
            &snapshot,
            &StructuralQ {
                shape: Some("?a + ?a".into()),
                ..Default::default()
            },
            10,
        )
        .unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].id, manual[0]);
        assert_eq!(hits[0].name, "doubler");
        assert!(
            hits[0].explanation.contains("a = x + 1"),
            "{}",
            hits[0].explanation
        );
    }

    #[test]
    fn shape_is_mandatory_when_present() {
        // metadata matches City but its holed payload cannot satisfy a
        // hole-binding shape, so nothing survives
        let hits = search_structural(
            &corpus(),
            &StructuralQ {
                package: Some("state".into()),
                shape: Some("?a * ?b".into()),
                ..Default::default()
            },
            10,
        )
        .unwrap();
        assert!(hits.is_empty());
    }

    #[test]
    fn hole_free_shape_is_exact_program_search() {
        let hits = search_structural(
            &corpus(),
            &StructuralQ {
                shape: Some("fn(a: Int, b: Int) -> Int { a + b }".into()),
                ..Default::default()
            },
            10,
        )
        .unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].name, "adder");
        assert_eq!(hits[0].explanation, "shape exact");
    }

    #[test]
    fn no_pattern_assets_means_empty_metadata_results() {
        let snapshot = Snapshot::from_records(vec![exe(1, "adder", "fn(a: Int) -> Int { a }")]);
        let hits = search_structural(
            &snapshot,
            &StructuralQ {
                package: Some("state".into()),
                ..Default::default()
            },
            10,
        )
        .unwrap();
        assert!(hits.is_empty());
    }

    #[test]
    fn unparsable_shape_is_reported() {
        let err = search_structural(
            &corpus(),
            &StructuralQ {
                shape: Some("?a +".into()),
                ..Default::default()
            },
            10,
        )
        .unwrap_err();
        assert!(matches!(err, QueryError::BadShape(_)));
    }

    #[test]
    fn no_selectors_rejected() {
        let err = search_structural(&corpus(), &StructuralQ::default(), 10).unwrap_err();
        assert!(matches!(err, QueryError::EmptyQuery(_)));
    }
}
