//! Synthetic ground-truth corpora. Relevance is constructed by planting:
//! each query gets a fresh marker token that is injected into exactly the
//! assets meant to answer it (keyword, identity, signature term, package,
//! name), except for behaviour queries where the ground truth is recomputed
//! by brute-force evaluation of every stored program.

use std::collections::BTreeSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::engines::{
    DenotationalQ, DescriptiveQ, InformationalQ, MethodTag, OperationalQ, Query, QueryVariant,
    Sample, StructuralQ, TopologicalQ,
};
use crate::minilang::generate::{gen_args, gen_pattern, gen_program, GenConfig};
use crate::minilang::{evaluate, parse_program, print_program, BaseType, HoleMode, Program, DEFAULT_STEP_BUDGET};
use crate::model::{AssetFields, AssetId, AssetKind, AssetRecord, Category, Prefix, SemanticSignature};

/// Generator parameters. `relevance_density` is the fraction of the corpus
/// planted as relevant for each query (at least one asset, at most the
/// method's candidate pool).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub corpus_size: usize,
    pub vocabulary_size: usize,
    pub relevance_density: f64,
    pub queries_per_method: usize,
}

impl Default for CorpusSpec {
    fn default() -> CorpusSpec {
        CorpusSpec {
            corpus_size: 60,
            vocabulary_size: 40,
            relevance_density: 0.05,
            queries_per_method: 3,
        }
    }
}

impl CorpusSpec {
    pub fn validate(&self) -> Result<(), EvalError> {
        if self.corpus_size < 1 {
            return Err(EvalError::InvalidSpec("corpus_size must be >= 1".into()));
        }
        if self.vocabulary_size < 10 {
            return Err(EvalError::InvalidSpec(
                "vocabulary_size must be >= 10".into(),
            ));
        }
        if !(self.relevance_density > 0.0 && self.relevance_density <= 1.0) {
            return Err(EvalError::InvalidSpec(
                "relevance_density must be in (0, 1]".into(),
            ));
        }
        if self.queries_per_method < 1 {
            return Err(EvalError::InvalidSpec(
                "queries_per_method must be >= 1".into(),
            ));
        }
        Ok(())
    }

    fn relevant_per_query(&self) -> usize {
        ((self.relevance_density * self.corpus_size as f64).round() as usize).max(1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruthQuery {
    pub query: Query,
    pub relevant: BTreeSet<AssetId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruthCorpus {
    pub assets: Vec<AssetRecord>,
    pub queries: Vec<GroundTruthQuery>,
    pub seed: u64,
    pub spec: CorpusSpec,
}

impl GroundTruthCorpus {
    pub fn queries_for(&self, method: MethodTag) -> impl Iterator<Item = &GroundTruthQuery> {
        self.queries
            .iter()
            .filter(move |q| q.query.variant.method() == method)
    }
}

const SYLLABLES: [&str; 24] = [
    "al", "bor", "cam", "del", "eth", "fin", "gor", "hul", "ith", "jar", "kel", "lom", "mer",
    "nav", "oss", "pel", "quin", "rud", "sol", "tam", "umb", "vex", "wol", "yar",
];

/// Deterministic, injective word list. Markers start with "zq", which no
/// syllable produces, so planted tokens never collide with filler words.
fn vocab_word(i: usize) -> String {
    let mut w = format!("{}{}", SYLLABLES[i % 24], SYLLABLES[(i / 24) % 24]);
    if i >= 24 * 24 {
        w.push_str(&(i / (24 * 24)).to_string());
    }
    w
}

fn marker(method_index: usize, query_index: usize, seed: u64) -> String {
    format!("zq{method_index}x{query_index}s{seed}")
}

const PREFIX_CYCLE: [Prefix; 6] = [
    Prefix::Text,
    Prefix::Key,
    Prefix::Exe,
    Prefix::NonExe,
    Prefix::Id,
    Prefix::Pat,
];

const LANGUAGES: [&str; 4] = ["Java", "C++", "Python", "C"];
const FAMILIES: [&str; 4] = ["Object oriented", "Functional", "Layered", "Pipeline"];

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().collect::<String>() + chars.as_str(),
        None => String::new(),
    }
}

struct Builder<'a> {
    rng: ChaCha8Rng,
    vocab: &'a [String],
    cfg: GenConfig,
}

impl<'a> Builder<'a> {
    fn word(&mut self) -> String {
        self.vocab[self.rng.gen_range(0..self.vocab.len())].clone()
    }

    fn sentence(&mut self, min: usize, max: usize) -> String {
        let n = self.rng.gen_range(min..=max);
        (0..n).map(|_| self.word()).collect::<Vec<_>>().join(" ")
    }

    fn kind(&mut self) -> AssetKind {
        let category = Category::ALL[self.rng.gen_range(0..Category::ALL.len())];
        let vocab = category.vocabulary();
        AssetKind::new(category, vocab[self.rng.gen_range(0..vocab.len())])
    }

    fn signature(&mut self) -> SemanticSignature {
        let n_inputs = self.rng.gen_range(0..=3);
        let mut pre_terms = BTreeSet::new();
        for _ in 0..self.rng.gen_range(1..=2) {
            pre_terms.insert(self.word());
        }
        let mut post_terms = BTreeSet::new();
        if self.rng.gen_bool(0.5) {
            post_terms.insert(self.word());
        }
        SemanticSignature {
            inputs: (0..n_inputs).map(|_| self.base_type()).collect(),
            output: self.base_type(),
            pre_terms,
            post_terms,
        }
    }

    fn base_type(&mut self) -> BaseType {
        match self.rng.gen_range(0..3) {
            0 => BaseType::Int,
            1 => BaseType::Str,
            _ => BaseType::Bool,
        }
    }

    /// Pattern program guaranteed to contain at least one hole; generation
    /// can produce hole-free bodies (single-leaf programs), so retry and
    /// finally fall back to a fixed template.
    fn holed_pattern(&mut self) -> Program {
        for _ in 0..16 {
            let holes = self.rng.gen_range(1..=2);
            let (program, _) = gen_pattern(&mut self.rng, &self.cfg, holes);
            if program.body.contains_holes() {
                return program;
            }
        }
        parse_program("fn(a: Int) -> Int { a + ?h0 }", HoleMode::Allow)
            .expect("fallback pattern parses")
    }

    fn asset(&mut self, index: usize) -> AssetRecord {
        let prefix = PREFIX_CYCLE[index % PREFIX_CYCLE.len()];
        let name = format!("{} {}", self.word(), self.word());
        let mut fields = AssetFields::new(name, self.kind());
        match prefix {
            Prefix::Text => {
                fields.label = Some(self.sentence(4, 7));
            }
            Prefix::Key => {
                for _ in 0..self.rng.gen_range(2..=4) {
                    let w = self.word();
                    fields.keywords.insert(w);
                }
                fields.language =
                    Some(LANGUAGES[self.rng.gen_range(0..LANGUAGES.len())].to_string());
            }
            Prefix::Exe => {
                let program = gen_program(&mut self.rng, &self.cfg);
                fields.payload = Some(print_program(&program));
                fields.executable_name = Some(format!("{}.exe", self.word()));
            }
            Prefix::NonExe => {
                fields.non_executable_name = Some(self.sentence(2, 3));
                fields.signature = Some(self.signature());
            }
            Prefix::Id => {
                fields.identity = Some(self.word());
            }
            Prefix::Pat => {
                let program = self.holed_pattern();
                fields.payload = Some(print_program(&program));
                fields.package = Some(capitalize(&self.word()));
                fields.class_name = Some(capitalize(&self.word()));
                fields.pattern_family =
                    Some(FAMILIES[self.rng.gen_range(0..FAMILIES.len())].to_string());
                fields.language = Some("Java".to_string());
            }
        }
        AssetRecord {
            id: AssetId::new(prefix, (index + 1) as u64),
            fields,
            created_at: index as i64,
        }
    }

    /// Up to `n` distinct indexes from `pool`, in ascending order.
    fn sample(&mut self, pool: &[usize], n: usize) -> Vec<usize> {
        let mut p = pool.to_vec();
        p.shuffle(&mut self.rng);
        p.truncate(n);
        p.sort_unstable();
        p
    }
}

/// Build a corpus with known relevance sets. Deterministic for a given
/// (spec, seed): same inputs serialize byte-identically.
pub fn generate_corpus(spec: &CorpusSpec, seed: u64) -> Result<GroundTruthCorpus, EvalError> {
    spec.validate()?;
    let vocab: Vec<String> = (0..spec.vocabulary_size).map(vocab_word).collect();
    let mut b = Builder {
        rng: ChaCha8Rng::seed_from_u64(seed),
        vocab: &vocab,
        cfg: GenConfig::default(),
    };

    let mut assets: Vec<AssetRecord> = (0..spec.corpus_size).map(|i| b.asset(i)).collect();
    let n_rel = spec.relevant_per_query();

    let mut queries: Vec<GroundTruthQuery> = Vec::new();
    // Behaviour queries record their samples here; the true relevant sets
    // are recomputed by brute force once all planting has finished.
    let mut pending_operational: Vec<(usize, Vec<Sample>)> = Vec::new();

    // Methods whose planting *replaces* a field must not reuse an asset
    // across queries, or a later plant would erase an earlier truth.
    let mut used_exe: BTreeSet<usize> = BTreeSet::new();
    let mut used_nonexe: BTreeSet<usize> = BTreeSet::new();
    let mut used_id: BTreeSet<usize> = BTreeSet::new();
    let mut used_pat: BTreeSet<usize> = BTreeSet::new();

    for (m_idx, &method) in MethodTag::ALL.iter().enumerate() {
        for q_idx in 0..spec.queries_per_method {
            let mk = marker(m_idx, q_idx, seed);
            match method {
                MethodTag::Informational => {
                    let pool: Vec<usize> = (0..assets.len()).collect();
                    let chosen = b.sample(&pool, n_rel);
                    let mut relevant = BTreeSet::new();
                    for &i in &chosen {
                        assets[i].fields.name.push_str(&format!(" {mk}"));
                        relevant.insert(assets[i].id);
                    }
                    // Filler terms give the ranking real postings to walk;
                    // the marker alone would make every query a tiny lookup.
                    let mut text = mk.clone();
                    for _ in 0..6 {
                        text.push(' ');
                        text.push_str(&b.word());
                    }
                    queries.push(GroundTruthQuery {
                        query: Query::new(QueryVariant::Informational(InformationalQ { text })),
                        relevant,
                    });
                }
                MethodTag::Descriptive => {
                    // Keywords flip an Id-only asset's classification, so
                    // plant everywhere else.
                    let pool: Vec<usize> = (0..assets.len())
                        .filter(|&i| assets[i].id.prefix != Prefix::Id)
                        .collect();
                    if pool.is_empty() {
                        continue;
                    }
                    let chosen = b.sample(&pool, n_rel);
                    let mut relevant = BTreeSet::new();
                    for &i in &chosen {
                        assets[i].fields.keywords.insert(mk.clone());
                        relevant.insert(assets[i].id);
                    }
                    queries.push(GroundTruthQuery {
                        query: Query::new(QueryVariant::Descriptive(DescriptiveQ {
                            keywords: BTreeSet::from([mk.clone()]),
                            facets: BTreeSet::new(),
                        })),
                        relevant,
                    });
                }
                MethodTag::Operational => {
                    let pool: Vec<usize> = (0..assets.len())
                        .filter(|&i| {
                            assets[i].id.prefix == Prefix::Exe && !used_exe.contains(&i)
                        })
                        .collect();
                    if pool.is_empty() {
                        continue;
                    }
                    let planted = plant_operational(&mut b, &mut assets, &pool);
                    used_exe.insert(planted.0);
                    pending_operational.push((queries.len(), planted.1.clone()));
                    queries.push(GroundTruthQuery {
                        query: Query::new(QueryVariant::Operational(OperationalQ {
                            name_hint: None,
                            samples: planted.1,
                        })),
                        relevant: BTreeSet::new(), // filled in after planting
                    });
                }
                MethodTag::Denotational => {
                    let pool: Vec<usize> = (0..assets.len())
                        .filter(|&i| {
                            assets[i].id.prefix == Prefix::NonExe && !used_nonexe.contains(&i)
                        })
                        .collect();
                    if pool.is_empty() {
                        continue;
                    }
                    let planted_sig = SemanticSignature {
                        inputs: (0..b.rng.gen_range(1..=3)).map(|_| b.base_type()).collect(),
                        output: b.base_type(),
                        pre_terms: BTreeSet::from([mk.clone()]),
                        post_terms: BTreeSet::new(),
                    };
                    let chosen = b.sample(&pool, n_rel);
                    let mut relevant = BTreeSet::new();
                    for &i in &chosen {
                        assets[i].fields.signature = Some(planted_sig.clone());
                        used_nonexe.insert(i);
                        relevant.insert(assets[i].id);
                    }
                    queries.push(GroundTruthQuery {
                        query: Query::new(QueryVariant::Denotational(DenotationalQ {
                            name_hint: None,
                            signature: Some(planted_sig),
                            spec_terms: BTreeSet::from([mk.clone()]),
                        })),
                        relevant,
                    });
                }
                MethodTag::Topological => {
                    let pool: Vec<usize> = (0..assets.len())
                        .filter(|&i| !used_id.contains(&i))
                        .collect();
                    if pool.is_empty() {
                        continue;
                    }
                    let chosen = b.sample(&pool, n_rel);
                    let mut relevant = BTreeSet::new();
                    for &i in &chosen {
                        assets[i].fields.identity = Some(mk.clone());
                        used_id.insert(i);
                        relevant.insert(assets[i].id);
                    }
                    queries.push(GroundTruthQuery {
                        query: Query::new(QueryVariant::Topological(TopologicalQ {
                            text: mk.clone(),
                        })),
                        relevant,
                    });
                }
                MethodTag::Structural => {
                    let pool: Vec<usize> = (0..assets.len())
                        .filter(|&i| {
                            assets[i].id.prefix == Prefix::Pat && !used_pat.contains(&i)
                        })
                        .collect();
                    if pool.is_empty() {
                        continue;
                    }
                    let chosen = b.sample(&pool, n_rel);
                    let mut relevant = BTreeSet::new();
                    for &i in &chosen {
                        assets[i].fields.package = Some(mk.clone());
                        used_pat.insert(i);
                        relevant.insert(assets[i].id);
                    }
                    queries.push(GroundTruthQuery {
                        query: Query::new(QueryVariant::Structural(StructuralQ {
                            package: Some(mk.clone()),
                            class_name: None,
                            pattern_family: None,
                            shape: None,
                        })),
                        relevant,
                    });
                }
            }
        }
    }

    // Behaviour ground truth: a program is relevant iff it reproduces every
    // sample exactly. Payloads are stable from here on, so this is the same
    // set a search at evaluation time faces.
    for (query_index, samples) in pending_operational {
        queries[query_index].relevant = behaviour_truth(&assets, &samples);
    }

    Ok(GroundTruthCorpus {
        assets,
        queries,
        seed,
        spec: spec.clone(),
    })
}

/// Choose an executable and draw samples it satisfies. Generated programs
/// can fault on some inputs (division by zero, overflow), so retry a few
/// targets/argument draws, then fall back to overwriting one pool entry
/// with a total arithmetic program.
fn plant_operational(
    b: &mut Builder<'_>,
    assets: &mut [AssetRecord],
    pool: &[usize],
) -> (usize, Vec<Sample>) {
    for _ in 0..8 {
        let target = pool[b.rng.gen_range(0..pool.len())];
        let source = assets[target].fields.payload.clone().unwrap_or_default();
        let Ok(program) = parse_program(&source, HoleMode::Forbid) else {
            continue;
        };
        'draws: for _ in 0..8 {
            let mut samples = Vec::with_capacity(3);
            for _ in 0..3 {
                let args = gen_args(&mut b.rng, &program);
                match evaluate(&program, &args, DEFAULT_STEP_BUDGET) {
                    Ok(expected) => samples.push(Sample { args, expected }),
                    Err(_) => continue 'draws,
                }
            }
            return (target, samples);
        }
    }
    // Total fallback: |args| <= 9 and small constants cannot fault.
    let target = pool[0];
    let c1 = b.rng.gen_range(2..=5);
    let c2 = b.rng.gen_range(0..=9);
    let source = format!("fn(a: Int) -> Int {{ a * {c1} + {c2} }}");
    let program = parse_program(&source, HoleMode::Forbid).expect("fallback program parses");
    assets[target].fields.payload = Some(source);
    let samples = (0..3)
        .map(|_| {
            let args = gen_args(&mut b.rng, &program);
            let expected = evaluate(&program, &args, DEFAULT_STEP_BUDGET)
                .expect("fallback program is total");
            Sample { args, expected }
        })
        .collect();
    (target, samples)
}

fn behaviour_truth(assets: &[AssetRecord], samples: &[Sample]) -> BTreeSet<AssetId> {
    let mut relevant = BTreeSet::new();
    'candidates: for record in assets {
        if record.id.prefix != Prefix::Exe {
            continue;
        }
        let Some(source) = record.fields.payload.as_deref() else {
            continue;
        };
        let Ok(program) = parse_program(source, HoleMode::Forbid) else {
            continue;
        };
        for sample in samples {
            match evaluate(&program, &sample.args, DEFAULT_STEP_BUDGET) {
                Ok(v) if v == sample.expected => {}
                _ => continue 'candidates,
            }
        }
        relevant.insert(record.id);
    }
    relevant
}
