//! Word embeddings, phrase vectors and nearest-state matching.
//!
//! Embedding files use the word2vec text format: an optional header line
//! `count dim`, then one `word v1 ... vd` row per word, whitespace
//! separated.

use std::collections::HashMap;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::domain::{Slug, StateBody, StateDecl, StateId, StateTriple};

pub const TOY_EMBEDDINGS: &str = include_str!("../resources/toy_embeddings.txt");
/// SHA-256 of [`TOY_EMBEDDINGS`].
pub const TOY_EMBEDDINGS_SHA256: &str = "1353d82df02adc12a8ac84252758fddd629500c4d0514c9f8beacf8e21e4adb4";

#[derive(Debug, Error)]
pub enum EmbeddingError {
    #[error("embedding file has no vectors")]
    Empty,
    #[error("line {line}: expected {expected} values, found {found}")]
    Dimension { line: usize, expected: usize, found: usize },
    #[error("line {line}: {value:?} is not a number")]
    BadNumber { line: usize, value: String },
    #[error("cannot read embeddings from {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimilarityError {
    #[error("cosine of a zero vector is undefined")]
    ZeroVector,
    #[error("vectors have different dimensions ({0} and {1})")]
    DimensionMismatch(usize, usize),
}

/// Immutable word -> vector table.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dimension: usize,
    vectors: HashMap<String, Vec<f64>>,
}

impl EmbeddingTable {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.vectors.get(word).map(Vec::as_slice)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.vectors.contains_key(word)
    }

    /// Copy with every vector multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> EmbeddingTable {
        let vectors = self.vectors.iter().map(|(w, v)| (w.clone(), v.iter().map(|x| x * factor).collect())).collect();
        EmbeddingTable { dimension: self.dimension, vectors }
    }

    /// Parses word2vec text; duplicate words keep the last row.
    pub fn parse(text: &str) -> Result<Self, EmbeddingError> {
        let mut dimension: Option<usize> = None;
        let mut vectors: HashMap<String, Vec<f64>> = HashMap::new();
        let mut declared_count = None;
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            if i == 0 && fields.len() == 2 {
                if let (Ok(count), Ok(dim)) = (fields[0].parse::<usize>(), fields[1].parse::<usize>()) {
                    declared_count = Some(count);
                    dimension = Some(dim);
                    continue;
                }
            }
            let found = fields.len() - 1;
            let expected = *dimension.get_or_insert(found);
            if found != expected || found == 0 {
                return Err(EmbeddingError::Dimension { line: line_no, expected, found });
            }
            let values = fields[1..]
                .iter()
                .map(|v| {
                    v.parse::<f64>().map_err(|_| EmbeddingError::BadNumber { line: line_no, value: v.to_string() })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let word = fields[0].to_lowercase();
            if vectors.insert(word.clone(), values).is_some() {
                log::warn!("embedding for {word:?} repeated on line {line_no}; keeping the last one");
            }
        }
        if vectors.is_empty() {
            return Err(EmbeddingError::Empty);
        }
        if let Some(count) = declared_count.filter(|&c| c != vectors.len()) {
            log::warn!("embedding header declares {count} words, file has {}", vectors.len());
        }
        Ok(EmbeddingTable { dimension: dimension.unwrap_or(0), vectors })
    }
}

pub fn load_embeddings(path: &Path) -> Result<EmbeddingTable, EmbeddingError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| EmbeddingError::Io { path: path.display().to_string(), source })?;
    EmbeddingTable::parse(&text)
}

/// The bundled toy table covering the example vocabulary.
pub fn toy_embeddings() -> EmbeddingTable {
    EmbeddingTable::parse(TOY_EMBEDDINGS).expect("bundled embeddings parse")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Words dropped before averaging.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhraseFilter {
    pub light_verbs: Vec<String>,
    pub stopwords: Vec<String>,
}

const LIGHT_VERBS: &[&str] = &[
    "be", "is", "are", "am", "was", "were", "been", "being", "do", "does", "did", "done", "get", "gets", "got", "have",
    "has", "had", "make", "makes", "made", "take", "takes", "took",
];
const STOPWORDS: &[&str] =
    &["a", "an", "the", "in", "out", "to", "at", "of", "on", "for", "with", "from", "by", "up", "down", "not"];

impl Default for PhraseFilter {
    fn default() -> Self {
        PhraseFilter {
            light_verbs: LIGHT_VERBS.iter().map(|s| s.to_string()).collect(),
            stopwords: STOPWORDS.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl PhraseFilter {
    /// Content words of a phrase, or the phrase itself when nothing else
    /// would remain.
    pub fn content<'a, S: AsRef<str>>(&self, words: &'a [S]) -> Vec<&'a str> {
        let kept: Vec<&str> = words
            .iter()
            .map(AsRef::as_ref)
            .filter(|w| !self.light_verbs.iter().any(|l| l == w) && !self.stopwords.iter().any(|s| s == w))
            .collect();
        if kept.is_empty() {
            words.iter().map(AsRef::as_ref).collect()
        } else {
            kept
        }
    }
}

/// Unit-length mean of the in-vocabulary content words; `None` when no
/// word has a vector.
pub fn phrase_vector<S: AsRef<str>>(words: &[S], table: &EmbeddingTable, filter: &PhraseFilter) -> Option<Vec<f64>> {
    let content = filter.content(words);
    if content.iter().all(|w| filter.stopwords.iter().any(|s| s == w)) {
        return None;
    }
    let mut sum = vec![0.0; table.dimension()];
    let mut n = 0usize;
    for w in content {
        if let Some(v) = table.get(w) {
            for (s, x) in sum.iter_mut().zip(v) {
                *s += x;
            }
            n += 1;
        }
    }
    if n == 0 {
        return None;
    }
    let norm = sum.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return None;
    }
    Some(sum.into_iter().map(|x| x / norm).collect())
}

/// Words of `words` missing from the table.
pub fn out_of_vocabulary<S: AsRef<str>>(words: &[S], table: &EmbeddingTable, filter: &PhraseFilter) -> Vec<String> {
    filter.content(words).into_iter().filter(|w| !table.contains(w)).map(str::to_string).collect()
}

/// Cosine similarity, clamped to `[-1, 1]`.
pub fn similarity(u: &[f64], v: &[f64]) -> Result<f64, SimilarityError> {
    if u.len() != v.len() {
        return Err(SimilarityError::DimensionMismatch(u.len(), v.len()));
    }
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        return Err(SimilarityError::ZeroVector);
    }
    Ok((dot / (nu * nv)).clamp(-1.0, 1.0))
}

/// Best match of a query against known states.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateMatch {
    pub id: StateId,
    /// Fluent value the query was matched to.
    pub value: Option<Slug>,
    pub score: f64,
}

fn triple_words(t: &StateTriple) -> Vec<String> {
    let mut w: Vec<String> = t.predicate.words().map(str::to_string).collect();
    if let Some(c) = &t.complement {
        w.extend(c.words().map(str::to_string));
    }
    w
}

/// `(id, value, words)` phrases a state offers for matching; a fluent
/// offers one phrase per value.
fn candidate_phrases(decl: &StateDecl) -> Vec<(StateId, Option<Slug>, Vec<String>)> {
    match &decl.body {
        StateBody::Binary { triple } => vec![(decl.id.clone(), None, triple_words(triple))],
        StateBody::Fluent { variable, domain } => domain
            .iter()
            .map(|v| {
                let mut w: Vec<String> = variable.words().map(str::to_string).collect();
                w.extend(v.words().map(str::to_string));
                (decl.id.clone(), Some(v.clone()), w)
            })
            .collect(),
    }
}

/// Embedding table plus filter; cheap to clone and share.
#[derive(Debug, Clone)]
pub struct Matcher {
    pub table: std::sync::Arc<EmbeddingTable>,
    pub filter: PhraseFilter,
}

impl Matcher {
    pub fn new(table: EmbeddingTable) -> Self {
        Matcher { table: std::sync::Arc::new(table), filter: PhraseFilter::default() }
    }

    pub fn toy() -> Self {
        Matcher::new(toy_embeddings())
    }

    pub fn phrase<S: AsRef<str>>(&self, words: &[S]) -> Option<Vec<f64>> {
        phrase_vector(words, &self.table, &self.filter)
    }

    /// Cosine between two phrases; identical word lists score exactly 1.
    pub fn phrase_similarity<S: AsRef<str>, T: AsRef<str>>(&self, a: &[S], b: &[T]) -> Option<f64> {
        let same = a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.as_ref() == y.as_ref());
        if same && !a.is_empty() {
            return Some(1.0);
        }
        let (u, v) = (self.phrase(a)?, self.phrase(b)?);
        similarity(&u, &v).ok()
    }

    pub fn match_state<'a>(
        &self,
        query: &StateTriple,
        candidates: impl IntoIterator<Item = &'a StateDecl>,
        threshold: f64,
    ) -> Option<StateMatch> {
        match_state(query, candidates, self, threshold)
    }
}

/// Highest-scoring candidate at or above `threshold`. Only
/// `(predicate, complement)` is compared; callers pass the owner's states.
/// Ties go to the smallest `(id, value)`.
pub fn match_state<'a>(
    query: &StateTriple,
    candidates: impl IntoIterator<Item = &'a StateDecl>,
    matcher: &Matcher,
    threshold: f64,
) -> Option<StateMatch> {
    let q = triple_words(query);
    let mut best: Option<StateMatch> = None;
    for decl in candidates {
        for (id, value, words) in candidate_phrases(decl) {
            let Some(score) = matcher.phrase_similarity(&q, &words) else { continue };
            if score < threshold {
                continue;
            }
            let better = match &best {
                None => true,
                Some(b) => score > b.score || (score == b.score && (&id, &value) < (&b.id, &b.value)),
            };
            if better {
                best = Some(StateMatch { id, value, score });
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{DomainBundle, StateKind};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    // Oracle values below were computed with numpy from the fixture file,
    // independently of this module.
    const COS_MONEY_CASH: f64 = 0.9360533357206623;
    const COS_POSSESS_CASH_VS_MONEY: f64 = 0.8206245148078122;
    const COS_EATING_HUNGER: f64 = 0.8887021958589529;
    const AWARE_SURROUNDING_HEAD: [f64; 3] = [0.02243392609627825, -0.06320621139932346, 0.3263616660164294];

    fn t(p: &str, c: &str) -> StateTriple {
        StateTriple::parse_parts("max", p, c).unwrap()
    }

    #[test]
    fn parses_small_table() {
        let table = EmbeddingTable::parse("3 4\na 1 0 0 0\nb 0 1 0 0\nC 0 0 1 0\n").unwrap();
        assert_eq!((table.len(), table.dimension()), (3, 4));
        assert!(table.contains("c"));
    }

    #[test]
    fn header_dimension_is_enforced() {
        let err = EmbeddingTable::parse("2 4\na 1 2 3 4 5\n").unwrap_err();
        assert!(matches!(err, EmbeddingError::Dimension { line: 2, expected: 4, found: 5 }));
        assert!(matches!(EmbeddingTable::parse(""), Err(EmbeddingError::Empty)));
    }

    #[test]
    fn duplicate_word_keeps_last() {
        let table = EmbeddingTable::parse("a 1 0\na 0 1\n").unwrap();
        assert_eq!(table.get("a"), Some(&[0.0, 1.0][..]));
    }

    #[test]
    fn toy_fixture_matches_checksum() {
        assert_eq!(sha256_hex(TOY_EMBEDDINGS.as_bytes()), TOY_EMBEDDINGS_SHA256);
        let table = toy_embeddings();
        assert_eq!(table.len(), 56);
        for w in ["restaurant", "park", "horse", "surrounding", "station", "juice", "racing", "climbing"] {
            assert!(table.contains(w), "{w}");
        }
    }

    #[test]
    fn phrase_vector_drops_light_verbs() {
        let table = toy_embeddings();
        let f = PhraseFilter::default();
        let v = phrase_vector(&["be", "aware", "surrounding"], &table, &f).unwrap();
        for (got, want) in v.iter().zip(AWARE_SURROUNDING_HEAD) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-9);
        }
        let single = phrase_vector(&["money"], &table, &f).unwrap();
        let money = table.get("money").unwrap();
        let norm = money.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert_abs_diff_eq!(single[0], money[0] / norm, epsilon = 1e-12);
        assert_eq!(phrase_vector(&["the", "of"], &table, &f), None);
        assert_eq!(phrase_vector(&["zyzzyva"], &table, &f), None);
    }

    #[test]
    fn cosine_basics() {
        assert_abs_diff_eq!(similarity(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 1.0, epsilon = 1e-12);
        assert_eq!(similarity(&[1.0, 0.0], &[0.0, 3.0]), Ok(0.0));
        assert_eq!(similarity(&[0.0, 0.0], &[1.0, 0.0]), Err(SimilarityError::ZeroVector));
        let table = toy_embeddings();
        let s = similarity(table.get("money").unwrap(), table.get("cash").unwrap()).unwrap();
        assert_abs_diff_eq!(s, COS_MONEY_CASH, epsilon = 1e-6);
        let s = similarity(table.get("eating").unwrap(), table.get("hunger").unwrap()).unwrap();
        assert_abs_diff_eq!(s, COS_EATING_HUNGER, epsilon = 1e-6);
    }

    fn bundle_with(states: &[(&str, &str)]) -> DomainBundle {
        let mut b = DomainBundle::default();
        for (p, c) in states {
            b.intern_state(&t(p, c), StateKind::Binary).unwrap();
        }
        b
    }

    #[test]
    fn possess_cash_matches_has_money() {
        let b = bundle_with(&[("has", "money"), ("go", "park")]);
        let m = Matcher::toy().match_state(&t("possess", "cash"), b.states.values(), 0.7).unwrap();
        assert_eq!(m.id.as_str(), "max_has_money");
        assert_abs_diff_eq!(m.score, COS_POSSESS_CASH_VS_MONEY, epsilon = 1e-6);
    }

    #[test]
    fn identical_query_scores_one_and_unreachable_threshold_matches_nothing() {
        let b = bundle_with(&[("has", "money"), ("go", "park")]);
        let m = Matcher::toy();
        let hit = m.match_state(&t("go", "park"), b.states.values(), 0.75).unwrap();
        assert_eq!((hit.id.as_str(), hit.score), ("max_go_park", 1.0));
        assert_eq!(m.match_state(&t("go", "park"), b.states.values(), 1.01), None);
        assert_eq!(m.match_state(&t("ride", "dragon"), b.states.values(), 0.8), None);
    }

    #[test]
    fn fluent_values_are_separate_candidates() {
        let mut b = DomainBundle::default();
        b.intern_state(&t("go", "restaurant"), StateKind::Fluent).unwrap();
        b.intern_state(&t("go", "park"), StateKind::Fluent).unwrap();
        let hit = Matcher::toy().match_state(&t("go", "park"), b.states.values(), 0.75).unwrap();
        assert_eq!(hit.id.as_str(), "max_go");
        assert_eq!(hit.value.unwrap().as_str(), "park");
    }

    #[test]
    fn ties_break_on_identifier() {
        let table = EmbeddingTable::parse("x 1 0\ny 1 0\nz 0 1\n").unwrap();
        let b = bundle_with(&[("y", ""), ("x", "")]);
        let hit = Matcher::new(table).match_state(&t("z", "x"), b.states.values(), 0.1).unwrap();
        assert_eq!(hit.id.as_str(), "max_x");
    }

    const VOCAB: &[&str] = &[
        "money",
        "cash",
        "go",
        "park",
        "restaurant",
        "eat",
        "food",
        "horse",
        "ride",
        "exam",
        "book",
        "sleep",
        "help",
        "customer",
        "juice",
        "drink",
        "station",
        "dragon",
    ];

    proptest! {
        #[test]
        fn argmax_is_scale_invariant(
            cands in prop::collection::vec((prop::sample::select(VOCAB), prop::sample::select(VOCAB)), 1..6),
            query in (prop::sample::select(VOCAB), prop::sample::select(VOCAB)),
            factor in 0.01f64..100.0,
        ) {
            let mut b = DomainBundle::default();
            for (p, c) in &cands {
                b.intern_state(&t(p, c), StateKind::Binary).unwrap();
            }
            let q = t(query.0, query.1);
            let base = Matcher::toy();
            let scaled = Matcher::new(toy_embeddings().scaled(factor));
            let a = base.match_state(&q, b.states.values(), 0.3).map(|m| (m.id, m.value));
            let s = scaled.match_state(&q, b.states.values(), 0.3).map(|m| (m.id, m.value));
            prop_assert_eq!(a, s);
        }

        #[test]
        fn cosine_is_symmetric_and_bounded(
            u in prop::collection::vec(-10.0f64..10.0, 4),
            v in prop::collection::vec(-10.0f64..10.0, 4),
        ) {
            prop_assume!(u.iter().any(|x| *x != 0.0) && v.iter().any(|x| *x != 0.0));
            let a = similarity(&u, &v).unwrap();
            prop_assert!((-1.0..=1.0).contains(&a));
            prop_assert_eq!(a, similarity(&v, &u).unwrap());
        }

        #[test]
        fn phrase_vectors_have_unit_norm(words in prop::collection::vec(prop::sample::select(VOCAB), 1..5)) {
            let v = phrase_vector(&words, &toy_embeddings(), &PhraseFilter::default()).unwrap();
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            prop_assert!((n - 1.0).abs() < 1e-9);
        }
    }
}
