//! Rule-driven state extraction from dependency graphs.
//!
//! A [`RuleCatalog`] is data: each [`RelationRule`] names a dependency
//! path and how the visited tokens become a triple. The bundled catalog
//! lives in `resources/rules.toml`.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{slugify, BundleError, DomainBundle, SlugError, StateId, StateKind, StateTriple};
use crate::ingest::{keyword_matches, main_verb, SentenceGraph, Token};

pub const RULES_TOML: &str = include_str!("../resources/rules.toml");

#[derive(Debug, Error)]
pub enum StateError {
    #[error("no subject found in {sentence:?}")]
    MissingSubject { sentence: String },
    #[error("cannot name a state from {sentence:?}: {source}")]
    Naming { sentence: String, source: SlugError },
    #[error(transparent)]
    Bundle(#[from] BundleError),
}

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("rule file is not valid: {0}")]
    Format(#[from] toml::de::Error),
    #[error("cannot read rule file {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("rule {0} has an empty path")]
    EmptyPath(String),
    #[error("rule name {0} is used twice")]
    DuplicateName(String),
    #[error("rule {name}: {builder} needs a path of at least {needed} hops")]
    PathTooShort { name: String, builder: &'static str, needed: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleKind {
    Binary,
    Fluent,
    Both,
}

impl RuleKind {
    pub fn applies_to(self, kind: StateKind) -> bool {
        matches!(
            (self, kind),
            (RuleKind::Both, _) | (RuleKind::Binary, StateKind::Binary) | (RuleKind::Fluent, StateKind::Fluent)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Anchor {
    MainVerb,
    FluentKeyword,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredicateBuilder {
    Verb,
    VerbPrep,
    VerbFirst,
    PathHead,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplementBuilder {
    Last,
    VerbObject,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationRule {
    pub name: String,
    pub kind: RuleKind,
    #[serde(default)]
    pub tier: u8,
    pub anchor: Anchor,
    pub path: Vec<String>,
    pub predicate: PredicateBuilder,
    pub complement: ComplementBuilder,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleCatalog {
    pub fluent_keywords: Vec<String>,
    /// Predicate lemma rewrites, e.g. `have` -> `has`.
    #[serde(default)]
    pub aliases: BTreeMap<String, String>,
    #[serde(rename = "rule")]
    pub rules: Vec<RelationRule>,
}

impl Default for RuleCatalog {
    fn default() -> Self {
        RuleCatalog::parse(RULES_TOML).expect("bundled rules are valid")
    }
}

impl RuleCatalog {
    pub fn parse(text: &str) -> Result<Self, RuleError> {
        let catalog: RuleCatalog = toml::from_str(text)?;
        catalog.check()?;
        Ok(catalog)
    }

    pub fn from_file(path: &Path) -> Result<Self, RuleError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| RuleError::Io { path: path.display().to_string(), source })?;
        RuleCatalog::parse(&text)
    }

    pub fn check(&self) -> Result<(), RuleError> {
        let mut names = HashSet::new();
        for r in &self.rules {
            if r.path.is_empty() {
                return Err(RuleError::EmptyPath(r.name.clone()));
            }
            if !names.insert(&r.name) {
                return Err(RuleError::DuplicateName(r.name.clone()));
            }
            if r.complement == ComplementBuilder::VerbObject && r.path.len() < 2 {
                return Err(RuleError::PathTooShort { name: r.name.clone(), builder: "verb_object", needed: 2 });
            }
        }
        Ok(())
    }

    pub fn rule(&self, name: &str) -> Option<&RelationRule> {
        self.rules.iter().find(|r| r.name == name)
    }

    fn tiers(&self) -> Vec<u8> {
        let mut t: Vec<u8> = self.rules.iter().map(|r| r.tier).collect();
        t.sort_unstable();
        t.dedup();
        t
    }

    fn alias<'a>(&'a self, lemma: &'a str) -> &'a str {
        self.aliases.get(lemma).map(String::as_str).unwrap_or(lemma)
    }
}

/// A triple together with how it was found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtractedState {
    pub triple: StateTriple,
    /// False when the verb is negated ("does not have").
    pub polarity: bool,
    pub rule: String,
    /// Anchor token followed by the tokens visited along the rule's path;
    /// the last entry is the complement head or its conjunct.
    pub tokens: Vec<usize>,
}

/// Verbs a main-verb rule may start from: the root and its `to`-infinitive
/// chain down to the content verb.
fn verb_chain(graph: &SentenceGraph) -> Vec<usize> {
    let target = main_verb(graph).index;
    let mut chain = vec![graph.root().index];
    while *chain.last().expect("non-empty") != target {
        let cur = *chain.last().expect("non-empty");
        match graph.children_with(cur, "xcomp").find(|x| graph.dominates(x.index, target)) {
            Some(next) => chain.push(next.index),
            None => break,
        }
    }
    chain
}

/// Every token sequence reachable from `start` along `path`.
fn walk(graph: &SentenceGraph, start: usize, path: &[String]) -> Vec<Vec<usize>> {
    let mut frontier = vec![Vec::new()];
    let mut from = vec![start];
    for label in path {
        let mut next_frontier = Vec::new();
        let mut next_from = Vec::new();
        for (seq, &node) in frontier.iter().zip(&from) {
            for child in graph.children_with(node, label) {
                let mut s = seq.clone();
                s.push(child.index);
                next_frontier.push(s);
                next_from.push(child.index);
            }
        }
        frontier = next_frontier;
        from = next_from;
    }
    frontier
}

fn token(graph: &SentenceGraph, index: usize) -> &Token {
    graph.token(index).expect("index from graph")
}

fn lemma(t: &Token) -> String {
    t.lemma.to_lowercase()
}

fn with_particles(graph: &SentenceGraph, verb: usize, catalog: &RuleCatalog) -> Vec<String> {
    let mut words = vec![catalog.alias(&lemma(token(graph, verb))).to_string()];
    words.extend(graph.children_with(verb, "prt").map(lemma));
    words
}

fn is_negated(graph: &SentenceGraph, verbs: &[usize]) -> bool {
    verbs.iter().any(|&v| graph.children_with(v, "neg").next().is_some())
}

fn subject_of(graph: &SentenceGraph, chain: &[usize]) -> Option<usize> {
    chain.iter().find_map(|&v| graph.children(v).find(|c| c.deprel.starts_with("nsubj")).map(|c| c.index))
}

/// The final path token and its conjuncts, in sentence order.
fn conjuncts(graph: &SentenceGraph, last: usize) -> Vec<usize> {
    let mut out = vec![last];
    let mut i = 0;
    while i < out.len() {
        let cur = out[i];
        out.extend(graph.children_with(cur, "conj").map(|c| c.index));
        i += 1;
    }
    out.sort_unstable();
    out
}

fn naming_error(graph: &SentenceGraph) -> impl Fn(SlugError) -> StateError + '_ {
    |source| StateError::Naming { sentence: graph.source.clone(), source }
}

/// Applies the catalog to one simplified clause.
pub fn extract_states(
    graph: &SentenceGraph,
    kind: StateKind,
    catalog: &RuleCatalog,
) -> Result<Vec<ExtractedState>, StateError> {
    let chain = verb_chain(graph);
    let subject =
        subject_of(graph, &chain).ok_or_else(|| StateError::MissingSubject { sentence: graph.source.clone() })?;
    let subject = slugify(&[lemma(token(graph, subject))]).map_err(naming_error(graph))?;
    let content_verb = *chain.last().expect("non-empty");
    let keywords = keyword_matches(graph, &catalog.fluent_keywords);

    for tier in catalog.tiers() {
        let mut found: Vec<ExtractedState> = Vec::new();
        for rule in catalog.rules.iter().filter(|r| r.tier == tier && r.kind.applies_to(kind)) {
            let starts: Vec<(usize, Vec<Vec<usize>>)> = match rule.anchor {
                Anchor::MainVerb => chain.iter().map(|&v| (v, walk(graph, v, &rule.path))).collect(),
                Anchor::FluentKeyword => keywords
                    .iter()
                    .filter(|&&k| token(graph, k).deprel == rule.path[0])
                    .map(|&k| {
                        let rest = walk(graph, k, &rule.path[1..])
                            .into_iter()
                            .map(|mut s| {
                                s.insert(0, k);
                                s
                            })
                            .collect();
                        (content_verb, rest)
                    })
                    .collect(),
            };
            for (anchor, paths) in starts {
                for path in paths {
                    let last = *path.last().expect("non-empty path");
                    let predicate_words = match rule.predicate {
                        PredicateBuilder::Verb => with_particles(graph, anchor, catalog),
                        PredicateBuilder::VerbPrep => {
                            let mut w = with_particles(graph, anchor, catalog);
                            if let Some(p) =
                                graph.children_with(anchor, "prep").find(|p| graph.dominates(p.index, path[0]))
                            {
                                w.push(lemma(p));
                            }
                            w
                        }
                        PredicateBuilder::VerbFirst => {
                            let mut w = with_particles(graph, anchor, catalog);
                            w.push(lemma(token(graph, path[0])));
                            w
                        }
                        PredicateBuilder::PathHead => with_particles(graph, path[0], catalog),
                    };
                    let predicate = slugify(&predicate_words).map_err(naming_error(graph))?;
                    let mut verbs = vec![anchor];
                    if rule.predicate == PredicateBuilder::PathHead {
                        verbs.push(path[0]);
                    }
                    let polarity = !is_negated(graph, &verbs);
                    for c in conjuncts(graph, last) {
                        let mut words = Vec::new();
                        if rule.complement == ComplementBuilder::VerbObject {
                            words.push(lemma(token(graph, path[path.len() - 2])));
                        }
                        words.push(lemma(token(graph, c)));
                        let complement = slugify(&words).map_err(naming_error(graph))?;
                        let triple = StateTriple::new(subject.clone(), predicate.clone(), Some(complement));
                        if found.iter().any(|f| f.triple == triple) {
                            continue;
                        }
                        let mut tokens = vec![anchor];
                        tokens.extend(&path[..path.len() - 1]);
                        tokens.push(c);
                        found.push(ExtractedState { triple, polarity, rule: rule.name.clone(), tokens });
                    }
                }
            }
        }
        if !found.is_empty() {
            return Ok(found);
        }
    }
    Ok(Vec::new())
}

/// Triples only; see [`extract_states`].
pub fn extract_triples(
    graph: &SentenceGraph,
    kind: StateKind,
    catalog: &RuleCatalog,
) -> Result<Vec<StateTriple>, StateError> {
    Ok(extract_states(graph, kind, catalog)?.into_iter().map(|s| s.triple).collect())
}

/// Interns every triple, returning identifiers in input order.
pub fn build_state_decls(
    triples: &[StateTriple],
    kind: StateKind,
    bundle: &mut DomainBundle,
) -> Result<Vec<StateId>, StateError> {
    triples.iter().map(|t| bundle.intern_state(t, kind).map(|i| i.id).map_err(StateError::from)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{builtin_parse, classify_state_kind, parse_conllu, resolve_coreferences, simplify};
    use proptest::prelude::*;

    fn run(sentence: &str) -> Vec<StateTriple> {
        let catalog = RuleCatalog::default();
        let graph = builtin_parse(sentence).unwrap();
        let resolved = resolve_coreferences(&[graph], &[] as &[&str]).graphs.remove(0);
        let mut out = Vec::new();
        for clause in simplify(&resolved) {
            let kind = classify_state_kind(&clause, &catalog.fluent_keywords);
            out.extend(extract_triples(&clause, kind, &catalog).unwrap());
        }
        out
    }

    fn t(p: &str, c: &str) -> StateTriple {
        StateTriple::parse_parts("max", p, c).unwrap()
    }

    #[test]
    fn bundled_catalog_is_valid() {
        let c = RuleCatalog::default();
        assert_eq!(c.rules.len(), 7);
        assert_eq!(c.rules.iter().filter(|r| r.tier == 0).count(), 5);
    }

    #[test]
    fn profile_rows() {
        assert_eq!(
            run("Max can go to different places such as restaurants and parks."),
            [t("go", "restaurant"), t("go", "park")]
        );
        assert_eq!(
            run("Max can engage in different activities including riding a horse."),
            [t("engage_in", "ride_horse")]
        );
        assert_eq!(run("Max can be aware of his surroundings."), [t("be_aware", "surrounding")]);
        assert_eq!(run("Max can stand at the bus station."), [t("stand", "station")]);
        assert_eq!(run("Max would like to drink some juice."), [t("drink", "juice")]);
    }

    #[test]
    fn try_out_activities_sentence() {
        assert_eq!(
            run("Max would like to try out different activities such as racing and climbing."),
            [t("try_out", "racing"), t("try_out", "climbing")]
        );
    }

    #[test]
    fn fallback_tier_only_when_nothing_else_matches() {
        assert_eq!(run("Max has an exam."), [t("has", "exam")]);
        assert_eq!(run("Max feels more knowledgeable."), [t("feel", "knowledgeable")]);
        assert_eq!(run("Max fails his exams."), [t("fail", "exam")]);
        // tier 0 match suppresses the bare direct object
        assert_eq!(run("Max would like to drink some juice."), [t("drink", "juice")]);
    }

    #[test]
    fn negation_flips_polarity() {
        let g = builtin_parse("Max does not have an exam.").unwrap();
        let s = extract_states(&g, StateKind::Binary, &RuleCatalog::default()).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].triple, t("has", "exam"));
        assert!(!s[0].polarity);
    }

    #[test]
    fn missing_subject_is_an_error() {
        let text = "1\tgo\tgo\tVERB\t_\t_\t0\troot\t_\t_\n2\thome\thome\tNOUN\t_\t_\t1\tdobj\t_\t_\n";
        let g = parse_conllu(text).unwrap().remove(0);
        let err = extract_triples(&g, StateKind::Binary, &RuleCatalog::default()).unwrap_err();
        assert!(matches!(err, StateError::MissingSubject { .. }));
    }

    #[test]
    fn unmatched_sentence_yields_nothing() {
        assert!(run("Max sleeps.").is_empty());
    }

    #[test]
    fn grouping_into_one_fluent() {
        let mut b = DomainBundle::default();
        let triples = [t("go", "restaurant"), t("go", "park")];
        let ids = build_state_decls(&triples, StateKind::Fluent, &mut b).unwrap();
        assert_eq!(ids.iter().map(StateId::as_str).collect::<Vec<_>>(), ["max_go", "max_go"]);
        assert_eq!(b.states.len(), 1);
        assert_eq!(b.states[&ids[0]].domain().len(), 2);
        let snapshot = b.clone();
        build_state_decls(&triples, StateKind::Fluent, &mut b).unwrap();
        assert_eq!(b, snapshot);
    }

    #[test]
    fn catalog_rejects_bad_rules() {
        let empty = "fluent_keywords = []\n[[rule]]\nname = \"x\"\nkind = \"binary\"\nanchor = \"main_verb\"\npath = []\npredicate = \"verb\"\ncomplement = \"last\"\n";
        assert!(matches!(RuleCatalog::parse(empty), Err(RuleError::EmptyPath(_))));
        let dup = format!("{}{}", RULES_TOML, "\n[[rule]]\nname = \"direct_object\"\nkind = \"binary\"\nanchor = \"main_verb\"\npath = [\"dobj\"]\npredicate = \"verb\"\ncomplement = \"last\"\n");
        assert!(matches!(RuleCatalog::parse(&dup), Err(RuleError::DuplicateName(_))));
    }

    #[test]
    fn catalog_is_extensible() {
        let extra = format!(
            "{RULES_TOML}\n[[rule]]\nname = \"intransitive\"\nkind = \"binary\"\ntier = 2\nanchor = \"main_verb\"\npath = [\"advmod\"]\npredicate = \"verb\"\ncomplement = \"last\"\n"
        );
        let catalog = RuleCatalog::parse(&extra).unwrap();
        let g = builtin_parse("Max sleeps soundly.").unwrap();
        let got = extract_triples(&g, StateKind::Binary, &catalog).unwrap();
        assert_eq!(got, [t("sleep", "soundly")]);
    }

    const NOUNS: &[&str] = &["parks", "restaurants", "museums", "libraries", "beaches", "cafes"];

    proptest! {
        #[test]
        fn fan_out_matches_conjunct_count(picks in prop::sample::subsequence(NOUNS, 1..=6)) {
            let list = match picks.len() {
                1 => picks[0].to_string(),
                n => format!("{} and {}", picks[..n - 1].join(", "), picks[n - 1]),
            };
            let sentence = format!("Max can go to different places such as {list}.");
            let g = builtin_parse(&sentence).unwrap();
            let catalog = RuleCatalog::default();
            let states = extract_states(&g, StateKind::Fluent, &catalog).unwrap();
            prop_assert_eq!(states.len(), picks.len());
            prop_assert_eq!(&states, &extract_states(&g, StateKind::Fluent, &catalog).unwrap());
            for s in &states {
                let rule = catalog.rule(&s.rule).unwrap();
                // every hop follows the declared label; conjuncts hang off the last hop
                let (anchor, rest) = s.tokens.split_first().unwrap();
                prop_assert!(g.dominates(*anchor, rest[0]) || rule.anchor == Anchor::FluentKeyword);
                for (hop, label) in rest.iter().zip(&rule.path).take(rest.len() - 1) {
                    prop_assert_eq!(&g.token(*hop).unwrap().deprel, label);
                }
                let last = *rest.last().unwrap();
                let deprel = &g.token(last).unwrap().deprel;
                prop_assert!(deprel == rule.path.last().unwrap() || deprel == "conj");
            }
        }
    }
}
