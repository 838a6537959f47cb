//! End-to-end compilation of author text into a [`DomainBundle`].
//!
//! Each sentence is classified by marker precedence (affordance markers,
//! then affect markers, otherwise a state description) unless the caller
//! names a category, and is applied atomically: a sentence that fails
//! leaves the bundle exactly as it was.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::affect::{
    build_affect_rule, build_affect_rule_from_clauses, parse_affect_target, split_affect_sentence, AffectLexicon,
    AffectOutcome, LexiconError,
};
use crate::affordance::{
    build_affordance, build_affordance_from_clauses, derive_affordance_name, find_markers, split_affordance,
    AffordanceOutcome, BuildOptions, PatternCatalog, PatternError, Segment,
};
use crate::config::{ConceptNetMode, Config, ConfigError};
use crate::domain::{slugify, validate_bundle, Diagnostic, DomainBundle, EmotionSpec, Slug, StateBody};
use crate::ingest::{
    builtin_parse_at, classify_state_kind, parse_conllu, prepare_graph, split_sentences, Provenance, Resolver,
    SentenceGraph,
};
use crate::semantics::{load_embeddings, EmbeddingError, Matcher};
use crate::states::{extract_states, ExtractedState, RuleCatalog, RuleError};
use crate::suggest::conceptnet::{CommonsenseOptions, QueryOptions};
use crate::suggest::{
    commonsense_suggestions, flag_incomplete_affordances, propose_missing_rules, sort_suggestions, ConceptNetClient,
    ConceptNetError, FixtureStore, LiveClient, PromptError, Prompts, RecordingClient, Suggestion,
};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Embeddings(#[from] EmbeddingError),
    #[error(transparent)]
    Rules(#[from] RuleError),
    #[error(transparent)]
    Patterns(#[from] PatternError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Prompts(#[from] PromptError),
    #[error(transparent)]
    ConceptNet(#[from] ConceptNetError),
    #[error("record mode needs a fixture path to append to (offline_conceptnet)")]
    NoRecordPath,
}

/// Input category chosen by the author, bypassing marker precedence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    State,
    Affordance,
    Affect,
}

/// How a sentence was handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    State,
    Affordance,
    Affect,
    /// A state sentence from which no rule extracted anything.
    Unmatched,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SentenceOutcome {
    States {
        states: Vec<ExtractedState>,
        /// `(object, type)` from a sentence such as "Max is a dog."
        declared_type: Option<(Slug, Slug)>,
    },
    Affordance(AffordanceOutcome),
    Affect(AffectOutcome),
    Failed {
        error: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SentenceReport {
    pub text: String,
    pub provenance: Provenance,
    pub classification: Classification,
    pub outcome: SentenceOutcome,
    /// States added by this sentence: `id`, or `id=value` for a new value
    /// of a fluent.
    pub new_states: Vec<String>,
    /// `owner:name` of affordances added by this sentence.
    pub new_affordances: Vec<String>,
    pub new_rules: usize,
    pub warnings: Vec<String>,
}

impl SentenceReport {
    pub fn failed(&self) -> bool {
        matches!(self.outcome, SentenceOutcome::Failed { .. })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub sentences: Vec<SentenceReport>,
    /// Problems with the submission as a whole; nothing was applied.
    pub errors: Vec<String>,
    /// Validation findings on the bundle after the submission.
    pub diagnostics: Vec<Diagnostic>,
}

impl Report {
    /// True when every sentence was applied and produced something.
    pub fn is_clean(&self) -> bool {
        self.errors.is_empty()
            && self.diagnostics.iter().all(|d| !d.is_error())
            && self.sentences.iter().all(|s| !s.failed() && s.classification != Classification::Unmatched)
    }
}

/// Loaded catalogs and embeddings; cheap to share between threads.
#[derive(Debug, Clone)]
pub struct Compiler {
    pub config: Config,
    pub rules: RuleCatalog,
    pub patterns: PatternCatalog,
    pub lexicon: AffectLexicon,
    pub prompts: Prompts,
    pub matcher: Matcher,
    pub emotions: Vec<EmotionSpec>,
}

impl Compiler {
    /// Loads every resource named in `config`, falling back to the bundled
    /// catalogs and the toy embedding table.
    pub fn from_config(config: Config) -> Result<Self, PipelineError> {
        config.check()?;
        let rules = match &config.rules {
            Some(p) => RuleCatalog::from_file(p)?,
            None => RuleCatalog::default(),
        };
        let patterns = match &config.patterns {
            Some(p) => PatternCatalog::from_file(p)?,
            None => PatternCatalog::default(),
        };
        let lexicon = match &config.lexicon {
            Some(p) => AffectLexicon::from_file(p)?,
            None => AffectLexicon::default(),
        };
        let prompts = match &config.prompts {
            Some(p) => Prompts::from_file(p)?,
            None => Prompts::default(),
        };
        let matcher = match &config.embeddings {
            Some(p) => Matcher::new(load_embeddings(p)?),
            None => Matcher::toy(),
        };
        let emotions = config.load_emotions()?;
        let compiler = Compiler { config, rules, patterns, lexicon, prompts, matcher, emotions };
        compiler.lexicon.check_catalogs(&compiler.new_bundle())?;
        Ok(compiler)
    }

    pub fn with_defaults() -> Result<Self, PipelineError> {
        Compiler::from_config(Config::default())
    }

    /// An empty bundle using the configured emotion catalog.
    pub fn new_bundle(&self) -> DomainBundle {
        DomainBundle { emotion_catalog: self.emotions.clone(), ..DomainBundle::default() }
    }

    pub fn build_options(&self) -> BuildOptions<'_> {
        BuildOptions {
            rules: &self.rules,
            patterns: &self.patterns,
            matcher: &self.matcher,
            threshold: self.config.matcher_threshold,
            strict: self.config.strict,
        }
    }

    /// Category chosen by marker precedence.
    pub fn classify(&self, sentence: &str) -> Category {
        let affordance: Vec<&str> =
            self.patterns.pre_markers().into_iter().chain(self.patterns.post_markers()).collect();
        if !find_markers(sentence, &affordance).is_empty() {
            Category::Affordance
        } else if !find_markers(sentence, &self.patterns.affect_markers).is_empty() {
            Category::Affect
        } else {
            Category::State
        }
    }

    /// Runs `text` (or the sentences of a CoNLL-U `sidecar`) through the
    /// pipeline. With a sidecar, its parses replace the built-in parser;
    /// `text`, when not empty, must have the same number of sentences.
    pub fn submit(
        &self,
        bundle: &mut DomainBundle,
        text: &str,
        category: Option<Category>,
        sidecar: Option<&str>,
    ) -> Report {
        let mut report = Report::default();
        let inputs: Vec<(String, Provenance, Option<SentenceGraph>)> = match sidecar {
            None => split_sentences(text).into_iter().map(|(s, p)| (s, p, None)).collect(),
            Some(conllu) => match self.sidecar_inputs(text, conllu) {
                Ok(inputs) => inputs,
                Err(e) => {
                    report.errors.push(e);
                    return report;
                }
            },
        };
        let mut resolver = self.resolver_for(bundle);
        for (sentence, provenance, graph) in inputs {
            let category = category.unwrap_or_else(|| self.classify(&sentence));
            report.sentences.push(self.submit_sentence(bundle, &mut resolver, &sentence, provenance, graph, category));
        }
        report.diagnostics = validate_bundle(bundle);
        report
    }

    fn sidecar_inputs(
        &self,
        text: &str,
        conllu: &str,
    ) -> Result<Vec<(String, Provenance, Option<SentenceGraph>)>, String> {
        let graphs = parse_conllu(conllu).map_err(|e| format!("sidecar: {e}"))?;
        let sentences = split_sentences(text);
        if !sentences.is_empty() && sentences.len() != graphs.len() {
            return Err(format!("sidecar has {} sentences but the text has {}", graphs.len(), sentences.len()));
        }
        Ok(graphs
            .into_iter()
            .enumerate()
            .map(|(i, g)| {
                let (text, provenance) = match sentences.get(i) {
                    Some((s, p)) => (s.clone(), *p),
                    None => (g.source.clone(), Provenance { line: i + 1, sentence: i + 1 }),
                };
                (text, provenance, Some(g))
            })
            .collect())
    }

    /// Pronoun resolver seeded with the bundle's objects. A lone object is
    /// the antecedent for pronouns that come before any name.
    fn resolver_for(&self, bundle: &DomainBundle) -> Resolver {
        let mut resolver = Resolver::new(bundle.objects.keys().map(|k| k.spaced()));
        if let [only] = bundle.objects.keys().collect::<Vec<_>>().as_slice() {
            resolver.set_antecedent(&crate::suggest::display_name(only));
        }
        resolver
    }

    fn submit_sentence(
        &self,
        bundle: &mut DomainBundle,
        resolver: &mut Resolver,
        sentence: &str,
        provenance: Provenance,
        graph: Option<SentenceGraph>,
        category: Category,
    ) -> SentenceReport {
        let saved_bundle = bundle.clone();
        let saved_resolver = resolver.clone();
        let errors_before = validate_bundle(bundle).into_iter().filter(Diagnostic::is_error).count();
        let result = match category {
            Category::State => self.state_sentence(bundle, resolver, sentence, provenance, graph),
            Category::Affordance => self.affordance_sentence(bundle, resolver, sentence, provenance, graph),
            Category::Affect => self.affect_sentence(bundle, resolver, sentence, provenance, graph),
        }
        .and_then(|(outcome, warnings)| {
            let errors: Vec<String> =
                validate_bundle(bundle).into_iter().filter(Diagnostic::is_error).map(|d| d.to_string()).collect();
            if errors.len() > errors_before {
                Err(format!("sentence would make the domain invalid: {}", errors.join("; ")))
            } else {
                Ok((outcome, warnings))
            }
        });
        let mut classification = match category {
            Category::State => Classification::State,
            Category::Affordance => Classification::Affordance,
            Category::Affect => Classification::Affect,
        };
        let (outcome, warnings) = match result {
            Ok(ok) => ok,
            Err(error) => {
                *bundle = saved_bundle.clone();
                *resolver = saved_resolver;
                (SentenceOutcome::Failed { error }, Vec::new())
            }
        };
        if let SentenceOutcome::States { states, declared_type: None } = &outcome {
            if states.is_empty() {
                classification = Classification::Unmatched;
            }
        }
        let new_states = state_keys(bundle).difference(&state_keys(&saved_bundle)).cloned().collect();
        let new_affordances = affordance_keys(bundle).difference(&affordance_keys(&saved_bundle)).cloned().collect();
        SentenceReport {
            text: sentence.to_string(),
            provenance,
            classification,
            outcome,
            new_states,
            new_affordances,
            new_rules: bundle.affect_rules.len() - saved_bundle.affect_rules.len(),
            warnings,
        }
    }

    fn parse(
        &self,
        sentence: &str,
        provenance: Provenance,
        graph: Option<SentenceGraph>,
    ) -> Result<SentenceGraph, String> {
        match graph {
            Some(g) => Ok(g),
            None => builtin_parse_at(sentence, provenance).map_err(|e| e.to_string()),
        }
    }

    fn state_sentence(
        &self,
        bundle: &mut DomainBundle,
        resolver: &mut Resolver,
        sentence: &str,
        provenance: Provenance,
        graph: Option<SentenceGraph>,
    ) -> Result<(SentenceOutcome, Vec<String>), String> {
        let graph = self.parse(sentence, provenance, graph)?;
        let (clauses, unresolved) = prepare_graph(&graph, resolver);
        refuse_unresolved(&unresolved)?;
        if let Some((object, kind)) = type_declaration(&graph) {
            bundle.declare_object(object.clone(), Some(kind.clone()));
            let outcome = SentenceOutcome::States { states: Vec::new(), declared_type: Some((object, kind)) };
            return Ok((outcome, Vec::new()));
        }
        let mut states = Vec::new();
        for clause in &clauses {
            let kind = classify_state_kind(clause, &self.rules.fluent_keywords);
            for s in extract_states(clause, kind, &self.rules).map_err(|e| e.to_string())? {
                bundle.intern_state(&s.triple, kind).map_err(|e| e.to_string())?;
                states.push(s);
            }
        }
        let warnings = if states.is_empty() { vec![format!("no state found in {sentence:?}")] } else { Vec::new() };
        Ok((SentenceOutcome::States { states, declared_type: None }, warnings))
    }

    fn affordance_sentence(
        &self,
        bundle: &mut DomainBundle,
        resolver: &mut Resolver,
        sentence: &str,
        provenance: Provenance,
        graph: Option<SentenceGraph>,
    ) -> Result<(SentenceOutcome, Vec<String>), String> {
        let options = self.build_options();
        let outcome = match graph {
            None => {
                let draft = split_affordance(sentence, &self.patterns, provenance).map_err(|e| e.to_string())?;
                build_affordance(&draft, bundle, &options, resolver).map_err(|e| e.to_string())?
            }
            Some(graph) => {
                let pre: Vec<&str> = self.patterns.pre_markers();
                let post: Vec<&str> = self.patterns.post_markers();
                let mut cuts: Vec<((usize, usize), Segment)> = [
                    (first_token_marker(&graph, &pre), Segment::Pre),
                    (first_token_marker(&graph, &post), Segment::Post),
                ]
                .into_iter()
                .filter_map(|(hit, seg)| hit.map(|h| (h, seg)))
                .collect();
                if cuts.is_empty() {
                    return Err(format!("{sentence:?} has no affordance marker"));
                }
                cuts.sort_by_key(|((start, _), _)| *start);
                let head = segment_graph(&graph, 1, cuts[0].0 .0).ok_or("affordance sentence has no head clause")?;
                let (head_clauses, mut unresolved) = prepare_graph(&head, resolver);
                let first = head_clauses.first().ok_or("affordance head has no verb")?;
                let (owner, name) = derive_affordance_name(first).map_err(|e| e.to_string())?;
                let mut segments = Vec::new();
                for (k, ((_, end), seg)) in cuts.iter().enumerate() {
                    let stop = cuts.get(k + 1).map_or(graph.tokens.len() + 1, |((s, _), _)| *s);
                    if let Some(g) = segment_graph(&graph, *end, stop) {
                        let (clauses, missing) = prepare_graph(&g, resolver);
                        unresolved.extend(missing);
                        segments.push((*seg, clauses));
                    }
                }
                build_affordance_from_clauses(owner, name, segments, bundle, &options, unresolved)
                    .map_err(|e| e.to_string())?
            }
        };
        refuse_unresolved(&outcome.resolution.unresolved_pronouns)?;
        let mut warnings = Vec::new();
        if !outcome.added {
            warnings.push(format!(
                "affordance {} held back: {} condition(s) match no existing state",
                outcome.name,
                outcome.resolution.proposals.len()
            ));
        }
        warnings.extend(outcome.resolution.unmatched.iter().map(|c| format!("no condition found in {c:?}")));
        Ok((SentenceOutcome::Affordance(outcome), warnings))
    }

    fn affect_sentence(
        &self,
        bundle: &mut DomainBundle,
        resolver: &mut Resolver,
        sentence: &str,
        provenance: Provenance,
        graph: Option<SentenceGraph>,
    ) -> Result<(SentenceOutcome, Vec<String>), String> {
        let options = self.build_options();
        let outcome = match graph {
            None => {
                let draft = split_affect_sentence(sentence, &self.patterns, provenance).map_err(|e| e.to_string())?;
                build_affect_rule(&draft, &self.lexicon, bundle, &options, resolver).map_err(|e| e.to_string())?
            }
            Some(graph) => {
                let markers: Vec<&str> = self.patterns.affect_markers.iter().map(String::as_str).collect();
                let (start, end) = first_token_marker(&graph, &markers).ok_or("no affect marker")?;
                let stop = graph.tokens.len() + 1;
                let set = first_token_marker(&graph, SET_MARKERS).filter(|(s, _)| *s >= end);
                let cond_stop = set.map_or(stop, |(s, _)| s);
                let affect_graph = segment_graph(&graph, 1, start).ok_or("affect clause is empty")?;
                let mut affect_text = affect_graph.text();
                if let Some((s, _)) = set {
                    affect_text = format!("{affect_text}, {}", token_text(&graph, s, stop));
                }
                let parsed = parse_affect_target(&affect_text, &self.lexicon, bundle).map_err(|e| e.to_string())?;
                prepare_graph(&affect_graph, resolver);
                let condition = segment_graph(&graph, end, cond_stop).ok_or("affect condition is empty")?;
                let (clauses, unresolved) = prepare_graph(&condition, resolver);
                build_affect_rule_from_clauses(parsed, &condition.text(), &clauses, unresolved, bundle, &options)
                    .map_err(|e| e.to_string())?
            }
        };
        refuse_unresolved(&outcome.resolution.unresolved_pronouns)?;
        let mut warnings: Vec<String> = outcome
            .ignored_targets
            .iter()
            .map(|t| format!("only one affect target per sentence; ignored {t:?}"))
            .collect();
        if outcome.duplicate {
            warnings.push("an identical rule already exists".to_string());
        } else if !outcome.added {
            warnings.push(format!(
                "rule held back: {} condition(s) match no existing state",
                outcome.resolution.proposals.len()
            ));
        }
        Ok((SentenceOutcome::Affect(outcome), warnings))
    }

    /// ConceptNet client selected by the configuration.
    pub fn conceptnet_client(&self) -> Result<Box<dyn ConceptNetClient>, PipelineError> {
        let cfg = &self.config;
        Ok(match cfg.conceptnet_mode {
            ConceptNetMode::Replay => match &cfg.offline_conceptnet {
                Some(p) => Box::new(FixtureStore::from_file(p)?),
                None => Box::new(FixtureStore::bundled()),
            },
            ConceptNetMode::Live => Box::new(LiveClient::new(&cfg.conceptnet_endpoint, cfg.conceptnet_page_size)?),
            ConceptNetMode::Record => {
                let path = cfg.offline_conceptnet.clone().ok_or(PipelineError::NoRecordPath)?;
                let live = LiveClient::new(&cfg.conceptnet_endpoint, cfg.conceptnet_page_size)?;
                Box::new(RecordingClient::new(live, path))
            }
        })
    }

    /// Feedback suggestions, plus common-sense ones when a client is given.
    pub fn suggestions(
        &self,
        bundle: &DomainBundle,
        client: Option<&dyn ConceptNetClient>,
    ) -> Result<Vec<Suggestion>, ConceptNetError> {
        let cfg = &self.config;
        let step = self.lexicon.default_magnitude;
        let mut out = propose_missing_rules(bundle, &self.matcher, cfg.feedback_threshold, step, &self.prompts);
        out.extend(flag_incomplete_affordances(bundle, cfg.min_pre, cfg.min_post, &self.prompts));
        if let Some(client) = client {
            let options = CommonsenseOptions {
                query: QueryOptions { min_weight: cfg.conceptnet_min_weight, page_size: cfg.conceptnet_page_size },
                trigger_threshold: cfg.affect_trigger_threshold,
                step,
                prompts: &self.prompts,
            };
            out.extend(commonsense_suggestions(bundle, client, &self.matcher, &options)?);
        }
        sort_suggestions(&mut out);
        Ok(out)
    }
}

const SET_MARKERS: &[&str] = &["which sets", "which set", "and sets"];

fn refuse_unresolved(pronouns: &[String]) -> Result<(), String> {
    match pronouns {
        [] => Ok(()),
        _ => Err(format!(
            "no antecedent for {}; name the character before using a pronoun",
            pronouns.iter().map(|p| format!("{p:?}")).collect::<Vec<_>>().join(", ")
        )),
    }
}

fn state_keys(bundle: &DomainBundle) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for (id, decl) in &bundle.states {
        match &decl.body {
            StateBody::Binary { .. } => {
                out.insert(id.to_string());
            }
            StateBody::Fluent { domain, .. } => out.extend(domain.iter().map(|v| format!("{id}={v}"))),
        }
    }
    out
}

fn affordance_keys(bundle: &DomainBundle) -> BTreeSet<String> {
    bundle.affordances.iter().map(|a| format!("{}:{}", a.owner, a.name)).collect()
}

/// Token span `[start, end)` of the earliest marker, preferring the
/// longer marker at equal starts.
fn first_token_marker<S: AsRef<str>>(graph: &SentenceGraph, markers: &[S]) -> Option<(usize, usize)> {
    let words: Vec<String> = graph.tokens.iter().map(|t| t.text.to_lowercase()).collect();
    markers
        .iter()
        .filter_map(|m| {
            let m: Vec<String> = m.as_ref().split_whitespace().map(str::to_lowercase).collect();
            (0..words.len())
                .find(|&i| words.get(i..i + m.len()) == Some(m.as_slice()))
                .map(|i| (i + 1, i + 1 + m.len()))
        })
        .min_by_key(|&(s, e)| (s, std::cmp::Reverse(e)))
}

fn token_text(graph: &SentenceGraph, from: usize, to: usize) -> String {
    crate::ingest::render_tokens(
        graph.tokens[from - 1..to - 1].iter().filter(|t| t.pos != "PUNCT").map(|t| t.text.as_str()),
    )
}

/// Sub-graph of tokens `[from, to)` without punctuation, rooted at the
/// first verb whose head lies outside the span.
fn segment_graph(graph: &SentenceGraph, from: usize, to: usize) -> Option<SentenceGraph> {
    let keep: Vec<usize> = (from..to).filter(|&i| graph.tokens[i - 1].pos != "PUNCT").collect();
    let outside: Vec<usize> = keep
        .iter()
        .copied()
        .filter(|&i| {
            let h = graph.tokens[i - 1].head;
            h == 0 || !keep.contains(&h)
        })
        .collect();
    let root = outside.iter().copied().find(|&i| graph.tokens[i - 1].is_verb()).or_else(|| outside.first().copied())?;
    Some(graph.induced(&keep, root))
}

/// `(object, type)` for "NAME is a TYPE" (copula as root or as `cop`).
pub fn type_declaration(graph: &SentenceGraph) -> Option<(Slug, Slug)> {
    let content: Vec<_> = graph.tokens.iter().filter(|t| t.pos != "PUNCT").collect();
    if content.len() != 4 {
        return None;
    }
    let root = graph.root();
    let noun = if root.lemma == "be" {
        graph.children(root.index).find(|c| matches!(c.deprel.as_str(), "dobj" | "obj" | "attr"))?
    } else if graph.children(root.index).any(|c| c.deprel == "cop" && c.lemma == "be") {
        root
    } else {
        return None;
    };
    let verb = if root.lemma == "be" { root.index } else { noun.index };
    let subject = graph.children(verb).find(|c| c.deprel.starts_with("nsubj") && c.pos == "PROPN")?;
    let det = graph.children(noun.index).find(|c| c.deprel == "det")?;
    if !matches!(det.lemma.to_lowercase().as_str(), "a" | "an") || noun.pos != "NOUN" {
        return None;
    }
    Some((slugify(&[subject.text.as_str()]).ok()?, slugify(&[noun.text.as_str()]).ok()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{StateId, StateKind};

    fn id(s: &str) -> StateId {
        StateId::new(s).unwrap()
    }

    const PROFILE: &str = "Max can go to different places such as restaurants and parks.\n\
        Max can engage in different activities including riding a horse.\n\
        Max can be aware of his surroundings.\n\
        Max can stand at the bus station.\n\
        Max would like to drink some juice.";

    #[test]
    fn profile_sentences() {
        let c = Compiler::with_defaults().unwrap();
        let mut b = c.new_bundle();
        let report = c.submit(&mut b, PROFILE, None, None);
        assert!(report.is_clean(), "{report:#?}");
        let go = &b.states[&id("max_go")];
        assert_eq!(go.kind(), StateKind::Fluent);
        let values: Vec<&str> = go.domain().iter().map(Slug::as_str).collect();
        assert_eq!(values, ["restaurant", "park"]);
        let engage = &b.states[&id("max_engage_in")];
        assert_eq!(engage.domain().iter().map(Slug::as_str).collect::<Vec<_>>(), ["ride_horse"]);
        let binary: Vec<&str> = b.states.values().filter(|s| !s.is_fluent()).map(|s| s.id.as_str()).collect();
        assert_eq!(binary, ["max_be_aware_surrounding", "max_drink_juice", "max_stand_station"]);
    }

    #[test]
    fn precedence_and_explicit_category() {
        let c = Compiler::with_defaults().unwrap();
        assert_eq!(c.classify("Max goes to the library only if he has an exam."), Category::Affordance);
        assert_eq!(c.classify("Max gets angry whenever he fails his exams."), Category::Affect);
        assert_eq!(c.classify("Max has an exam."), Category::State);
        let mut b = c.new_bundle();
        let r = c.submit(&mut b, "Max gets angry whenever he fails his exams.", Some(Category::State), None);
        assert!(b.affect_rules.is_empty());
        assert_ne!(r.sentences[0].classification, Classification::Affect);
    }

    #[test]
    fn worked_affordance_and_probability() {
        let c = Compiler::with_defaults().unwrap();
        let mut b = c.new_bundle();
        let r = c.submit(
            &mut b,
            "Max goes to the library only if he has an exam after which he feels more knowledgeable.",
            None,
            None,
        );
        assert!(r.is_clean(), "{r:#?}");
        assert_eq!(r.sentences[0].new_affordances, ["max:go_to_library"]);
        let a = &b.affordances[0];
        assert_eq!((a.preconditions.len(), a.postconditions.len()), (1, 1));
        assert_eq!(a.postconditions[0].probability, 1.0);
    }

    #[test]
    fn failing_sentence_leaves_bundle_untouched() {
        let c = Compiler::with_defaults().unwrap();
        let mut b = c.new_bundle();
        c.submit(&mut b, "Max has an exam.", None, None);
        let before = b.clone();
        let r = c.submit(&mut b, "Max goes to the library only if he has an exam. Max has an exam.", None, None);
        // the duplicate-free second run adds the affordance; a third fails as duplicate
        assert!(r.is_clean(), "{r:#?}");
        let mid = b.clone();
        let r = c.submit(&mut b, "Max goes to the library only if he has a book.", None, None);
        assert!(r.sentences[0].failed());
        assert_eq!(b, mid);
        assert_ne!(b, before);
    }

    #[test]
    fn unresolved_pronoun_fails_the_sentence() {
        let c = Compiler::with_defaults().unwrap();
        let mut b = c.new_bundle();
        let r = c.submit(&mut b, "He has an exam.", None, None);
        assert!(r.sentences[0].failed());
        assert!(b.states.is_empty());
        // with one known character, it becomes the antecedent
        c.submit(&mut b, "Max has a book.", None, None);
        let r = c.submit(&mut b, "He has an exam.", None, None);
        assert!(r.is_clean(), "{r:#?}");
        assert!(b.states.contains_key(&id("max_has_exam")));
    }

    #[test]
    fn type_sentences_declare_objects() {
        let c = Compiler::with_defaults().unwrap();
        let mut b = c.new_bundle();
        let r = c.submit(&mut b, "Max is a dog. Rio is a bird.", None, None);
        assert!(r.is_clean(), "{r:#?}");
        assert_eq!(b.objects[&Slug::new("max").unwrap()].type_tag.as_ref().unwrap().as_str(), "dog");
        assert_eq!(b.objects[&Slug::new("rio").unwrap()].type_tag.as_ref().unwrap().as_str(), "bird");
        assert!(b.states.is_empty());
    }

    #[test]
    fn empty_text_is_a_no_op() {
        let c = Compiler::with_defaults().unwrap();
        let mut b = c.new_bundle();
        let r = c.submit(&mut b, "  \n ", None, None);
        assert!(r.sentences.is_empty() && r.is_clean());
        assert_eq!(b, c.new_bundle());
    }

    #[test]
    fn sidecar_matches_builtin_parse() {
        let c = Compiler::with_defaults().unwrap();
        let text = "Max goes to the library only if he has an exam after which he possibly feels more knowledgeable. \
                    Max will get extremely angry whenever he fails his exams.";
        let sidecar = include_str!("../tests/data/worked.conllu");
        let mut from_text = c.new_bundle();
        let mut from_sidecar = c.new_bundle();
        let r = c.submit(&mut from_text, text, None, None);
        assert!(r.is_clean(), "{r:#?}");
        let r = c.submit(&mut from_sidecar, text, None, Some(sidecar));
        assert!(r.is_clean(), "{r:#?}");
        assert_eq!(from_sidecar, from_text);
        assert_eq!(from_text.affordances[0].postconditions[0].probability, 0.5);
        assert_eq!(from_text.affect_rules.len(), 1);
        // the text alone is enough when the sidecar carries `# text`
        let mut bare = c.new_bundle();
        assert!(c.submit(&mut bare, "", None, Some(sidecar)).is_clean());
        assert_eq!(bare, from_text);
        let r = c.submit(&mut bare, "One. Two. Three.", None, Some(sidecar));
        assert_eq!(r.errors.len(), 1);
    }

    #[test]
    fn suggestions_combine_engines() {
        let c = Compiler::with_defaults().unwrap();
        let mut b = c.new_bundle();
        c.submit(&mut b, "Max is a dog. Max sleeps.", None, None);
        let client = c.conceptnet_client().unwrap();
        let all = c.suggestions(&b, Some(client.as_ref())).unwrap();
        assert!(all.iter().any(|s| s.prompt == "Since 'Max' is a type of 'Dog', does it 'guide a blind person'?"));
        assert!(c.suggestions(&b, None).unwrap().iter().all(|s| !s.id.starts_with("capability")));
    }
}
