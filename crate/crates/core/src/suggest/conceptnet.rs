//! ConceptNet access and the common-sense suggestion engine.
//!
//! Edges come from a [`ConceptNetClient`]: the [`FixtureStore`] replays a
//! recorded edge file, [`LiveClient`] calls the web API and
//! [`RecordingClient`] does both, appending what it fetches.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs::OpenOptions;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{
    slugify, slugify_phrase, AffectChange, AffectRule, AffectTarget, Cnf, DomainBundle, Slug, StateTriple,
};
use crate::semantics::Matcher;

use super::feedback::{literal_phrase, rule_conditions, target_key};
use super::{
    display_name, literal_key, render, sort_suggestions, ConditionRole, Payload, Prompts, Suggestion, SuggestionKind,
};

pub const CONCEPTNET_FIXTURE: &str = include_str!("../../resources/conceptnet_fixture.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Relation {
    /// ConceptNet calls this `CapableOf`.
    IsCapableOf,
    Causes,
    Entails,
    HasFirstSubevent,
    HasLastSubevent,
    CreatedBy,
    HasPrerequisite,
    CausesDesire,
    MotivatedByGoal,
}

impl Relation {
    /// Name used in ConceptNet URIs.
    pub fn api_name(self) -> &'static str {
        match self {
            Relation::IsCapableOf => "CapableOf",
            Relation::Causes => "Causes",
            Relation::Entails => "Entails",
            Relation::HasFirstSubevent => "HasFirstSubevent",
            Relation::HasLastSubevent => "HasLastSubevent",
            Relation::CreatedBy => "CreatedBy",
            Relation::HasPrerequisite => "HasPrerequisite",
            Relation::CausesDesire => "CausesDesire",
            Relation::MotivatedByGoal => "MotivatedByGoal",
        }
    }

    pub fn uri(self) -> String {
        format!("/r/{}", self.api_name())
    }

    /// Which side of an affordance an edge of this relation describes.
    pub fn condition_role(self) -> Option<ConditionRole> {
        match self {
            Relation::Causes | Relation::Entails | Relation::HasLastSubevent => Some(ConditionRole::Post),
            Relation::HasPrerequisite | Relation::HasFirstSubevent | Relation::CreatedBy => Some(ConditionRole::Pre),
            _ => None,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.api_name())
    }
}

impl FromStr for Relation {
    type Err = ConceptNetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let name = s.strip_prefix("/r/").unwrap_or(s);
        const ALL: [Relation; 9] = [
            Relation::IsCapableOf,
            Relation::Causes,
            Relation::Entails,
            Relation::HasFirstSubevent,
            Relation::HasLastSubevent,
            Relation::CreatedBy,
            Relation::HasPrerequisite,
            Relation::CausesDesire,
            Relation::MotivatedByGoal,
        ];
        if name == "IsCapableOf" {
            return Ok(Relation::IsCapableOf);
        }
        ALL.into_iter().find(|r| r.api_name() == name).ok_or_else(|| ConceptNetError::Relation(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConceptNetEdge {
    pub start: String,
    pub relation: Relation,
    pub end: String,
    pub weight: f64,
}

impl ConceptNetEdge {
    /// Words of the end concept: `/c/en/guide_a_blind_person/v` gives
    /// "guide a blind person".
    pub fn end_text(&self) -> Option<String> {
        concept_text(&self.end)
    }
}

/// English concept text of a `/c/en/...` URI.
pub fn concept_text(uri: &str) -> Option<String> {
    let mut parts = uri.split('/').skip(1);
    match (parts.next(), parts.next(), parts.next()) {
        (Some("c"), Some("en"), Some(term)) if !term.is_empty() => Some(term.replace('_', " ")),
        _ => None,
    }
}

pub fn concept_uri(concept: &Slug) -> String {
    format!("/c/en/{concept}")
}

#[derive(Debug, Error)]
pub enum ConceptNetError {
    #[error("unknown ConceptNet relation {0:?}")]
    Relation(String),
    #[error("fixture store line {line}: {message}")]
    Fixture { line: u64, message: String },
    #[error("cannot read fixture store {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("ConceptNet request to {url} failed: {message} (retry later, or run offline with --offline-conceptnet)")]
    Network { url: String, message: String },
    #[error("unexpected ConceptNet response from {url}: {message}")]
    Response { url: String, message: String },
}

/// Source of raw edges. Filtering happens in [`conceptnet_query`].
pub trait ConceptNetClient: Send + Sync {
    fn edges(&self, concept: &Slug, relation: Relation) -> Result<Vec<ConceptNetEdge>, ConceptNetError>;
}

#[derive(Deserialize)]
struct Record {
    start: String,
    relation: String,
    end: String,
    weight: f64,
}

/// Recorded edges, keyed by start concept and relation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FixtureStore {
    edges: BTreeMap<(String, Relation), Vec<ConceptNetEdge>>,
}

impl FixtureStore {
    pub fn parse(text: &str) -> Result<Self, ConceptNetError> {
        let mut reader =
            csv::ReaderBuilder::new().delimiter(b'\t').comment(Some(b'#')).flexible(false).from_reader(text.as_bytes());
        let mut store = FixtureStore::default();
        for row in reader.deserialize::<Record>() {
            let row = row.map_err(|e| ConceptNetError::Fixture {
                line: e.position().map_or(0, |p| p.line()),
                message: e.to_string(),
            })?;
            let relation: Relation = row.relation.parse()?;
            store.insert(ConceptNetEdge { start: row.start, relation, end: row.end, weight: row.weight });
        }
        Ok(store)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConceptNetError> {
        let text =
            std::fs::read_to_string(path).map_err(|source| ConceptNetError::Io { path: path.to_path_buf(), source })?;
        FixtureStore::parse(&text)
    }

    /// The fixture shipped with the library.
    pub fn bundled() -> Self {
        FixtureStore::parse(CONCEPTNET_FIXTURE).expect("bundled fixture is valid")
    }

    pub fn insert(&mut self, edge: ConceptNetEdge) {
        let key = (concept_text(&edge.start).unwrap_or_default().replace(' ', "_"), edge.relation);
        self.edges.entry(key).or_default().push(edge);
    }

    pub fn len(&self) -> usize {
        self.edges.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ConceptNetEdge> {
        self.edges.values().flatten()
    }
}

impl ConceptNetClient for FixtureStore {
    fn edges(&self, concept: &Slug, relation: Relation) -> Result<Vec<ConceptNetEdge>, ConceptNetError> {
        Ok(self.edges.get(&(concept.to_string(), relation)).cloned().unwrap_or_default())
    }
}

/// Client for the ConceptNet web API (`GET /query?start=..&rel=..`).
#[derive(Debug, Clone)]
pub struct LiveClient {
    endpoint: String,
    page_size: usize,
    max_pages: usize,
    http: reqwest::blocking::Client,
}

impl LiveClient {
    pub fn new(endpoint: &str, page_size: usize) -> Result<Self, ConceptNetError> {
        let http = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(20))
            .build()
            .map_err(|e| ConceptNetError::Network { url: endpoint.to_string(), message: e.to_string() })?;
        Ok(LiveClient { endpoint: endpoint.trim_end_matches('/').to_string(), page_size, max_pages: 3, http })
    }

    fn get(&self, url: &str) -> Result<serde_json::Value, ConceptNetError> {
        let network = |e: reqwest::Error| ConceptNetError::Network { url: url.to_string(), message: e.to_string() };
        let response = self.http.get(url).send().map_err(network)?.error_for_status().map_err(network)?;
        response.json().map_err(|e| ConceptNetError::Response { url: url.to_string(), message: e.to_string() })
    }
}

/// Edges and the next-page path of one API response.
pub fn parse_edge_page(body: &serde_json::Value) -> Result<(Vec<ConceptNetEdge>, Option<String>), String> {
    let edges = body.get("edges").and_then(|e| e.as_array()).ok_or("missing edges array")?;
    let mut out = Vec::new();
    for e in edges {
        let id = |field: &str| e.get(field).and_then(|v| v.get("@id")).and_then(|v| v.as_str());
        let (Some(start), Some(rel), Some(end)) = (id("start"), id("rel"), id("end")) else {
            return Err("edge without start, rel or end".to_string());
        };
        // Relations outside the catalog are not errors in API output.
        let Ok(relation) = rel.parse() else { continue };
        let weight = e.get("weight").and_then(|w| w.as_f64()).ok_or("edge without weight")?;
        out.push(ConceptNetEdge { start: start.to_string(), relation, end: end.to_string(), weight });
    }
    let next = body.pointer("/view/nextPage").and_then(|n| n.as_str()).map(str::to_string);
    Ok((out, next))
}

impl ConceptNetClient for LiveClient {
    fn edges(&self, concept: &Slug, relation: Relation) -> Result<Vec<ConceptNetEdge>, ConceptNetError> {
        let mut url = format!(
            "{}/query?start={}&rel={}&limit={}",
            self.endpoint,
            concept_uri(concept),
            relation.uri(),
            self.page_size
        );
        let mut out = Vec::new();
        for _ in 0..self.max_pages {
            let body = self.get(&url)?;
            let (edges, next) =
                parse_edge_page(&body).map_err(|message| ConceptNetError::Response { url: url.clone(), message })?;
            out.extend(edges.into_iter().filter(|e| e.relation == relation));
            match next {
                Some(path) if out.len() < self.page_size => url = format!("{}{path}", self.endpoint),
                _ => break,
            }
        }
        Ok(out)
    }
}

/// Live client that appends every fetched edge to a fixture file, so a
/// later run can replay it offline.
pub struct RecordingClient {
    inner: LiveClient,
    path: PathBuf,
    lock: Mutex<()>,
}

impl RecordingClient {
    pub fn new(inner: LiveClient, path: PathBuf) -> Self {
        RecordingClient { inner, path, lock: Mutex::new(()) }
    }
}

impl ConceptNetClient for RecordingClient {
    fn edges(&self, concept: &Slug, relation: Relation) -> Result<Vec<ConceptNetEdge>, ConceptNetError> {
        let edges = self.inner.edges(concept, relation)?;
        let _guard = self.lock.lock().unwrap_or_else(|e| e.into_inner());
        let io = |source| ConceptNetError::Io { path: self.path.clone(), source };
        let fresh = !self.path.exists();
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path).map_err(io)?;
        if fresh {
            writeln!(file, "start\trelation\tend\tweight").map_err(io)?;
        }
        for e in &edges {
            writeln!(file, "{}\t{}\t{}\t{:?}", e.start, e.relation.uri(), e.end, e.weight).map_err(io)?;
        }
        Ok(edges)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueryOptions {
    /// Edges below this weight are dropped.
    pub min_weight: f64,
    pub page_size: usize,
}

impl Default for QueryOptions {
    fn default() -> Self {
        QueryOptions { min_weight: 1.0, page_size: 50 }
    }
}

/// Edges of `relation` from `concept`, at least `min_weight` heavy, one
/// per end concept, heaviest first.
pub fn conceptnet_query(
    concept: &Slug,
    relation: Relation,
    client: &dyn ConceptNetClient,
    options: &QueryOptions,
) -> Result<Vec<ConceptNetEdge>, ConceptNetError> {
    let mut edges: Vec<ConceptNetEdge> = client
        .edges(concept, relation)?
        .into_iter()
        .filter(|e| e.relation == relation && e.weight >= options.min_weight && e.end_text().is_some())
        .collect();
    edges.sort_by(|a, b| b.weight.total_cmp(&a.weight).then_with(|| a.end.cmp(&b.end)));
    let mut seen = BTreeSet::new();
    edges.retain(|e| seen.insert(e.end_text()));
    edges.truncate(options.page_size);
    Ok(edges)
}

pub struct CommonsenseOptions<'a> {
    pub query: QueryOptions,
    /// Minimum similarity between an edge's end concept and an affect
    /// target for an affect-trigger suggestion.
    pub trigger_threshold: f64,
    /// Shift applied by rules created from accepted triggers.
    pub step: f64,
    pub prompts: &'a Prompts,
}

const CONDITION_RELATIONS: [Relation; 6] = [
    Relation::Causes,
    Relation::Entails,
    Relation::HasFirstSubevent,
    Relation::HasLastSubevent,
    Relation::CreatedBy,
    Relation::HasPrerequisite,
];

/// State triple for an affordance condition phrased by a concept: the
/// first word is the predicate, the rest the complement.
fn concept_triple(owner: &Slug, text: &str) -> Option<StateTriple> {
    let words: Vec<&str> = text.split_whitespace().collect();
    let (first, rest) = words.split_first()?;
    let predicate = slugify_phrase(first).ok()?;
    let complement = if rest.is_empty() { None } else { Some(slugify(rest).ok()?) };
    Some(StateTriple::new(owner.clone(), predicate, complement))
}

/// Capability, affordance-condition and affect-trigger suggestions for
/// everything in the bundle.
pub fn commonsense_suggestions(
    bundle: &DomainBundle,
    client: &dyn ConceptNetClient,
    matcher: &Matcher,
    options: &CommonsenseOptions<'_>,
) -> Result<Vec<Suggestion>, ConceptNetError> {
    let prompts = options.prompts;
    let mut out: BTreeMap<String, Suggestion> = BTreeMap::new();
    let mut add = |s: Suggestion| {
        if out.get(&s.id).is_none_or(|old| old.score < s.score) {
            out.insert(s.id.clone(), s);
        }
    };

    for obj in bundle.objects.values() {
        let Some(kind) = &obj.type_tag else { continue };
        for edge in conceptnet_query(kind, Relation::IsCapableOf, client, &options.query)? {
            let text = edge.end_text().expect("query keeps English ends");
            let Ok(name) = slugify_phrase(&text) else { continue };
            if bundle.affordance(&obj.name, &name).is_some() {
                continue;
            }
            let prompt = render(
                &prompts.capability,
                &[("object", &display_name(&obj.name)), ("type", &display_name(kind)), ("capability", &text)],
            );
            let payload = Payload::AddAffordance { owner: obj.name.clone(), name: name.clone() };
            let id = format!("capability:{}:{name}", obj.name);
            add(Suggestion::new(id, SuggestionKind::Capability, prompt, payload, edge.weight));
        }
    }

    for a in &bundle.affordances {
        for relation in CONDITION_RELATIONS {
            let role = relation.condition_role().expect("condition relation");
            for edge in conceptnet_query(&a.name, relation, client, &options.query)? {
                let text = edge.end_text().expect("query keeps English ends");
                let Some(triple) = concept_triple(&a.owner, &text) else { continue };
                let state = triple.binary_id();
                let present = match role {
                    ConditionRole::Pre => a.preconditions.literals().any(|l| l.state == state),
                    ConditionRole::Post => a.postconditions.iter().any(|p| p.literal.state == state),
                };
                if present {
                    continue;
                }
                let (template, role_name) = match role {
                    ConditionRole::Pre => (&prompts.pre_condition, "pre"),
                    ConditionRole::Post => (&prompts.post_condition, "post"),
                };
                let prompt = render(template, &[("concept", &text), ("affordance", &a.name.spaced())]);
                let id = format!("affordance-condition:{}:{}:{role_name}:{state}", a.owner, a.name);
                let payload =
                    Payload::AddCondition { owner: a.owner.clone(), affordance: a.name.clone(), role, triple };
                add(Suggestion::new(id, SuggestionKind::AffordanceCondition, prompt, payload, edge.weight));
            }
        }
    }

    let targets = bundle.affect_targets();
    for (literal, words) in rule_conditions(bundle) {
        let Ok(concept) = slugify(&words) else { continue };
        for relation in [Relation::CausesDesire, Relation::MotivatedByGoal] {
            for edge in conceptnet_query(&concept, relation, client, &options.query)? {
                let text = edge.end_text().expect("query keeps English ends");
                let end_words: Vec<&str> = text.split_whitespace().collect();
                let best = targets
                    .iter()
                    .filter_map(|t| {
                        let name: Vec<&str> = match t {
                            AffectTarget::Mood => vec!["mood"],
                            AffectTarget::Emotion(n) | AffectTarget::Motivation(n) => n.words().collect(),
                        };
                        matcher.phrase_similarity(&end_words, &name).map(|s| (t, s))
                    })
                    .fold(None::<(&AffectTarget, f64)>, |best, (t, s)| match best {
                        Some((_, b)) if b >= s => best,
                        _ => Some((t, s)),
                    });
                let Some((target, score)) = best.filter(|(_, s)| *s >= options.trigger_threshold) else { continue };
                if bundle.has_rule_for(&literal.state, target) {
                    continue;
                }
                let prompt = render(
                    &prompts.affect_trigger,
                    &[
                        ("state", &literal_phrase(bundle, &literal)),
                        ("target", &target.to_string()),
                        ("relation", relation.api_name()),
                        ("concept", &text),
                    ],
                );
                let rule = AffectRule {
                    condition: Cnf::all_of([literal.clone()]),
                    target: target.clone(),
                    change: AffectChange::shift(options.step),
                };
                let id = format!("affect-trigger:{}:{}", literal_key(&literal), target_key(target));
                add(Suggestion::new(id, SuggestionKind::AffectTrigger, prompt, Payload::AddRule { rule }, score));
            }
        }
    }

    let mut list: Vec<Suggestion> = out.into_values().collect();
    sort_suggestions(&mut list);
    Ok(list)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{Affordance, StateKind};
    use crate::suggest::{Decision, SuggestionLog};
    use proptest::prelude::*;
    use std::io::{BufRead, BufReader};
    use std::net::TcpListener;

    fn slug(s: &str) -> Slug {
        Slug::new(s).unwrap()
    }

    fn texts(edges: &[ConceptNetEdge]) -> Vec<String> {
        edges.iter().map(|e| e.end_text().unwrap()).collect()
    }

    fn options(prompts: &Prompts) -> CommonsenseOptions<'_> {
        CommonsenseOptions { query: QueryOptions::default(), trigger_threshold: 0.6, step: 0.2, prompts }
    }

    fn pets() -> DomainBundle {
        let mut b = DomainBundle::default();
        b.declare_object(slug("max"), Some(slug("dog")));
        b.declare_object(slug("rio"), Some(slug("bird")));
        b.add_affordance(Affordance::skeleton(slug("max"), slug("feed"))).unwrap();
        b.add_affordance(Affordance::skeleton(slug("max"), slug("play_guitar"))).unwrap();
        b
    }

    #[test]
    fn dog_and_bird_capabilities() {
        let store = FixtureStore::bundled();
        let dog = conceptnet_query(&slug("dog"), Relation::IsCapableOf, &store, &QueryOptions::default()).unwrap();
        assert_eq!(texts(&dog), ["bark", "guide a blind person", "learn to do tricks"]);
        let bird = conceptnet_query(&slug("bird"), Relation::IsCapableOf, &store, &QueryOptions::default()).unwrap();
        assert!(texts(&bird).contains(&"prepare nest".to_string()));
        assert!(conceptnet_query(&slug("cat"), Relation::IsCapableOf, &store, &QueryOptions::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn light_edges_never_returned() {
        let store = FixtureStore::bundled();
        let light: Vec<&ConceptNetEdge> = store.iter().filter(|e| e.weight < 1.0).collect();
        assert_eq!(light.len(), 4);
        for e in light {
            let concept = slug(&concept_text(&e.start).unwrap().replace(' ', "_"));
            let got = conceptnet_query(&concept, e.relation, &store, &QueryOptions::default()).unwrap();
            assert!(got.iter().all(|g| g.end != e.end), "{e:?}");
        }
    }

    proptest! {
        #[test]
        fn weight_filter_holds_for_any_store(
            weights in proptest::collection::vec(0.0f64..4.0, 1..20),
            min in 0.0f64..3.0,
        ) {
            let mut store = FixtureStore::default();
            for (i, w) in weights.iter().enumerate() {
                store.insert(ConceptNetEdge {
                    start: "/c/en/dog".into(),
                    relation: Relation::IsCapableOf,
                    end: format!("/c/en/thing{i}"),
                    weight: *w,
                });
            }
            let opts = QueryOptions { min_weight: min, page_size: 100 };
            let got = conceptnet_query(&slug("dog"), Relation::IsCapableOf, &store, &opts).unwrap();
            prop_assert!(got.iter().all(|e| e.weight >= min));
            prop_assert_eq!(got.len(), weights.iter().filter(|w| **w >= min).count());
        }
    }

    #[test]
    fn page_size_caps_results() {
        let opts = QueryOptions { min_weight: 1.0, page_size: 1 };
        let got = conceptnet_query(&slug("dog"), Relation::IsCapableOf, &FixtureStore::bundled(), &opts).unwrap();
        assert_eq!(texts(&got), ["bark"]);
    }

    #[test]
    fn relation_names() {
        assert_eq!("/r/CapableOf".parse::<Relation>().unwrap(), Relation::IsCapableOf);
        assert_eq!("IsCapableOf".parse::<Relation>().unwrap(), Relation::IsCapableOf);
        assert!("/r/Synonym".parse::<Relation>().is_err());
        assert_eq!(concept_text("/c/en/guide_a_blind_person/v"), Some("guide a blind person".into()));
        assert_eq!(concept_text("/c/fr/chien"), None);
    }

    #[test]
    fn malformed_fixture_line_is_located() {
        let text = "start\trelation\tend\tweight\n/c/en/dog\t/r/CapableOf\t/c/en/bark\theavy\n";
        let err = FixtureStore::parse(text).unwrap_err();
        assert!(matches!(err, ConceptNetError::Fixture { line: 2, .. }), "{err}");
    }

    #[test]
    fn capability_prompts_verbatim() {
        let prompts = Prompts::default();
        let got =
            commonsense_suggestions(&pets(), &FixtureStore::bundled(), &Matcher::toy(), &options(&prompts)).unwrap();
        let prompts: Vec<&str> = got.iter().map(|s| s.prompt.as_str()).collect();
        for want in [
            "Since 'Max' is a type of 'Dog', does it 'guide a blind person'?",
            "Since 'Rio' is a type of 'Bird', does it 'prepare nest'?",
            "Is 'fatten', a post-condition of 'feed'?",
            "Is 'have guitar in hands', a cause of 'play guitar'?",
        ] {
            assert!(prompts.contains(&want), "missing {want:?} in {prompts:#?}");
        }
        assert!(!prompts.iter().any(|p| p.contains("drive a car") || p.contains("give food")));
    }

    #[test]
    fn accepting_capability_adds_skeleton_and_converges() {
        let prompts = Prompts::default();
        let store = FixtureStore::bundled();
        let mut bundle = pets();
        let mut log = SuggestionLog::default();
        log.refresh(commonsense_suggestions(&bundle, &store, &Matcher::toy(), &options(&prompts)).unwrap());
        log.decide("capability:max:guide_blind_person", Decision::Accept, &mut bundle).unwrap();
        assert!(bundle.affordance(&slug("max"), &slug("guide_blind_person")).is_some());
        log.decide("affordance-condition:max:feed:post:max_fatten", Decision::Accept, &mut bundle).unwrap();
        log.decide("capability:rio:fly", Decision::Reject, &mut bundle).unwrap();
        let again = commonsense_suggestions(&bundle, &store, &Matcher::toy(), &options(&prompts)).unwrap();
        let ids: Vec<&str> = again.iter().map(|s| s.id.as_str()).collect();
        assert!(!ids.contains(&"capability:max:guide_blind_person"));
        assert!(!ids.contains(&"affordance-condition:max:feed:post:max_fatten"));
        log.refresh(again);
        assert!(log.pending().iter().all(|s| s.id != "capability:rio:fly"));
    }

    #[test]
    fn affect_triggers_need_similarity() {
        let prompts = Prompts::default();
        let mut b = DomainBundle::default();
        b.intern_state(&StateTriple::parse_parts("max", "fail", "exam").unwrap(), StateKind::Binary).unwrap();
        let got = commonsense_suggestions(&b, &FixtureStore::bundled(), &Matcher::toy(), &options(&prompts)).unwrap();
        let [s] = got.as_slice() else { panic!("{got:#?}") };
        assert_eq!(s.id, "affect-trigger:max_fail_exam:emotion:anger");
        // "be angry" reduces to "angry"; toy cosine with "anger" from numpy
        approx::assert_abs_diff_eq!(s.score, 0.917847230292452, epsilon = 1e-9);
        assert_eq!(
            s.prompt,
            "Can 'max fail exam' change emotion anger? ConceptNet: 'max fail exam' CausesDesire 'be angry'."
        );
        let strict = CommonsenseOptions { trigger_threshold: 0.95, ..options(&prompts) };
        assert!(commonsense_suggestions(&b, &FixtureStore::bundled(), &Matcher::toy(), &strict).unwrap().is_empty());
    }

    #[test]
    fn offline_output_is_repeatable() {
        let prompts = Prompts::default();
        let run = || {
            let s = commonsense_suggestions(&pets(), &FixtureStore::bundled(), &Matcher::toy(), &options(&prompts))
                .unwrap();
            serde_json::to_string(&s).unwrap()
        };
        assert_eq!(run(), run());
    }

    /// Serves canned bodies to successive requests and returns their paths.
    fn serve(bodies: Vec<String>) -> (String, std::thread::JoinHandle<Vec<String>>) {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = format!("http://{}", listener.local_addr().unwrap());
        let handle = std::thread::spawn(move || {
            let mut paths = Vec::new();
            for body in bodies {
                let (mut stream, _) = listener.accept().unwrap();
                let mut reader = BufReader::new(stream.try_clone().unwrap());
                let mut request_line = String::new();
                reader.read_line(&mut request_line).unwrap();
                paths.push(request_line.split_whitespace().nth(1).unwrap().to_string());
                let mut line = String::new();
                while reader.read_line(&mut line).unwrap() > 2 {
                    line.clear();
                }
                write!(stream, "HTTP/1.1 200 OK\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{body}", body.len()).unwrap();
            }
            paths
        });
        (addr, handle)
    }

    #[test]
    fn live_client_follows_pages_and_records() {
        let page = |end: &str, next: Option<&str>| {
            serde_json::json!({
                "edges": [
                    {"start": {"@id": "/c/en/dog"}, "rel": {"@id": "/r/CapableOf"}, "end": {"@id": end}, "weight": 2.0},
                    {"start": {"@id": "/c/en/dog"}, "rel": {"@id": "/r/RelatedTo"}, "end": {"@id": "/c/en/cat"}, "weight": 9.0}
                ],
                "view": next.map(|n| serde_json::json!({"nextPage": n})),
            })
            .to_string()
        };
        let (addr, server) = serve(vec![
            page("/c/en/bark", Some("/query?start=/c/en/dog&rel=/r/CapableOf&offset=1")),
            page("/c/en/fetch_stick/v", None),
        ]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("recorded.tsv");
        let client = RecordingClient::new(LiveClient::new(&addr, 5).unwrap(), path.clone());
        let got = conceptnet_query(&slug("dog"), Relation::IsCapableOf, &client, &QueryOptions::default()).unwrap();
        assert_eq!(texts(&got), ["bark", "fetch stick"]);
        let paths = server.join().unwrap();
        assert_eq!(paths[0], "/query?start=/c/en/dog&rel=/r/CapableOf&limit=5");
        assert!(paths[1].ends_with("offset=1"));
        let replay = FixtureStore::from_file(&path).unwrap();
        assert_eq!(replay.len(), 2);
        let again = conceptnet_query(&slug("dog"), Relation::IsCapableOf, &replay, &QueryOptions::default()).unwrap();
        assert_eq!(again, got);
    }

    #[test]
    fn unreachable_endpoint_reports_retry_hint() {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = format!("http://{}", listener.local_addr().unwrap());
        drop(listener);
        let err = LiveClient::new(&addr, 5).unwrap().edges(&slug("dog"), Relation::IsCapableOf).unwrap_err();
        assert!(matches!(err, ConceptNetError::Network { .. }));
        assert!(err.to_string().contains("--offline-conceptnet"));
    }
}
