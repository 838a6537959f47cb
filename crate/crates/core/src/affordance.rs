//! Affordance sentences: marker-based splitting, naming, condition
//! extraction and probability detection.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{
    slugify, Affordance, BundleError, Cnf, DomainBundle, Literal, PostCondition, Slug, SlugError, StateTriple,
};
use crate::ingest::{main_verb, prepare_graph, prepare_text, ParseError, Provenance, Resolver, SentenceGraph};
use crate::semantics::Matcher;
use crate::states::{extract_states, RuleCatalog, StateError};
use crate::unify::{unify_condition, NewStateProposal, Unified};

pub const PATTERNS_TOML: &str = include_str!("../resources/patterns.toml");

#[derive(Debug, Error)]
pub enum PatternError {
    #[error("pattern file is not valid: {0}")]
    Format(#[from] toml::de::Error),
    #[error("cannot read pattern file {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("marker {0:?} is empty or listed twice")]
    Marker(String),
    #[error("probability of {keyword:?} is {value}, outside (0, 1]")]
    Probability { keyword: String, value: f64 },
}

#[derive(Debug, Error)]
pub enum AffordanceError {
    #[error("no affordance marker in {0:?}")]
    NotAnAffordance(String),
    #[error("nothing precedes the first marker in {0:?}")]
    EmptyHead(String),
    #[error("no verb to name the affordance in {0:?}")]
    NoVerb(String),
    #[error("no owner for the affordance in {0:?}")]
    NoOwner(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Naming(#[from] SlugError),
    #[error(transparent)]
    Bundle(#[from] BundleError),
}

/// One pre-marker / post-marker pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitPattern {
    pub name: String,
    pub pre_marker: String,
    pub post_marker: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbabilityKeyword {
    pub keyword: String,
    pub value: f64,
}

/// Every marker list used to split sentences, plus the uncertainty map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternCatalog {
    pub affect_markers: Vec<String>,
    #[serde(rename = "pattern")]
    pub patterns: Vec<SplitPattern>,
    #[serde(rename = "probability", default)]
    pub probabilities: Vec<ProbabilityKeyword>,
}

impl Default for PatternCatalog {
    fn default() -> Self {
        PatternCatalog::parse(PATTERNS_TOML).expect("bundled patterns are valid")
    }
}

impl PatternCatalog {
    pub fn parse(text: &str) -> Result<Self, PatternError> {
        let catalog: PatternCatalog = toml::from_str(text)?;
        catalog.check()?;
        Ok(catalog)
    }

    pub fn from_file(path: &Path) -> Result<Self, PatternError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| PatternError::Io { path: path.display().to_string(), source })?;
        PatternCatalog::parse(&text)
    }

    pub fn check(&self) -> Result<(), PatternError> {
        let mut seen = HashSet::new();
        let all = self.patterns.iter().flat_map(|p| [&p.pre_marker, &p.post_marker]).chain(&self.affect_markers);
        for m in all {
            let norm = normalize(m);
            if norm.is_empty() || !seen.insert(norm) {
                return Err(PatternError::Marker(m.clone()));
            }
        }
        for p in &self.probabilities {
            if !(p.value > 0.0 && p.value <= 1.0) {
                return Err(PatternError::Probability { keyword: p.keyword.clone(), value: p.value });
            }
        }
        Ok(())
    }

    pub fn pre_markers(&self) -> Vec<&str> {
        self.patterns.iter().map(|p| p.pre_marker.as_str()).collect()
    }

    pub fn post_markers(&self) -> Vec<&str> {
        self.patterns.iter().map(|p| p.post_marker.as_str()).collect()
    }
}

fn normalize(s: &str) -> String {
    s.split_whitespace().map(str::to_lowercase).collect::<Vec<_>>().join(" ")
}

/// A marker occurrence: byte span in the searched text and marker index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MarkerHit {
    pub start: usize,
    pub end: usize,
    pub marker: usize,
}

fn is_word_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'\'' || b == b'_'
}

/// Non-overlapping marker occurrences in order; at each position the
/// longest marker wins. Matching ignores case and needs word boundaries.
pub fn find_markers<S: AsRef<str>>(text: &str, markers: &[S]) -> Vec<MarkerHit> {
    let lower = text.to_ascii_lowercase();
    let bytes = lower.as_bytes();
    let mut order: Vec<(usize, Vec<&str>)> = markers
        .iter()
        .enumerate()
        .map(|(i, m)| (i, m.as_ref().split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, w)| !w.is_empty())
        .collect();
    order.sort_by_key(|(_, w)| std::cmp::Reverse(w.iter().map(|x| x.len() + 1).sum::<usize>()));

    // try to match `words` at byte `pos`, allowing any whitespace between words
    let match_at = |pos: usize, words: &[&str]| -> Option<usize> {
        let mut p = pos;
        for (k, w) in words.iter().enumerate() {
            if k > 0 {
                let ws = bytes[p..].iter().take_while(|b| b.is_ascii_whitespace()).count();
                if ws == 0 {
                    return None;
                }
                p += ws;
            }
            let w = w.to_ascii_lowercase();
            if !lower[p..].starts_with(&w) {
                return None;
            }
            p += w.len();
        }
        (p == bytes.len() || !is_word_byte(bytes[p])).then_some(p)
    };

    let mut hits = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let at_boundary = pos == 0 || !is_word_byte(bytes[pos - 1]);
        if at_boundary && is_word_byte(bytes[pos]) {
            if let Some((marker, end)) = order.iter().find_map(|(i, w)| match_at(pos, w).map(|e| (*i, e))) {
                hits.push(MarkerHit { start: pos, end, marker });
                pos = end;
                continue;
            }
        }
        pos += 1;
    }
    hits
}

/// An affordance sentence cut at its markers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffordanceDraft {
    pub head: String,
    pub pre_marker: Option<String>,
    pub pre: Option<String>,
    pub post_marker: Option<String>,
    pub post: Option<String>,
    /// Sentence-final punctuation removed from the last segment.
    pub terminal: String,
    pub provenance: Provenance,
}

impl AffordanceDraft {
    /// Head, markers and segments joined back together.
    pub fn reassemble(&self) -> String {
        let mut parts = vec![self.head.as_str()];
        for (m, s) in [(&self.pre_marker, &self.pre), (&self.post_marker, &self.post)] {
            parts.extend(m.as_deref());
            parts.extend(s.as_deref());
        }
        format!("{}{}", parts.join(" "), self.terminal)
    }
}

fn trim_segment(s: &str) -> &str {
    s.trim().trim_end_matches(',').trim_end()
}

/// Splits at the first pre-marker and the first post-marker. Segments
/// without text are absent.
pub fn split_affordance(
    sentence: &str,
    patterns: &PatternCatalog,
    provenance: Provenance,
) -> Result<AffordanceDraft, AffordanceError> {
    let pre = patterns.pre_markers();
    let post = patterns.post_markers();
    let all: Vec<&str> = pre.iter().chain(&post).copied().collect();
    let body = sentence.trim();
    let stripped = body.trim_end_matches(['.', '!', '?']);
    let terminal = body[stripped.len()..].to_string();

    let mut first_pre = None;
    let mut first_post = None;
    for hit in find_markers(stripped, &all) {
        if hit.marker < pre.len() {
            first_pre.get_or_insert(hit);
        } else {
            first_post.get_or_insert(hit);
        }
    }
    let mut cuts: Vec<(MarkerHit, bool)> =
        first_pre.map(|h| (h, true)).into_iter().chain(first_post.map(|h| (h, false))).collect();
    if cuts.is_empty() {
        return Err(AffordanceError::NotAnAffordance(sentence.to_string()));
    }
    cuts.sort_by_key(|(h, _)| h.start);
    let head = trim_segment(&stripped[..cuts[0].0.start]);
    if head.is_empty() {
        return Err(AffordanceError::EmptyHead(sentence.to_string()));
    }
    let mut draft = AffordanceDraft {
        head: head.to_string(),
        pre_marker: None,
        pre: None,
        post_marker: None,
        post: None,
        terminal,
        provenance,
    };
    for (k, (hit, is_pre)) in cuts.iter().enumerate() {
        let end = cuts.get(k + 1).map_or(stripped.len(), |(h, _)| h.start);
        let marker = stripped[hit.start..hit.end].to_string();
        let segment = Some(trim_segment(&stripped[hit.end..end])).filter(|s| !s.is_empty()).map(str::to_string);
        if *is_pre {
            draft.pre_marker = Some(marker);
            draft.pre = segment;
        } else {
            draft.post_marker = Some(marker);
            draft.post = segment;
        }
    }
    Ok(draft)
}

/// Owner and name of the affordance a head clause describes: the verb lemma
/// with its particle, followed by the direct object or the first
/// preposition and its object.
pub fn derive_affordance_name(graph: &SentenceGraph) -> Result<(Slug, Slug), AffordanceError> {
    let verb = main_verb(graph);
    if !verb.is_verb() {
        return Err(AffordanceError::NoVerb(graph.source.clone()));
    }
    let owner = std::iter::successors(Some(verb), |t| graph.token(t.head))
        .find_map(|v| graph.children(v.index).find(|c| c.deprel.starts_with("nsubj")))
        .ok_or_else(|| AffordanceError::NoOwner(graph.source.clone()))?;
    let owner = slugify(&[owner.lemma.to_lowercase()])?;

    let lemma = |i: usize| graph.token(i).map(|t| t.lemma.to_lowercase()).unwrap_or_default();
    let mut words = vec![verb.lemma.to_lowercase()];
    words.extend(graph.children_with(verb.index, "prt").map(|t| lemma(t.index)));
    if let Some(obj) = graph.first_child(verb.index, "dobj") {
        words.push(lemma(obj.index));
    } else if let Some((prep, obj)) = graph
        .children_with(verb.index, "prep")
        .find_map(|p| graph.first_child(p.index, "pobj").map(|o| (p.index, o.index)))
    {
        words.push(lemma(prep));
        words.push(lemma(obj));
    }
    Ok((owner, slugify(&words)?))
}

/// Uncertainty of a segment: the value of the first catalog keyword it
/// contains, 1.0 when none does.
pub fn detect_probability(segment: &str, keywords: &[ProbabilityKeyword]) -> f64 {
    keywords.iter().find(|k| !find_markers(segment, &[k.keyword.as_str()]).is_empty()).map_or(1.0, |k| k.value)
}

/// A condition found in a segment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionTriple {
    pub triple: StateTriple,
    pub polarity: bool,
    /// Clause text the triple came from.
    pub clause: String,
}

/// Clause-level condition extraction over prepared graphs. Clauses no rule
/// matches are returned separately.
pub fn conditions_from_graphs(
    clauses: &[SentenceGraph],
    rules: &RuleCatalog,
) -> Result<(Vec<ConditionTriple>, Vec<String>), StateError> {
    let mut found = Vec::new();
    let mut unmatched = Vec::new();
    for clause in clauses {
        let states = extract_states(clause, crate::domain::StateKind::Binary, rules)?;
        if states.is_empty() {
            unmatched.push(clause.source.clone());
        }
        found.extend(states.into_iter().map(|s| ConditionTriple {
            triple: s.triple,
            polarity: s.polarity,
            clause: clause.source.clone(),
        }));
    }
    Ok((found, unmatched))
}

/// Binary-state triples of a segment; pronouns resolve against `resolver`.
pub fn extract_conditions(
    segment: &str,
    rules: &RuleCatalog,
    resolver: &mut Resolver,
) -> Result<Vec<StateTriple>, AffordanceError> {
    if segment.trim().is_empty() {
        return Ok(Vec::new());
    }
    let (clauses, _) = prepare_text(segment, Provenance::default(), resolver)?;
    let (found, _) = conditions_from_graphs(&clauses, rules)?;
    Ok(found.into_iter().map(|c| c.triple).collect())
}

/// Tunables shared by affordance and affect building.
#[derive(Debug, Clone)]
pub struct BuildOptions<'a> {
    pub rules: &'a RuleCatalog,
    pub patterns: &'a PatternCatalog,
    pub matcher: &'a Matcher,
    pub threshold: f64,
    /// Report unmatched conditions instead of creating states for them.
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Segment {
    Pre,
    Post,
    Condition,
}

/// How one condition ended up in the bundle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedCondition {
    pub segment: Segment,
    pub triple: StateTriple,
    pub literal: Option<Literal>,
    /// Similarity to the matched state; absent for newly created states.
    pub score: Option<f64>,
    pub created: bool,
    pub probability: f64,
}

/// Result of resolving all conditions of one sentence.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Resolution {
    pub conditions: Vec<ResolvedCondition>,
    /// Unmatched conditions held back in strict mode.
    pub proposals: Vec<NewStateProposal>,
    /// Clauses that produced no condition.
    pub unmatched: Vec<String>,
    pub unresolved_pronouns: Vec<String>,
}

/// Unifies condition triples with the bundle, interning new states unless
/// `strict`.
pub fn resolve_conditions(
    found: Vec<ConditionTriple>,
    segment: Segment,
    bundle: &mut DomainBundle,
    options: &BuildOptions<'_>,
    out: &mut Resolution,
) -> Result<(), BundleError> {
    for c in found {
        let probability = match segment {
            Segment::Post => detect_probability(&c.clause, &options.patterns.probabilities),
            _ => 1.0,
        };
        let resolved = match unify_condition(&c.triple, c.polarity, bundle, options.matcher, options.threshold) {
            Unified::Existing { literal, score } => ResolvedCondition {
                segment,
                triple: c.triple,
                literal: Some(literal),
                score: Some(score),
                created: false,
                probability,
            },
            Unified::Proposal(p) if options.strict => {
                out.proposals.push(p);
                continue;
            }
            Unified::Proposal(p) => {
                let literal = p.accept(bundle)?;
                ResolvedCondition {
                    segment,
                    triple: c.triple,
                    literal: Some(literal),
                    score: None,
                    created: true,
                    probability,
                }
            }
        };
        out.conditions.push(resolved);
    }
    Ok(())
}

/// Outcome of [`build_affordance`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AffordanceOutcome {
    pub owner: Slug,
    pub name: Slug,
    /// False when strict mode held the affordance back.
    pub added: bool,
    pub resolution: Resolution,
}

/// Builds the affordance described by `draft` and adds it to the bundle.
/// In strict mode an affordance with unmatched conditions is not added.
pub fn build_affordance(
    draft: &AffordanceDraft,
    bundle: &mut DomainBundle,
    options: &BuildOptions<'_>,
    resolver: &mut Resolver,
) -> Result<AffordanceOutcome, AffordanceError> {
    let (head_clauses, mut unresolved) = prepare_text(&draft.head, draft.provenance, resolver)?;
    let head = head_clauses.first().ok_or_else(|| AffordanceError::NoVerb(draft.head.clone()))?;
    let (owner, name) = derive_affordance_name(head)?;
    let mut segments = Vec::new();
    for (seg, text) in [(Segment::Pre, &draft.pre), (Segment::Post, &draft.post)] {
        if let Some(text) = text {
            let graph = crate::ingest::builtin_parse_at(text, draft.provenance)?;
            let (clauses, missing) = prepare_graph(&graph, resolver);
            unresolved.extend(missing);
            segments.push((seg, clauses));
        }
    }
    build_affordance_from_clauses(owner, name, segments, bundle, options, unresolved)
}

/// [`build_affordance`] over already prepared segment clauses.
pub fn build_affordance_from_clauses(
    owner: Slug,
    name: Slug,
    segments: Vec<(Segment, Vec<SentenceGraph>)>,
    bundle: &mut DomainBundle,
    options: &BuildOptions<'_>,
    unresolved: Vec<String>,
) -> Result<AffordanceOutcome, AffordanceError> {
    if bundle.affordance(&owner, &name).is_some() {
        return Err(BundleError::DuplicateAffordance { owner, name }.into());
    }
    let mut resolution = Resolution { unresolved_pronouns: unresolved, ..Resolution::default() };
    for (segment, clauses) in segments {
        let (found, unmatched) = conditions_from_graphs(&clauses, options.rules)?;
        resolution.unmatched.extend(unmatched);
        resolve_conditions(found, segment, bundle, options, &mut resolution)?;
    }
    if !resolution.proposals.is_empty() {
        return Ok(AffordanceOutcome { owner, name, added: false, resolution });
    }
    let mut affordance = Affordance::skeleton(owner.clone(), name.clone());
    let mut pres = Vec::new();
    for c in &resolution.conditions {
        let Some(literal) = c.literal.clone() else { continue };
        match c.segment {
            Segment::Post => {
                if !affordance.postconditions.iter().any(|p| p.literal == literal) {
                    affordance.postconditions.push(PostCondition { literal, probability: c.probability });
                }
            }
            _ if !pres.contains(&literal) => pres.push(literal),
            _ => {}
        }
    }
    affordance.preconditions = Cnf::all_of(pres);
    bundle.add_affordance(affordance)?;
    Ok(AffordanceOutcome { owner, name, added: true, resolution })
}
