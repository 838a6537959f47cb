//! Affect rules: "AFFECT whenever CONDITION" sentences become rules that
//! shift an emotion, the mood or a motivation, or set a motivation.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::affordance::{
    conditions_from_graphs, find_markers, resolve_conditions, BuildOptions, PatternCatalog, Resolution, Segment,
};
use crate::domain::{AffectChange, AffectRule, AffectTarget, BundleError, Cnf, DomainBundle, Slug};
use crate::ingest::{prepare_text, ParseError, Provenance, Resolver, SentenceGraph};
use crate::states::StateError;

pub const AFFECT_LEXICON_TOML: &str = include_str!("../resources/affect_lexicon.toml");

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("affect lexicon is not valid: {0}")]
    Format(#[from] toml::de::Error),
    #[error("cannot read affect lexicon {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("magnitude of {word:?} is {value}, outside (0, 1]")]
    Magnitude { word: String, value: f64 },
    #[error("magnitudes must grow from slightly to moderately to extremely")]
    NotMonotone,
    #[error("mood word {word:?} has direction {value}; use 1 or -1")]
    MoodDirection { word: String, value: i8 },
    #[error("{word:?} maps to {name}, which is not in the {catalog} catalog")]
    UnknownTarget { word: String, name: String, catalog: &'static str },
}

#[derive(Debug, Error)]
pub enum AffectError {
    #[error("no affect marker in {0:?}")]
    NotAnAffectRule(String),
    #[error("{0:?} has nothing before or after its affect marker")]
    EmptyPart(String),
    #[error("no emotion, mood or motivation word in {text:?} (candidates: {})", candidates.join(", "))]
    UnknownAffect { text: String, candidates: Vec<String> },
    #[error("cannot read the value set in {0:?}")]
    BadSetValue(String),
    #[error("{0} is not in this bundle's catalogs")]
    UnknownTarget(AffectTarget),
    #[error("no condition could be extracted from {0:?}")]
    NoCondition(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Bundle(#[from] BundleError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffectLexicon {
    pub default_magnitude: f64,
    #[serde(default)]
    pub negations: Vec<String>,
    pub emotions: BTreeMap<String, String>,
    #[serde(default)]
    pub moods: BTreeMap<String, i8>,
    #[serde(default)]
    pub motivations: BTreeMap<String, String>,
    pub magnitudes: BTreeMap<String, f64>,
}

impl Default for AffectLexicon {
    fn default() -> Self {
        AffectLexicon::parse(AFFECT_LEXICON_TOML).expect("bundled lexicon is valid")
    }
}

impl AffectLexicon {
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let lexicon: AffectLexicon = toml::from_str(text)?;
        lexicon.check()?;
        Ok(lexicon)
    }

    pub fn from_file(path: &Path) -> Result<Self, LexiconError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| LexiconError::Io { path: path.display().to_string(), source })?;
        AffectLexicon::parse(&text)
    }

    pub fn check(&self) -> Result<(), LexiconError> {
        let in_range = |v: f64| v > 0.0 && v <= 1.0;
        let entries = self.magnitudes.iter().map(|(w, v)| (w.as_str(), *v));
        for (word, value) in std::iter::once(("default_magnitude", self.default_magnitude)).chain(entries) {
            if !in_range(value) {
                return Err(LexiconError::Magnitude { word: word.to_string(), value });
            }
        }
        let ladder: Vec<f64> =
            ["slightly", "moderately", "extremely"].iter().filter_map(|w| self.magnitudes.get(*w).copied()).collect();
        if ladder.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LexiconError::NotMonotone);
        }
        if let Some((w, v)) = self.moods.iter().find(|(_, v)| v.abs() != 1) {
            return Err(LexiconError::MoodDirection { word: w.clone(), value: *v });
        }
        Ok(())
    }

    /// Checks that every target word maps into the bundle's catalogs.
    pub fn check_catalogs(&self, bundle: &DomainBundle) -> Result<(), LexiconError> {
        for (word, name) in &self.emotions {
            if !bundle.emotion_catalog.iter().any(|e| e.name.as_str() == name) {
                let (word, name) = (word.clone(), name.clone());
                return Err(LexiconError::UnknownTarget { word, name, catalog: "emotion" });
            }
        }
        for (word, name) in &self.motivations {
            if !bundle.motivation_catalog.factors.iter().any(|f| f.as_str() == name) {
                let (word, name) = (word.clone(), name.clone());
                return Err(LexiconError::UnknownTarget { word, name, catalog: "motivation" });
            }
        }
        Ok(())
    }
}

/// An affect sentence cut at its marker.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffectDraft {
    pub affect_text: String,
    pub marker: String,
    pub condition_text: String,
    pub provenance: Provenance,
}

const SET_MARKERS: &[&str] = &["which sets", "which set", "and sets"];

/// Splits at the first affect marker. A trailing "which sets X to N"
/// clause belongs to the affect side.
pub fn split_affect_sentence(
    sentence: &str,
    patterns: &PatternCatalog,
    provenance: Provenance,
) -> Result<AffectDraft, AffectError> {
    let body = sentence.trim().trim_end_matches(['.', '!', '?']);
    let hit = find_markers(body, &patterns.affect_markers)
        .into_iter()
        .next()
        .ok_or_else(|| AffectError::NotAnAffectRule(sentence.to_string()))?;
    let mut affect = body[..hit.start].trim().trim_end_matches(',').trim_end().to_string();
    let mut condition = body[hit.end..].trim();
    if let Some(set) = find_markers(condition, SET_MARKERS).first() {
        affect = format!("{affect}, {}", condition[set.start..].trim());
        condition = condition[..set.start].trim().trim_end_matches(',').trim_end();
    }
    if affect.is_empty() || condition.is_empty() {
        return Err(AffectError::EmptyPart(sentence.to_string()));
    }
    Ok(AffectDraft {
        affect_text: affect,
        marker: body[hit.start..hit.end].to_string(),
        condition_text: condition.to_string(),
        provenance,
    })
}

/// Target and change read from an affect clause.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AffectParse {
    pub target: AffectTarget,
    pub change: AffectChange,
    /// Further target words that were ignored; one rule per sentence.
    pub ignored: Vec<String>,
}

const FUNCTION_WORDS: &[&str] = &[
    "a", "an", "the", "will", "would", "can", "could", "should", "may", "might", "must", "be", "is", "are", "am",
    "get", "gets", "got", "become", "becomes", "became", "feel", "feels", "felt", "more", "which", "and", "to", "his",
    "her", "their", "its", "he", "she", "they", "it",
];

fn words_of(text: &str) -> Vec<String> {
    text.split(|c: char| !(c.is_alphanumeric() || c == '\'' || c == '_' || c == '.'))
        .map(|w| w.trim_matches('.').to_lowercase())
        .map(|w| w.strip_suffix("'s").map(str::to_string).unwrap_or(w))
        .filter(|w| !w.is_empty())
        .collect()
}

fn parse_set(text: &str, lexicon: &AffectLexicon) -> Result<Option<(Slug, f64)>, AffectError> {
    let words = words_of(text);
    let Some(set_at) = words.iter().position(|w| w == "sets" || w == "set") else { return Ok(None) };
    let Some(to_at) = words[set_at..].iter().position(|w| w == "to").map(|p| p + set_at) else {
        return Ok(None);
    };
    let Some(factor) = words[set_at + 1..to_at].iter().rev().find_map(|w| lexicon.motivations.get(w)) else {
        return Ok(None);
    };
    let value = words
        .get(to_at + 1)
        .and_then(|v| v.parse::<f64>().ok())
        .filter(|v| (0.0..=1.0).contains(v))
        .ok_or_else(|| AffectError::BadSetValue(text.to_string()))?;
    let factor = Slug::new(factor.clone()).map_err(|_| AffectError::BadSetValue(text.to_string()))?;
    Ok(Some((factor, value)))
}

/// Reads the target, direction and magnitude of an affect clause.
/// Emotions win over motivations, motivations over moods.
pub fn parse_affect_change(affect_text: &str, lexicon: &AffectLexicon) -> Result<AffectParse, AffectError> {
    let words = words_of(affect_text);
    let mut targets: Vec<(AffectTarget, i8, String)> = Vec::new();
    for w in &words {
        let slug = |name: &str| Slug::new(name).ok();
        if let Some(e) = lexicon.emotions.get(w).and_then(|n| slug(n)) {
            targets.push((AffectTarget::Emotion(e), 1, w.clone()));
        } else if let Some(m) = lexicon.motivations.get(w).and_then(|n| slug(n)) {
            targets.push((AffectTarget::Motivation(m), 1, w.clone()));
        } else if let Some(d) = lexicon.moods.get(w) {
            targets.push((AffectTarget::Mood, *d, w.clone()));
        }
    }

    if let Some((factor, value)) = parse_set(affect_text, lexicon)? {
        let ignored = targets
            .into_iter()
            .filter(|(t, _, _)| t != &AffectTarget::Motivation(factor.clone()))
            .map(|(_, _, w)| w)
            .collect();
        return Ok(AffectParse { target: AffectTarget::Motivation(factor), change: AffectChange::set(value), ignored });
    }

    let rank = |t: &AffectTarget| match t {
        AffectTarget::Emotion(_) => 0,
        AffectTarget::Motivation(_) => 1,
        AffectTarget::Mood => 2,
    };
    let Some(pick) = (0..targets.len()).min_by_key(|&i| (rank(&targets[i].0), i)) else {
        let candidates = words.into_iter().filter(|w| !FUNCTION_WORDS.contains(&w.as_str())).collect();
        return Err(AffectError::UnknownAffect { text: affect_text.to_string(), candidates });
    };
    let (target, direction, _) = targets.remove(pick);
    let ignored = targets.into_iter().map(|(_, _, w)| w).collect();

    let magnitude_words: Vec<&String> = lexicon.magnitudes.keys().collect();
    let magnitude = find_markers(affect_text, &magnitude_words)
        .first()
        .map_or(lexicon.default_magnitude, |h| lexicon.magnitudes[magnitude_words[h.marker]]);
    let negated = !find_markers(affect_text, &lexicon.negations).is_empty();
    let sign = f64::from(direction) * if negated { -1.0 } else { 1.0 };
    Ok(AffectParse { target, change: AffectChange::shift(sign * magnitude), ignored })
}

/// Outcome of [`build_affect_rule`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AffectOutcome {
    pub rule: AffectRule,
    /// False when strict mode held the rule back or an identical rule exists.
    pub added: bool,
    pub duplicate: bool,
    pub ignored_targets: Vec<String>,
    pub resolution: Resolution,
}

/// Reads the affect clause and checks its target exists in the bundle.
pub fn parse_affect_target(
    affect_text: &str,
    lexicon: &AffectLexicon,
    bundle: &DomainBundle,
) -> Result<AffectParse, AffectError> {
    let parsed = parse_affect_change(affect_text, lexicon)?;
    let known = match &parsed.target {
        AffectTarget::Mood => true,
        AffectTarget::Emotion(e) => bundle.emotion(e).is_some(),
        AffectTarget::Motivation(m) => bundle.motivation_catalog.contains(m),
    };
    if known {
        Ok(parsed)
    } else {
        Err(AffectError::UnknownTarget(parsed.target))
    }
}

/// Builds the rule a draft describes and appends it to the bundle.
pub fn build_affect_rule(
    draft: &AffectDraft,
    lexicon: &AffectLexicon,
    bundle: &mut DomainBundle,
    options: &BuildOptions<'_>,
    resolver: &mut Resolver,
) -> Result<AffectOutcome, AffectError> {
    let parsed = parse_affect_target(&draft.affect_text, lexicon, bundle)?;
    // the affect clause introduces the antecedent for the condition's pronouns
    let core = draft.affect_text.split(',').next().unwrap_or_default();
    if let Err(e) = prepare_text(core, draft.provenance, resolver) {
        log::debug!("affect clause {core:?} not parsed: {e}");
    }
    let (clauses, unresolved) = prepare_text(&draft.condition_text, draft.provenance, resolver)?;
    build_affect_rule_from_clauses(parsed, &draft.condition_text, &clauses, unresolved, bundle, options)
}

/// [`build_affect_rule`] over an already read affect clause and prepared
/// condition clauses.
pub fn build_affect_rule_from_clauses(
    parsed: AffectParse,
    condition_text: &str,
    clauses: &[SentenceGraph],
    unresolved: Vec<String>,
    bundle: &mut DomainBundle,
    options: &BuildOptions<'_>,
) -> Result<AffectOutcome, AffectError> {
    let (found, unmatched) = conditions_from_graphs(clauses, options.rules)?;
    if found.is_empty() {
        return Err(AffectError::NoCondition(condition_text.to_string()));
    }
    let mut resolution = Resolution { unresolved_pronouns: unresolved, unmatched, ..Resolution::default() };
    resolve_conditions(found, Segment::Condition, bundle, options, &mut resolution)?;

    let mut literals = Vec::new();
    for l in resolution.conditions.iter().filter_map(|c| c.literal.clone()) {
        if !literals.contains(&l) {
            literals.push(l);
        }
    }
    let rule = AffectRule { condition: Cnf::all_of(literals), target: parsed.target, change: parsed.change };
    let duplicate = bundle.affect_rules.contains(&rule);
    let added = resolution.proposals.is_empty() && !duplicate;
    if added {
        bundle.add_rule(rule.clone());
    }
    Ok(AffectOutcome { rule, added, duplicate, ignored_targets: parsed.ignored, resolution })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{validate_bundle, ChangeMode};
    use crate::semantics::Matcher;
    use crate::states::RuleCatalog;
    use approx::assert_abs_diff_eq;

    const WORKED: &str = "Max will get extremely angry whenever he fails his exams.";

    fn split(s: &str) -> AffectDraft {
        split_affect_sentence(s, &PatternCatalog::default(), Provenance::default()).unwrap()
    }

    fn change(s: &str) -> AffectParse {
        parse_affect_change(s, &AffectLexicon::default()).unwrap()
    }

    fn emotion(name: &str) -> AffectTarget {
        AffectTarget::Emotion(Slug::new(name).unwrap())
    }

    #[test]
    fn splits_at_the_marker() {
        let d = split(WORKED);
        assert_eq!(
            (d.affect_text.as_str(), d.condition_text.as_str()),
            ("Max will get extremely angry", "he fails his exams")
        );
        let d = split("Max becomes slightly angry in case he sees his favorite sports team lose.");
        assert_eq!(d.marker, "in case");
        assert_eq!(d.affect_text, "Max becomes slightly angry");
        let err = split_affect_sentence("Max sleeps.", &PatternCatalog::default(), Provenance::default());
        assert!(matches!(err, Err(AffectError::NotAnAffectRule(_))));
    }

    #[test]
    fn set_clause_moves_to_the_affect_side() {
        let d = split("Max feels proud whenever he helps customers, which sets his honor to 0.9.");
        assert_eq!(d.condition_text, "he helps customers");
        assert_eq!(d.affect_text, "Max feels proud, which sets his honor to 0.9");
        let p = change(&d.affect_text);
        assert_eq!(p.target, AffectTarget::Motivation(Slug::new("honor").unwrap()));
        assert_eq!(p.change, AffectChange::set(0.9));
    }

    #[test]
    fn adverbs_size_the_shift() {
        assert_eq!(
            change("Max will get extremely angry"),
            AffectParse { target: emotion("anger"), change: AffectChange::shift(0.4), ignored: vec![] }
        );
        assert_eq!(change("Max becomes slightly angry").change, AffectChange::shift(0.1));
        assert_eq!(
            change("Max feels happy"),
            AffectParse { target: emotion("joy"), change: AffectChange::shift(0.2), ignored: vec![] }
        );
        assert_eq!(change("Max feels very much afraid").change, AffectChange::shift(0.4));
    }

    #[test]
    fn negation_and_mood() {
        assert_eq!(change("Max gets less angry").change, AffectChange::shift(-0.2));
        let p = change("Max becomes gloomy");
        assert_eq!((p.target, p.change), (AffectTarget::Mood, AffectChange::shift(-0.2)));
        let p = change("Max becomes more curious");
        assert_eq!(p.target, AffectTarget::Motivation(Slug::new("curiosity").unwrap()));
    }

    #[test]
    fn first_emotion_wins_and_the_rest_is_reported() {
        let p = change("Max gets angry and sad");
        assert_eq!(p.target, emotion("anger"));
        assert_eq!(p.ignored, ["sad"]);
    }

    #[test]
    fn unknown_affect_lists_candidates() {
        let err = parse_affect_change("Max feels peckish", &AffectLexicon::default()).unwrap_err();
        let AffectError::UnknownAffect { candidates, .. } = err else { panic!() };
        assert_eq!(candidates, ["max", "peckish"]);
    }

    #[test]
    fn lexicon_validation() {
        let lex = AffectLexicon::default();
        assert!(lex.check_catalogs(&DomainBundle::default()).is_ok());
        let bad = AFFECT_LEXICON_TOML.replace("extremely = 0.4", "extremely = 0.05");
        assert!(matches!(AffectLexicon::parse(&bad), Err(LexiconError::NotMonotone)));
        let bad = AFFECT_LEXICON_TOML.replace("quite = 0.3", "quite = 1.3");
        assert!(matches!(AffectLexicon::parse(&bad), Err(LexiconError::Magnitude { .. })));
    }

    fn build(sentence: &str, bundle: &mut DomainBundle) -> AffectOutcome {
        let (rules, patterns, matcher) = (RuleCatalog::default(), PatternCatalog::default(), Matcher::toy());
        let opts =
            BuildOptions { rules: &rules, patterns: &patterns, matcher: &matcher, threshold: 0.75, strict: false };
        let draft = split_affect_sentence(sentence, &patterns, Provenance::default()).unwrap();
        build_affect_rule(&draft, &AffectLexicon::default(), bundle, &opts, &mut Resolver::default()).unwrap()
    }

    #[test]
    fn worked_rule_end_to_end() {
        let mut b = DomainBundle::default();
        let out = build(WORKED, &mut b);
        assert!(out.added);
        assert_eq!(b.affect_rules.len(), 1);
        let rule = &b.affect_rules[0];
        assert_eq!(rule.target, emotion("anger"));
        assert_eq!(rule.change.mode, ChangeMode::Shift);
        assert_abs_diff_eq!(rule.change.magnitude, 0.4);
        let ids: Vec<_> = rule.condition.literals().map(|l| l.state.as_str()).collect();
        assert_eq!(ids, ["max_fail_exam"]);
        assert!(validate_bundle(&b).is_empty());

        let again = build(WORKED, &mut b);
        assert!(again.duplicate && !again.added);
        assert_eq!((b.affect_rules.len(), b.states.len()), (1, 1));
    }

    #[test]
    fn set_rule_end_to_end() {
        let mut b = DomainBundle::default();
        build("Max feels proud whenever he helps customers, which sets his honor to 0.9.", &mut b);
        let rule = &b.affect_rules[0];
        assert_eq!(rule.change, AffectChange::set(0.9));
        assert_eq!(rule.condition.literals().next().unwrap().state.as_str(), "max_help_customer");
        assert!(validate_bundle(&b).is_empty());
    }
}
