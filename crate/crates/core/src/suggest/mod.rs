//! Suggestion engines: author feedback over the current bundle and
//! common-sense additions from ConceptNet. Both produce [`Suggestion`]
//! records that an author accepts or rejects.

pub mod conceptnet;
pub mod feedback;

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{read_file, ConfigError};
use crate::domain::{
    AffectRule, Affordance, BundleError, DomainBundle, Literal, PostCondition, Slug, StateKind, StateTriple,
};

pub use conceptnet::{
    commonsense_suggestions, conceptnet_query, CommonsenseOptions, ConceptNetClient, ConceptNetEdge, ConceptNetError,
    FixtureStore, LiveClient, QueryOptions, RecordingClient, Relation,
};
pub use feedback::{flag_incomplete_affordances, propose_missing_rules};

pub const PROMPTS_TOML: &str = include_str!("../../resources/prompts.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuggestionKind {
    MissingAffectRule,
    IncompleteAffordance,
    Capability,
    AffordanceCondition,
    AffectTrigger,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pending,
    Accepted,
    Rejected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Accept,
    Reject,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConditionRole {
    Pre,
    Post,
}

/// The edit an accepted suggestion applies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "edit", rename_all = "kebab-case")]
pub enum Payload {
    AddRule {
        rule: AffectRule,
    },
    AddAffordance {
        owner: Slug,
        name: Slug,
    },
    /// Adds a binary state built from `triple` as a pre- or postcondition.
    AddCondition {
        owner: Slug,
        affordance: Slug,
        role: ConditionRole,
        triple: StateTriple,
    },
    /// A question for the author; accepting it changes nothing.
    Clarify {
        owner: Slug,
        affordance: Slug,
        role: ConditionRole,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Suggestion {
    /// Stable key derived from what the suggestion is about, so the same
    /// proposal always gets the same id.
    pub id: String,
    pub kind: SuggestionKind,
    pub prompt: String,
    pub payload: Payload,
    pub score: f64,
    pub status: Status,
}

impl Suggestion {
    pub fn new(id: String, kind: SuggestionKind, prompt: String, payload: Payload, score: f64) -> Self {
        Suggestion { id, kind, prompt, payload, score, status: Status::Pending }
    }
}

#[derive(Debug, Error)]
pub enum SuggestError {
    #[error("no suggestion with id {0}")]
    Unknown(String),
    #[error("suggestion {id} was already {status:?}")]
    AlreadyDecided { id: String, status: Status },
    #[error("affordance {affordance} of {owner} does not exist")]
    MissingAffordance { owner: Slug, affordance: Slug },
    #[error(transparent)]
    Bundle(#[from] BundleError),
}

/// Sorts by score, highest first, then by id.
pub fn sort_suggestions(list: &mut [Suggestion]) {
    list.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.id.cmp(&b.id)));
}

/// Key of a literal inside suggestion ids: `state` or `state=value`.
pub(crate) fn literal_key(l: &Literal) -> String {
    match &l.value {
        Some(v) => format!("{}={v}", l.state),
        None => l.state.to_string(),
    }
}

/// Applies an accepted payload to the bundle.
pub fn apply_payload(payload: &Payload, bundle: &mut DomainBundle) -> Result<(), SuggestError> {
    match payload {
        Payload::AddRule { rule } => {
            for l in rule.condition.literals() {
                if bundle.state(&l.state).is_none() {
                    return Err(BundleError::UnknownState(l.state.clone()).into());
                }
            }
            bundle.add_rule(rule.clone());
        }
        Payload::AddAffordance { owner, name } => {
            bundle.add_affordance(Affordance::skeleton(owner.clone(), name.clone()))?;
        }
        Payload::AddCondition { owner, affordance, role, triple } => {
            if bundle.affordance(owner, affordance).is_none() {
                return Err(SuggestError::MissingAffordance { owner: owner.clone(), affordance: affordance.clone() });
            }
            let literal = bundle.intern_state(triple, StateKind::Binary)?.literal(true);
            let a = bundle.affordance_mut(owner, affordance).expect("checked above");
            match role {
                ConditionRole::Pre => a.preconditions.clauses.push(vec![literal]),
                ConditionRole::Post => a.postconditions.push(PostCondition::certain(literal)),
            }
        }
        Payload::Clarify { .. } => {}
    }
    Ok(())
}

/// Every suggestion a session has seen, with its status. Decided ids are
/// never proposed again.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SuggestionLog {
    entries: BTreeMap<String, Suggestion>,
}

impl SuggestionLog {
    /// Replaces the pending set with `fresh`, skipping ids already decided.
    pub fn refresh(&mut self, fresh: Vec<Suggestion>) {
        self.entries.retain(|_, s| s.status != Status::Pending);
        for s in fresh {
            if !self.entries.contains_key(&s.id) {
                self.entries.insert(s.id.clone(), Suggestion { status: Status::Pending, ..s });
            }
        }
    }

    pub fn get(&self, id: &str) -> Option<&Suggestion> {
        self.entries.get(id)
    }

    pub fn pending(&self) -> Vec<Suggestion> {
        let mut out: Vec<Suggestion> = self.entries.values().filter(|s| s.status == Status::Pending).cloned().collect();
        sort_suggestions(&mut out);
        out
    }

    pub fn all(&self) -> impl Iterator<Item = &Suggestion> {
        self.entries.values()
    }

    /// Records a decision. Accepting applies the payload first; when that
    /// fails the bundle and the log are left unchanged.
    pub fn decide(
        &mut self,
        id: &str,
        decision: Decision,
        bundle: &mut DomainBundle,
    ) -> Result<&Suggestion, SuggestError> {
        let entry = self.entries.get_mut(id).ok_or_else(|| SuggestError::Unknown(id.to_string()))?;
        if entry.status != Status::Pending {
            return Err(SuggestError::AlreadyDecided { id: id.to_string(), status: entry.status });
        }
        if decision == Decision::Accept {
            let mut draft = bundle.clone();
            apply_payload(&entry.payload, &mut draft)?;
            *bundle = draft;
        }
        entry.status = match decision {
            Decision::Accept => Status::Accepted,
            Decision::Reject => Status::Rejected,
        };
        Ok(entry)
    }

    /// Replays a decision recorded earlier: `suggestion` is added back as
    /// pending unless known, then decided.
    pub fn replay(
        &mut self,
        suggestion: Suggestion,
        decision: Decision,
        bundle: &mut DomainBundle,
    ) -> Result<&Suggestion, SuggestError> {
        let id = suggestion.id.clone();
        self.entries.entry(id.clone()).or_insert(Suggestion { status: Status::Pending, ..suggestion });
        self.decide(&id, decision, bundle)
    }
}

#[derive(Debug, Error)]
pub enum PromptError {
    #[error("prompt file is malformed: {0}")]
    Format(#[from] toml::de::Error),
    #[error(transparent)]
    Io(#[from] ConfigError),
    #[error("template {template} uses unknown placeholder {{{name}}}")]
    Placeholder { template: &'static str, name: String },
}

/// Prompt templates with `{placeholder}` fields.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Prompts {
    pub capability: String,
    pub post_condition: String,
    pub pre_condition: String,
    pub affect_trigger: String,
    pub missing_affect_rule: String,
    pub missing_preconditions: String,
    pub missing_postconditions: String,
}

const PLACEHOLDERS: [&str; 8] =
    ["object", "type", "capability", "concept", "affordance", "state", "target", "relation"];

impl Default for Prompts {
    fn default() -> Self {
        Prompts::parse(PROMPTS_TOML).expect("bundled prompts are valid")
    }
}

impl Prompts {
    pub fn parse(text: &str) -> Result<Self, PromptError> {
        let p: Prompts = toml::from_str(text)?;
        p.check()?;
        Ok(p)
    }

    pub fn from_file(path: &Path) -> Result<Self, PromptError> {
        Prompts::parse(&read_file(path)?)
    }

    fn templates(&self) -> [(&'static str, &str); 7] {
        [
            ("capability", &self.capability),
            ("post_condition", &self.post_condition),
            ("pre_condition", &self.pre_condition),
            ("affect_trigger", &self.affect_trigger),
            ("missing_affect_rule", &self.missing_affect_rule),
            ("missing_preconditions", &self.missing_preconditions),
            ("missing_postconditions", &self.missing_postconditions),
        ]
    }

    fn check(&self) -> Result<(), PromptError> {
        for (template, text) in self.templates() {
            for piece in text.split('{').skip(1) {
                let name = piece.split('}').next().unwrap_or_default();
                if !PLACEHOLDERS.contains(&name) {
                    return Err(PromptError::Placeholder { template, name: name.to_string() });
                }
            }
        }
        Ok(())
    }
}

/// Fills `{name}` placeholders.
pub fn render(template: &str, fields: &[(&str, &str)]) -> String {
    fields.iter().fold(template.to_string(), |acc, (k, v)| acc.replace(&format!("{{{k}}}"), v))
}

/// "max" -> "Max", "guide_dog" -> "Guide dog".
pub fn display_name(slug: &Slug) -> String {
    let spaced = slug.spaced();
    let mut chars = spaced.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => spaced,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{AffectChange, AffectTarget, Cnf};

    fn slug(s: &str) -> Slug {
        Slug::new(s).unwrap()
    }

    fn capability(id: &str, score: f64) -> Suggestion {
        let payload = Payload::AddAffordance { owner: slug("max"), name: slug(id) };
        Suggestion::new(format!("capability:max:{id}"), SuggestionKind::Capability, id.into(), payload, score)
    }

    #[test]
    fn bundled_prompts_load_and_render() {
        let p = Prompts::default();
        let text = render(&p.post_condition, &[("concept", "fatten"), ("affordance", "feed")]);
        assert_eq!(text, "Is 'fatten', a post-condition of 'feed'?");
        assert!(matches!(
            Prompts::parse(&PROMPTS_TOML.replace("{type}", "{kind}")),
            Err(PromptError::Placeholder { .. })
        ));
    }

    #[test]
    fn display_names_are_capitalized() {
        assert_eq!(display_name(&slug("dog")), "Dog");
        assert_eq!(display_name(&slug("guide_dog")), "Guide dog");
    }

    #[test]
    fn sorted_by_score_then_id() {
        let mut v = vec![capability("b", 1.0), capability("c", 2.0), capability("a", 1.0)];
        sort_suggestions(&mut v);
        let ids: Vec<_> = v.iter().map(|s| s.id.as_str()).collect();
        assert_eq!(ids, ["capability:max:c", "capability:max:a", "capability:max:b"]);
    }

    #[test]
    fn decisions_are_final_and_suppress_reproposal() {
        let mut bundle = DomainBundle::default();
        let mut log = SuggestionLog::default();
        log.refresh(vec![capability("bark", 3.0), capability("fly", 1.0)]);
        log.decide("capability:max:bark", Decision::Accept, &mut bundle).unwrap();
        assert!(bundle.affordance(&slug("max"), &slug("bark")).is_some());
        assert!(matches!(
            log.decide("capability:max:bark", Decision::Accept, &mut bundle),
            Err(SuggestError::AlreadyDecided { .. })
        ));
        log.decide("capability:max:fly", Decision::Reject, &mut bundle).unwrap();
        log.refresh(vec![capability("bark", 3.0), capability("fly", 1.0), capability("swim", 0.5)]);
        let pending: Vec<_> = log.pending().into_iter().map(|s| s.id).collect();
        assert_eq!(pending, ["capability:max:swim"]);
        assert!(matches!(log.decide("nope", Decision::Reject, &mut bundle), Err(SuggestError::Unknown(_))));
    }

    #[test]
    fn failed_accept_leaves_everything_unchanged() {
        let mut bundle = DomainBundle::default();
        let ghost = Literal::binary(crate::domain::StateId::new("max_ghost").unwrap(), true);
        let rule = AffectRule {
            condition: Cnf::all_of([ghost]),
            target: AffectTarget::Mood,
            change: AffectChange::shift(0.2),
        };
        let s =
            Suggestion::new("r".into(), SuggestionKind::MissingAffectRule, "?".into(), Payload::AddRule { rule }, 1.0);
        let mut log = SuggestionLog::default();
        log.refresh(vec![s]);
        assert!(log.decide("r", Decision::Accept, &mut bundle).is_err());
        assert_eq!(bundle, DomainBundle::default());
        assert_eq!(log.get("r").unwrap().status, Status::Pending);
    }

    #[test]
    fn condition_payload_adds_state_and_literal() {
        let mut bundle = DomainBundle::default();
        bundle.add_affordance(Affordance::skeleton(slug("max"), slug("feed"))).unwrap();
        let triple = StateTriple::new(slug("max"), slug("fatten"), None);
        let payload =
            Payload::AddCondition { owner: slug("max"), affordance: slug("feed"), role: ConditionRole::Post, triple };
        apply_payload(&payload, &mut bundle).unwrap();
        let a = bundle.affordance(&slug("max"), &slug("feed")).unwrap();
        assert_eq!(a.postconditions[0].literal.state.as_str(), "max_fatten");
        assert!(crate::domain::validate_bundle(&bundle).iter().all(|d| !d.is_error()));
    }
}
