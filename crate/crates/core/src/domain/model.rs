use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::cnf::{Cnf, Literal};
use super::slug::{Slug, SlugError};

/// Identifier of a declared state, unique within a bundle.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateId(Slug);

impl StateId {
    pub fn new(text: &str) -> Result<Self, SlugError> {
        Slug::new(text).map(StateId)
    }

    pub fn from_slug(slug: Slug) -> Self {
        StateId(slug)
    }

    pub fn as_slug(&self) -> &Slug {
        &self.0
    }

    pub fn as_str(&self) -> &str {
        self.0.as_str()
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Binary,
    Fluent,
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StateKind::Binary => "binary",
            StateKind::Fluent => "fluent",
        })
    }
}

/// `(subject, predicate, complement)` fact extracted from a sentence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StateTriple {
    pub subject: Slug,
    pub predicate: Slug,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complement: Option<Slug>,
}

impl StateTriple {
    pub fn new(subject: Slug, predicate: Slug, complement: Option<Slug>) -> Self {
        StateTriple { subject, predicate, complement }
    }

    /// Builds a triple from free text parts, slugifying each.
    pub fn parse_parts(subject: &str, predicate: &str, complement: &str) -> Result<Self, SlugError> {
        let complement = if complement.trim().is_empty() { None } else { Some(super::slugify_phrase(complement)?) };
        Ok(StateTriple {
            subject: super::slugify_phrase(subject)?,
            predicate: super::slugify_phrase(predicate)?,
            complement,
        })
    }

    /// Identifier this triple receives as a binary state.
    pub fn binary_id(&self) -> StateId {
        let mut parts = vec![&self.subject, &self.predicate];
        parts.extend(self.complement.as_ref());
        StateId(Slug::join(parts).expect("joined slugs are valid"))
    }

    /// Identifier of the fluent this triple belongs to.
    pub fn fluent_id(&self) -> StateId {
        StateId(Slug::join([&self.subject, &self.predicate]).expect("joined slugs are valid"))
    }
}

impl fmt::Display for StateTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.complement {
            Some(c) => write!(f, "({}, {}, {})", self.subject, self.predicate, c),
            None => write!(f, "({}, {})", self.subject, self.predicate),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StateBody {
    Binary {
        triple: StateTriple,
    },
    /// n-ary state: `variable` is the predicate, `domain` its ordered values.
    Fluent {
        variable: Slug,
        domain: Vec<Slug>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateDecl {
    pub id: StateId,
    pub owner: Slug,
    #[serde(flatten)]
    pub body: StateBody,
}

impl StateDecl {
    pub fn kind(&self) -> StateKind {
        match self.body {
            StateBody::Binary { .. } => StateKind::Binary,
            StateBody::Fluent { .. } => StateKind::Fluent,
        }
    }

    pub fn is_fluent(&self) -> bool {
        matches!(self.body, StateBody::Fluent { .. })
    }

    pub fn domain(&self) -> &[Slug] {
        match &self.body {
            StateBody::Fluent { domain, .. } => domain,
            StateBody::Binary { .. } => &[],
        }
    }

    /// Words describing the state without its owner, used for phrase matching.
    pub fn phrase_words(&self) -> Vec<String> {
        match &self.body {
            StateBody::Binary { triple } => {
                let mut words: Vec<String> = triple.predicate.words().map(str::to_string).collect();
                if let Some(c) = &triple.complement {
                    words.extend(c.words().map(str::to_string));
                }
                words
            }
            StateBody::Fluent { variable, .. } => variable.words().map(str::to_string).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PostCondition {
    pub literal: Literal,
    /// In `(0, 1]`; anything below 1 is a non-deterministic side effect.
    pub probability: f64,
}

impl PostCondition {
    pub fn certain(literal: Literal) -> Self {
        PostCondition { literal, probability: 1.0 }
    }

    pub fn is_deterministic(&self) -> bool {
        self.probability >= 1.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Affordance {
    pub name: Slug,
    pub owner: Slug,
    #[serde(default)]
    pub preconditions: Cnf,
    #[serde(default)]
    pub postconditions: Vec<PostCondition>,
}

impl Affordance {
    pub fn skeleton(owner: Slug, name: Slug) -> Self {
        Affordance { name, owner, preconditions: Cnf::truth(), postconditions: Vec::new() }
    }

    pub fn has_side_effects(&self) -> bool {
        self.postconditions.iter().any(|p| !p.is_deterministic())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmotionSpec {
    pub name: Slug,
    /// Pleasure, arousal, dominance; each in `[-1, 1]`.
    pub pad: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MotivationCatalog {
    pub factors: Vec<Slug>,
}

/// The sixteen Reiss motivational factors.
pub const REISS_FACTORS: [&str; 16] = [
    "acceptance",
    "curiosity",
    "eating",
    "family",
    "honor",
    "idealism",
    "independence",
    "order",
    "physical_activity",
    "power",
    "romance",
    "saving",
    "social_contact",
    "status",
    "tranquility",
    "vengeance",
];

impl Default for MotivationCatalog {
    fn default() -> Self {
        MotivationCatalog { factors: REISS_FACTORS.iter().map(|f| Slug::new(*f).expect("static slug")).collect() }
    }
}

impl MotivationCatalog {
    pub fn contains(&self, name: &Slug) -> bool {
        self.factors.contains(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", content = "name", rename_all = "lowercase")]
pub enum AffectTarget {
    Mood,
    Emotion(Slug),
    Motivation(Slug),
}

impl fmt::Display for AffectTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AffectTarget::Mood => f.write_str("mood"),
            AffectTarget::Emotion(n) => write!(f, "emotion {n}"),
            AffectTarget::Motivation(n) => write!(f, "motivation {n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChangeMode {
    Shift,
    Set,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffectChange {
    pub mode: ChangeMode,
    pub magnitude: f64,
}

impl AffectChange {
    pub fn shift(magnitude: f64) -> Self {
        AffectChange { mode: ChangeMode::Shift, magnitude }
    }

    pub fn set(value: f64) -> Self {
        AffectChange { mode: ChangeMode::Set, magnitude: value }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffectRule {
    pub condition: Cnf,
    pub target: AffectTarget,
    pub change: AffectChange,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmartObject {
    pub name: Slug,
    #[serde(default, rename = "type", skip_serializing_if = "Option::is_none")]
    pub type_tag: Option<Slug>,
}

/// Default emotion catalog with PAD coordinates.
pub fn default_emotions() -> Vec<EmotionSpec> {
    crate::config::default_emotions()
}

/// The agent description: smart-objects, states, affordances and affect rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainBundle {
    pub objects: BTreeMap<Slug, SmartObject>,
    pub states: BTreeMap<StateId, StateDecl>,
    /// Kept sorted by `(owner, name)`.
    pub affordances: Vec<Affordance>,
    pub affect_rules: Vec<AffectRule>,
    pub emotion_catalog: Vec<EmotionSpec>,
    pub motivation_catalog: MotivationCatalog,
}

impl Default for DomainBundle {
    fn default() -> Self {
        DomainBundle {
            objects: BTreeMap::new(),
            states: BTreeMap::new(),
            affordances: Vec::new(),
            affect_rules: Vec::new(),
            emotion_catalog: default_emotions(),
            motivation_catalog: MotivationCatalog::default(),
        }
    }
}
