//! Rule-based nearest-antecedent co-reference.
//!
//! Personal pronouns become the most recent entity mention; possessives
//! become its possessive form (`his` -> `Max's`). Subject `it` refers to an
//! entity like the other personal pronouns; object `it` ("reads it") is
//! replaced by the latest non-entity noun.

use serde::Serialize;

use super::graph::{render_tokens, SentenceGraph};

const PERSONAL: &[&str] = &["he", "she", "they", "him", "them"];
const POSSESSIVE: &[&str] = &["his", "their", "its"];

/// A pronoun left in place because no entity precedes it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnresolvedPronoun {
    /// Position of the sentence in the input list.
    pub sentence: usize,
    pub token: usize,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorefOutput {
    pub graphs: Vec<SentenceGraph>,
    pub unresolved: Vec<UnresolvedPronoun>,
}

enum Role {
    Personal,
    Possessive,
}

fn pronoun_role(text: &str, deprel: &str) -> Option<Role> {
    match text {
        "her" if deprel == "poss" => Some(Role::Possessive),
        "her" => Some(Role::Personal),
        "it" if deprel.starts_with("nsubj") => Some(Role::Personal),
        t if PERSONAL.contains(&t) => Some(Role::Personal),
        t if POSSESSIVE.contains(&t) => Some(Role::Possessive),
        _ => None,
    }
}

/// Resolver state; the antecedent carries over between calls so a whole
/// paragraph can be processed sentence by sentence.
#[derive(Debug, Clone, Default)]
pub struct Resolver {
    entities: Vec<String>,
    /// Surface form of the latest entity mention.
    last: Option<String>,
    /// Latest noun that is not an entity, as (text, lemma).
    last_thing: Option<(String, String)>,
}

impl Resolver {
    pub fn new<S: AsRef<str>>(entities: impl IntoIterator<Item = S>) -> Self {
        Resolver {
            entities: entities.into_iter().map(|e| e.as_ref().replace('_', " ").to_lowercase()).collect(),
            last: None,
            last_thing: None,
        }
    }

    pub fn add_entity(&mut self, name: &str) {
        let name = name.replace('_', " ").to_lowercase();
        if !self.entities.contains(&name) {
            self.entities.push(name);
        }
    }

    /// Makes `name` the antecedent for pronouns that precede any mention.
    pub fn set_antecedent(&mut self, name: &str) {
        self.add_entity(name);
        self.last = Some(name.replace('_', " "));
    }

    fn mention(&self, text: &str) -> Option<String> {
        let bare = text.strip_suffix("'s").unwrap_or(text);
        self.entities.contains(&bare.to_lowercase()).then(|| bare.to_string())
    }

    /// Resolves one sentence; returns the rewritten graph and the indices
    /// of pronouns that had no antecedent.
    pub fn resolve(&mut self, graph: &SentenceGraph) -> (SentenceGraph, Vec<usize>) {
        let mut out = graph.clone();
        let mut changed = false;
        let mut unresolved = Vec::new();
        for tok in out.tokens.iter_mut() {
            if let Some(name) = self.mention(&tok.text) {
                self.last = Some(name);
                continue;
            }
            let lower = tok.text.to_lowercase();
            if tok.pos == "NOUN" {
                self.last_thing = Some((tok.text.clone(), tok.lemma.clone()));
                continue;
            }
            if lower == "it" && !tok.deprel.starts_with("nsubj") {
                if let Some((text, lemma)) = self.last_thing.clone() {
                    tok.text = text;
                    tok.lemma = lemma;
                    tok.pos = "NOUN".to_string();
                    changed = true;
                }
                continue;
            }
            let Some(role) = pronoun_role(&lower, &tok.deprel) else { continue };
            let Some(name) = self.last.clone() else {
                unresolved.push(tok.index);
                continue;
            };
            tok.text = match role {
                Role::Personal => name.clone(),
                Role::Possessive => format!("{name}'s"),
            };
            tok.lemma = name.to_lowercase();
            tok.pos = "PROPN".to_string();
            changed = true;
        }
        if changed {
            out.source = render_tokens(out.tokens.iter().map(|t| t.text.as_str()));
        }
        (out, unresolved)
    }
}

/// Resolves pronouns across `sentences` in order against `entities`.
pub fn resolve_coreferences<S: AsRef<str>>(sentences: &[SentenceGraph], entities: &[S]) -> CorefOutput {
    let mut resolver = Resolver::new(entities);
    let mut graphs = Vec::with_capacity(sentences.len());
    let mut unresolved = Vec::new();
    for (i, g) in sentences.iter().enumerate() {
        let (resolved, missing) = resolver.resolve(g);
        unresolved.extend(missing.into_iter().map(|token| UnresolvedPronoun {
            sentence: i,
            token,
            text: g.tokens[token - 1].text.clone(),
        }));
        graphs.push(resolved);
    }
    CorefOutput { graphs, unresolved }
}
