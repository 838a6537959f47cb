use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlugError {
    #[error("cannot build an identifier from an empty phrase")]
    Empty,
    #[error("invalid identifier {0:?}: expected [a-z0-9_] segments")]
    Invalid(String),
}

/// Canonical lowercase identifier made of `[a-z0-9]` segments joined by `_`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Slug(String);

impl Slug {
    /// Accepts text that is already in canonical form.
    pub fn new(text: impl Into<String>) -> Result<Self, SlugError> {
        let text = text.into();
        if text.is_empty() {
            return Err(SlugError::Empty);
        }
        let valid = text
            .split('_')
            .all(|seg| !seg.is_empty() && seg.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit()));
        if valid {
            Ok(Slug(text))
        } else {
            Err(SlugError::Invalid(text))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Words of the slug, i.e. its underscore-separated segments.
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.0.split('_')
    }

    /// Joins already-canonical slugs with `_`.
    pub fn join<'a>(parts: impl IntoIterator<Item = &'a Slug>) -> Result<Slug, SlugError> {
        let joined = parts.into_iter().map(Slug::as_str).collect::<Vec<_>>().join("_");
        Slug::new(joined)
    }

    /// Human-readable form: underscores become spaces.
    pub fn spaced(&self) -> String {
        self.0.replace('_', " ")
    }
}

impl fmt::Display for Slug {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Slug {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for Slug {
    type Error = SlugError;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        Slug::new(value)
    }
}

impl From<Slug> for String {
    fn from(value: Slug) -> Self {
        value.0
    }
}

const ARTICLES: &[&str] = &["a", "an", "the"];

/// Words ending in `s` that must not lose it.
const SINGULAR_EXCEPTIONS: &[&str] = &[
    "always",
    "analysis",
    "basis",
    "does",
    "goes",
    "lens",
    "news",
    "perhaps",
    "physics",
    "series",
    "species",
    "this",
    "thus",
    "towards",
    "whereas",
    "sometimes",
    "besides",
    "afterwards",
];

/// Rule-based noun singularization; idempotent by construction.
pub fn singularize(word: &str) -> String {
    if word.len() <= 3 || !word.ends_with('s') || SINGULAR_EXCEPTIONS.contains(&word) {
        return word.to_string();
    }
    if word.ends_with("ss") || word.ends_with("us") || word.ends_with("is") || word.ends_with("ous") {
        return word.to_string();
    }
    if let Some(stem) = word.strip_suffix("ies") {
        if stem.len() >= 2 {
            return format!("{stem}y");
        }
        return word.to_string();
    }
    for suffix in ["sses", "ches", "shes", "xes", "zes"] {
        if word.ends_with(suffix) {
            return word[..word.len() - 2].to_string();
        }
    }
    word[..word.len() - 1].to_string()
}

/// Splits a phrase into lowercase alphanumeric words, dropping possessive `'s`.
pub fn phrase_words(phrase: &str) -> Vec<String> {
    let lowered = phrase.to_lowercase().replace("'s", " ").replace('\u{2019}', "'");
    lowered.split(|c: char| !(c.is_ascii_alphanumeric())).filter(|w| !w.is_empty()).map(str::to_string).collect()
}

/// Canonical name for a word sequence: lowercased, articles dropped,
/// nouns singularized, words joined by `_`.
pub fn slugify<S: AsRef<str>>(words: &[S]) -> Result<Slug, SlugError> {
    let parts: Vec<String> = words
        .iter()
        .flat_map(|w| phrase_words(w.as_ref()))
        .filter(|w| !ARTICLES.contains(&w.as_str()))
        .map(|w| singularize(&w))
        .collect();
    if parts.is_empty() {
        return Err(SlugError::Empty);
    }
    Slug::new(parts.join("_"))
}

/// [`slugify`] over a whitespace-separated phrase.
pub fn slugify_phrase(phrase: &str) -> Result<Slug, SlugError> {
    slugify(&[phrase])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn plural_nouns_are_singularized() {
        assert_eq!(slugify_phrase("restaurants").unwrap().as_str(), "restaurant");
        assert_eq!(slugify_phrase("surroundings").unwrap().as_str(), "surrounding");
        assert_eq!(slugify_phrase("activities").unwrap().as_str(), "activity");
        assert_eq!(slugify_phrase("watches").unwrap().as_str(), "watch");
        assert_eq!(slugify_phrase("bus").unwrap().as_str(), "bus");
        assert_eq!(slugify_phrase("glasses").unwrap().as_str(), "glass");
    }

    #[test]
    fn already_singular_is_unchanged() {
        assert_eq!(slugify_phrase("restaurant").unwrap().as_str(), "restaurant");
    }

    #[test]
    fn articles_dropped_and_joined() {
        assert_eq!(slugify_phrase("Ride a Horse").unwrap().as_str(), "ride_horse");
        assert_eq!(slugify(&["be", "aware"]).unwrap().as_str(), "be_aware");
    }

    #[test]
    fn empty_phrase_errors() {
        assert_eq!(slugify_phrase(""), Err(SlugError::Empty));
        assert_eq!(slugify_phrase("the"), Err(SlugError::Empty));
        assert_eq!(slugify::<&str>(&[]), Err(SlugError::Empty));
    }

    #[test]
    fn new_rejects_bad_shapes() {
        assert!(Slug::new("_a").is_err());
        assert!(Slug::new("a__b").is_err());
        assert!(Slug::new("a_").is_err());
        assert!(Slug::new("Ab").is_err());
        assert!(Slug::new("max_go").is_ok());
    }

    proptest! {
        #[test]
        fn slugify_is_idempotent(phrase in "[A-Za-z' ]{1,40}") {
            if let Ok(once) = slugify_phrase(&phrase) {
                let twice = slugify_phrase(once.as_str()).unwrap();
                prop_assert_eq!(once, twice);
            }
        }

        #[test]
        fn singularize_is_idempotent(word in "[a-z]{1,12}") {
            let once = singularize(&word);
            prop_assert_eq!(singularize(&once), once);
        }
    }
}
