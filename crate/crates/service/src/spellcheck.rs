//! Dictionary spell-checking with edit-distance candidates.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// English word list shipped with the crate (`word<TAB>frequency`).
pub const BUNDLED_DICTIONARY: &str = include_str!("../resources/dictionary.tsv");

const MAX_DISTANCE: usize = 2;
const MAX_CANDIDATES: usize = 5;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("dictionary line {line}: {message}")]
pub struct DictionaryError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct Dictionary {
    freq: HashMap<String, u32>,
}

impl Dictionary {
    /// One word per line, optionally followed by a tab and a frequency.
    /// Lines starting with `#` are comments.
    pub fn parse(text: &str) -> Result<Self, DictionaryError> {
        let mut freq = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split('\t');
            let word = cols.next().unwrap_or_default().trim().to_lowercase();
            let f = match cols.next() {
                Some(f) => f
                    .trim()
                    .parse()
                    .map_err(|_| DictionaryError { line: i + 1, message: format!("bad frequency {f:?}") })?,
                None => 0,
            };
            freq.insert(word, f);
        }
        Ok(Dictionary { freq })
    }

    pub fn bundled() -> Self {
        Dictionary::parse(BUNDLED_DICTIONARY).expect("bundled dictionary is valid")
    }

    pub fn contains(&self, word: &str) -> bool {
        self.freq.contains_key(word)
    }

    pub fn len(&self) -> usize {
        self.freq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freq.is_empty()
    }

    /// Words within edit distance 2, nearest first, then most frequent.
    pub fn candidates(&self, word: &str) -> Vec<String> {
        let n = word.chars().count();
        let mut found: Vec<(usize, u32, &str)> = self
            .freq
            .iter()
            .filter(|(w, _)| w.chars().count().abs_diff(n) <= MAX_DISTANCE)
            .filter_map(|(w, f)| {
                let d = strsim::levenshtein(word, w);
                (d <= MAX_DISTANCE).then_some((d, *f, w.as_str()))
            })
            .collect();
        found.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)).then(a.2.cmp(b.2)));
        found.into_iter().take(MAX_CANDIDATES).map(|(_, _, w)| w.to_string()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flag {
    pub token: String,
    /// Offset of the token in characters (Unicode scalar values).
    pub offset: usize,
    pub candidates: Vec<String>,
}

/// Flags words found in neither `dictionary` nor `vocabulary`. Tokens are
/// runs of letters, digits, `_` and `'`; a trailing `'s` is ignored and
/// tokens containing digits are skipped.
pub fn spellcheck<S: AsRef<str>>(text: &str, dictionary: &Dictionary, vocabulary: &[S]) -> Vec<Flag> {
    let vocab: HashSet<String> = vocabulary.iter().map(|v| v.as_ref().to_lowercase()).collect();
    let known = |w: &str| dictionary.contains(w) || vocab.contains(w);
    let mut flags = Vec::new();
    for (offset, token) in tokens(text) {
        let lower = token.to_lowercase();
        let bare = lower.strip_suffix("'s").unwrap_or(&lower).trim_matches('\'');
        if bare.is_empty() || bare.chars().any(|c| c.is_ascii_digit()) || known(bare) {
            continue;
        }
        // slugs such as max_go pass when each part is known
        if bare.contains('_') && bare.split('_').filter(|p| !p.is_empty()).all(known) {
            continue;
        }
        flags.push(Flag { token, offset, candidates: dictionary.candidates(bare) });
    }
    flags
}

fn tokens(text: &str) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut current: Option<(usize, String)> = None;
    for (i, c) in text.chars().enumerate() {
        if c.is_alphanumeric() || c == '_' || c == '\'' {
            current.get_or_insert_with(|| (i, String::new())).1.push(c);
        } else if let Some(t) = current.take() {
            out.push(t);
        }
    }
    out.extend(current);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn bundled() -> &'static Dictionary {
        static D: OnceLock<Dictionary> = OnceLock::new();
        D.get_or_init(Dictionary::bundled)
    }

    #[test]
    fn misspelling_gets_the_intended_word() {
        let d = Dictionary::bundled();
        let flags = spellcheck("Max goes to the libary.", &d, &[] as &[&str]);
        assert_eq!(flags.len(), 1);
        assert_eq!((flags[0].token.as_str(), flags[0].offset), ("libary", 16));
        assert!(flags[0].candidates.contains(&"library".to_string()), "{:?}", flags[0].candidates);
    }

    #[test]
    fn correct_text_and_domain_words_pass() {
        let d = Dictionary::bundled();
        let text = "Max goes to the library only if he has an exam after which he feels more knowledgeable.";
        assert!(spellcheck(text, &d, &[] as &[&str]).is_empty());
        assert!(spellcheck("max_go and Max's zorblax", &d, &["zorblax"]).is_empty());
        assert_eq!(spellcheck("zorblax", &d, &[] as &[&str]).len(), 1);
    }

    #[test]
    fn ranking_is_distance_then_frequency() {
        let d = Dictionary::parse("# test\ncat\t10\ncart\t50\ncar\t30\ncast\t5\n").unwrap();
        assert_eq!(d.candidates("cat"), ["cat", "cart", "car", "cast"]);
        assert_eq!(d.candidates("xyzzy"), Vec::<String>::new());
        assert_eq!(Dictionary::parse("cat\tmany").unwrap_err().line, 1);
    }

    proptest! {
        // every candidate lies within the distance bound
        #[test]
        fn candidates_within_two_edits(word in "[a-z]{3,8}") {
            let d = bundled();
            for c in d.candidates(&word) {
                prop_assert!(strsim::levenshtein(&word, &c) <= 2);
            }
        }

        #[test]
        fn single_deletion_of_a_known_word_is_recovered(i in 0usize..7) {
            let word = "library";
            let mut typo: String = word.to_string();
            typo.remove(i);
            let d = bundled();
            if !d.contains(&typo) {
                let flags = spellcheck(&typo, d, &[] as &[&str]);
                prop_assert!(flags[0].candidates.iter().any(|c| strsim::levenshtein(c, &typo) == 1));
                prop_assert!(flags[0].candidates.len() <= 5);
            }
        }
    }
}
