use crate::domain::StateKind;

use super::graph::SentenceGraph;

/// Phrases that introduce the values of an n-ary state.
pub const DEFAULT_FLUENT_KEYWORDS: &[&str] = &["including", "such as", "consist of", "consists of"];

/// Token indices of the last word of every keyword occurrence. Words match
/// on lowercase text or lemma.
pub fn keyword_matches<S: AsRef<str>>(graph: &SentenceGraph, keywords: &[S]) -> Vec<usize> {
    let mut hits = Vec::new();
    for kw in keywords {
        let words: Vec<String> = kw.as_ref().split_whitespace().map(str::to_lowercase).collect();
        if words.is_empty() {
            continue;
        }
        for start in 0..graph.tokens.len() {
            let matched = words.iter().enumerate().all(|(k, w)| {
                graph.tokens.get(start + k).is_some_and(|t| t.text.to_lowercase() == *w || t.lemma.to_lowercase() == *w)
            });
            if matched {
                hits.push(graph.tokens[start + words.len() - 1].index);
            }
        }
    }
    hits.sort_unstable();
    hits.dedup();
    hits
}

/// `Fluent` iff one of `keywords` occurs in the sentence.
pub fn classify_state_kind<S: AsRef<str>>(graph: &SentenceGraph, keywords: &[S]) -> StateKind {
    if keyword_matches(graph, keywords).is_empty() {
        StateKind::Binary
    } else {
        StateKind::Fluent
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::builtin_parse;

    fn kind(s: &str) -> StateKind {
        classify_state_kind(&builtin_parse(s).unwrap(), DEFAULT_FLUENT_KEYWORDS)
    }

    #[test]
    fn table_rows() {
        assert_eq!(kind("Max can go to different places such as restaurants and parks"), StateKind::Fluent);
        assert_eq!(kind("Max can engage in different activities including riding a horse."), StateKind::Fluent);
        assert_eq!(kind("Max can stand at the bus station."), StateKind::Binary);
        assert_eq!(kind("Max can be aware of his surroundings."), StateKind::Binary);
    }

    #[test]
    fn keyword_case_is_ignored() {
        assert_eq!(kind("Max can visit places Such As parks"), StateKind::Fluent);
    }
}
