use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One word of a dependency-parsed sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    /// 1-based position in the sentence.
    pub index: usize,
    pub text: String,
    pub lemma: String,
    /// Coarse universal part-of-speech tag.
    pub pos: String,
    /// Index of the governor; 0 for the root.
    pub head: usize,
    pub deprel: String,
    /// Index of the token this one was derived from in the first parse.
    pub origin: usize,
}

impl Token {
    pub fn new(index: usize, text: &str, lemma: &str, pos: &str, head: usize, deprel: &str) -> Self {
        Token {
            index,
            text: text.to_string(),
            lemma: lemma.to_string(),
            pos: pos.to_string(),
            head,
            deprel: deprel.to_string(),
            origin: index,
        }
    }

    pub fn is_verb(&self) -> bool {
        self.pos == "VERB" || (self.pos == "AUX" && self.deprel == "root")
    }

    pub fn is_root(&self) -> bool {
        self.head == 0
    }
}

/// Where a sentence came from in the submitted input.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub line: usize,
    pub sentence: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("sentence has no tokens")]
    Empty,
    #[error("token {0} is out of sequence")]
    BadIndex(usize),
    #[error("token {0} heads itself")]
    SelfLoop(usize),
    #[error("token {index} points to missing head {head}")]
    MissingHead { index: usize, head: usize },
    #[error("expected exactly one root, found {0}")]
    RootCount(usize),
    #[error("head links form a cycle through token {0}")]
    Cycle(usize),
    #[error("token {0} has an empty dependency label")]
    EmptyDeprel(usize),
}

/// Dependency graph of one sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceGraph {
    pub tokens: Vec<Token>,
    pub source: String,
    pub provenance: Provenance,
    /// Indices of tokens copied in from another clause (shared subjects).
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub copied: BTreeSet<usize>,
}

impl SentenceGraph {
    pub fn new(tokens: Vec<Token>, source: impl Into<String>, provenance: Provenance) -> Result<Self, GraphError> {
        let graph = SentenceGraph { tokens, source: source.into(), provenance, copied: BTreeSet::new() };
        graph.check()?;
        Ok(graph)
    }

    /// Verifies the single-root tree invariant.
    pub fn check(&self) -> Result<(), GraphError> {
        if self.tokens.is_empty() {
            return Err(GraphError::Empty);
        }
        let n = self.tokens.len();
        let mut roots = 0;
        for (i, t) in self.tokens.iter().enumerate() {
            if t.index != i + 1 {
                return Err(GraphError::BadIndex(t.index));
            }
            if t.head == t.index {
                return Err(GraphError::SelfLoop(t.index));
            }
            if t.head > n {
                return Err(GraphError::MissingHead { index: t.index, head: t.head });
            }
            if t.deprel.is_empty() {
                return Err(GraphError::EmptyDeprel(t.index));
            }
            if t.head == 0 {
                roots += 1;
            }
        }
        if roots != 1 {
            return Err(GraphError::RootCount(roots));
        }
        for t in &self.tokens {
            let mut cur = t.head;
            let mut steps = 0;
            while cur != 0 {
                steps += 1;
                if steps > n {
                    return Err(GraphError::Cycle(t.index));
                }
                cur = self.tokens[cur - 1].head;
            }
        }
        Ok(())
    }

    pub fn token(&self, index: usize) -> Option<&Token> {
        index.checked_sub(1).and_then(|i| self.tokens.get(i))
    }

    pub fn root(&self) -> &Token {
        self.tokens.iter().find(|t| t.head == 0).expect("validated graph has a root")
    }

    pub fn children(&self, index: usize) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(move |t| t.head == index)
    }

    pub fn children_with<'a>(&'a self, index: usize, deprel: &'a str) -> impl Iterator<Item = &'a Token> + 'a {
        self.children(index).filter(move |t| t.deprel == deprel)
    }

    pub fn first_child(&self, index: usize, deprel: &str) -> Option<&Token> {
        self.children(index).find(|t| t.deprel == deprel)
    }

    /// All indices in the subtree rooted at `index`, in sentence order.
    pub fn subtree(&self, index: usize) -> Vec<usize> {
        let mut out: Vec<usize> =
            self.tokens.iter().filter(|t| self.dominates(index, t.index)).map(|t| t.index).collect();
        out.sort_unstable();
        out
    }

    /// Whether `ancestor` is `index` or one of its governors.
    pub fn dominates(&self, ancestor: usize, index: usize) -> bool {
        let mut cur = index;
        let mut steps = 0;
        while cur != 0 && steps <= self.tokens.len() {
            if cur == ancestor {
                return true;
            }
            cur = self.tokens[cur - 1].head;
            steps += 1;
        }
        false
    }

    /// Labeled edges `(head, deprel, dependent)` using lowercase forms.
    pub fn edges(&self) -> BTreeSet<(String, String, String)> {
        self.tokens
            .iter()
            .filter(|t| t.head != 0)
            .map(|t| {
                let head = &self.tokens[t.head - 1];
                (head.text.to_lowercase(), t.deprel.clone(), t.text.to_lowercase())
            })
            .collect()
    }

    pub fn text(&self) -> String {
        render_tokens(self.tokens.iter().map(|t| t.text.as_str()))
    }

    /// Builds a new graph from a subset of tokens, renumbering them and
    /// reattaching tokens whose head falls outside the subset to `new_root`.
    pub fn induced(&self, keep: &[usize], new_root: usize) -> SentenceGraph {
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let pos_of = |old: usize| keep.iter().position(|&k| k == old).map(|p| p + 1);
        let mut tokens = Vec::with_capacity(keep.len());
        for (i, &old) in keep.iter().enumerate() {
            let t = &self.tokens[old - 1];
            let (head, deprel) = if old == new_root {
                (0, "root".to_string())
            } else {
                match pos_of(t.head) {
                    Some(h) if t.head != 0 => (h, t.deprel.clone()),
                    _ => (pos_of(new_root).expect("root kept"), t.deprel.clone()),
                }
            };
            tokens.push(Token { index: i + 1, head, deprel, ..t.clone() });
        }
        let copied = self.copied.iter().filter_map(|&c| pos_of(c)).collect();
        let source = render_tokens(tokens.iter().map(|t| t.text.as_str()));
        SentenceGraph { tokens, source, provenance: self.provenance, copied }
    }
}

impl fmt::Display for SentenceGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}

/// Joins words with spaces, without a space before punctuation.
pub fn render_tokens<'a>(words: impl Iterator<Item = &'a str>) -> String {
    let mut out = String::new();
    for w in words {
        let punct = w.chars().all(|c| c.is_ascii_punctuation()) && !w.is_empty();
        if !out.is_empty() && !punct {
            out.push(' ');
        }
        out.push_str(w);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tok(i: usize, text: &str, head: usize, rel: &str) -> Token {
        Token::new(i, text, &text.to_lowercase(), "X", head, rel)
    }

    #[test]
    fn detects_cycles_and_roots() {
        let ok = vec![tok(1, "Max", 2, "nsubj"), tok(2, "sleeps", 0, "root")];
        assert!(SentenceGraph::new(ok, "", Provenance::default()).is_ok());
        let cyc = vec![tok(1, "a", 2, "dep"), tok(2, "b", 1, "dep"), tok(3, "c", 0, "root")];
        assert!(matches!(SentenceGraph::new(cyc, "", Provenance::default()), Err(GraphError::Cycle(_))));
        let two = vec![tok(1, "a", 0, "root"), tok(2, "b", 0, "root")];
        assert_eq!(SentenceGraph::new(two, "", Provenance::default()), Err(GraphError::RootCount(2)));
        let selfie = vec![tok(1, "a", 1, "dep")];
        assert_eq!(SentenceGraph::new(selfie, "", Provenance::default()), Err(GraphError::SelfLoop(1)));
    }

    #[test]
    fn renders_punctuation_tight() {
        assert_eq!(render_tokens(["Max", "sleeps", "."].into_iter()), "Max sleeps.");
    }
}
