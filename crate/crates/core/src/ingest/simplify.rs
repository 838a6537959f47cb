//! Clause splitting: one output graph per verb on the root spine.

use std::collections::BTreeSet;

use super::graph::{render_tokens, SentenceGraph, Token};

/// The content verb of a clause: the root, followed down `to`-infinitive
/// `xcomp` links ("would like to try out" -> "try").
pub fn main_verb(graph: &SentenceGraph) -> &Token {
    let mut cur = graph.root();
    while let Some(next) = graph.children_with(cur.index, "xcomp").find(|x| {
        graph
            .children(x.index)
            .any(|c| c.text.eq_ignore_ascii_case("to") && matches!(c.deprel.as_str(), "aux" | "mark"))
    }) {
        cur = next;
    }
    cur
}

fn is_clause_head(graph: &SentenceGraph, t: &Token) -> bool {
    match t.deprel.as_str() {
        "advcl" => true,
        "conj" => t.pos == "VERB" || t.pos == "AUX" || graph.children(t.index).any(|c| c.deprel.starts_with("nsubj")),
        _ => false,
    }
}

/// Connectives that only glue clauses together.
fn is_connective(t: &Token) -> bool {
    match t.deprel.as_str() {
        "cc" | "mark" => true,
        "punct" => t.text == ",",
        "advmod" => t.lemma.eq_ignore_ascii_case("then"),
        _ => false,
    }
}

/// Builds a graph from `copied` tokens (placed first) and `keep` tokens,
/// rooted at `root`. Tokens whose head falls outside attach to the root.
fn assemble(graph: &SentenceGraph, copied: &[usize], keep: &[usize], root: usize) -> SentenceGraph {
    let order: Vec<usize> = copied.iter().chain(keep).copied().collect();
    let new_index =
        |old: usize, within: &[usize], offset: usize| within.iter().position(|&k| k == old).map(|p| p + offset + 1);
    let root_new = new_index(root, keep, copied.len()).expect("root kept");
    let mut tokens = Vec::with_capacity(order.len());
    for (i, &old) in order.iter().enumerate() {
        let t = &graph.tokens[old - 1];
        let in_copied = i < copied.len();
        let (head, deprel) = if old == root && !in_copied {
            (0, "root".to_string())
        } else {
            let mapped = if in_copied { new_index(t.head, copied, 0) } else { new_index(t.head, keep, copied.len()) };
            (mapped.unwrap_or(root_new), t.deprel.clone())
        };
        tokens.push(Token { index: i + 1, head, deprel, ..t.clone() });
    }
    let mut marks: BTreeSet<usize> = (1..=copied.len()).collect();
    marks.extend(graph.copied.iter().filter_map(|c| new_index(*c, keep, copied.len())));
    let source = render_tokens(tokens.iter().map(|t| t.text.as_str()));
    SentenceGraph { tokens, source, provenance: graph.provenance, copied: marks }
}

/// Splits coordinated (`conj`) and adverbial (`advcl`) clauses into
/// separate graphs, copying the shared subject into clauses that lack one.
/// A graph with a single clause is returned unchanged.
pub fn simplify(graph: &SentenceGraph) -> Vec<SentenceGraph> {
    let root = graph.root().index;
    let splits: Vec<usize> = graph.children(root).filter(|t| is_clause_head(graph, t)).map(|t| t.index).collect();
    if splits.is_empty() {
        return vec![graph.clone()];
    }
    let split_sets: Vec<Vec<usize>> = splits.iter().map(|&s| graph.subtree(s)).collect();
    let in_split: BTreeSet<usize> = split_sets.iter().flatten().copied().collect();
    let main: Vec<usize> = (1..=graph.tokens.len()).filter(|i| !in_split.contains(i)).collect();
    let subject: Vec<usize> = graph
        .children(root)
        .find(|t| t.deprel.starts_with("nsubj"))
        .map(|s| graph.subtree(s.index))
        .unwrap_or_default();

    let mut clauses = vec![(root, assemble(graph, &[], &main, root))];
    for (&verb, members) in splits.iter().zip(&split_sets) {
        let keep: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&i| !(graph.tokens[i - 1].head == verb && is_connective(&graph.tokens[i - 1])))
            .collect();
        let has_subject = graph.children(verb).any(|c| c.deprel.starts_with("nsubj"));
        let copied: &[usize] = if has_subject { &[] } else { &subject };
        clauses.push((verb, assemble(graph, copied, &keep, verb)));
    }
    clauses.sort_by_key(|(v, _)| *v);
    clauses.into_iter().flat_map(|(_, g)| simplify(&g)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::builtin_parse;

    fn roots(gs: &[SentenceGraph]) -> Vec<String> {
        gs.iter().map(|g| g.root().text.clone()).collect()
    }

    #[test]
    fn conjoined_clauses_split() {
        let g = builtin_parse("Max brings the book and then Max reads it.").unwrap();
        let out = simplify(&g);
        assert_eq!(roots(&out), ["brings", "reads"]);
        assert_eq!(out[0].source, "Max brings the book.");
        assert_eq!(out[1].source, "Max reads it");
    }

    #[test]
    fn shared_subject_is_copied() {
        let g = builtin_parse("Max eats the cake and drinks some juice.").unwrap();
        let out = simplify(&g);
        assert_eq!(out.len(), 2);
        assert_eq!(out[1].source, "Max drinks some juice");
        assert_eq!(out[1].copied, BTreeSet::from([1]));
        assert_eq!(out[1].tokens[0].deprel, "nsubj");
        assert_eq!(out[1].tokens[0].head, out[1].root().index);
    }

    #[test]
    fn three_way_coordination() {
        let g = builtin_parse("Max sings, Rio dances and Max plays the guitar.").unwrap();
        let out = simplify(&g);
        assert_eq!(roots(&out), ["sings", "dances", "plays"]);
        for g in &out {
            g.check().unwrap();
            let spine_verbs = g.children(g.root().index).filter(|c| c.deprel == "conj").count();
            assert_eq!(spine_verbs, 0);
        }
    }

    #[test]
    fn single_clause_is_identity() {
        let g = builtin_parse("Max can stand at the bus station.").unwrap();
        assert_eq!(simplify(&g), vec![g]);
    }

    #[test]
    fn content_tokens_survive() {
        let g = builtin_parse("Max brings the book and then he reads it, because he is curious.").unwrap();
        let out = simplify(&g);
        assert_eq!(out.len(), 3);
        let seen: BTreeSet<usize> = out.iter().flat_map(|o| o.tokens.iter().map(|t| t.origin)).collect();
        for t in &g.tokens {
            if matches!(t.pos.as_str(), "NOUN" | "PROPN" | "VERB" | "ADJ" | "PRON") {
                assert!(seen.contains(&t.index), "{} lost", t.text);
            }
        }
    }

    #[test]
    fn main_verb_follows_infinitive_chain() {
        let g = builtin_parse("Max would like to try out different activities such as racing.").unwrap();
        assert_eq!(main_verb(&g).lemma, "try");
        let g = builtin_parse("he sees his favorite sports team lose").unwrap();
        assert_eq!(main_verb(&g).lemma, "see");
    }
}
