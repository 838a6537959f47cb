//! Front half of the pipeline: raw text or CoNLL-U in, simplified
//! single-verb dependency graphs out.

mod classify;
mod conllu;
mod coref;
mod graph;
pub mod lexicon;
mod parser;
mod sentences;
mod simplify;

pub use classify::{classify_state_kind, keyword_matches, DEFAULT_FLUENT_KEYWORDS};
pub use conllu::{parse_conllu, serialize_conllu, ConlluError};
pub use coref::{resolve_coreferences, CorefOutput, Resolver, UnresolvedPronoun};
pub use graph::{render_tokens, GraphError, Provenance, SentenceGraph, Token};
pub use parser::{builtin_parse, builtin_parse_at, nearest_template, templates, tokenize, ParseError, Template};
pub use sentences::split_sentences;
pub use simplify::{main_verb, simplify};

/// Parses `text` with the built-in parser, resolves pronouns against
/// `resolver` and splits it into single-verb clauses. Returns the clauses
/// and the text of every pronoun left unresolved.
pub fn prepare_text(
    text: &str,
    provenance: Provenance,
    resolver: &mut Resolver,
) -> Result<(Vec<SentenceGraph>, Vec<String>), ParseError> {
    let graph = builtin_parse_at(text, provenance)?;
    Ok(prepare_graph(&graph, resolver))
}

/// [`prepare_text`] for an already parsed graph. Proper-noun subjects
/// become antecedents for later pronouns.
pub fn prepare_graph(graph: &SentenceGraph, resolver: &mut Resolver) -> (Vec<SentenceGraph>, Vec<String>) {
    for t in graph.tokens.iter().filter(|t| t.pos == "PROPN" && t.deprel.starts_with("nsubj")) {
        resolver.add_entity(t.text.strip_suffix("'s").unwrap_or(&t.text));
    }
    let (resolved, unresolved) = resolver.resolve(graph);
    let pronouns = unresolved.iter().filter_map(|&i| graph.token(i)).map(|t| t.text.clone()).collect();
    (simplify(&resolved), pronouns)
}
