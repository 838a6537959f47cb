//! Reader and writer for the CoNLL-U dependency format.
//!
//! Only the ID, FORM, LEMMA, UPOS, HEAD and DEPREL columns are consumed.
//! Multiword-token ranges (`1-2`) and empty nodes (`1.1`) are skipped.
//! Extraction rules expect the ClearNLP label set (`dobj`, `prep`, `pobj`,
//! `acomp`, ...) that spaCy's English models produce, not plain UD labels.

use std::fmt::Write as _;

use thiserror::Error;

use super::graph::{GraphError, Provenance, SentenceGraph, Token};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConlluError {
    #[error("line {line}: expected 10 tab-separated columns, found {found}")]
    Columns { line: usize, found: usize },
    #[error("line {line}: bad token id {id:?}")]
    BadId { line: usize, id: String },
    #[error("line {line}: duplicate token id {id}")]
    DuplicateId { line: usize, id: usize },
    #[error("line {line}: bad head {head:?}")]
    BadHead { line: usize, head: String },
    #[error("sentence starting at line {line}: {source}")]
    Tree { line: usize, source: GraphError },
}

/// Parses every sentence block of a CoNLL-U document.
pub fn parse_conllu(input: &str) -> Result<Vec<SentenceGraph>, ConlluError> {
    let mut graphs = Vec::new();
    let mut tokens: Vec<Token> = Vec::new();
    let mut text: Option<String> = None;
    let mut start_line = 0;

    let mut flush = |tokens: &mut Vec<Token>, text: &mut Option<String>, start: usize| -> Result<(), ConlluError> {
        if tokens.is_empty() {
            *text = None;
            return Ok(());
        }
        let toks = std::mem::take(tokens);
        let source = text.take().unwrap_or_else(|| super::graph::render_tokens(toks.iter().map(|t| t.text.as_str())));
        let provenance = Provenance { line: start, sentence: graphs.len() + 1 };
        let graph =
            SentenceGraph::new(toks, source, provenance).map_err(|source| ConlluError::Tree { line: start, source })?;
        graphs.push(graph);
        Ok(())
    };

    for (i, raw) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            flush(&mut tokens, &mut text, start_line)?;
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(t) = comment.trim().strip_prefix("text") {
                if let Some(t) = t.trim_start().strip_prefix('=') {
                    text = Some(t.trim().to_string());
                }
            }
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(ConlluError::Columns { line: line_no, found: cols.len() });
        }
        let id_field = cols[0];
        if id_field.contains('-') || id_field.contains('.') {
            continue;
        }
        let id: usize = id_field.parse().map_err(|_| ConlluError::BadId { line: line_no, id: id_field.to_string() })?;
        if tokens.iter().any(|t| t.index == id) {
            return Err(ConlluError::DuplicateId { line: line_no, id });
        }
        if id != tokens.len() + 1 {
            return Err(ConlluError::BadId { line: line_no, id: id_field.to_string() });
        }
        if tokens.is_empty() {
            start_line = line_no;
        }
        let head: usize =
            cols[6].parse().map_err(|_| ConlluError::BadHead { line: line_no, head: cols[6].to_string() })?;
        let form = cols[1];
        let lemma = if cols[2] == "_" { form.to_lowercase() } else { cols[2].to_string() };
        tokens.push(Token::new(id, form, &lemma, cols[3], head, cols[7]));
    }
    flush(&mut tokens, &mut text, start_line)?;
    Ok(graphs)
}

/// Writes graphs back out; unconsumed columns are `_`.
pub fn serialize_conllu(graphs: &[SentenceGraph]) -> String {
    let mut out = String::new();
    for g in graphs {
        let _ = writeln!(out, "# text = {}", g.source);
        for t in &g.tokens {
            let _ =
                writeln!(out, "{}\t{}\t{}\t{}\t_\t_\t{}\t{}\t_\t_", t.index, t.text, t.lemma, t.pos, t.head, t.deprel);
        }
        out.push('\n');
    }
    out
}
