//! Deterministic dependency parser for the controlled authoring grammar.
//!
//! Produces UD-style labels (`nsubj`, `dobj`, `prep`, `pobj`, `pcomp`,
//! `acomp`, `xcomp`, `prt`, `conj`, `cc`, ...) for simple declarative
//! clauses, optionally coordinated. Anything outside the grammar is
//! rejected with the nearest documented template.

use serde::Deserialize;
use thiserror::Error;

use super::graph::{Provenance, SentenceGraph, Token};
use super::lexicon::*;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("cannot parse {sentence:?}: {reason}; nearest template is {template:?} (e.g. {example:?})")]
    Unparseable { sentence: String, reason: String, template: String, example: String },
}

/// One documented sentence shape of the controlled grammar.
#[derive(Debug, Clone, Deserialize)]
pub struct Template {
    pub name: String,
    pub pattern: String,
    pub example: String,
}

#[derive(Debug, Deserialize)]
struct TemplateFile {
    template: Vec<Template>,
}

const DEFAULT_TEMPLATES: &str = include_str!("../../resources/templates.toml");

/// The shipped template list.
pub fn templates() -> Vec<Template> {
    toml::from_str::<TemplateFile>(DEFAULT_TEMPLATES).expect("bundled templates parse").template
}

#[derive(Debug, Clone)]
struct Word {
    text: String,
    lower: String,
}

#[derive(Debug, Clone, Default)]
struct Slot {
    lemma: String,
    pos: String,
    head: usize,
    deprel: String,
    set: bool,
}

/// Splits a sentence into word and punctuation tokens.
pub fn tokenize(sentence: &str) -> Vec<String> {
    let mut out = Vec::new();
    for raw in sentence.replace('\u{2019}', "'").split_whitespace() {
        let mut word = raw;
        let mut trailing = Vec::new();
        while let Some(c) = word.chars().next() {
            if "\"(".contains(c) {
                out.push(c.to_string());
                word = &word[1..];
            } else {
                break;
            }
        }
        while let Some(c) = word.chars().last() {
            if ",.!?;:\")".contains(c) {
                trailing.push(c.to_string());
                word = &word[..word.len() - 1];
            } else {
                break;
            }
        }
        if !word.is_empty() {
            let lower = word.to_lowercase();
            if let Some(stem) = lower.strip_suffix("n't") {
                let keep = &word[..stem.len()];
                out.push(keep.to_string());
                out.push("n't".to_string());
            } else {
                out.push(word.to_string());
            }
        }
        out.extend(trailing.into_iter().rev());
    }
    out
}

fn is_punct(w: &str) -> bool {
    !w.is_empty() && w.chars().all(|c| c.is_ascii_punctuation()) && w != "n't"
}

fn is_terminal(w: &str) -> bool {
    matches!(w, "." | "!" | "?" | ";")
}

fn is_capitalized(w: &str) -> bool {
    w.chars().next().is_some_and(char::is_uppercase)
}

fn is_number(w: &str) -> bool {
    !w.is_empty() && w.chars().all(|c| c.is_ascii_digit() || c == '.') && w.chars().any(|c| c.is_ascii_digit())
}

struct Parser<'a> {
    words: &'a [Word],
    slots: Vec<Slot>,
    pos: usize,
}

type PResult<T> = Result<T, String>;

impl<'a> Parser<'a> {
    fn lower(&self, i: usize) -> Option<&str> {
        self.words.get(i).map(|w| w.lower.as_str())
    }

    fn peek(&self) -> Option<&str> {
        self.lower(self.pos)
    }

    fn peek_at(&self, k: usize) -> Option<&str> {
        self.lower(self.pos + k)
    }

    /// Records a token's analysis; heads are 1-based word positions.
    fn assign(&mut self, i: usize, pos: &str, lemma: impl Into<String>, head: usize, deprel: &str) {
        self.slots[i] = Slot { lemma: lemma.into(), pos: pos.to_string(), head, deprel: deprel.to_string(), set: true };
    }

    fn attach(&mut self, i: usize, head: usize, deprel: &str) {
        self.slots[i].head = head;
        self.slots[i].deprel = deprel.to_string();
    }

    fn at_end(&self) -> bool {
        self.pos >= self.words.len()
    }

    fn is_noun_like(&self, i: usize) -> bool {
        let Some(w) = self.lower(i) else { return false };
        !is_punct(w)
            && !is_function_word(w)
            && !is_in(NEGATIONS, w)
            && !(is_adverb(w) && !is_adjective(w))
            && !(w == "such" && self.lower(i + 1) == Some("as"))
            && !(w == "then")
    }

    fn starts_np(&self, i: usize) -> bool {
        let Some(w) = self.lower(i) else { return false };
        is_in(DETERMINERS, w)
            || is_in(POSSESSIVES, w)
            || is_in(OBJECT_PRONOUNS, w)
            || is_number(w)
            || self.is_noun_like(i)
            || ((w == "very" || w == "more" || w == "most") && self.lower(i + 1).is_some_and(is_adjective))
    }

    fn starts_subject(&self, i: usize) -> bool {
        let Some(word) = self.words.get(i) else { return false };
        let w = word.lower.as_str();
        is_in(SUBJECT_PRONOUNS, w)
            || is_in(DETERMINERS, w)
            || is_in(POSSESSIVES, w)
            || (is_capitalized(&word.text) && !is_function_word(w))
    }

    /// Whether the coordinator or comma at `i` opens a new clause.
    fn clause_follows(&self, i: usize) -> bool {
        let mut j = i;
        let mut saw_then = false;
        while let Some(w) = self.lower(j) {
            if w == "," || is_in(COORDINATORS, w) {
                j += 1;
            } else if w == "then" {
                saw_then = true;
                j += 1;
            } else {
                break;
            }
        }
        if saw_then {
            return true;
        }
        let Some(word) = self.words.get(j) else { return false };
        let w = word.lower.as_str();
        if is_in(SUBJECT_PRONOUNS, w) && w != "it" && w != "you" {
            return true;
        }
        if w == "it" {
            return self.lower(j + 1).is_some_and(|n| is_known_verb(n) || is_in(MODALS, n));
        }
        if is_capitalized(&word.text) && !is_function_word(w) {
            return self.lower(j + 1).is_some_and(|n| !is_punct(n) && !is_in(COORDINATORS, n));
        }
        if is_in(SUBORDINATORS, w) {
            return true;
        }
        if (is_known_verb(w) || is_in(MODALS, w)) && !w.ends_with("ing") {
            return self
                .lower(j + 1)
                .is_some_and(|n| !is_punct(n) && !is_in(COORDINATORS, n) && !is_in(PREPOSITIONS, n));
        }
        false
    }

    fn at_boundary(&self) -> bool {
        match self.peek() {
            None => true,
            Some(w) => {
                is_terminal(w)
                    || is_in(SUBORDINATORS, w)
                    || ((w == "," || is_in(COORDINATORS, w)) && self.clause_follows(self.pos))
            }
        }
    }

    fn parse_sentence(&mut self) -> PResult<usize> {
        let root = self.parse_clause(false)?;
        self.attach(root, 0, "root");
        while let Some(w) = self.peek().map(str::to_string) {
            if is_terminal(&w) {
                let i = self.pos;
                self.assign(i, "PUNCT", w.clone(), root + 1, "punct");
                self.pos += 1;
                continue;
            }
            if is_in(SUBORDINATORS, &w) {
                let mark = self.pos;
                self.pos += 1;
                let verb = self.parse_clause(false)?;
                self.assign(mark, "SCONJ", w, verb + 1, "mark");
                self.attach(verb, root + 1, "advcl");
                continue;
            }
            if w == "," || is_in(COORDINATORS, &w) || w == "then" {
                let mut pending = Vec::new();
                while let Some(c) = self.peek().map(str::to_string) {
                    if c == "," || is_in(COORDINATORS, &c) || c == "then" {
                        pending.push((self.pos, c));
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                if self.at_end() || self.peek().is_some_and(|n| is_in(SUBORDINATORS, n)) {
                    for (i, c) in pending {
                        self.assign(i, "PUNCT", c, root + 1, "punct");
                    }
                    continue;
                }
                let verb = self.parse_clause(true)?;
                self.attach(verb, root + 1, "conj");
                for (i, c) in pending {
                    match c.as_str() {
                        "," => self.assign(i, "PUNCT", c, verb + 1, "punct"),
                        "then" => self.assign(i, "ADV", c, verb + 1, "advmod"),
                        _ => self.assign(i, "CCONJ", c, verb + 1, "cc"),
                    }
                }
                continue;
            }
            return Err(format!("unexpected word {w:?}"));
        }
        Ok(root)
    }

    /// Parses `subject aux* verb complements`; returns the verb position.
    fn parse_clause(&mut self, subject_optional: bool) -> PResult<usize> {
        let subject = if self.starts_subject(self.pos) { self.parse_subject()? } else { None };
        if subject.is_none() && !subject_optional {
            return Err("missing subject".to_string());
        }
        let mut auxes = Vec::new();
        let mut negs = Vec::new();
        let mut advs = Vec::new();
        while let Some(w) = self.peek().map(str::to_string) {
            let next = self.peek_at(1).map(str::to_string);
            let modal = is_in(MODALS, &w)
                && next.as_deref().is_some_and(|n| {
                    !is_in(DETERMINERS, n) && !is_in(POSSESSIVES, n) && !is_in(OBJECT_PRONOUNS, n) && !is_punct(n)
                });
            let progressive = is_in(BE_FORMS, &w) && next.as_deref().is_some_and(|n| n.ends_with("ing") && n.len() > 4);
            if is_in(NEGATIONS, &w) {
                negs.push(self.pos);
            } else if modal || progressive {
                auxes.push(self.pos);
            } else if is_adverb(&w) && !is_adjective(&w) && next.is_some() {
                advs.push(self.pos);
            } else {
                break;
            }
            self.pos += 1;
        }
        let Some(vw) = self.peek().map(str::to_string) else {
            return Err("missing verb".to_string());
        };
        let verb_ok = !is_punct(&vw)
            && (!is_function_word(&vw) || is_in(BE_FORMS, &vw) || is_in(MODALS, &vw) || vw == "like")
            && !(is_adjective(&vw) && !is_known_verb(&vw));
        if !verb_ok {
            return Err(format!("expected a verb, found {vw:?}"));
        }
        let verb = self.pos;
        self.assign(verb, "VERB", verb_lemma(&vw), 0, "root");
        self.pos += 1;
        if let Some(s) = subject {
            self.attach(s, verb + 1, "nsubj");
        }
        for a in auxes {
            let w = self.words[a].lower.clone();
            let lemma = verb_lemma(&w);
            self.assign(a, "AUX", lemma, verb + 1, "aux");
        }
        for n in negs {
            self.assign(n, "PART", "not", verb + 1, "neg");
        }
        for a in advs {
            let w = self.words[a].lower.clone();
            self.assign(a, "ADV", w, verb + 1, "advmod");
        }
        self.parse_predicate(verb)?;
        Ok(verb)
    }

    fn parse_subject(&mut self) -> PResult<Option<usize>> {
        let word = &self.words[self.pos];
        let w = word.lower.clone();
        if is_in(SUBJECT_PRONOUNS, &w) {
            let i = self.pos;
            self.assign(i, "PRON", w, 0, "nsubj");
            self.pos += 1;
            return Ok(Some(i));
        }
        if is_capitalized(&word.text) && !is_function_word(&w) && !w.ends_with("'s") {
            let i = self.pos;
            self.assign(i, "PROPN", w.clone(), 0, "nsubj");
            self.pos += 1;
            return Ok(Some(i));
        }
        Ok(self.parse_np(true))
    }

    /// Parses one noun phrase and returns its head.
    fn parse_np(&mut self, subject: bool) -> Option<usize> {
        let start = self.pos;
        let mut dets = Vec::new();
        let mut poss = Vec::new();
        let mut advs = Vec::new();
        let mut words = Vec::new();
        if let Some(w) = self.peek() {
            if is_in(OBJECT_PRONOUNS, w) || (is_in(SUBJECT_PRONOUNS, w) && !subject) {
                let i = self.pos;
                let w = w.to_string();
                self.assign(i, "PRON", w, 0, "dep");
                self.pos += 1;
                return Some(i);
            }
        }
        while let Some(w) = self.peek() {
            if is_in(DETERMINERS, w) && words.is_empty() {
                dets.push(self.pos);
            } else if (is_in(POSSESSIVES, w) || (w.ends_with("'s") && w.len() > 2)) && words.is_empty() {
                poss.push(self.pos);
            } else if is_adverb(w)
                && !is_adjective(w)
                && words.is_empty()
                && self.lower(self.pos + 1).is_some_and(is_adjective)
            {
                advs.push(self.pos);
            } else {
                break;
            }
            self.pos += 1;
        }
        while self.is_noun_like(self.pos) || self.peek().is_some_and(is_number) {
            if subject && !words.is_empty() {
                let w = self.peek().unwrap_or_default();
                if is_known_verb(w) || (w.ends_with('s') && !w.ends_with("ss")) {
                    break;
                }
            }
            words.push(self.pos);
            self.pos += 1;
        }
        if words.is_empty() {
            if dets.is_empty() && poss.is_empty() {
                self.pos = start;
                return None;
            }
            // a bare possessive or determiner acts as the head
            let i = *poss.last().or(dets.last()).unwrap_or(&start);
            let w = self.words[i].lower.clone();
            self.assign(i, "PRON", w, 0, "dep");
            poss.retain(|&p| p != i);
            dets.retain(|&d| d != i);
            words.push(i);
        }
        // split off everything before the head noun as modifiers
        let mut nouns_from = 0;
        for (k, &i) in words.iter().enumerate() {
            if k + 1 < words.len() && is_adjective(&self.words[i].lower) {
                nouns_from = k + 1;
            }
        }
        let head = *words.last().expect("non-empty");
        for (k, &i) in words.iter().enumerate() {
            let w = self.words[i].lower.clone();
            if i == head {
                let (pos, lemma) = if is_number(&w) {
                    ("NUM", w.clone())
                } else if is_capitalized(&self.words[i].text) {
                    ("PROPN", w.clone())
                } else {
                    ("NOUN", noun_lemma(&w))
                };
                if !self.slots[i].set {
                    self.assign(i, pos, lemma, 0, "dep");
                }
            } else if k < nouns_from {
                self.assign(i, "ADJ", w, head + 1, "amod");
            } else {
                self.assign(i, "NOUN", noun_lemma(&w), head + 1, "compound");
            }
        }
        for d in dets {
            let w = self.words[d].lower.clone();
            self.assign(d, "DET", w, head + 1, "det");
        }
        for p in poss {
            let w = self.words[p].lower.clone();
            let pos = if w.ends_with("'s") { "PROPN" } else { "PRON" };
            self.assign(p, pos, w.trim_end_matches("'s").to_string(), head + 1, "poss");
        }
        for a in advs {
            let w = self.words[a].lower.clone();
            let target = words.first().copied().unwrap_or(head);
            self.assign(a, "ADV", w, target + 1, "advmod");
        }
        Some(head)
    }

    /// Noun phrase followed by optional `and`/`or`/`,` conjuncts.
    fn parse_np_list(&mut self, subject: bool) -> Option<usize> {
        let head = self.parse_np(subject)?;
        while let Some(w) = self.peek() {
            if !(w == "," || w == "and" || w == "or") || self.clause_follows(self.pos) {
                break;
            }
            let save = self.pos;
            let mut seps = Vec::new();
            while self.peek().is_some_and(|c| c == "," || c == "and" || c == "or") {
                seps.push(self.pos);
                self.pos += 1;
            }
            if !self.starts_np(self.pos) {
                self.pos = save;
                break;
            }
            let Some(conj) = self.parse_np(subject) else {
                self.pos = save;
                break;
            };
            self.attach(conj, head + 1, "conj");
            for s in seps {
                let w = self.words[s].lower.clone();
                if w == "," {
                    self.assign(s, "PUNCT", w, conj + 1, "punct");
                } else {
                    self.assign(s, "CCONJ", w, conj + 1, "cc");
                }
            }
        }
        Some(head)
    }

    /// Gerund directly after a preposition that takes its own object.
    fn gerund_with_object(&self, i: usize) -> bool {
        self.lower(i).is_some_and(|w| w.ends_with("ing") && w.len() > 4 && !is_in(PREPOSITIONS, w))
            && self.starts_np(i + 1)
            && !self.lower(i + 1).is_some_and(|n| n == "and" || n == "or")
    }

    fn parse_predicate(&mut self, verb: usize) -> PResult<()> {
        let lemma = self.slots[verb].lemma.clone();
        if self.peek().is_some_and(|w| is_in(PARTICLES, w)) {
            let i = self.pos;
            let w = self.words[i].lower.clone();
            self.assign(i, "ADP", w, verb + 1, "prt");
            self.pos += 1;
        }
        if is_in(CATENATIVE, &lemma) && self.peek() == Some("to") && !self.starts_np_after_to() {
            let to = self.pos;
            self.pos += 1;
            let Some(iw) = self.peek().map(str::to_string) else {
                return Err("missing verb after 'to'".to_string());
            };
            let inner = self.pos;
            self.assign(inner, "VERB", verb_lemma(&iw), verb + 1, "xcomp");
            self.assign(to, "PART", "to", inner + 1, "aux");
            self.pos += 1;
            return self.parse_predicate(inner);
        }
        let mut last_nominal: Option<usize> = None;
        if is_in(COPULAR, &lemma) {
            // "is not hungry": negation after the copula
            while self.peek().is_some_and(|w| is_in(NEGATIONS, w)) {
                let n = self.pos;
                self.assign(n, "PART", "not", verb + 1, "neg");
                self.pos += 1;
            }
            let save = self.pos;
            let mut advs = Vec::new();
            while self.peek().is_some_and(|w| is_adverb(w) && !is_adjective(w)) {
                advs.push(self.pos);
                self.pos += 1;
            }
            let adj_here =
                self.peek().is_some_and(|w| is_adjective(w) || (w.ends_with("ed") && !is_in(DETERMINERS, w)));
            if adj_here {
                let a = self.pos;
                let w = self.words[a].lower.clone();
                self.assign(a, "ADJ", w, verb + 1, "acomp");
                for adv in advs {
                    let aw = self.words[adv].lower.clone();
                    self.assign(adv, "ADV", aw, a + 1, "advmod");
                }
                self.pos += 1;
                last_nominal = Some(a);
            } else {
                self.pos = save;
            }
        }
        let mut has_object = false;
        loop {
            if self.at_boundary() {
                break;
            }
            let Some(w) = self.peek().map(str::to_string) else { break };
            if w == "," {
                // commas inside a clause only separate list items
                break;
            }
            if w == "such" && self.peek_at(1) == Some("as") {
                let such = self.pos;
                self.pos += 1;
                let prep = self.pos;
                self.parse_pp(verb, &mut last_nominal)?;
                self.assign(such, "ADJ", "such", prep + 1, "advmod");
                continue;
            }
            if w == "to" && self.peek_at(1).is_some_and(|n| is_in(VERB_BASES, n)) && !self.starts_np_after_to() {
                let to = self.pos;
                self.pos += 1;
                let inner = self.pos;
                let iw = self.words[inner].lower.clone();
                self.assign(inner, "VERB", verb_lemma(&iw), verb + 1, "xcomp");
                self.assign(to, "PART", "to", inner + 1, "aux");
                self.pos += 1;
                self.parse_predicate(inner)?;
                continue;
            }
            if is_in(PREPOSITIONS, &w) {
                self.parse_pp(verb, &mut last_nominal)?;
                continue;
            }
            if is_adverb(&w) && !is_adjective(&w) && !self.lower(self.pos + 1).is_some_and(is_adjective) {
                let i = self.pos;
                self.assign(i, "ADV", w, verb + 1, "advmod");
                self.pos += 1;
                continue;
            }
            if self.starts_np(self.pos) {
                let before = self.pos;
                let Some(head) = self.parse_np_list(false) else { break };
                let rel = if has_object { "npadvmod" } else { "dobj" };
                self.attach(head, verb + 1, rel);
                has_object = true;
                last_nominal = Some(head);
                if is_in(PERCEPTION, &self.slots[verb].lemma) {
                    self.split_bare_infinitive(verb, head, before);
                }
                continue;
            }
            if is_known_verb(&w) && has_object {
                let i = self.pos;
                self.assign(i, "VERB", verb_lemma(&w), verb + 1, "xcomp");
                self.pos += 1;
                continue;
            }
            return Err(format!("unexpected word {w:?}"));
        }
        Ok(())
    }

    fn starts_np_after_to(&self) -> bool {
        self.peek_at(1).is_some_and(|n| is_in(DETERMINERS, n) || is_in(POSSESSIVES, n))
    }

    /// "sees his team lose": the trailing verb is split off the object.
    fn split_bare_infinitive(&mut self, verb: usize, head: usize, start: usize) {
        let nominal: Vec<usize> = (start..=head).filter(|&i| self.slots[i].pos == "NOUN").collect();
        if nominal.len() < 2 || !is_known_verb(&self.words[head].lower) {
            return;
        }
        let new_head = nominal[nominal.len() - 2];
        for i in start..head {
            if self.slots[i].head == head + 1 {
                self.slots[i].head = new_head + 1;
            }
        }
        let nw = self.words[new_head].lower.clone();
        self.assign(new_head, "NOUN", noun_lemma(&nw), verb + 1, "dobj");
        let hw = self.words[head].lower.clone();
        self.assign(head, "VERB", verb_lemma(&hw), verb + 1, "xcomp");
    }

    fn parse_pp(&mut self, verb: usize, last_nominal: &mut Option<usize>) -> PResult<()> {
        let prep = self.pos;
        let w = self.words[prep].lower.clone();
        let attach_to = match *last_nominal {
            Some(n) if is_in(NOMINAL_PREPOSITIONS, &w) => n,
            _ => verb,
        };
        self.assign(prep, "ADP", w.clone(), attach_to + 1, "prep");
        self.pos += 1;
        if self.gerund_with_object(self.pos) {
            let g = self.pos;
            let gw = self.words[g].lower.clone();
            self.assign(g, "VERB", verb_lemma(&gw), prep + 1, "pcomp");
            self.pos += 1;
            if let Some(obj) = self.parse_np_list(false) {
                self.attach(obj, g + 1, "dobj");
                *last_nominal = Some(obj);
            }
            return Ok(());
        }
        match self.parse_np_list(false) {
            Some(obj) => {
                self.attach(obj, prep + 1, "pobj");
                *last_nominal = Some(obj);
                Ok(())
            }
            None => Err(format!("preposition {w:?} has no object")),
        }
    }
}

/// Coarse word-class signature used to rank templates.
fn signature(words: &[String]) -> Vec<char> {
    words
        .iter()
        .map(|t| {
            let w = t.to_lowercase();
            if is_punct(&w) {
                '.'
            } else if is_in(SUBJECT_PRONOUNS, &w) || is_capitalized(t) {
                'S'
            } else if is_in(DETERMINERS, &w) || is_in(POSSESSIVES, &w) {
                'D'
            } else if is_in(MODALS, &w) || is_in(BE_FORMS, &w) {
                'M'
            } else if is_in(PREPOSITIONS, &w) {
                'P'
            } else if is_in(COORDINATORS, &w) {
                'C'
            } else if is_adjective(&w) {
                'A'
            } else if is_adverb(&w) {
                'R'
            } else if is_known_verb(&w) {
                'V'
            } else {
                'N'
            }
        })
        .collect()
}

/// Template whose example sentence is closest in word-class shape.
pub fn nearest_template(sentence: &str) -> Template {
    let sig = signature(&tokenize(sentence));
    templates()
        .into_iter()
        .min_by_key(|t| strsim::generic_levenshtein(&sig, &signature(&tokenize(&t.example))))
        .expect("at least one template")
}

/// Parses one sentence of the controlled grammar.
pub fn builtin_parse(sentence: &str) -> Result<SentenceGraph, ParseError> {
    builtin_parse_at(sentence, Provenance::default())
}

pub fn builtin_parse_at(sentence: &str, provenance: Provenance) -> Result<SentenceGraph, ParseError> {
    let words: Vec<Word> =
        tokenize(sentence).into_iter().map(|text| Word { lower: text.to_lowercase(), text }).collect();
    let fail = |reason: String| {
        let t = nearest_template(sentence);
        ParseError::Unparseable { sentence: sentence.trim().to_string(), reason, template: t.name, example: t.example }
    };
    if words.is_empty() {
        return Err(fail("empty sentence".to_string()));
    }
    let mut parser = Parser { words: &words, slots: vec![Slot::default(); words.len()], pos: 0 };
    parser.parse_sentence().map_err(fail)?;
    if let Some(i) = parser.slots.iter().position(|s| !s.set) {
        return Err(fail(format!("word {:?} was not attached", words[i].text)));
    }
    let tokens = words
        .iter()
        .zip(&parser.slots)
        .enumerate()
        .map(|(i, (w, s))| Token::new(i + 1, &w.text, &s.lemma, &s.pos, s.head, &s.deprel))
        .collect();
    SentenceGraph::new(tokens, sentence.trim(), provenance).map_err(|e| fail(e.to_string()))
}
