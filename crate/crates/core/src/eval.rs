//! Gold-corpus scoring: state identification and condition accuracy.
//!
//! A gold corpus is a TOML file of `[[case]]` tables; the schema is
//! documented in `resources/gold_corpus.toml`. Each case is compiled into a
//! fresh bundle and compared with its expectations. A gold condition counts
//! as correct when the produced affordance carries the same state, value,
//! polarity and probability bucket in the same role.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{
    AffectChange, AffectTarget, ChangeMode, Cnf, DomainBundle, Literal, Slug, StateBody, StateId, StateKind,
};
use crate::pipeline::Compiler;

/// The corpus bundled with the crate.
pub const BUNDLED_GOLD: &str = include_str!("../resources/gold_corpus.toml");

#[derive(Debug, Error)]
pub enum GoldError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("gold corpus: {0}")]
    Syntax(String),
    #[error("case {index} ({name}): {message}")]
    Case { index: usize, name: String, message: String },
}

/// A probability is either certain or not; the exact value is not scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bucket {
    Certain,
    Probabilistic,
}

impl Bucket {
    pub fn of(p: f64) -> Self {
        if p >= 1.0 {
            Bucket::Certain
        } else {
            Bucket::Probabilistic
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Pre,
    Post,
}

/// One expected pre- or postcondition of an affordance.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GoldCondition {
    pub role: Role,
    pub literal: String,
    pub bucket: Bucket,
}

impl fmt::Display for GoldCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let role = match self.role {
            Role::Pre => "pre",
            Role::Post => "post",
        };
        write!(f, "{role} {}", self.literal)?;
        if self.bucket == Bucket::Probabilistic {
            write!(f, " (probabilistic)")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoldAffordance {
    pub owner: Slug,
    pub name: Slug,
    pub conditions: Vec<GoldCondition>,
}

/// Expected rule, compared as its canonical s-expression text.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct GoldRule(pub String);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoldCase {
    pub name: String,
    pub sentences: Vec<String>,
    /// CoNLL-U parse of `sentences`, read from the file the case names.
    pub conllu: Option<String>,
    /// `subject/predicate[/complement]` with the state kind.
    pub states: Vec<(String, StateKind)>,
    pub affordances: Vec<GoldAffordance>,
    pub rules: Vec<GoldRule>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCorpus {
    #[serde(default)]
    case: Vec<RawCase>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCase {
    name: String,
    sentences: Vec<String>,
    #[serde(default)]
    conllu: Option<PathBuf>,
    #[serde(default)]
    states: Vec<RawState>,
    #[serde(default)]
    affordances: Vec<RawAffordance>,
    #[serde(default)]
    rules: Vec<RawRule>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    triple: String,
    #[serde(default)]
    kind: Option<StateKind>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAffordance {
    name: String,
    #[serde(default)]
    pre: Vec<String>,
    #[serde(default)]
    post: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRule {
    target: String,
    change: String,
    when: Vec<String>,
}

/// Reads a corpus file; `conllu` paths are relative to it.
pub fn load_gold(path: &Path) -> Result<Vec<GoldCase>, GoldError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| GoldError::Io { path: path.display().to_string(), source })?;
    parse_gold(&text, path.parent().unwrap_or(Path::new(".")))
}

/// Parses corpus text, resolving `conllu` paths against `base`.
pub fn parse_gold(text: &str, base: &Path) -> Result<Vec<GoldCase>, GoldError> {
    let raw: RawCorpus = toml::from_str(text).map_err(|e| GoldError::Syntax(e.to_string()))?;
    let mut names = BTreeSet::new();
    raw.case
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            let index = i + 1;
            let name = c.name.clone();
            let fail = |message: String| GoldError::Case { index, name: name.clone(), message };
            if !names.insert(c.name.clone()) {
                return Err(fail("duplicate case name".into()));
            }
            convert_case(c, base).map_err(fail)
        })
        .collect()
}

fn convert_case(c: RawCase, base: &Path) -> Result<GoldCase, String> {
    if c.sentences.iter().all(|s| s.trim().is_empty()) {
        return Err("no sentences".into());
    }
    let conllu = match c.conllu {
        Some(p) => {
            let path = base.join(p);
            Some(std::fs::read_to_string(&path).map_err(|e| format!("cannot read {}: {e}", path.display()))?)
        }
        None => None,
    };
    let states = c
        .states
        .into_iter()
        .map(|s| {
            let parts: Vec<&str> = s.triple.split('/').collect();
            let ok = matches!(parts.len(), 2 | 3) && parts.iter().all(|p| Slug::new(*p).is_ok());
            if !ok {
                return Err(format!("state {:?} is not subject/predicate[/complement]", s.triple));
            }
            Ok((s.triple, s.kind.unwrap_or(StateKind::Binary)))
        })
        .collect::<Result<_, String>>()?;
    let affordances = c
        .affordances
        .into_iter()
        .map(|a| {
            let (owner, name) = a
                .name
                .split_once('/')
                .and_then(|(o, n)| Some((Slug::new(o).ok()?, Slug::new(n).ok()?)))
                .ok_or_else(|| format!("affordance {:?} is not owner/name", a.name))?;
            let mut conditions = Vec::new();
            for text in &a.pre {
                conditions.push(GoldCondition {
                    role: Role::Pre,
                    literal: parse_gold_literal(text)?,
                    bucket: Bucket::Certain,
                });
            }
            for text in &a.post {
                let (lit, p) = match text.split_once('@') {
                    Some((l, p)) => {
                        let p: f64 = p.trim().parse().map_err(|_| format!("bad probability in {text:?}"))?;
                        if !(p > 0.0 && p <= 1.0) {
                            return Err(format!("probability out of (0, 1] in {text:?}"));
                        }
                        (l.trim(), p)
                    }
                    None => (text.as_str(), 1.0),
                };
                conditions.push(GoldCondition {
                    role: Role::Post,
                    literal: parse_gold_literal(lit)?,
                    bucket: Bucket::of(p),
                });
            }
            Ok(GoldAffordance { owner, name, conditions })
        })
        .collect::<Result<_, String>>()?;
    let rules = c
        .rules
        .into_iter()
        .map(|r| {
            let target = parse_target(&r.target)?;
            let change = parse_change(&r.change)?;
            let literals = r.when.iter().map(|l| parse_literal(l)).collect::<Result<Vec<_>, _>>()?;
            Ok(GoldRule(rule_key(&Cnf::all_of(literals), &target, &change)))
        })
        .collect::<Result<_, String>>()?;
    Ok(GoldCase { name: c.name, sentences: c.sentences, conllu, states, affordances, rules })
}

/// `state`, `!state`, `state=value` or `!state=value`.
fn parse_literal(text: &str) -> Result<Literal, String> {
    let bad = || format!("bad literal {text:?}");
    let (polarity, rest) = match text.trim().strip_prefix('!') {
        Some(r) => (false, r),
        None => (true, text.trim()),
    };
    let (state, value) = match rest.split_once('=') {
        Some((s, v)) => (s, Some(Slug::new(v).map_err(|_| bad())?)),
        None => (rest, None),
    };
    let state = StateId::new(state).map_err(|_| bad())?;
    Ok(Literal { state, polarity, value })
}

fn parse_gold_literal(text: &str) -> Result<String, String> {
    parse_literal(text).map(|l| literal_text(&l))
}

fn literal_text(l: &Literal) -> String {
    let sign = if l.polarity { "" } else { "!" };
    match &l.value {
        Some(v) => format!("{sign}{}={v}", l.state),
        None => format!("{sign}{}", l.state),
    }
}

fn parse_target(text: &str) -> Result<AffectTarget, String> {
    let words: Vec<&str> = text.split_whitespace().collect();
    let slug = |s: &str| Slug::new(s).map_err(|_| format!("bad target {text:?}"));
    match words.as_slice() {
        ["mood"] => Ok(AffectTarget::Mood),
        ["emotion", n] => Ok(AffectTarget::Emotion(slug(n)?)),
        ["motivation", n] => Ok(AffectTarget::Motivation(slug(n)?)),
        _ => Err(format!("bad target {text:?}; expected mood, emotion NAME or motivation NAME")),
    }
}

fn parse_change(text: &str) -> Result<AffectChange, String> {
    let words: Vec<&str> = text.split_whitespace().collect();
    let num = |s: &str| s.parse::<f64>().map_err(|_| format!("bad change {text:?}"));
    match words.as_slice() {
        ["shift", m] => Ok(AffectChange::shift(num(m)?)),
        ["set", v] => Ok(AffectChange::set(num(v)?)),
        _ => Err(format!("bad change {text:?}; expected shift N or set N")),
    }
}

fn rule_key(condition: &Cnf, target: &AffectTarget, change: &AffectChange) -> String {
    let mode = match change.mode {
        ChangeMode::Shift => "shift",
        ChangeMode::Set => "set",
    };
    let clauses: Vec<String> =
        condition.clauses.iter().map(|c| c.iter().map(literal_text).collect::<Vec<_>>().join(" | ")).collect();
    // Magnitudes are compared to 1e-9 by rounding.
    format!("{target} {mode} {:.9} when {}", change.magnitude, clauses.join(" & "))
}

/// Correct out of total.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub correct: usize,
    pub total: usize,
}

impl Tally {
    /// Fraction correct; an empty tally is perfect.
    pub fn ratio(&self) -> f64 {
        if self.total == 0 {
            1.0
        } else {
            self.correct as f64 / self.total as f64
        }
    }

    fn add(&mut self, other: Tally) {
        self.correct += other.correct;
        self.total += other.total;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionMiss {
    pub affordance: String,
    pub expected: GoldCondition,
    /// Conditions produced in the same role that no gold condition claimed.
    pub produced: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CaseReport {
    pub name: String,
    pub missing_states: Vec<String>,
    pub extra_states: Vec<String>,
    pub missing_affordances: Vec<String>,
    pub condition_misses: Vec<ConditionMiss>,
    pub missing_rules: Vec<String>,
    pub failed_sentences: Vec<String>,
    /// Matched states out of the expected ones.
    pub states: Tally,
    /// Produced states that were expected.
    pub found_states: Tally,
    pub conditions: Tally,
    pub rules: Tally,
}

impl CaseReport {
    pub fn is_perfect(&self) -> bool {
        self.missing_states.is_empty()
            && self.extra_states.is_empty()
            && self.missing_affordances.is_empty()
            && self.condition_misses.is_empty()
            && self.missing_rules.is_empty()
            && self.failed_sentences.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct EvalReport {
    pub cases: Vec<CaseReport>,
    pub states: Tally,
    pub found_states: Tally,
    pub conditions: Tally,
    pub rules: Tally,
}

impl EvalReport {
    pub fn from_cases(cases: Vec<CaseReport>) -> Self {
        let mut report = EvalReport::default();
        for c in &cases {
            report.states.add(c.states);
            report.found_states.add(c.found_states);
            report.conditions.add(c.conditions);
            report.rules.add(c.rules);
        }
        report.cases = cases;
        report
    }

    pub fn state_recall(&self) -> f64 {
        self.states.ratio()
    }

    pub fn state_precision(&self) -> f64 {
        self.found_states.ratio()
    }

    pub fn condition_accuracy(&self) -> f64 {
        self.conditions.ratio()
    }

    pub fn rule_accuracy(&self) -> f64 {
        self.rules.ratio()
    }

    pub fn extra_states(&self) -> usize {
        self.cases.iter().map(|c| c.extra_states.len()).sum()
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cases {
            let mark = if c.is_perfect() { "ok  " } else { "DIFF" };
            writeln!(f, "{mark} {}", c.name)?;
            for s in &c.failed_sentences {
                writeln!(f, "     failed: {s}")?;
            }
            for s in &c.missing_states {
                writeln!(f, "     missing state {s}")?;
            }
            for s in &c.extra_states {
                writeln!(f, "     extra state {s}")?;
            }
            for a in &c.missing_affordances {
                writeln!(f, "     missing affordance {a}")?;
            }
            for m in &c.condition_misses {
                writeln!(f, "     {}: expected {}, produced [{}]", m.affordance, m.expected, m.produced.join(", "))?;
            }
            for r in &c.missing_rules {
                writeln!(f, "     missing rule {r}")?;
            }
        }
        writeln!(
            f,
            "states: recall {:.4} ({}/{}), precision {:.4}, {} extra",
            self.state_recall(),
            self.states.correct,
            self.states.total,
            self.state_precision(),
            self.extra_states()
        )?;
        writeln!(
            f,
            "conditions: accuracy {:.4} ({}/{})",
            self.condition_accuracy(),
            self.conditions.correct,
            self.conditions.total
        )?;
        write!(f, "rules: {}/{}", self.rules.correct, self.rules.total)
    }
}

/// `subject/predicate[/complement]` keys of every state in `bundle`, one
/// per fluent value.
pub fn produced_states(bundle: &DomainBundle) -> BTreeSet<(String, StateKind)> {
    let mut out = BTreeSet::new();
    for decl in bundle.states.values() {
        match &decl.body {
            StateBody::Binary { triple } => {
                let mut key = format!("{}/{}", triple.subject, triple.predicate);
                if let Some(c) = &triple.complement {
                    key = format!("{key}/{c}");
                }
                out.insert((key, StateKind::Binary));
            }
            StateBody::Fluent { variable, domain } => {
                for v in domain {
                    out.insert((format!("{}/{variable}/{v}", decl.owner), StateKind::Fluent));
                }
            }
        }
    }
    out
}

fn produced_conditions(bundle: &DomainBundle, owner: &Slug, name: &Slug) -> Option<Vec<GoldCondition>> {
    let a = bundle.affordance(owner, name)?;
    let mut out: Vec<GoldCondition> = a
        .preconditions
        .literals()
        .map(|l| GoldCondition { role: Role::Pre, literal: literal_text(l), bucket: Bucket::Certain })
        .collect();
    out.extend(a.postconditions.iter().map(|p| GoldCondition {
        role: Role::Post,
        literal: literal_text(&p.literal),
        bucket: Bucket::of(p.probability),
    }));
    Some(out)
}

/// Compares a compiled bundle with one case's expectations.
pub fn compare(case: &GoldCase, bundle: &DomainBundle) -> CaseReport {
    let mut report = CaseReport { name: case.name.clone(), ..CaseReport::default() };

    let expected: BTreeSet<(String, StateKind)> = case.states.iter().cloned().collect();
    let produced = produced_states(bundle);
    let show = |(k, kind): &(String, StateKind)| format!("{k} ({kind})");
    report.missing_states = expected.difference(&produced).map(show).collect();
    report.extra_states = produced.difference(&expected).map(show).collect();
    let matched = expected.intersection(&produced).count();
    report.states = Tally { correct: matched, total: expected.len() };
    report.found_states = Tally { correct: matched, total: produced.len() };

    for gold in &case.affordances {
        let label = format!("{}/{}", gold.owner, gold.name);
        report.conditions.total += gold.conditions.len();
        let Some(mut produced) = produced_conditions(bundle, &gold.owner, &gold.name) else {
            report.missing_affordances.push(label.clone());
            report.condition_misses.extend(gold.conditions.iter().map(|c| ConditionMiss {
                affordance: label.clone(),
                expected: c.clone(),
                produced: Vec::new(),
            }));
            continue;
        };
        let mut misses = Vec::new();
        for c in &gold.conditions {
            match produced.iter().position(|p| p == c) {
                Some(i) => {
                    produced.remove(i);
                    report.conditions.correct += 1;
                }
                None => misses.push(c.clone()),
            }
        }
        for expected in misses {
            let leftovers = produced.iter().filter(|p| p.role == expected.role).map(ToString::to_string).collect();
            report.condition_misses.push(ConditionMiss { affordance: label.clone(), expected, produced: leftovers });
        }
    }

    let produced_rules: Vec<String> =
        bundle.affect_rules.iter().map(|r| rule_key(&r.condition, &r.target, &r.change)).collect();
    report.rules.total = case.rules.len();
    for GoldRule(key) in &case.rules {
        if produced_rules.contains(key) {
            report.rules.correct += 1;
        } else {
            report.missing_rules.push(key.clone());
        }
    }
    report
}

/// Compiles every case into a fresh bundle and scores it.
pub fn score(cases: &[GoldCase], compiler: &Compiler) -> EvalReport {
    let reports = cases
        .iter()
        .map(|case| {
            let mut bundle = compiler.new_bundle();
            let text = case.sentences.join("\n");
            let run = compiler.submit(&mut bundle, &text, None, case.conllu.as_deref());
            let mut report = compare(case, &bundle);
            report.failed_sentences.extend(run.errors);
            report.failed_sentences.extend(run.sentences.iter().filter_map(|s| match &s.outcome {
                crate::pipeline::SentenceOutcome::Failed { error } => Some(format!("{:?}: {error}", s.text)),
                _ => None,
            }));
            report
        })
        .collect();
    EvalReport::from_cases(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{Affordance, PostCondition, StateTriple};

    fn slug(s: &str) -> Slug {
        Slug::new(s).unwrap()
    }

    fn case(toml: &str) -> GoldCase {
        parse_gold(toml, Path::new(".")).unwrap().remove(0)
    }

    const LIBRARY: &str = r#"
        [[case]]
        name = "library"
        sentences = ["Max goes to the library only if he has an exam after which he feels more knowledgeable."]
        states = [{ triple = "max/has/exam" }, { triple = "max/feel/knowledgeable" }]
        affordances = [{ name = "max/go_to_library", pre = ["max_has_exam", "!max_feel_knowledgeable"], post = ["max_feel_knowledgeable", "!max_has_exam@0.5"] }]
    "#;

    fn library_bundle(probability: f64) -> DomainBundle {
        let mut b = DomainBundle::default();
        let exam = b.intern_state(&StateTriple::parse_parts("max", "has", "exam").unwrap(), StateKind::Binary).unwrap();
        let know = b
            .intern_state(&StateTriple::parse_parts("max", "feel", "knowledgeable").unwrap(), StateKind::Binary)
            .unwrap();
        let mut a = Affordance::skeleton(slug("max"), slug("go_to_library"));
        a.preconditions = Cnf::all_of([exam.literal(true), know.literal(false)]);
        a.postconditions.push(PostCondition::certain(know.literal(true)));
        a.postconditions.push(PostCondition { literal: exam.literal(false), probability });
        b.add_affordance(a).unwrap();
        b
    }

    #[test]
    fn perfect_output_scores_one() {
        let c = case(LIBRARY);
        let report = EvalReport::from_cases(vec![compare(&c, &library_bundle(0.5))]);
        assert!(report.cases[0].is_perfect(), "{report}");
        assert_eq!(report.condition_accuracy(), 1.0);
        assert_eq!(report.state_precision(), 1.0);
        assert_eq!(report.state_recall(), 1.0);
    }

    #[test]
    fn wrong_bucket_costs_one_of_four() {
        let c = case(LIBRARY);
        let report = EvalReport::from_cases(vec![compare(&c, &library_bundle(1.0))]);
        assert_eq!(report.conditions, Tally { correct: 3, total: 4 });
        assert_eq!(report.condition_accuracy(), 0.75);
        assert_eq!(report.cases[0].condition_misses[0].produced, ["post !max_has_exam"]);
    }

    #[test]
    fn sixty_nine_of_eighty() {
        // 69 of the 80 gold conditions were identified
        let t = Tally { correct: 69, total: 80 };
        approx::assert_abs_diff_eq!(t.ratio(), 0.8625, epsilon = 1e-9);
    }

    #[test]
    fn extra_states_do_not_lower_recall() {
        let c = case(LIBRARY);
        let mut b = library_bundle(0.5);
        b.intern_state(&StateTriple::parse_parts("max", "read", "book").unwrap(), StateKind::Binary).unwrap();
        let report = EvalReport::from_cases(vec![compare(&c, &b)]);
        assert_eq!(report.state_recall(), 1.0);
        approx::assert_abs_diff_eq!(report.state_precision(), 2.0 / 3.0, epsilon = 1e-12);
        assert_eq!(report.extra_states(), 1);
    }

    #[test]
    fn missing_affordance_misses_all_its_conditions() {
        let c = case(LIBRARY);
        let mut b = library_bundle(0.5);
        b.affordances.clear();
        let report = EvalReport::from_cases(vec![compare(&c, &b)]);
        assert_eq!(report.conditions, Tally { correct: 0, total: 4 });
        assert_eq!(report.cases[0].missing_affordances, ["max/go_to_library"]);
    }

    #[test]
    fn empty_corpus_and_located_errors() {
        assert!(parse_gold("", Path::new(".")).unwrap().is_empty());
        let err = parse_gold(
            "[[case]]\nname = \"a\"\nsentences = [\"Max sleeps.\"]\nstates = [{ triple = \"max\" }]\n",
            Path::new("."),
        )
        .unwrap_err();
        assert_eq!(err.to_string(), "case 1 (a): state \"max\" is not subject/predicate[/complement]");
        let err = parse_gold("[[case]]\nname = \"a\"\nsentence = []\n", Path::new(".")).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let dup = "[[case]]\nname = \"a\"\nsentences = [\"x\"]\n[[case]]\nname = \"a\"\nsentences = [\"y\"]\n";
        assert!(matches!(parse_gold(dup, Path::new(".")), Err(GoldError::Case { index: 2, .. })));
        let bad_rule = "[[case]]\nname = \"r\"\nsentences = [\"x\"]\nrules = [{ target = \"emotion\", change = \"shift 0.2\", when = [\"a\"] }]\n";
        assert!(parse_gold(bad_rule, Path::new(".")).unwrap_err().to_string().contains("bad target"));
    }

    #[test]
    fn bundled_corpus_is_perfect() {
        let cases =
            parse_gold(BUNDLED_GOLD, Path::new(env!("CARGO_MANIFEST_DIR")).join("resources").as_path()).unwrap();
        assert!(cases.len() >= 12);
        let compiler = Compiler::with_defaults().unwrap();
        let report = score(&cases, &compiler);
        assert_eq!(report.state_recall(), 1.0, "{report}");
        assert_eq!(report.condition_accuracy(), 1.0, "{report}");
        assert_eq!(report.rule_accuracy(), 1.0, "{report}");
        // deterministic
        assert_eq!(score(&cases, &compiler), report);
    }
}
