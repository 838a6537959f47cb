use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::cnf::{Cnf, Literal};
use super::model::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// One invariant violation found by [`validate_bundle`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    /// Machine-readable code, e.g. `dangling-state`.
    pub code: String,
    /// Offending identifier.
    pub subject: String,
    pub message: String,
    pub severity: Severity,
}

impl Diagnostic {
    pub fn error(code: &str, subject: impl fmt::Display, message: impl Into<String>) -> Self {
        Diagnostic {
            code: code.to_string(),
            subject: subject.to_string(),
            message: message.into(),
            severity: Severity::Error,
        }
    }

    pub fn warning(code: &str, subject: impl fmt::Display, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Warning, ..Diagnostic::error(code, subject, message) }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.code, self.subject, self.message)
    }
}

/// Checks every structural invariant of the bundle.
pub fn validate_bundle(bundle: &DomainBundle) -> Vec<Diagnostic> {
    let mut out = Vec::new();

    for (key, obj) in &bundle.objects {
        if key != &obj.name {
            out.push(Diagnostic::error("object-key-mismatch", key, format!("declared as {}", obj.name)));
        }
    }

    for (id, decl) in &bundle.states {
        if id != &decl.id {
            out.push(Diagnostic::error("state-key-mismatch", id, format!("declared as {}", decl.id)));
        }
        if !bundle.objects.contains_key(&decl.owner) {
            out.push(Diagnostic::error("unknown-owner", id, format!("owner {} is not declared", decl.owner)));
        }
        match &decl.body {
            StateBody::Binary { triple } => {
                if triple.subject != decl.owner {
                    out.push(Diagnostic::error("owner-mismatch", id, "triple subject differs from owner"));
                }
            }
            StateBody::Fluent { domain, .. } => {
                let unique: HashSet<_> = domain.iter().collect();
                if unique.len() != domain.len() {
                    out.push(Diagnostic::error("duplicate-fluent-value", id, "fluent domain repeats a value"));
                }
                match domain.len() {
                    0 => out.push(Diagnostic::error("empty-fluent-domain", id, "fluent has no values")),
                    1 => out.push(Diagnostic::warning("singleton-fluent", id, "fluent has a single value so far")),
                    _ => {}
                }
            }
        }
    }

    let mut seen = HashSet::new();
    for aff in &bundle.affordances {
        let label = format!("{}.{}", aff.owner, aff.name);
        if !seen.insert((&aff.owner, &aff.name)) {
            out.push(Diagnostic::error("duplicate-affordance", &label, "affordance declared twice"));
        }
        if !bundle.objects.contains_key(&aff.owner) {
            out.push(Diagnostic::error("unknown-owner", &label, format!("owner {} is not declared", aff.owner)));
        }
        check_cnf(bundle, &aff.preconditions, &label, &mut out);
        for post in &aff.postconditions {
            check_literal(bundle, &post.literal, &label, &mut out);
            if !(post.probability > 0.0 && post.probability <= 1.0) {
                out.push(Diagnostic::error(
                    "bad-probability",
                    &label,
                    format!("probability {} of {} is outside (0, 1]", post.probability, post.literal.state),
                ));
            }
        }
    }

    for (i, rule) in bundle.affect_rules.iter().enumerate() {
        let label = format!("rule#{i}");
        check_cnf(bundle, &rule.condition, &label, &mut out);
        match &rule.target {
            AffectTarget::Mood => {}
            AffectTarget::Emotion(name) => {
                if bundle.emotion(name).is_none() {
                    out.push(Diagnostic::error("unknown-emotion", name, "not in the emotion catalog"));
                }
            }
            AffectTarget::Motivation(name) => {
                if !bundle.motivation_catalog.contains(name) {
                    out.push(Diagnostic::error("unknown-motivation", name, "not in the motivation catalog"));
                }
            }
        }
        let m = rule.change.magnitude;
        match rule.change.mode {
            ChangeMode::Set => {
                if !matches!(rule.target, AffectTarget::Motivation(_)) {
                    out.push(Diagnostic::error("set-on-non-motivation", &label, "only motivations can be set"));
                }
                if !(0.0..=1.0).contains(&m) {
                    out.push(Diagnostic::error("bad-magnitude", &label, format!("set value {m} outside [0, 1]")));
                }
            }
            ChangeMode::Shift => {
                if !m.is_finite() || m.abs() > 1.0 {
                    out.push(Diagnostic::error("bad-magnitude", &label, format!("shift {m} outside [-1, 1]")));
                }
            }
        }
    }

    let mut names = HashSet::new();
    for emo in &bundle.emotion_catalog {
        if !names.insert(&emo.name) {
            out.push(Diagnostic::error("duplicate-emotion", &emo.name, "emotion declared twice"));
        }
        if emo.pad.iter().any(|c| !(-1.0..=1.0).contains(c)) {
            out.push(Diagnostic::error("bad-pad", &emo.name, "PAD coordinate outside [-1, 1]"));
        }
    }
    let mut factors = HashSet::new();
    for f in &bundle.motivation_catalog.factors {
        if !factors.insert(f) {
            out.push(Diagnostic::error("duplicate-motivation", f, "motivation factor declared twice"));
        }
    }
    out
}

fn check_cnf(bundle: &DomainBundle, cnf: &Cnf, label: &str, out: &mut Vec<Diagnostic>) {
    for clause in &cnf.clauses {
        if clause.is_empty() {
            out.push(Diagnostic::error("empty-clause", label, "CNF contains an empty clause"));
        }
        for lit in clause {
            check_literal(bundle, lit, label, out);
        }
    }
}

fn check_literal(bundle: &DomainBundle, lit: &Literal, label: &str, out: &mut Vec<Diagnostic>) {
    let Some(decl) = bundle.states.get(&lit.state) else {
        out.push(Diagnostic::error("dangling-state", &lit.state, format!("referenced by {label} but not declared")));
        return;
    };
    match (&decl.body, &lit.value) {
        (StateBody::Binary { .. }, Some(v)) => out.push(Diagnostic::error(
            "binary-with-value",
            &lit.state,
            format!("binary state compared to value {v} in {label}"),
        )),
        (StateBody::Fluent { .. }, None) => out.push(Diagnostic::error(
            "fluent-without-value",
            &lit.state,
            format!("fluent used without a value in {label}"),
        )),
        (StateBody::Fluent { domain, .. }, Some(v)) if !domain.contains(v) => out.push(Diagnostic::error(
            "unknown-fluent-value",
            &lit.state,
            format!("value {v} is not in the fluent's domain ({label})"),
        )),
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{Slug, StateId};

    fn slug(s: &str) -> Slug {
        Slug::new(s).unwrap()
    }

    #[test]
    fn empty_bundle_is_clean() {
        assert!(validate_bundle(&DomainBundle::default()).is_empty());
    }

    #[test]
    fn dangling_state_reported_once() {
        let mut b = DomainBundle::default();
        let mut aff = Affordance::skeleton(slug("max"), slug("sleep"));
        aff.preconditions = Cnf::all_of([Literal::binary(StateId::new("max_be_tired").unwrap(), true)]);
        b.add_affordance(aff).unwrap();
        let diags = validate_bundle(&b);
        assert_eq!(diags.len(), 1, "{diags:?}");
        assert_eq!(diags[0].code, "dangling-state");
        assert_eq!(diags[0].subject, "max_be_tired");
    }

    #[test]
    fn zero_probability_reported() {
        let mut b = DomainBundle::default();
        let st = b
            .intern_state(&StateTriple::parse_parts("max", "feel", "knowledgeable").unwrap(), StateKind::Binary)
            .unwrap();
        let mut aff = Affordance::skeleton(slug("max"), slug("read"));
        aff.postconditions.push(PostCondition { literal: st.literal(true), probability: 0.0 });
        b.add_affordance(aff).unwrap();
        let diags = validate_bundle(&b);
        assert_eq!(diags.len(), 1, "{diags:?}");
        assert_eq!(diags[0].code, "bad-probability");
    }

    #[test]
    fn set_mode_only_for_motivations() {
        let mut b = DomainBundle::default();
        b.add_rule(AffectRule {
            condition: Cnf::truth(),
            target: AffectTarget::Emotion(slug("anger")),
            change: AffectChange::set(0.5),
        });
        let codes: Vec<_> = validate_bundle(&b).into_iter().map(|d| d.code).collect();
        assert_eq!(codes, ["set-on-non-motivation"]);
    }

    #[test]
    fn unknown_fluent_value_and_emotion() {
        let mut b = DomainBundle::default();
        let go = b.intern_state(&StateTriple::parse_parts("max", "go", "park").unwrap(), StateKind::Fluent).unwrap();
        b.add_rule(AffectRule {
            condition: Cnf::all_of([Literal::fluent(go.id.clone(), slug("moon"), true)]),
            target: AffectTarget::Emotion(slug("ennui")),
            change: AffectChange::shift(0.2),
        });
        let codes: Vec<_> = validate_bundle(&b).into_iter().map(|d| d.code).collect();
        assert!(codes.contains(&"unknown-fluent-value".to_string()));
        assert!(codes.contains(&"unknown-emotion".to_string()));
        assert!(codes.contains(&"singleton-fluent".to_string()));
    }
}
