//! Author feedback: rules the author probably forgot, and affordances
//! that need more conditions.

use crate::domain::{AffectChange, AffectRule, AffectTarget, Cnf, DomainBundle, Literal, StateBody};
use crate::semantics::Matcher;

use super::{literal_key, render, sort_suggestions, ConditionRole, Payload, Prompts, Suggestion, SuggestionKind};

/// Each literal a rule could be conditioned on, with the words naming it.
pub(crate) fn rule_conditions(bundle: &DomainBundle) -> Vec<(Literal, Vec<String>)> {
    let mut out = Vec::new();
    for decl in bundle.states.values() {
        match &decl.body {
            StateBody::Binary { .. } => out.push((Literal::binary(decl.id.clone(), true), decl.phrase_words())),
            StateBody::Fluent { variable, domain } => {
                for v in domain {
                    let words = variable.words().chain(v.words()).map(str::to_string).collect();
                    out.push((Literal::fluent(decl.id.clone(), v.clone(), true), words));
                }
            }
        }
    }
    out
}

pub(crate) fn target_key(t: &AffectTarget) -> String {
    t.to_string().replace(' ', ":")
}

pub(crate) fn literal_phrase(bundle: &DomainBundle, l: &Literal) -> String {
    let owner = bundle.state(&l.state).map(|d| d.owner.spaced()).unwrap_or_default();
    let words = rule_conditions(bundle)
        .into_iter()
        .find(|(c, _)| c == l)
        .map(|(_, w)| w.join(" "))
        .unwrap_or_else(|| l.state.as_str().replace('_', " "));
    format!("{owner} {words}").trim().to_string()
}

/// Missing-rule suggestions: every (state, affect target) pair without a
/// rule whose phrase similarity reaches `threshold`. Accepting one adds a
/// rule shifting the target by `step`.
pub fn propose_missing_rules(
    bundle: &DomainBundle,
    matcher: &Matcher,
    threshold: f64,
    step: f64,
    prompts: &Prompts,
) -> Vec<Suggestion> {
    let targets = bundle.affect_targets();
    let mut out = Vec::new();
    for (literal, words) in rule_conditions(bundle) {
        for target in &targets {
            if bundle.has_rule_for(&literal.state, target) {
                continue;
            }
            let name: Vec<&str> = match target {
                AffectTarget::Mood => vec!["mood"],
                AffectTarget::Emotion(n) | AffectTarget::Motivation(n) => n.words().collect(),
            };
            let Some(score) = matcher.phrase_similarity(&words, &name) else { continue };
            if score < threshold {
                continue;
            }
            let prompt = render(
                &prompts.missing_affect_rule,
                &[("state", &literal_phrase(bundle, &literal)), ("target", &target.to_string())],
            );
            let id = format!("missing-affect-rule:{}:{}", literal_key(&literal), target_key(target));
            let rule = AffectRule {
                condition: Cnf::all_of([literal.clone()]),
                target: target.clone(),
                change: AffectChange::shift(step),
            };
            out.push(Suggestion::new(id, SuggestionKind::MissingAffectRule, prompt, Payload::AddRule { rule }, score));
        }
    }
    sort_suggestions(&mut out);
    out
}

/// Clarification questions for affordances with fewer than `min_pre`
/// preconditions or `min_post` postconditions.
pub fn flag_incomplete_affordances(
    bundle: &DomainBundle,
    min_pre: usize,
    min_post: usize,
    prompts: &Prompts,
) -> Vec<Suggestion> {
    let mut out = Vec::new();
    for a in &bundle.affordances {
        let checks = [
            (ConditionRole::Pre, a.preconditions.len(), min_pre, &prompts.missing_preconditions),
            (ConditionRole::Post, a.postconditions.len(), min_post, &prompts.missing_postconditions),
        ];
        for (role, have, want, template) in checks {
            if have >= want {
                continue;
            }
            let role_name = match role {
                ConditionRole::Pre => "pre",
                ConditionRole::Post => "post",
            };
            let prompt =
                render(template, &[("object", &super::display_name(&a.owner)), ("affordance", &a.name.spaced())]);
            let payload = Payload::Clarify { owner: a.owner.clone(), affordance: a.name.clone(), role };
            let id = format!("incomplete-affordance:{}:{}:{role_name}", a.owner, a.name);
            // Score by how much is missing so emptier affordances come first.
            let score = (want - have) as f64;
            out.push(Suggestion::new(id, SuggestionKind::IncompleteAffordance, prompt, payload, score));
        }
    }
    sort_suggestions(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{Affordance, PostCondition, Slug, StateKind, StateTriple};
    use crate::suggest::{Decision, SuggestionLog};

    fn slug(s: &str) -> Slug {
        Slug::new(s).unwrap()
    }

    fn eating_bundle() -> DomainBundle {
        let mut b = DomainBundle::default();
        b.intern_state(&StateTriple::new(slug("max"), slug("eating"), None), StateKind::Binary).unwrap();
        b
    }

    #[test]
    fn eating_and_hunger_are_related() {
        let b = eating_bundle();
        let got = propose_missing_rules(&b, &Matcher::toy(), 0.6, 0.2, &Prompts::default());
        let hunger = got.iter().find(|s| s.id == "missing-affect-rule:max_eating:emotion:hunger").expect("suggested");
        // cosine of the toy vectors for "eating" and "hunger", computed with numpy
        approx::assert_abs_diff_eq!(hunger.score, 0.8887021958589529, epsilon = 1e-9);
        assert_eq!(hunger.prompt, "Should 'max eating' change emotion hunger?");
        assert!(got.windows(2).all(|w| w[0].score >= w[1].score));
    }

    #[test]
    fn unreachable_threshold_suggests_nothing() {
        assert!(propose_missing_rules(&eating_bundle(), &Matcher::toy(), 1.01, 0.2, &Prompts::default()).is_empty());
    }

    #[test]
    fn covered_pairs_are_skipped_and_accepting_converges() {
        let mut b = eating_bundle();
        let prompts = Prompts::default();
        let mut log = SuggestionLog::default();
        log.refresh(propose_missing_rules(&b, &Matcher::toy(), 0.6, 0.2, &prompts));
        let before = log.pending().len();
        log.decide("missing-affect-rule:max_eating:emotion:hunger", Decision::Accept, &mut b).unwrap();
        let again = propose_missing_rules(&b, &Matcher::toy(), 0.6, 0.2, &prompts);
        assert!(again.iter().all(|s| s.id != "missing-affect-rule:max_eating:emotion:hunger"));
        assert_eq!(again.len(), before - 1);
        assert_eq!(b.affect_rules[0].change, AffectChange::shift(0.2));
    }

    #[test]
    fn incomplete_affordances() {
        let prompts = Prompts::default();
        assert!(flag_incomplete_affordances(&DomainBundle::default(), 1, 1, &prompts).is_empty());
        let mut b = eating_bundle();
        let eating = b.states.keys().next().unwrap().clone();
        let mut full = Affordance::skeleton(slug("max"), slug("eat"));
        full.preconditions = Cnf::all_of([Literal::binary(eating.clone(), false)]);
        full.postconditions.push(PostCondition::certain(Literal::binary(eating, true)));
        b.add_affordance(full).unwrap();
        assert!(flag_incomplete_affordances(&b, 1, 1, &prompts).is_empty());
        b.add_affordance(Affordance::skeleton(slug("max"), slug("sleep"))).unwrap();
        let got = flag_incomplete_affordances(&b, 1, 1, &prompts);
        let ids: Vec<_> = got.iter().map(|s| s.id.as_str()).collect();
        assert_eq!(ids, ["incomplete-affordance:max:sleep:post", "incomplete-affordance:max:sleep:pre"]);
        assert_eq!(got[1].prompt, "'Max' can 'sleep' without any precondition. What must hold first?");
    }
}
