//! PDDL 1.2 output with PPDDL probabilistic effects, and a syntactic
//! checker for the emitted subset.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::domain::{Affordance, DomainBundle, Literal, PostCondition, StateBody};

use super::reader::{read_all, Sexp};
use super::sexpr::{num, rule_form};
use super::{ensure_valid, CodegenError};

pub const DEFAULT_DOMAIN_NAME: &str = "agent";
const VALUE_TYPE: &str = "value";

fn atom(l: &Literal) -> String {
    match &l.value {
        Some(v) => format!("({} {v})", l.state),
        None => format!("({})", l.state),
    }
}

fn condition(l: &Literal) -> String {
    if l.polarity {
        atom(l)
    } else {
        format!("(not {})", atom(l))
    }
}

fn conjunction(parts: Vec<String>) -> String {
    match parts.len() {
        1 => parts.into_iter().next().expect("one part"),
        _ => format!("(and {})", parts.join(" ")),
    }
}

/// Effect atoms of one postcondition. Making a fluent take a value also
/// clears its other values.
fn effect_atoms(bundle: &DomainBundle, l: &Literal) -> Vec<String> {
    let mut parts = vec![condition(l)];
    if let (Some(v), true) = (&l.value, l.polarity) {
        if let Some(decl) = bundle.state(&l.state) {
            for other in decl.domain().iter().filter(|o| *o != v) {
                parts.push(format!("(not ({} {other}))", l.state));
            }
        }
    }
    parts
}

fn effect(bundle: &DomainBundle, p: &PostCondition) -> String {
    let atoms = effect_atoms(bundle, &p.literal);
    if p.is_deterministic() {
        atoms.join(" ")
    } else {
        format!("(probabilistic {} {})", num(p.probability), conjunction(atoms))
    }
}

/// Action name: the affordance name, prefixed with the owner when two
/// owners share it.
fn action_names(bundle: &DomainBundle) -> Vec<String> {
    let mut count: BTreeMap<&str, usize> = BTreeMap::new();
    for a in &bundle.affordances {
        *count.entry(a.name.as_str()).or_default() += 1;
    }
    bundle
        .affordances
        .iter()
        .map(|a| if count[a.name.as_str()] > 1 { format!("{}_{}", a.owner, a.name) } else { a.name.to_string() })
        .collect()
}

fn action(bundle: &DomainBundle, name: &str, a: &Affordance) -> String {
    let mut out = format!("(:action {name}");
    let pres: Vec<String> = a
        .preconditions
        .clauses
        .iter()
        .map(|c| match c.as_slice() {
            [one] => condition(one),
            many => format!("(or {})", many.iter().map(condition).collect::<Vec<_>>().join(" ")),
        })
        .collect();
    if !pres.is_empty() {
        let _ = write!(out, " :precondition {}", conjunction(pres));
    }
    let effects: Vec<String> = a.postconditions.iter().map(|p| effect(bundle, p)).collect();
    if !effects.is_empty() {
        let joined = effects.join(" ");
        let single = a.postconditions.len() == 1 && effect_atoms(bundle, &a.postconditions[0].literal).len() == 1;
        let body = if single || !a.postconditions[0].is_deterministic() && a.postconditions.len() == 1 {
            joined
        } else {
            format!("(and {joined})")
        };
        let _ = write!(out, " :effect {body}");
    }
    out.push(')');
    out
}

fn requirements(bundle: &DomainBundle) -> Vec<&'static str> {
    let literals = || bundle.affordances.iter().flat_map(|a| a.preconditions.literals());
    let mut req = vec![":strips"];
    if bundle.states.values().any(|s| s.is_fluent()) {
        req.push(":typing");
    }
    if literals().any(|l| !l.polarity) {
        req.push(":negative-preconditions");
    }
    if bundle.affordances.iter().any(|a| a.preconditions.clauses.iter().any(|c| c.len() > 1)) {
        req.push(":disjunctive-preconditions");
    }
    if bundle.affordances.iter().any(Affordance::has_side_effects) {
        req.push(":probabilistic-effects");
    }
    req
}

/// Renders the bundle as a PDDL domain named `name`.
pub fn emit_pddl_named(bundle: &DomainBundle, name: &str) -> Result<String, CodegenError> {
    ensure_valid(bundle)?;
    let mut out = format!("(define (domain {name})\n  (:requirements {})\n", requirements(bundle).join(" "));
    let values: BTreeSet<&str> = bundle.states.values().flat_map(|s| s.domain().iter().map(|v| v.as_str())).collect();
    if !values.is_empty() {
        let _ = writeln!(out, "  (:types {VALUE_TYPE})");
        let _ = writeln!(out, "  (:constants {} - {VALUE_TYPE})", values.into_iter().collect::<Vec<_>>().join(" "));
    }
    if !bundle.states.is_empty() {
        out.push_str("  (:predicates");
        for (id, decl) in &bundle.states {
            match decl.body {
                StateBody::Binary { .. } => {
                    let _ = write!(out, "\n    ({id})");
                }
                StateBody::Fluent { .. } => {
                    let _ = write!(out, "\n    ({id} ?v - {VALUE_TYPE})");
                }
            }
        }
        out.push_str(")\n");
    }
    for (n, a) in action_names(bundle).iter().zip(&bundle.affordances) {
        let _ = writeln!(out, "  {}", action(bundle, n, a));
    }
    if !bundle.affect_rules.is_empty() {
        out.push_str("  ;; affect rules (no PDDL equivalent)\n");
        for r in &bundle.affect_rules {
            let _ = writeln!(out, "  ;; {}", rule_form(r));
        }
    }
    out.push_str(")\n");
    Ok(out)
}

pub fn emit_pddl(bundle: &DomainBundle) -> Result<String, CodegenError> {
    emit_pddl_named(bundle, DEFAULT_DOMAIN_NAME)
}

/// Problem file with every binary state false and no goal yet.
pub fn emit_pddl_problem_stub(bundle: &DomainBundle, domain: &str) -> Result<String, CodegenError> {
    ensure_valid(bundle)?;
    let mut out = format!("(define (problem {domain}_problem)\n  (:domain {domain})\n  (:init");
    for decl in bundle.states.values() {
        if let Some(first) = decl.domain().first() {
            let _ = write!(out, "\n    ({} {first})", decl.id);
        }
    }
    out.push_str(")\n  (:goal (and)))\n");
    Ok(out)
}

// ---- checker ----

#[derive(Default)]
struct Signatures {
    predicates: BTreeMap<String, Vec<Option<String>>>,
    constants: BTreeMap<String, String>,
    types: BTreeSet<String>,
}

/// Parses a typed list such as `?a ?b - t ?c` into (name, type) pairs.
fn typed_list(items: &[Sexp], problems: &mut Vec<String>, what: &str) -> Vec<(String, Option<String>)> {
    let mut out = Vec::new();
    let mut pending: Vec<String> = Vec::new();
    let mut iter = items.iter();
    while let Some(item) = iter.next() {
        let Some(a) = item.atom() else {
            problems.push(format!("{}: unexpected list in {what}", item.pos()));
            continue;
        };
        if a == "-" {
            let ty = iter.next().and_then(Sexp::atom).map(str::to_string);
            if ty.is_none() {
                problems.push(format!("{}: '-' without a type in {what}", item.pos()));
            }
            out.extend(pending.drain(..).map(|n| (n, ty.clone())));
        } else {
            pending.push(a.to_string());
        }
    }
    out.extend(pending.into_iter().map(|n| (n, None)));
    out
}

fn check_formula(f: &Sexp, sig: &Signatures, params: &BTreeMap<String, Option<String>>, problems: &mut Vec<String>) {
    let Some(list) = f.list() else {
        problems.push(format!("{}: expected a formula", f.pos()));
        return;
    };
    match f.head() {
        Some("and") | Some("or") => list[1..].iter().for_each(|g| check_formula(g, sig, params, problems)),
        Some("not") if list.len() == 2 => check_formula(&list[1], sig, params, problems),
        Some("probabilistic") => {
            if list.len() < 3 || list.len() % 2 == 0 {
                problems.push(format!("{}: probabilistic needs probability/effect pairs", f.pos()));
                return;
            }
            for pair in list[1..].chunks(2) {
                match pair[0].atom().and_then(|p| p.parse::<f64>().ok()) {
                    Some(p) if p > 0.0 && p <= 1.0 => {}
                    _ => problems.push(format!("{}: bad probability", pair[0].pos())),
                }
                check_formula(&pair[1], sig, params, problems);
            }
        }
        Some(pred) => {
            let Some(arity) = sig.predicates.get(pred) else {
                problems.push(format!("{}: predicate {pred} is not declared", f.pos()));
                return;
            };
            if arity.len() != list.len() - 1 {
                problems.push(format!("{}: {pred} takes {} arguments", f.pos(), arity.len()));
            }
            for (arg, ty) in list[1..].iter().zip(arity) {
                let Some(a) = arg.atom() else { continue };
                let actual = if a.starts_with('?') {
                    match params.get(a) {
                        Some(t) => t.clone(),
                        None => {
                            problems.push(format!("{}: unbound variable {a}", arg.pos()));
                            continue;
                        }
                    }
                } else {
                    match sig.constants.get(a) {
                        Some(t) => Some(t.clone()),
                        None => {
                            problems.push(format!("{}: constant {a} is not declared", arg.pos()));
                            continue;
                        }
                    }
                };
                if ty.is_some() && actual != *ty {
                    problems.push(format!("{}: {a} has the wrong type for {pred}", arg.pos()));
                }
            }
        }
        None => problems.push(format!("{}: formula without a head", f.pos())),
    }
}

/// Structural problems in a PDDL domain: unbalanced parentheses,
/// undeclared predicates or constants, untyped action parameters.
pub fn check_pddl(text: &str) -> Vec<String> {
    let forms = match read_all(text) {
        Ok(f) => f,
        Err(e) => return vec![e.to_string()],
    };
    let mut problems = Vec::new();
    let [domain] = forms.as_slice() else {
        return vec!["expected exactly one (define ...) form".to_string()];
    };
    let Some(list) = domain.list().filter(|_| domain.head() == Some("define")) else {
        return vec![format!("{}: expected (define ...)", domain.pos())];
    };
    if list.get(1).and_then(Sexp::list).and_then(|l| l.first()).and_then(Sexp::atom) != Some("domain") {
        problems.push(format!("{}: missing (domain name)", domain.pos()));
    }
    let mut sig = Signatures::default();
    let mut actions = Vec::new();
    for section in list.iter().skip(2) {
        let items = section.list().unwrap_or_default();
        match section.head() {
            Some(":requirements") => {}
            Some(":types") => {
                sig.types.extend(typed_list(&items[1..], &mut problems, ":types").into_iter().map(|(n, _)| n))
            }
            Some(":constants") => {
                for (n, t) in typed_list(&items[1..], &mut problems, ":constants") {
                    sig.constants.insert(n, t.unwrap_or_else(|| "object".to_string()));
                }
            }
            Some(":predicates") => {
                for p in &items[1..] {
                    match p.list() {
                        Some([name, args @ ..]) if name.atom().is_some() => {
                            let args = typed_list(args, &mut problems, ":predicates");
                            let name = name.atom().expect("checked").to_string();
                            sig.predicates.insert(name, args.into_iter().map(|(_, t)| t).collect());
                        }
                        _ => problems.push(format!("{}: malformed predicate", p.pos())),
                    }
                }
            }
            Some(":action") => actions.push(section),
            _ => problems.push(format!("{}: unknown domain section", section.pos())),
        }
    }
    for (_, t) in sig.constants.iter().chain(sig.predicates.values().flatten().flatten().map(|t| (t, t))) {
        if t != "object" && !sig.types.contains(t) {
            problems.push(format!("type {t} is not declared"));
        }
    }
    for a in actions {
        let items = a.list().expect("list");
        let name = items.get(1).and_then(Sexp::atom).unwrap_or("?");
        let mut params = BTreeMap::new();
        let mut rest = items.iter().skip(2);
        while let Some(k) = rest.next() {
            let Some(v) = rest.next() else {
                problems.push(format!("{}: {name}: keyword without a value", k.pos()));
                break;
            };
            match k.atom() {
                Some(":parameters") => {
                    for (p, t) in typed_list(v.list().unwrap_or_default(), &mut problems, ":parameters") {
                        if t.is_none() {
                            problems.push(format!("{}: {name}: parameter {p} has no type", v.pos()));
                        }
                        params.insert(p, t);
                    }
                }
                Some(":precondition") | Some(":effect") => check_formula(v, &sig, &params, &mut problems),
                _ => problems.push(format!("{}: {name}: unknown action keyword", k.pos())),
            }
        }
    }
    problems.dedup();
    problems
}
