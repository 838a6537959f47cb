//! The s-expression domain dialect. The grammar is written out in
//! `docs/sexpr-grammar.md`; [`emit_sexpr`] and [`parse_sexpr`] are exact
//! inverses on valid bundles.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::domain::{
    default_emotions, AffectChange, AffectRule, AffectTarget, Affordance, ChangeMode, Cnf, DomainBundle, EmotionSpec,
    Literal, MotivationCatalog, PostCondition, Slug, SmartObject, StateBody, StateDecl, StateId, StateTriple,
};

use super::reader::{read_all, Pos, ReadError, Sexp};
use super::{ensure_valid, CodegenError};

pub const SEXPR_HEADER: &str = ";; nl2domain s-expression domain\n";

/// Shortest decimal form that reads back to the same `f64`.
pub(crate) fn num(x: f64) -> String {
    format!("{x:?}")
}

fn literal(l: &Literal) -> String {
    let atom = match &l.value {
        Some(v) => format!("({} {v})", l.state),
        None => l.state.to_string(),
    };
    if l.polarity {
        atom
    } else {
        format!("(not {atom})")
    }
}

fn clauses(cnf: &Cnf) -> String {
    let parts: Vec<String> =
        cnf.clauses.iter().map(|c| format!("({})", c.iter().map(literal).collect::<Vec<_>>().join(" "))).collect();
    parts.join(" ")
}

fn post(p: &PostCondition) -> String {
    let value = p.literal.value.as_ref().map(|v| format!(" {v}")).unwrap_or_default();
    let flag = if p.literal.polarity { "#t" } else { "#f" };
    let core = format!("{}{value} {flag}", p.literal.state);
    if p.is_deterministic() {
        format!("({core} {})", num(p.probability))
    } else {
        format!("(probabilistic {} ({core}))", num(p.probability))
    }
}

fn target(t: &AffectTarget) -> String {
    match t {
        AffectTarget::Mood => "(mood)".to_string(),
        AffectTarget::Emotion(n) => format!("(emotion {n})"),
        AffectTarget::Motivation(n) => format!("(motivation {n})"),
    }
}

/// One `(rule ...)` form on a single line.
pub fn rule_form(r: &AffectRule) -> String {
    let mode = match r.change.mode {
        ChangeMode::Shift => "shift",
        ChangeMode::Set => "set",
    };
    let when = clauses(&r.condition);
    let sep = if when.is_empty() { "" } else { " " };
    format!("(rule :target {} :change ({mode} {}) :when (and{sep}{when}))", target(&r.target), num(r.change.magnitude))
}

fn object_form(out: &mut String, bundle: &DomainBundle, obj: &SmartObject) {
    let _ = write!(out, "(define-smart-object {}", obj.name);
    if let Some(t) = &obj.type_tag {
        let _ = write!(out, "\n  (type {t})");
    }
    let owned: Vec<&StateDecl> = bundle.states_of(&obj.name).collect();
    let section = |out: &mut String, name: &str, lines: Vec<String>| {
        let _ = write!(out, "\n  ({name}");
        for l in lines {
            let _ = write!(out, "\n    {l}");
        }
        out.push(')');
    };
    let states = owned
        .iter()
        .filter_map(|d| match &d.body {
            StateBody::Binary { triple } => {
                let c = triple.complement.as_ref().map(|c| format!(" {c}")).unwrap_or_default();
                Some(format!("({} ({} {}{c}))", d.id, triple.subject, triple.predicate))
            }
            StateBody::Fluent { .. } => None,
        })
        .collect();
    section(out, "states", states);
    let fluents = owned
        .iter()
        .filter_map(|d| match &d.body {
            StateBody::Fluent { variable, domain } => {
                let values: Vec<&str> = domain.iter().map(Slug::as_str).collect();
                Some(format!("({} (variable {variable}) (values {}))", d.id, values.join(" ")))
            }
            StateBody::Binary { .. } => None,
        })
        .collect();
    section(out, "fluents", fluents);
    let _ = write!(out, "\n  (affordances");
    for a in bundle.affordances.iter().filter(|a| a.owner == obj.name) {
        let posts: Vec<String> = a.postconditions.iter().map(post).collect();
        let _ = write!(
            out,
            "\n    ({}\n      :pre ({})\n      :post ({}))",
            a.name,
            clauses(&a.preconditions),
            posts.join(" ")
        );
    }
    out.push_str("))\n");
}

/// Renders the bundle. Fails when the bundle has invariant errors.
pub fn emit_sexpr(bundle: &DomainBundle) -> Result<String, CodegenError> {
    ensure_valid(bundle)?;
    let mut out = String::from(SEXPR_HEADER);
    if bundle.emotion_catalog != default_emotions() {
        out.push_str("\n(emotion-catalog");
        for e in &bundle.emotion_catalog {
            let _ = write!(out, "\n  ({} {} {} {})", e.name, num(e.pad[0]), num(e.pad[1]), num(e.pad[2]));
        }
        out.push_str(")\n");
    }
    if bundle.motivation_catalog != MotivationCatalog::default() {
        let names: Vec<&str> = bundle.motivation_catalog.factors.iter().map(Slug::as_str).collect();
        let _ = writeln!(out, "\n(motivation-catalog {})", names.join(" "));
    }
    for obj in bundle.objects.values() {
        out.push('\n');
        object_form(&mut out, bundle, obj);
    }
    if !bundle.affect_rules.is_empty() {
        out.push('\n');
        for r in &bundle.affect_rules {
            out.push_str(&rule_form(r));
            out.push('\n');
        }
    }
    Ok(out)
}

// ---- parsing ----

fn err(pos: Pos, msg: impl Into<String>) -> CodegenError {
    CodegenError::Read(ReadError::new(pos, msg))
}

fn slug(s: &Sexp) -> Result<Slug, CodegenError> {
    let a = s.atom().ok_or_else(|| err(s.pos(), "expected an identifier"))?;
    Slug::new(a).map_err(|e| err(s.pos(), e.to_string()))
}

fn number(s: &Sexp) -> Result<f64, CodegenError> {
    s.atom()
        .and_then(|a| a.parse::<f64>().ok())
        .filter(|x| x.is_finite())
        .ok_or_else(|| err(s.pos(), "expected a number"))
}

fn items<'a>(s: &'a Sexp, what: &str) -> Result<&'a [Sexp], CodegenError> {
    s.list().ok_or_else(|| err(s.pos(), format!("expected a list for {what}")))
}

fn parse_literal(s: &Sexp) -> Result<Literal, CodegenError> {
    if s.head() == Some("not") {
        let l = items(s, "negation")?;
        if l.len() != 2 {
            return Err(err(s.pos(), "(not ...) takes one literal"));
        }
        return Ok(parse_literal(&l[1])?.negated());
    }
    match s {
        Sexp::Atom(..) => Ok(Literal::binary(StateId::from_slug(slug(s)?), true)),
        Sexp::List(l, _) if l.len() == 2 => Ok(Literal::fluent(StateId::from_slug(slug(&l[0])?), slug(&l[1])?, true)),
        Sexp::List(_, p) => Err(err(*p, "a literal is an identifier, (state value) or (not literal)")),
    }
}

fn parse_clauses(list: &[Sexp]) -> Result<Cnf, CodegenError> {
    let clauses = list
        .iter()
        .map(|c| items(c, "clause")?.iter().map(parse_literal).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Cnf { clauses })
}

fn parse_post(s: &Sexp) -> Result<PostCondition, CodegenError> {
    let l = items(s, "postcondition")?;
    let (probability, core, deterministic) = if s.head() == Some("probabilistic") {
        if l.len() != 3 {
            return Err(err(s.pos(), "(probabilistic p (state [value] flag)) expected"));
        }
        (number(&l[1])?, items(&l[2], "postcondition")?, false)
    } else {
        let p = l.last().ok_or_else(|| err(s.pos(), "empty postcondition"))?;
        (number(p)?, &l[..l.len() - 1], true)
    };
    if deterministic && probability < 1.0 {
        return Err(err(s.pos(), "probabilities below 1 use the (probabilistic ...) form"));
    }
    let flag = |x: &Sexp| match x.atom() {
        Some("#t") => Ok(true),
        Some("#f") => Ok(false),
        _ => Err(err(x.pos(), "expected #t or #f")),
    };
    let literal = match core {
        [state, f] => Literal::binary(StateId::from_slug(slug(state)?), flag(f)?),
        [state, value, f] => Literal::fluent(StateId::from_slug(slug(state)?), slug(value)?, flag(f)?),
        _ => return Err(err(s.pos(), "expected (state [value] #t|#f)")),
    };
    Ok(PostCondition { literal, probability })
}

/// Splits `:key value` pairs following a head.
fn keywords(list: &[Sexp], pos: Pos) -> Result<BTreeMap<&str, &Sexp>, CodegenError> {
    if !list.len().is_multiple_of(2) {
        return Err(err(pos, "keyword without a value"));
    }
    let mut map = BTreeMap::new();
    for pair in list.chunks(2) {
        let k = pair[0].atom().filter(|a| a.starts_with(':')).ok_or_else(|| err(pair[0].pos(), "expected :keyword"))?;
        if map.insert(k, &pair[1]).is_some() {
            return Err(err(pair[0].pos(), format!("{k} given twice")));
        }
    }
    Ok(map)
}

fn required<'a>(map: &BTreeMap<&str, &'a Sexp>, key: &str, pos: Pos) -> Result<&'a Sexp, CodegenError> {
    map.get(key).copied().ok_or_else(|| err(pos, format!("missing {key}")))
}

fn parse_object(list: &[Sexp], pos: Pos, bundle: &mut DomainBundle) -> Result<(), CodegenError> {
    let name = slug(list.get(1).ok_or_else(|| err(pos, "smart-object without a name"))?)?;
    let mut type_tag = None;
    for section in &list[2..] {
        let l = items(section, "section")?;
        match section.head() {
            Some("type") if l.len() == 2 => type_tag = Some(slug(&l[1])?),
            Some("states") => {
                for s in &l[1..] {
                    let st = items(s, "state")?;
                    let triple = st
                        .get(1)
                        .and_then(Sexp::list)
                        .ok_or_else(|| err(s.pos(), "(id (subject predicate [complement]))"))?;
                    let (subject, predicate, complement) = match triple {
                        [a, b] => (slug(a)?, slug(b)?, None),
                        [a, b, c] => (slug(a)?, slug(b)?, Some(slug(c)?)),
                        _ => return Err(err(s.pos(), "a triple has two or three parts")),
                    };
                    let id = StateId::from_slug(slug(&st[0])?);
                    let triple = StateTriple::new(subject, predicate, complement);
                    bundle
                        .states
                        .insert(id.clone(), StateDecl { id, owner: name.clone(), body: StateBody::Binary { triple } });
                }
            }
            Some("fluents") => {
                for f in &l[1..] {
                    let fl = items(f, "fluent")?;
                    let (Some(id), Some(var), Some(vals)) = (fl.first(), fl.get(1), fl.get(2)) else {
                        return Err(err(f.pos(), "(id (variable v) (values ...)) expected"));
                    };
                    let var = items(var, "variable")?;
                    let vals = items(vals, "values")?;
                    if var.first().and_then(Sexp::atom) != Some("variable")
                        || vals.first().and_then(Sexp::atom) != Some("values")
                        || var.len() != 2
                    {
                        return Err(err(f.pos(), "(id (variable v) (values ...)) expected"));
                    }
                    let id = StateId::from_slug(slug(id)?);
                    let body = StateBody::Fluent {
                        variable: slug(&var[1])?,
                        domain: vals[1..].iter().map(slug).collect::<Result<_, _>>()?,
                    };
                    bundle.states.insert(id.clone(), StateDecl { id, owner: name.clone(), body });
                }
            }
            Some("affordances") => {
                for a in &l[1..] {
                    let al = items(a, "affordance")?;
                    let aff_name = slug(al.first().ok_or_else(|| err(a.pos(), "affordance without a name"))?)?;
                    let kw = keywords(&al[1..], a.pos())?;
                    let pre = items(required(&kw, ":pre", a.pos())?, ":pre")?;
                    let posts = items(required(&kw, ":post", a.pos())?, ":post")?;
                    let affordance = Affordance {
                        name: aff_name,
                        owner: name.clone(),
                        preconditions: parse_clauses(pre)?,
                        postconditions: posts.iter().map(parse_post).collect::<Result<_, _>>()?,
                    };
                    bundle.add_affordance(affordance).map_err(|e| err(a.pos(), e.to_string()))?;
                }
            }
            _ => return Err(err(section.pos(), "unknown section in define-smart-object")),
        }
    }
    bundle.objects.insert(name.clone(), SmartObject { name, type_tag });
    Ok(())
}

fn parse_rule(list: &[Sexp], pos: Pos) -> Result<AffectRule, CodegenError> {
    let kw = keywords(&list[1..], pos)?;
    let t = items(required(&kw, ":target", pos)?, ":target")?;
    let target = match t {
        [h] if h.atom() == Some("mood") => AffectTarget::Mood,
        [h, n] if h.atom() == Some("emotion") => AffectTarget::Emotion(slug(n)?),
        [h, n] if h.atom() == Some("motivation") => AffectTarget::Motivation(slug(n)?),
        _ => return Err(err(pos, "unknown :target")),
    };
    let c = items(required(&kw, ":change", pos)?, ":change")?;
    let change = match c {
        [h, m] if h.atom() == Some("shift") => AffectChange::shift(number(m)?),
        [h, m] if h.atom() == Some("set") => AffectChange::set(number(m)?),
        _ => return Err(err(pos, "unknown :change")),
    };
    let when = required(&kw, ":when", pos)?;
    if when.head() != Some("and") {
        return Err(err(when.pos(), ":when takes (and clause...)"));
    }
    let condition = parse_clauses(&items(when, ":when")?[1..])?;
    Ok(AffectRule { condition, target, change })
}

/// Reads a document produced by [`emit_sexpr`].
pub fn parse_sexpr(text: &str) -> Result<DomainBundle, CodegenError> {
    let mut bundle = DomainBundle::default();
    let mut catalog_seen = false;
    for form in read_all(text)? {
        let pos = form.pos();
        let list = items(&form, "top-level form")?;
        match form.head() {
            Some("define-smart-object") => parse_object(list, pos, &mut bundle)?,
            Some("rule") => bundle.affect_rules.push(parse_rule(list, pos)?),
            Some("emotion-catalog") if !catalog_seen => {
                catalog_seen = true;
                bundle.emotion_catalog = list[1..]
                    .iter()
                    .map(|e| match items(e, "emotion")? {
                        [n, p, a, d] => Ok(EmotionSpec { name: slug(n)?, pad: [number(p)?, number(a)?, number(d)?] }),
                        _ => Err(err(e.pos(), "(name pleasure arousal dominance) expected")),
                    })
                    .collect::<Result<_, _>>()?;
            }
            Some("motivation-catalog") => {
                bundle.motivation_catalog =
                    MotivationCatalog { factors: list[1..].iter().map(slug).collect::<Result<_, _>>()? };
            }
            Some(other) => return Err(err(pos, format!("unknown form {other:?}"))),
            None => return Err(err(pos, "top-level form without a head")),
        }
    }
    Ok(bundle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{StateKind, REISS_FACTORS};

    fn t(p: &str, c: &str) -> StateTriple {
        StateTriple::parse_parts("max", p, c).unwrap()
    }

    fn worked() -> DomainBundle {
        let mut b = DomainBundle::default();
        let pre = b.intern_state(&t("has", "exam"), StateKind::Binary).unwrap();
        let post = b.intern_state(&t("feel", "knowledgeable"), StateKind::Binary).unwrap();
        let mut a = Affordance::skeleton(Slug::new("max").unwrap(), Slug::new("go_to_library").unwrap());
        a.preconditions = Cnf::all_of([pre.literal(true)]);
        a.postconditions.push(PostCondition::certain(post.literal(true)));
        b.add_affordance(a).unwrap();
        b
    }

    #[test]
    fn empty_bundle_is_header_only() {
        assert_eq!(emit_sexpr(&DomainBundle::default()).unwrap(), SEXPR_HEADER);
    }

    #[test]
    fn worked_affordance_forms() {
        let text = emit_sexpr(&worked()).unwrap();
        assert!(text.contains(":pre ((max_has_exam))"), "{text}");
        assert!(text.contains(":post ((max_feel_knowledgeable #t 1.0))"), "{text}");
        assert_eq!(parse_sexpr(&text).unwrap(), worked());
    }

    #[test]
    fn rule_form_matches_documented_shape() {
        let mut b = DomainBundle::default();
        let fail = b.intern_state(&t("fail", "exam"), StateKind::Binary).unwrap();
        let rule = AffectRule {
            condition: Cnf::all_of([fail.literal(true)]),
            target: AffectTarget::Emotion(Slug::new("anger").unwrap()),
            change: AffectChange::shift(0.4),
        };
        assert_eq!(rule_form(&rule), "(rule :target (emotion anger) :change (shift 0.4) :when (and (max_fail_exam)))");
        b.add_rule(rule);
        let text = emit_sexpr(&b).unwrap();
        assert_eq!(parse_sexpr(&text).unwrap(), b);
    }

    #[test]
    fn probabilistic_and_negative_forms_round_trip() {
        let mut b = worked();
        let go = b.intern_state(&t("go", "park"), StateKind::Fluent).unwrap();
        b.intern_state(&t("go", "home"), StateKind::Fluent).unwrap();
        let aff = b.affordances.first_mut().unwrap();
        aff.postconditions.push(PostCondition { literal: go.literal(false), probability: 0.5 });
        aff.preconditions.clauses.push(vec![go.literal(false), Literal::binary(t("has", "exam").binary_id(), false)]);
        b.objects.get_mut(&Slug::new("max").unwrap()).unwrap().type_tag = Some(Slug::new("person").unwrap());
        let text = emit_sexpr(&b).unwrap();
        assert!(text.contains("(probabilistic 0.5 (max_go park #f))"), "{text}");
        assert!(text.contains("((not (max_go park)) (not max_has_exam))"), "{text}");
        let back = parse_sexpr(&text).unwrap();
        assert_eq!(back, b);
        assert_eq!(emit_sexpr(&back).unwrap(), text);
    }

    #[test]
    fn custom_catalogs_round_trip() {
        let mut b = DomainBundle::default();
        b.emotion_catalog.truncate(2);
        b.motivation_catalog.factors = REISS_FACTORS[..3].iter().map(|f| Slug::new(*f).unwrap()).collect();
        let text = emit_sexpr(&b).unwrap();
        assert!(text.contains("(motivation-catalog acceptance curiosity eating)"));
        assert_eq!(parse_sexpr(&text).unwrap(), b);
    }

    #[test]
    fn invalid_bundle_is_refused() {
        let mut b = worked();
        b.affordances[0].postconditions[0].probability = 0.0;
        assert!(matches!(emit_sexpr(&b), Err(CodegenError::Invalid(_))));
    }

    #[test]
    fn truncated_document_reports_position() {
        let text = emit_sexpr(&worked()).unwrap();
        let cut = &text[..text.len() - 4];
        let CodegenError::Read(e) = parse_sexpr(cut).unwrap_err() else { panic!() };
        assert_eq!(e.pos.line, 3);
        assert!(matches!(parse_sexpr("(launch-missiles)"), Err(CodegenError::Read(_))));
    }
}
