use thiserror::Error;

use super::cnf::Literal;
use super::model::*;
use super::slug::Slug;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error("{triple} cannot be a {requested} state: it conflicts with {existing_kind} state {existing}")]
    KindConflict { triple: StateTriple, requested: StateKind, existing: StateId, existing_kind: StateKind },
    #[error("affordance {name} already exists for {owner}")]
    DuplicateAffordance { owner: Slug, name: Slug },
    #[error("unknown state {0}")]
    UnknownState(StateId),
}

/// Result of interning one triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interned {
    pub id: StateId,
    /// Fluent value the triple stands for, if the state is a fluent.
    pub value: Option<Slug>,
    pub created: bool,
}

impl Interned {
    pub fn literal(&self, polarity: bool) -> Literal {
        Literal { state: self.id.clone(), polarity, value: self.value.clone() }
    }
}

impl DomainBundle {
    pub fn is_empty(&self) -> bool {
        self.objects.is_empty() && self.states.is_empty() && self.affordances.is_empty() && self.affect_rules.is_empty()
    }

    /// Declares a smart-object; an existing declaration keeps its type unless
    /// `type_tag` is given.
    pub fn declare_object(&mut self, name: Slug, type_tag: Option<Slug>) {
        let entry = self.objects.entry(name.clone()).or_insert(SmartObject { name, type_tag: None });
        if type_tag.is_some() {
            entry.type_tag = type_tag;
        }
    }

    pub fn state(&self, id: &StateId) -> Option<&StateDecl> {
        self.states.get(id)
    }

    /// Registers `triple` as a state of `kind`, reusing an identical existing
    /// state. Fluent triples sharing `(subject, predicate)` extend one fluent.
    pub fn intern_state(&mut self, triple: &StateTriple, kind: StateKind) -> Result<Interned, BundleError> {
        let binary_id = triple.binary_id();
        let fluent_id = triple.fluent_id();
        match kind {
            StateKind::Binary => {
                if let Some(existing) = self.states.get(&fluent_id) {
                    let clash = match &existing.body {
                        StateBody::Fluent { domain, .. } => {
                            binary_id == fluent_id || triple.complement.as_ref().is_some_and(|c| domain.contains(c))
                        }
                        StateBody::Binary { .. } => false,
                    };
                    if clash {
                        return Err(BundleError::KindConflict {
                            triple: triple.clone(),
                            requested: kind,
                            existing: fluent_id,
                            existing_kind: StateKind::Fluent,
                        });
                    }
                }
                if let Some(existing) = self.states.get(&binary_id) {
                    return match &existing.body {
                        StateBody::Binary { .. } => Ok(Interned { id: binary_id, value: None, created: false }),
                        StateBody::Fluent { .. } => Err(BundleError::KindConflict {
                            triple: triple.clone(),
                            requested: kind,
                            existing: binary_id,
                            existing_kind: StateKind::Fluent,
                        }),
                    };
                }
                self.declare_object(triple.subject.clone(), None);
                self.states.insert(
                    binary_id.clone(),
                    StateDecl {
                        id: binary_id.clone(),
                        owner: triple.subject.clone(),
                        body: StateBody::Binary { triple: triple.clone() },
                    },
                );
                Ok(Interned { id: binary_id, value: None, created: true })
            }
            StateKind::Fluent => {
                let value = triple.complement.clone().ok_or_else(|| BundleError::KindConflict {
                    triple: triple.clone(),
                    requested: kind,
                    existing: binary_id.clone(),
                    existing_kind: StateKind::Binary,
                })?;
                if self.states.get(&binary_id).is_some_and(|s| !s.is_fluent()) {
                    return Err(BundleError::KindConflict {
                        triple: triple.clone(),
                        requested: kind,
                        existing: binary_id,
                        existing_kind: StateKind::Binary,
                    });
                }
                match self.states.get_mut(&fluent_id) {
                    Some(StateDecl { body: StateBody::Fluent { domain, .. }, .. }) => {
                        let created = !domain.contains(&value);
                        if created {
                            domain.push(value.clone());
                        }
                        Ok(Interned { id: fluent_id, value: Some(value), created })
                    }
                    Some(_) => Err(BundleError::KindConflict {
                        triple: triple.clone(),
                        requested: kind,
                        existing: fluent_id,
                        existing_kind: StateKind::Binary,
                    }),
                    None => {
                        self.declare_object(triple.subject.clone(), None);
                        self.states.insert(
                            fluent_id.clone(),
                            StateDecl {
                                id: fluent_id.clone(),
                                owner: triple.subject.clone(),
                                body: StateBody::Fluent {
                                    variable: triple.predicate.clone(),
                                    domain: vec![value.clone()],
                                },
                            },
                        );
                        Ok(Interned { id: fluent_id, value: Some(value), created: true })
                    }
                }
            }
        }
    }

    pub fn affordance(&self, owner: &Slug, name: &Slug) -> Option<&Affordance> {
        self.affordances.iter().find(|a| &a.owner == owner && &a.name == name)
    }

    pub fn affordance_mut(&mut self, owner: &Slug, name: &Slug) -> Option<&mut Affordance> {
        self.affordances.iter_mut().find(|a| &a.owner == owner && &a.name == name)
    }

    /// Inserts keeping `(owner, name)` order.
    pub fn add_affordance(&mut self, affordance: Affordance) -> Result<(), BundleError> {
        let key = (&affordance.owner, &affordance.name);
        match self.affordances.binary_search_by(|a| (&a.owner, &a.name).cmp(&key)) {
            Ok(_) => {
                Err(BundleError::DuplicateAffordance { owner: affordance.owner.clone(), name: affordance.name.clone() })
            }
            Err(pos) => {
                self.declare_object(affordance.owner.clone(), None);
                self.affordances.insert(pos, affordance);
                Ok(())
            }
        }
    }

    pub fn add_rule(&mut self, rule: AffectRule) {
        self.affect_rules.push(rule);
    }

    /// Whether some rule already maps a condition mentioning `state` to `target`.
    pub fn has_rule_for(&self, state: &StateId, target: &AffectTarget) -> bool {
        self.affect_rules.iter().any(|r| &r.target == target && r.condition.literals().any(|l| &l.state == state))
    }

    pub fn emotion(&self, name: &Slug) -> Option<&EmotionSpec> {
        self.emotion_catalog.iter().find(|e| &e.name == name)
    }

    pub fn states_of<'a>(&'a self, owner: &'a Slug) -> impl Iterator<Item = &'a StateDecl> + 'a {
        self.states.values().filter(move |s| &s.owner == owner)
    }

    /// Affect targets reachable by rules: every emotion and motivation.
    pub fn affect_targets(&self) -> Vec<AffectTarget> {
        self.emotion_catalog
            .iter()
            .map(|e| AffectTarget::Emotion(e.name.clone()))
            .chain(self.motivation_catalog.factors.iter().cloned().map(AffectTarget::Motivation))
            .collect()
    }
}

/// Free-function form of [`DomainBundle::intern_state`].
pub fn intern_state(bundle: &mut DomainBundle, triple: &StateTriple, kind: StateKind) -> Result<StateId, BundleError> {
    bundle.intern_state(triple, kind).map(|i| i.id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::validate_bundle;
    use proptest::prelude::*;

    fn t(s: &str, p: &str, c: &str) -> StateTriple {
        StateTriple::parse_parts(s, p, c).unwrap()
    }

    #[test]
    fn fluent_values_group_by_subject_and_predicate() {
        let mut b = DomainBundle::default();
        b.intern_state(&t("max", "go", "restaurant"), StateKind::Fluent).unwrap();
        b.intern_state(&t("max", "go", "park"), StateKind::Fluent).unwrap();
        assert_eq!(b.states.len(), 1);
        let decl = &b.states[&StateId::new("max_go").unwrap()];
        let names: Vec<_> = decl.domain().iter().map(Slug::as_str).collect();
        assert_eq!(names, ["restaurant", "park"]);
    }

    #[test]
    fn binary_intern_is_idempotent() {
        let mut b = DomainBundle::default();
        let first = b.intern_state(&t("max", "drink", "juice"), StateKind::Binary).unwrap();
        let snapshot = b.clone();
        let second = b.intern_state(&t("max", "drink", "juice"), StateKind::Binary).unwrap();
        assert_eq!(first.id, second.id);
        assert!(first.created && !second.created);
        assert_eq!(b, snapshot);
        assert_eq!(first.id.as_str(), "max_drink_juice");
    }

    #[test]
    fn kind_conflict_names_both_sides() {
        let mut b = DomainBundle::default();
        b.intern_state(&t("max", "go", "park"), StateKind::Fluent).unwrap();
        let err = b.intern_state(&t("max", "go", "park"), StateKind::Binary).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("(max, go, park)") && msg.contains("max_go"), "{msg}");

        let mut b = DomainBundle::default();
        b.intern_state(&t("max", "go", "park"), StateKind::Binary).unwrap();
        assert!(matches!(
            b.intern_state(&t("max", "go", "park"), StateKind::Fluent),
            Err(BundleError::KindConflict { existing_kind: StateKind::Binary, .. })
        ));
    }

    #[test]
    fn duplicate_affordance_rejected() {
        let mut b = DomainBundle::default();
        let max = Slug::new("max").unwrap();
        let sleep = Slug::new("sleep").unwrap();
        b.add_affordance(Affordance::skeleton(max.clone(), sleep.clone())).unwrap();
        assert!(b.add_affordance(Affordance::skeleton(max, sleep)).is_err());
    }

    fn triple_strategy() -> impl Strategy<Value = (StateTriple, StateKind)> {
        (
            prop::sample::select(vec!["max", "rio"]),
            prop::sample::select(vec!["go", "eat", "drink"]),
            prop::sample::select(vec!["park", "juice", "home", "cake"]),
            prop::sample::select(vec![StateKind::Binary, StateKind::Fluent]),
        )
            .prop_map(|(s, p, c, k)| (t(s, p, c), k))
    }

    proptest! {
        #[test]
        fn interning_is_order_independent(
            triples in prop::collection::vec(triple_strategy(), 1..12),
            seed in any::<u64>(),
        ) {
            // keep one kind per (subject, predicate) so no conflicts arise
            let triples: Vec<_> = triples
                .into_iter()
                .map(|(tr, _)| {
                    let kind = if tr.predicate.as_str() == "go" { StateKind::Fluent } else { StateKind::Binary };
                    (tr, kind)
                })
                .collect();
            let mut doubled = triples.clone();
            doubled.extend(triples.iter().cloned());
            let mut shuffled = doubled.clone();
            let n = shuffled.len();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                shuffled.swap(i, (s >> 33) as usize % (i + 1));
            }
            let mut a = DomainBundle::default();
            for (tr, k) in &doubled {
                a.intern_state(tr, *k).unwrap();
            }
            let mut b = DomainBundle::default();
            for (tr, k) in &shuffled {
                b.intern_state(tr, *k).unwrap();
            }
            let ids_a: Vec<_> = a.states.keys().collect();
            let ids_b: Vec<_> = b.states.keys().collect();
            prop_assert_eq!(ids_a, ids_b);
            for (id, decl) in &a.states {
                let mut da = decl.domain().to_vec();
                let mut db = b.states[id].domain().to_vec();
                da.sort();
                db.sort();
                prop_assert_eq!(da, db);
            }
            prop_assert!(validate_bundle(&a).iter().all(|d| !d.is_error()));
        }
    }
}
