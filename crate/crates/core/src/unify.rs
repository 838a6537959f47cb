//! Mapping extracted condition triples onto the states a bundle already
//! declares.

use serde::Serialize;

use crate::domain::{BundleError, DomainBundle, Literal, StateBody, StateKind, StateTriple};
use crate::semantics::{Matcher, StateMatch};

/// A condition with no sufficiently similar existing state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NewStateProposal {
    pub triple: StateTriple,
    pub kind: StateKind,
    pub polarity: bool,
    /// Best candidate below the threshold, if any scored at all.
    pub nearest: Option<StateMatch>,
}

impl NewStateProposal {
    /// Interns the proposed state and returns the literal over it.
    pub fn accept(&self, bundle: &mut DomainBundle) -> Result<Literal, BundleError> {
        Ok(bundle.intern_state(&self.triple, self.kind)?.literal(self.polarity))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Unified {
    Existing { literal: Literal, score: f64 },
    Proposal(NewStateProposal),
}

/// Exact identifier match first, then the most similar state of the same
/// owner at or above `threshold`.
pub fn unify_condition(
    triple: &StateTriple,
    polarity: bool,
    bundle: &DomainBundle,
    matcher: &Matcher,
    threshold: f64,
) -> Unified {
    let exact = |literal: Literal| Unified::Existing { literal, score: 1.0 };
    if threshold <= 1.0 {
        if let Some(decl) = bundle.state(&triple.binary_id()).filter(|d| !d.is_fluent()) {
            return exact(Literal::binary(decl.id.clone(), polarity));
        }
        if let (Some(decl), Some(value)) = (bundle.state(&triple.fluent_id()), &triple.complement) {
            if decl.domain().contains(value) {
                return exact(Literal::fluent(decl.id.clone(), value.clone(), polarity));
            }
        }
    }
    let best = matcher.match_state(triple, bundle.states_of(&triple.subject), f64::NEG_INFINITY);
    match best {
        Some(m) if m.score >= threshold => {
            let literal = Literal { state: m.id, polarity, value: m.value };
            Unified::Existing { literal, score: m.score }
        }
        nearest => {
            let extends_fluent = bundle
                .state(&triple.fluent_id())
                .is_some_and(|d| matches!(d.body, StateBody::Fluent { .. }) && triple.complement.is_some());
            let kind = if extends_fluent { StateKind::Fluent } else { StateKind::Binary };
            Unified::Proposal(NewStateProposal { triple: triple.clone(), kind, polarity, nearest })
        }
    }
}
