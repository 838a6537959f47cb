use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Slug, StateId};

/// Current value of one state in an assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateValue {
    Bool(bool),
    Value(Slug),
}

pub type Assignment = HashMap<StateId, StateValue>;

/// Atom of a CNF. `value` is set iff the state is a fluent, and then the atom
/// asserts `state == value`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub state: StateId,
    pub polarity: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<Slug>,
}

impl Literal {
    pub fn binary(state: StateId, polarity: bool) -> Self {
        Literal { state, polarity, value: None }
    }

    pub fn fluent(state: StateId, value: Slug, polarity: bool) -> Self {
        Literal { state, polarity, value: Some(value) }
    }

    pub fn negated(&self) -> Self {
        Literal { polarity: !self.polarity, ..self.clone() }
    }

    pub fn eval(&self, assignment: &Assignment) -> Result<bool, CnfError> {
        let current = assignment.get(&self.state).ok_or_else(|| CnfError::Unassigned(self.state.clone()))?;
        let holds = match (&self.value, current) {
            (None, StateValue::Bool(b)) => *b,
            (Some(want), StateValue::Value(have)) => want == have,
            _ => return Err(CnfError::KindMismatch(self.state.clone())),
        };
        Ok(holds == self.polarity)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("state {0} is referenced but not assigned")]
    Unassigned(StateId),
    #[error("state {0} is assigned a value of the wrong kind")]
    KindMismatch(StateId),
}

/// Conjunction of disjunctive clauses. No clauses means `true`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cnf {
    pub clauses: Vec<Vec<Literal>>,
}

impl Cnf {
    pub fn truth() -> Self {
        Cnf::default()
    }

    /// Pure conjunction: one singleton clause per literal.
    pub fn all_of(literals: impl IntoIterator<Item = Literal>) -> Self {
        Cnf { clauses: literals.into_iter().map(|l| vec![l]).collect() }
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn literals(&self) -> impl Iterator<Item = &Literal> {
        self.clauses.iter().flatten()
    }

    /// Number of literals across all clauses.
    pub fn len(&self) -> usize {
        self.clauses.iter().map(Vec::len).sum()
    }

    pub fn eval(&self, assignment: &Assignment) -> Result<bool, CnfError> {
        // every referenced state must be assigned, even past a false clause
        for lit in self.literals() {
            if !assignment.contains_key(&lit.state) {
                return Err(CnfError::Unassigned(lit.state.clone()));
            }
        }
        for clause in &self.clauses {
            let mut any = false;
            for lit in clause {
                if lit.eval(assignment)? {
                    any = true;
                    break;
                }
            }
            if !any {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Free-function form of [`Cnf::eval`].
pub fn eval_cnf(cnf: &Cnf, assignment: &Assignment) -> Result<bool, CnfError> {
    cnf.eval(assignment)
}
