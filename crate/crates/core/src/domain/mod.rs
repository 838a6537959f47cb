//! Formal objects of the agent description: smart-objects, states,
//! affordances, affect rules, and the bundle that holds them.

mod bundle;
mod cnf;
mod model;
mod persist;
mod slug;
mod validate;

pub use bundle::{intern_state, BundleError, Interned};
pub use cnf::{eval_cnf, Assignment, Cnf, CnfError, Literal, StateValue};
pub use model::*;
pub use persist::{from_canonical_json, to_canonical_json, PersistError};
pub use slug::{phrase_words, singularize, slugify, slugify_phrase, Slug, SlugError};
pub use validate::{validate_bundle, Diagnostic, Severity};
