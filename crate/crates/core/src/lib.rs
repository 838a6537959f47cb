//! Compiles constrained natural-language descriptions of virtual characters
//! into planning domains.
//!
//! The pipeline reads author text (or CoNLL-U parses of it), extracts
//! smart-object states, affordances and state-affect rules, unifies
//! conditions with known states through word embeddings, and emits the
//! resulting [`domain::DomainBundle`] as s-expressions or PDDL. Two
//! suggestion engines propose missing rules and common-sense additions.
//!
//! ```
//! use nl2domain::pipeline::Compiler;
//!
//! let compiler = Compiler::with_defaults().unwrap();
//! let mut bundle = nl2domain::domain::DomainBundle::default();
//! let report = compiler.submit(&mut bundle, "Max would like to drink some juice.", None, None);
//! assert!(report.is_clean());
//! assert!(bundle.states.contains_key(&nl2domain::domain::StateId::new("max_drink_juice").unwrap()));
//! ```

pub mod affect;
pub mod affordance;
pub mod codegen;
pub mod config;
pub mod domain;
pub mod eval;
pub mod ingest;
pub mod pipeline;
pub mod semantics;
pub mod states;
pub mod suggest;
pub mod unify;
