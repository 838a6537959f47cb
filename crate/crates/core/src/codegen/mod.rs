//! Output formats: the s-expression dialect (lossless) and PDDL/PPDDL
//! (for off-the-shelf planners).

pub mod pddl;
pub mod reader;
pub mod sexpr;

use thiserror::Error;

use crate::domain::{validate_bundle, Diagnostic, DomainBundle};

pub use pddl::{check_pddl, emit_pddl, emit_pddl_named, emit_pddl_problem_stub};
pub use reader::{read_all, Pos, ReadError, Sexp};
pub use sexpr::{emit_sexpr, parse_sexpr};

#[derive(Debug, Error)]
pub enum CodegenError {
    #[error(transparent)]
    Read(#[from] ReadError),
    #[error("bundle is invalid: {}", list(.0))]
    Invalid(Vec<Diagnostic>),
}

fn list(diagnostics: &[Diagnostic]) -> String {
    diagnostics.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Refuses bundles with error-level diagnostics. Warnings pass.
pub fn ensure_valid(bundle: &DomainBundle) -> Result<(), CodegenError> {
    let errors: Vec<Diagnostic> = validate_bundle(bundle).into_iter().filter(Diagnostic::is_error).collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(CodegenError::Invalid(errors))
    }
}
