//! Emits a domain as s-expressions and as PDDL, and reads the
//! s-expressions back.
//!
//! cargo run -p nl2domain --example codegen

use nl2domain::codegen::{check_pddl, emit_pddl, emit_sexpr, parse_sexpr};
use nl2domain::pipeline::Compiler;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let compiler = Compiler::with_defaults()?;
    let mut bundle = compiler.new_bundle();
    let text = "Max goes to the library only if he has an exam after which he feels more knowledgeable.
Max will get extremely angry whenever he fails his exams.";
    compiler.submit(&mut bundle, text, None, None);

    let sexpr = emit_sexpr(&bundle)?;
    println!("{sexpr}");
    assert_eq!(parse_sexpr(&sexpr)?, bundle);

    let pddl = emit_pddl(&bundle)?;
    println!("{pddl}");
    assert!(check_pddl(&pddl).is_empty());
    Ok(())
}
