//! Compiles text with an external CoNLL-U parse instead of the built-in
//! parser. The parse must use ClearNLP labels (dobj, prep, pobj, ...).
//!
//! cargo run -p nl2domain --example sidecar

use nl2domain::codegen::emit_sexpr;
use nl2domain::pipeline::Compiler;

const CONLLU: &str = include_str!("../tests/data/worked.conllu");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text: Vec<&str> = CONLLU.lines().filter_map(|l| l.strip_prefix("# text = ")).collect();
    let compiler = Compiler::with_defaults()?;
    let mut bundle = compiler.new_bundle();
    let report = compiler.submit(&mut bundle, &text.join("\n"), None, Some(CONLLU));
    assert!(report.is_clean(), "{report:#?}");
    print!("{}", emit_sexpr(&bundle)?);
    Ok(())
}
