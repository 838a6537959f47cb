//! Commonsense suggestions from the offline ConceptNet fixture, and the
//! accept/reject loop.
//!
//! cargo run -p nl2domain --example suggestions

use nl2domain::pipeline::Compiler;
use nl2domain::suggest::{Decision, SuggestionLog};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let compiler = Compiler::with_defaults()?;
    let client = compiler.conceptnet_client()?;
    let mut bundle = compiler.new_bundle();
    compiler.submit(&mut bundle, "Max is a dog. Max will get extremely angry whenever he fails his exams.", None, None);

    let mut log = SuggestionLog::default();
    log.refresh(compiler.suggestions(&bundle, Some(client.as_ref()))?);
    for s in log.pending() {
        println!("{:.3}  {}", s.score, s.prompt);
    }

    log.decide("capability:max:bark", Decision::Accept, &mut bundle)?;
    log.refresh(compiler.suggestions(&bundle, Some(client.as_ref()))?);
    println!(
        "after accepting bark: {} pending, affordances {:?}",
        log.pending().len(),
        bundle.affordances.iter().map(|a| a.name.as_str()).collect::<Vec<_>>()
    );
    Ok(())
}
