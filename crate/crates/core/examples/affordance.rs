//! Builds an affordance with pre- and postconditions, including a
//! probabilistic side effect.
//!
//! cargo run -p nl2domain --example affordance

use nl2domain::pipeline::Compiler;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let compiler = Compiler::with_defaults()?;
    let mut bundle = compiler.new_bundle();
    let text = "Max goes to the library only if he has an exam after which he possibly feels more knowledgeable.";
    let report = compiler.submit(&mut bundle, text, None, None);
    assert!(report.is_clean(), "{report:#?}");
    for a in &bundle.affordances {
        println!("{} of {}", a.name, a.owner);
        for l in a.preconditions.literals() {
            println!("  pre   {}{}", if l.polarity { "" } else { "not " }, l.state);
        }
        for p in &a.postconditions {
            println!("  post  {} with p = {}", p.literal.state, p.probability);
        }
    }
    Ok(())
}
