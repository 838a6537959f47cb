//! Turns affect sentences into state-emotion rules; adverbs pick the step.
//!
//! cargo run -p nl2domain --example affect_rule

use nl2domain::pipeline::Compiler;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let compiler = Compiler::with_defaults()?;
    for text in [
        "Max will get extremely angry whenever he fails his exams.",
        "Max will get slightly angry whenever he fails his exams.",
        "Max gets angry whenever he is hungry.",
    ] {
        let mut bundle = compiler.new_bundle();
        compiler.submit(&mut bundle, text, None, None);
        for r in &bundle.affect_rules {
            let when: Vec<&str> = r.condition.literals().map(|l| l.state.as_str()).collect();
            println!("{text}\n  {} {:?} {} when {}", r.target, r.change.mode, r.change.magnitude, when.join(" & "));
        }
    }
    Ok(())
}
