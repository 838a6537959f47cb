//! Extracts binary and fluent states from descriptive sentences.
//!
//! cargo run -p nl2domain --example extract_states

use nl2domain::domain::StateBody;
use nl2domain::pipeline::Compiler;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let compiler = Compiler::with_defaults()?;
    let mut bundle = compiler.new_bundle();
    let text = "Max can go to different places such as restaurants and parks.
Max can be aware of his surroundings.
Max would like to drink some juice.";
    let report = compiler.submit(&mut bundle, text, None, None);
    for s in &report.sentences {
        println!("{:?}: {}", s.classification, s.text);
    }
    for decl in bundle.states.values() {
        match &decl.body {
            StateBody::Binary { .. } => println!("binary  {}", decl.id),
            StateBody::Fluent { domain, .. } => {
                let values: Vec<&str> = domain.iter().map(|v| v.as_str()).collect();
                println!("fluent  {} = {}", decl.id, values.join(" | "));
            }
        }
    }
    Ok(())
}
