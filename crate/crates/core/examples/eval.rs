//! Scores the compiler on the bundled gold corpus.
//!
//! cargo run -p nl2domain --example eval

use std::path::Path;

use nl2domain::eval::{parse_gold, score, BUNDLED_GOLD};
use nl2domain::pipeline::Compiler;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = parse_gold(BUNDLED_GOLD, Path::new("."))?;
    let report = score(&cases, &Compiler::with_defaults()?);
    println!("{report}");
    Ok(())
}
