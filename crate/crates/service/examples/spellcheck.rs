//! Flags misspelled words with ranked candidates.
//!
//! cargo run -p nl2domain-service --example spellcheck

use nl2domain_service::spellcheck::{spellcheck, Dictionary};

fn main() {
    let dictionary = Dictionary::bundled();
    for flag in spellcheck("Max goes to the libary with his zorblax.", &dictionary, &["zorblax"]) {
        println!("{} at {}: {:?}", flag.token, flag.offset, flag.candidates);
    }
}
