//! Properties of the bundled gold corpus as a whole.

use std::path::Path;

use nl2domain::affect::split_affect_sentence;
use nl2domain::affordance::{split_affordance, PatternCatalog};
use nl2domain::eval::{parse_gold, BUNDLED_GOLD};
use nl2domain::ingest::Provenance;

#[test]
fn no_sentence_splits_as_both_affect_and_affordance() {
    let patterns = PatternCatalog::default();
    let cases = parse_gold(BUNDLED_GOLD, Path::new(".")).unwrap();
    let mut affect = 0;
    let mut affordance = 0;
    for sentence in cases.iter().flat_map(|c| &c.sentences) {
        let a = split_affect_sentence(sentence, &patterns, Provenance::default()).is_ok();
        let b = split_affordance(sentence, &patterns, Provenance::default()).is_ok();
        assert!(!(a && b), "{sentence:?} matches both marker catalogs");
        affect += a as usize;
        affordance += b as usize;
    }
    // both kinds are actually present, so the check is not vacuous
    assert!(affect >= 3 && affordance >= 3, "{affect} affect, {affordance} affordance");
}
