use thiserror::Error;

use super::model::DomainBundle;

#[derive(Debug, Error)]
pub enum PersistError {
    #[error("bundle file is not valid: {0}")]
    Format(#[from] serde_json::Error),
}

/// Canonical bundle text: pretty JSON with object keys sorted at every level
/// and a trailing newline.
pub fn to_canonical_json(bundle: &DomainBundle) -> String {
    // serde_json::Value keeps its maps in a BTreeMap, so keys come out sorted
    let value = serde_json::to_value(bundle).expect("bundle serializes");
    let mut text = serde_json::to_string_pretty(&value).expect("value serializes");
    text.push('\n');
    text
}

pub fn from_canonical_json(text: &str) -> Result<DomainBundle, PersistError> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{StateKind, StateTriple};

    #[test]
    fn canonical_round_trip() {
        let mut b = DomainBundle::default();
        b.intern_state(&StateTriple::parse_parts("max", "go", "park").unwrap(), StateKind::Fluent).unwrap();
        b.intern_state(&StateTriple::parse_parts("max", "drink", "juice").unwrap(), StateKind::Binary).unwrap();
        let text = to_canonical_json(&b);
        let back = from_canonical_json(&text).unwrap();
        assert_eq!(back, b);
        assert_eq!(to_canonical_json(&back), text);
        let affect = text.find("\"affect_rules\"").unwrap();
        let states = text.find("\"states\"").unwrap();
        assert!(affect < states, "keys are sorted");
    }
}
