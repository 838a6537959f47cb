use super::graph::Provenance;

/// Splits raw text into sentences at `.`, `?` and `!` followed by
/// whitespace or the end of input. Each line is a paragraph; provenance
/// records the 1-based line and running sentence number.
pub fn split_sentences(text: &str) -> Vec<(String, Provenance)> {
    let mut out = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut current = String::new();
        for (i, &c) in chars.iter().enumerate() {
            current.push(c);
            let at_break = matches!(c, '.' | '?' | '!') && chars.get(i + 1).is_none_or(|n| n.is_whitespace());
            if at_break {
                push_sentence(&mut out, &mut current, line_no + 1);
            }
        }
        push_sentence(&mut out, &mut current, line_no + 1);
    }
    out
}

fn push_sentence(out: &mut Vec<(String, Provenance)>, current: &mut String, line: usize) {
    let s = current.trim();
    if s.chars().any(char::is_alphanumeric) {
        let sentence = out.len() + 1;
        out.push((s.to_string(), Provenance { line, sentence }));
    }
    current.clear();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_on_terminators_only_before_space() {
        let got = split_sentences("Max sleeps. It sets honor to 0.9! Done\nNext line?");
        let texts: Vec<_> = got.iter().map(|(s, _)| s.as_str()).collect();
        assert_eq!(texts, ["Max sleeps.", "It sets honor to 0.9!", "Done", "Next line?"]);
        assert_eq!(got[3].1, Provenance { line: 2, sentence: 4 });
    }

    #[test]
    fn blank_input_has_no_sentences() {
        assert!(split_sentences("  \n\n ").is_empty());
    }
}
