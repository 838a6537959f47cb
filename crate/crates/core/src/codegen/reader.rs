//! Minimal s-expression reader shared by the domain parser and the PDDL
//! checker. `;` starts a comment that runs to the end of the line.

use std::fmt;

use thiserror::Error;

/// 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct ReadError {
    pub pos: Pos,
    pub message: String,
}

impl ReadError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        ReadError { pos, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    pub fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }

    pub fn atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(a, _) => Some(a),
            Sexp::List(..) => None,
        }
    }

    pub fn list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(items, _) => Some(items),
            Sexp::Atom(..) => None,
        }
    }

    /// Head atom of a list form.
    pub fn head(&self) -> Option<&str> {
        self.list().and_then(|l| l.first()).and_then(Sexp::atom)
    }
}

/// Reads every top-level form in `text`.
pub fn read_all(text: &str) -> Result<Vec<Sexp>, ReadError> {
    let mut stack: Vec<(Vec<Sexp>, Pos)> = Vec::new();
    let mut top = Vec::new();
    let mut chars = text.char_indices().peekable();
    let (mut line, mut column) = (1usize, 1usize);
    let mut atom: Option<(String, Pos)> = None;

    fn flush(atom: &mut Option<(String, Pos)>, stack: &mut [(Vec<Sexp>, Pos)], top: &mut Vec<Sexp>) {
        if let Some((a, p)) = atom.take() {
            match stack.last_mut() {
                Some((items, _)) => items.push(Sexp::Atom(a, p)),
                None => top.push(Sexp::Atom(a, p)),
            }
        }
    }

    while let Some((_, c)) = chars.next() {
        let pos = Pos { line, column };
        match c {
            '(' => {
                flush(&mut atom, &mut stack, &mut top);
                stack.push((Vec::new(), pos));
            }
            ')' => {
                flush(&mut atom, &mut stack, &mut top);
                let (items, open) = stack.pop().ok_or_else(|| ReadError::new(pos, "unexpected ')'"))?;
                let list = Sexp::List(items, open);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(list),
                    None => top.push(list),
                }
            }
            ';' => {
                flush(&mut atom, &mut stack, &mut top);
                while let Some(&(_, n)) = chars.peek() {
                    if n == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            c if c.is_whitespace() => flush(&mut atom, &mut stack, &mut top),
            c => match &mut atom {
                Some((a, _)) => a.push(c),
                None => atom = Some((c.to_string(), pos)),
            },
        }
        if c == '\n' {
            line += 1;
            column = 1;
        } else {
            column += 1;
        }
    }
    flush(&mut atom, &mut stack, &mut top);
    // Report the outermost open form; inner ones are usually its children.
    if let Some((_, open)) = stack.first().cloned() {
        return Err(ReadError::new(open, "unbalanced '(': document ends inside this form"));
    }
    Ok(top)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_nested_forms_and_skips_comments() {
        let forms = read_all("; header\n(a (b c) d) ; trailing\n(e)").unwrap();
        assert_eq!(forms.len(), 2);
        assert_eq!(forms[0].head(), Some("a"));
        assert_eq!(forms[0].list().unwrap()[1].list().unwrap().len(), 2);
        assert_eq!(forms[1].pos(), Pos { line: 3, column: 1 });
    }

    #[test]
    fn unbalanced_input_reports_position() {
        let err = read_all("(a\n  (b c)").unwrap_err();
        assert_eq!(err.pos, Pos { line: 1, column: 1 });
        let err = read_all("(a))").unwrap_err();
        assert_eq!(err.pos, Pos { line: 1, column: 4 });
    }
}
