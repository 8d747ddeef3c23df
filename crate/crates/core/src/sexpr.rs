//! A small s-expression reader shared by the term, lexicon, tree and
//! formula formats.
//!
//! Three bracket kinds are recognised: `( ... )` lists, `{ ... }` type
//! arguments, and atoms. A `;` starts a comment that runs to the end of the
//! line.

use std::fmt;

use thiserror::Error;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
    Brace(Vec<Sexp>, Pos),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct SyntaxError {
    pub pos: Pos,
    pub message: String,
}

impl SyntaxError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        SyntaxError { pos, message: message.into() }
    }
}

impl Sexp {
    pub fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) | Sexp::Brace(_, p) => *p,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(s, _) => Some(s),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(items, _) => Some(items),
            _ => None,
        }
    }

    /// The head atom of a list, if any.
    pub fn head(&self) -> Option<&str> {
        self.as_list()?.first()?.as_atom()
    }

    pub fn expect_atom(&self, what: &str) -> Result<&str, SyntaxError> {
        self.as_atom().ok_or_else(|| SyntaxError::new(self.pos(), format!("expected {what}")))
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn items(f: &mut fmt::Formatter<'_>, xs: &[Sexp]) -> fmt::Result {
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
            Ok(())
        }
        match self {
            Sexp::Atom(s, _) => f.write_str(s),
            Sexp::List(xs, _) => {
                f.write_str("(")?;
                items(f, xs)?;
                f.write_str(")")
            }
            Sexp::Brace(xs, _) => {
                f.write_str("{")?;
                items(f, xs)?;
                f.write_str("}")
            }
        }
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl<'a> Reader<'a> {
    fn new(src: &'a str) -> Self {
        Reader { chars: src.chars().peekable(), pos: Pos { line: 1, col: 1 } }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<Option<Sexp>, SyntaxError> {
        self.skip_trivia();
        let start = self.pos;
        let Some(&c) = self.chars.peek() else {
            return Ok(None);
        };
        match c {
            '(' | '{' => {
                self.bump();
                let close = if c == '(' { ')' } else { '}' };
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => {
                            return Err(SyntaxError::new(start, format!("unclosed `{c}`")));
                        }
                        Some(&d) if d == close => {
                            self.bump();
                            break;
                        }
                        Some(&d) if d == ')' || d == '}' => {
                            return Err(SyntaxError::new(self.pos, format!("mismatched `{d}`, expected `{close}`")));
                        }
                        Some(_) => {
                            if let Some(x) = self.read()? {
                                items.push(x);
                            }
                        }
                    }
                }
                Ok(Some(if c == '(' { Sexp::List(items, start) } else { Sexp::Brace(items, start) }))
            }
            ')' | '}' => Err(SyntaxError::new(start, format!("unexpected `{c}`"))),
            _ => {
                let mut atom = String::new();
                while let Some(&d) = self.chars.peek() {
                    if d.is_whitespace() || matches!(d, '(' | ')' | '{' | '}' | ';') {
                        break;
                    }
                    atom.push(d);
                    self.bump();
                }
                Ok(Some(Sexp::Atom(atom, start)))
            }
        }
    }
}

/// Reads every top-level form in `src`.
pub fn parse_all(src: &str) -> Result<Vec<Sexp>, SyntaxError> {
    let mut reader = Reader::new(src);
    let mut out = Vec::new();
    while let Some(x) = reader.read()? {
        out.push(x);
    }
    Ok(out)
}

/// Reads exactly one top-level form.
pub fn parse_one(src: &str) -> Result<Sexp, SyntaxError> {
    let mut forms = parse_all(src)?;
    match forms.len() {
        0 => Err(SyntaxError::new(Pos { line: 1, col: 1 }, "empty input")),
        1 => Ok(forms.pop().unwrap()),
        _ => Err(SyntaxError::new(forms[1].pos(), "trailing input after first form")),
    }
}

/// Splits `(head a b :key v :flag ...)` style keyword arguments. Returns the
/// positional prefix and the keyword groups in order; each group holds the
/// values that followed the keyword up to the next keyword.
pub fn keyword_groups(items: &[Sexp]) -> (Vec<&Sexp>, Vec<(&str, Vec<&Sexp>)>) {
    let mut positional = Vec::new();
    let mut groups: Vec<(&str, Vec<&Sexp>)> = Vec::new();
    for item in items {
        match item.as_atom() {
            Some(k) if k.starts_with(':') => groups.push((k, Vec::new())),
            _ => match groups.last_mut() {
                Some((_, vals)) => vals.push(item),
                None => positional.push(item),
            },
        }
    }
    (positional, groups)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_nested_forms_and_braces() {
        let x = parse_one("(f {A} (g x)) ; trailing comment").unwrap();
        assert_eq!(x.to_string(), "(f {A} (g x))");
    }

    #[test]
    fn comments_and_whitespace_are_ignored() {
        let xs = parse_all("; header\n(a)\n\n  ; mid\n(b c)\n").unwrap();
        assert_eq!(xs.len(), 2);
        assert_eq!(xs[1].pos(), Pos { line: 5, col: 1 });
    }

    #[test]
    fn unbalanced_input_is_located() {
        let err = parse_one("(a (b c)").unwrap_err();
        assert_eq!(err.pos, Pos { line: 1, col: 1 });
        let err = parse_one("(a }").unwrap_err();
        assert!(err.message.contains("mismatched"));
        assert!(parse_one("").is_err());
        assert!(parse_one("a b").is_err());
    }

    #[test]
    fn keyword_groups_split() {
        let x = parse_one("(word w :main m :coercion (a b) :coercion (c d :exclusive))").unwrap();
        let items = x.as_list().unwrap();
        let (pos, groups) = keyword_groups(&items[1..]);
        assert_eq!(pos.len(), 1);
        let keys: Vec<_> = groups.iter().map(|(k, _)| *k).collect();
        assert_eq!(keys, vec![":main", ":coercion", ":coercion"]);
    }
}
