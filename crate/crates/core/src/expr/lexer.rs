//! Tokenizer for the expression grammar.

use crate::error::ParseError;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Number(n) => format!("number `{n}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct SpannedTok {
    pub tok: Tok,
    pub start: usize,
    pub end: usize,
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<SpannedTok>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                i += 1;
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' | ',' => {
                let tok = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    _ => Tok::Comma,
                };
                out.push(SpannedTok { tok, start: i, end: i + 1 });
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    if i + 1 >= bytes.len() || !bytes[i + 1].is_ascii_digit() {
                        return Err(ParseError::Syntax {
                            pos: i,
                            found: "`.` with no fractional digits".into(),
                            expected: vec!["digit"],
                        });
                    }
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    // Exponent only when followed by a (possibly signed) digit
                    // sequence; otherwise the `e`/`E` is a separate identifier.
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| ParseError::Syntax {
                    pos: start,
                    found: format!("malformed number `{text}`"),
                    expected: vec!["number"],
                })?;
                out.push(SpannedTok { tok: Tok::Number(value), start, end: i });
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push(SpannedTok {
                    tok: Tok::Ident(src[start..i].to_string()),
                    start,
                    end: i,
                });
            }
            other => {
                return Err(ParseError::UnexpectedChar { ch: other, pos: i });
            }
        }
    }
    out.push(SpannedTok { tok: Tok::End, start: src.len(), end: src.len() });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_with_exponents() {
        let toks = tokenize("1.5e-3 + 2E4").unwrap();
        assert_eq!(toks[0].tok, Tok::Number(1.5e-3));
        assert_eq!(toks[2].tok, Tok::Number(2e4));
    }

    #[test]
    fn exponent_marker_without_digits_is_identifier() {
        // "2e" lexes as the number 2 followed by identifier `e`.
        let toks = tokenize("2e").unwrap();
        assert_eq!(toks[0].tok, Tok::Number(2.0));
        assert_eq!(toks[1].tok, Tok::Ident("e".into()));
    }

    #[test]
    fn rejects_bad_chars() {
        assert!(matches!(
            tokenize("x $ y"),
            Err(ParseError::UnexpectedChar { ch: '$', .. })
        ));
    }

    #[test]
    fn rejects_trailing_dot() {
        assert!(tokenize("1.").is_err());
    }
}
