use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::DslError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Int(i64),
    /// A single lowercase letter other than `q`.
    Var(char),
    Q,
    Sum,
    Prod,
    Floor,
    Inf,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Eq,
    DotDot,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "{n}"),
            Tok::Var(c) => write!(f, "{c}"),
            Tok::Q => f.write_str("q"),
            Tok::Sum => f.write_str("sum"),
            Tok::Prod => f.write_str("prod"),
            Tok::Floor => f.write_str("floor"),
            Tok::Inf => f.write_str("inf"),
            Tok::Plus => f.write_str("+"),
            Tok::Minus => f.write_str("-"),
            Tok::Star => f.write_str("*"),
            Tok::Slash => f.write_str("/"),
            Tok::Caret => f.write_str("^"),
            Tok::LParen => f.write_str("("),
            Tok::RParen => f.write_str(")"),
            Tok::Comma => f.write_str(","),
            Tok::Eq => f.write_str("="),
            Tok::DotDot => f.write_str(".."),
            Tok::End => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone)]
pub struct Spanned {
    pub tok: Tok,
    pub pos: Pos,
}

fn error(pos: Pos, expected: &[&str], found: impl Into<String>) -> DslError {
    DslError::Parse {
        line: pos.line,
        col: pos.col,
        expected: expected.iter().map(|s| s.to_string()).collect(),
        found: found.into(),
    }
}

pub fn tokenize(text: &str) -> Result<Vec<Spanned>, DslError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut pos = Pos { line: 1, col: 1 };
    while let Some(&c) = chars.peek() {
        let start = pos;
        if c == '\n' {
            chars.next();
            pos.line += 1;
            pos.col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            pos.col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                digits.push(d);
                chars.next();
                pos.col += 1;
            }
            let n = digits.parse::<i64>().map_err(|_| error(start, &["integer below 2^63"], digits.clone()))?;
            out.push(Spanned { tok: Tok::Int(n), pos: start });
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut word = String::new();
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_alphabetic() {
                    break;
                }
                word.push(d);
                chars.next();
                pos.col += 1;
            }
            let tok = match word.as_str() {
                "q" => Tok::Q,
                "sum" => Tok::Sum,
                "prod" => Tok::Prod,
                "floor" => Tok::Floor,
                "inf" => Tok::Inf,
                w if w.len() == 1 && w.as_bytes()[0].is_ascii_lowercase() => Tok::Var(w.as_bytes()[0] as char),
                _ => return Err(error(start, &["q", "sum", "prod", "floor", "inf", "single-letter variable"], word)),
            };
            out.push(Spanned { tok, pos: start });
            continue;
        }
        chars.next();
        pos.col += 1;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '=' => Tok::Eq,
            '.' if chars.peek() == Some(&'.') => {
                chars.next();
                pos.col += 1;
                Tok::DotDot
            }
            _ => return Err(error(start, &["operator, number or identifier"], c.to_string())),
        };
        out.push(Spanned { tok, pos: start });
    }
    out.push(Spanned { tok: Tok::End, pos });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn basic_tokens() {
        assert_eq!(
            toks("sum(k=0..inf, q^k)"),
            [
                Tok::Sum,
                Tok::LParen,
                Tok::Var('k'),
                Tok::Eq,
                Tok::Int(0),
                Tok::DotDot,
                Tok::Inf,
                Tok::Comma,
                Tok::Q,
                Tok::Caret,
                Tok::Var('k'),
                Tok::RParen,
                Tok::End
            ]
        );
    }

    #[test]
    fn positions_track_lines() {
        let t = tokenize("1 +\n  q").unwrap();
        assert_eq!(t[2].pos, Pos { line: 2, col: 3 });
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(tokenize("1 . 2"), Err(DslError::Parse { line: 1, col: 3, .. })));
        assert!(matches!(tokenize("qq"), Err(DslError::Parse { .. })));
        assert!(matches!(tokenize("K"), Err(DslError::Parse { .. })));
        assert!(matches!(tokenize("99999999999999999999"), Err(DslError::Parse { .. })));
    }
}
