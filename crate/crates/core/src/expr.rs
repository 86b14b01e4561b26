//! Shared text syntax for polynomials, operators, algebra elements and
//! enveloping-algebra elements.
//!
//! Grammar (explicit `*` everywhere, `^` binds tighter than unary minus):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ['^' ['+'|'-'] INT]
//! atom   := INT ['/' INT] | IDENT | '(' expr ')'
//! ```
//!
//! Identifiers are `[A-Za-z_][A-Za-z0-9_]*`, optionally followed by a glued
//! signed-integer suffix in parentheses such as `Q2(-3)` or `D0_1(1)`, which
//! is how multiplet members are named.

use std::fmt;

use num_bigint::BigInt;

use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the source text.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at offset {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Semantic actions for the expression grammar.
pub trait Interpret {
    type Value;
    fn number(&self, q: Rational) -> Self::Value;
    fn ident(&self, name: &str) -> Result<Self::Value, String>;
    fn add(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, String>;
    fn neg(&self, a: Self::Value) -> Self::Value;
    fn mul(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, String>;
    fn pow(&self, a: Self::Value, e: i64) -> Result<Self::Value, String>;
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn is_ident_start(c: u8) -> bool {
    c.is_ascii_alphabetic() || c == b'_'
}

fn is_ident_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

/// Length of a `(±digits)` suffix starting at `i`, if there is one.
fn glued_suffix(b: &[u8], i: usize) -> Option<usize> {
    if b.get(i) != Some(&b'(') {
        return None;
    }
    let mut j = i + 1;
    if matches!(b.get(j), Some(b'-') | Some(b'+')) {
        j += 1;
    }
    let digits = j;
    while b.get(j).is_some_and(|c| c.is_ascii_digit()) {
        j += 1;
    }
    if j == digits || b.get(j) != Some(&b')') {
        return None;
    }
    Some(j + 1 - i)
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            _ if c.is_ascii_digit() => {
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().expect("ascii digits");
                out.push((start, Tok::Int(n)));
                continue;
            }
            _ if is_ident_start(c) => {
                while i < b.len() && is_ident_char(b[i]) {
                    i += 1;
                }
                if let Some(len) = glued_suffix(b, i) {
                    i += len;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            _ => {
                return Err(ParseError {
                    position: start,
                    message: format!("unexpected character `{}`", src[start..].chars().next().unwrap_or('?')),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a, I: Interpret> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    interp: &'a I,
}

impl<I: Interpret> Parser<'_, I> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn fail<T>(&self, at: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            position: at,
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<I::Value, ParseError> {
        let negate_first = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if negate_first {
            acc = self.interp.neg(acc);
        }
        loop {
            let at = self.offset();
            let negate = match self.peek() {
                Some(Tok::Plus) => false,
                Some(Tok::Minus) => true,
                _ => break,
            };
            self.pos += 1;
            let mut t = self.term()?;
            if negate {
                t = self.interp.neg(t);
            }
            acc = match self.interp.add(acc, t) {
                Ok(v) => v,
                Err(m) => return self.fail(at, m),
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<I::Value, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            let at = self.offset();
            self.pos += 1;
            let f = self.factor()?;
            acc = match self.interp.mul(acc, f) {
                Ok(v) => v,
                Err(m) => return self.fail(at, m),
            };
        }
        match self.peek() {
            Some(Tok::Ident(_)) | Some(Tok::Int(_)) | Some(Tok::LParen) => {
                self.fail(self.offset(), "missing `*` between factors")
            }
            _ => Ok(acc),
        }
    }

    fn factor(&mut self) -> Result<I::Value, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        let at = self.offset();
        self.pos += 1;
        let negative = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let e = match self.peek() {
            Some(Tok::Int(n)) => {
                let Ok(e) = i64::try_from(n) else {
                    return self.fail(self.offset(), "exponent out of range");
                };
                self.pos += 1;
                if negative {
                    -e
                } else {
                    e
                }
            }
            _ => return self.fail(self.offset(), "expected an integer exponent"),
        };
        match self.interp.pow(base, e) {
            Ok(v) => Ok(v),
            Err(m) => self.fail(at, m),
        }
    }

    fn atom(&mut self) -> Result<I::Value, ParseError> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let mut q = Rational::from_integer(n);
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Int(d)) if d != BigInt::from(0) => {
                            self.pos += 1;
                            q /= Rational::from_integer(d);
                        }
                        Some(Tok::Int(_)) => return self.fail(self.offset(), "division by zero"),
                        _ => return self.fail(self.offset(), "expected an integer denominator"),
                    }
                }
                Ok(self.interp.number(q))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match self.interp.ident(&name) {
                    Ok(v) => Ok(v),
                    Err(m) => self.fail(at, m),
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.fail(self.offset(), "expected `)`");
                }
                self.pos += 1;
                Ok(v)
            }
            Some(t) => self.fail(at, format!("unexpected token {t:?}")),
            None => self.fail(at, "unexpected end of input"),
        }
    }
}

/// Parses `src` with the given semantic actions.
pub fn parse_with<I: Interpret>(src: &str, interp: &I) -> Result<I::Value, ParseError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(ParseError {
            position: 0,
            message: "empty expression".into(),
        });
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
        interp,
    };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return p.fail(p.offset(), "trailing input");
    }
    Ok(v)
}

/// Parses a bare rational literal such as `-3/4`.
pub fn parse_rational(src: &str) -> Result<Rational, ParseError> {
    struct Only;
    impl Interpret for Only {
        type Value = Rational;
        fn number(&self, q: Rational) -> Rational {
            q
        }
        fn ident(&self, name: &str) -> Result<Rational, String> {
            Err(format!("unexpected identifier `{name}` in a number"))
        }
        fn add(&self, a: Rational, b: Rational) -> Result<Rational, String> {
            Ok(a + b)
        }
        fn neg(&self, a: Rational) -> Rational {
            -a
        }
        fn mul(&self, a: Rational, b: Rational) -> Result<Rational, String> {
            Ok(a * b)
        }
        fn pow(&self, a: Rational, e: i64) -> Result<Rational, String> {
            use num_traits::Zero;
            if a.is_zero() && e < 0 {
                return Err("zero to a negative power".into());
            }
            let e = i32::try_from(e).map_err(|_| "exponent out of range".to_string())?;
            Ok(num_traits::Pow::pow(&a, e))
        }
    }
    parse_with(src, &Only)
}

/// Splits a table line `[A,B]=rhs` into its parts.
pub fn split_bracket_entry(line: &str) -> Option<(&str, &str, &str)> {
    let line = line.trim();
    let inner = line.strip_prefix('[')?;
    let close = inner.find(']')?;
    let (pair, rest) = (&inner[..close], &inner[close + 1..]);
    let rhs = rest.trim_start().strip_prefix('=')?;
    let comma = pair.find(',')?;
    Some((pair[..comma].trim(), pair[comma + 1..].trim(), rhs.trim()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rational("-3/6").unwrap(), Rational::new((-1).into(), 2.into()));
        assert_eq!(parse_rational("2^-2").unwrap(), Rational::new(1.into(), 4.into()));
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn glued_suffixes_lex_as_one_identifier() {
        let toks = lex("Q2(-3)*D0_1(1)+x*(y)").unwrap();
        let names: Vec<_> = toks
            .iter()
            .filter_map(|(_, t)| match t {
                Tok::Ident(s) => Some(s.as_str()),
                _ => None,
            })
            .collect();
        assert_eq!(names, ["Q2(-3)", "D0_1(1)", "x", "y"]);
    }

    #[test]
    fn implicit_product_is_rejected() {
        let e = parse_rational("2 3").unwrap_err();
        assert_eq!(e.position, 2);
    }

    #[test]
    fn bracket_entries_split() {
        assert_eq!(split_bracket_entry("[A1, B7] = 2*L12"), Some(("A1", "B7", "2*L12")));
        assert_eq!(split_bracket_entry("A1=B"), None);
    }
}
