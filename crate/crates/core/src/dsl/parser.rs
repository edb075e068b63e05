//! Recursive-descent parser for prepotential expressions.
//!
//! Grammar (whitespace insignificant):
//!
//! ```plain
//! expr     -> term (('+' | '-') term)*
//! term     -> unary (('*' | '/') unary)*
//! unary    -> '-' unary | power
//! power    -> primary ('^' unary)?
//! primary  -> number | 'i' | 'z' digits | ('exp' | 'log') '(' expr ')' | '(' expr ')'
//! ```
//!
//! The exponent after `^` must fold to an integer constant, so `z1^-2` and
//! `z1^(2*3)` are accepted while `z1^(1/2)` and `z1^z2` are not.

use num_complex::Complex64;
use thiserror::Error;

use super::expr::{Expr, Func};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("empty expression")]
    Empty,
    #[error("unexpected character '{0}'")]
    UnexpectedChar(char),
    #[error("unexpected {0}")]
    UnexpectedToken(String),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unknown identifier '{0}'")]
    UnknownIdentifier(String),
    #[error("variable index out of range: z{index} with arity {arity}")]
    VariableOutOfRange { index: usize, arity: usize },
    #[error("non-integer exponent")]
    NonIntegerExponent,
    #[error("malformed number '{0}'")]
    BadNumber(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("syntax error at position {pos}: {kind}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the source.
    pub pos: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Imag,
    Var(usize),
    Func(Func),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(x) => format!("number {x}"),
            Tok::Imag => "'i'".into(),
            Tok::Var(k) => format!("variable z{k}"),
            Tok::Func(f) => format!("function {}", f.name()),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
        }
    }
}

fn err(kind: ParseErrorKind, pos: usize) -> ParseError {
    ParseError { kind, pos }
}

fn tokenize(src: &str, arity: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((t, start));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == b'.' {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            let text = &src[start..i];
            if text.matches('.').count() > 1 || text == "." {
                return Err(err(ParseErrorKind::BadNumber(text.into()), start));
            }
            let value: f64 = text
                .parse()
                .map_err(|_| err(ParseErrorKind::BadNumber(text.into()), start))?;
            out.push((Tok::Num(value), start));
            continue;
        }
        if c.is_ascii_alphabetic() {
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let word = &src[start..i];
            let tok = match word {
                "i" => Tok::Imag,
                "exp" => Tok::Func(Func::Exp),
                "log" => Tok::Func(Func::Log),
                w if w.len() > 1
                    && w.starts_with('z')
                    && w[1..].bytes().all(|b| b.is_ascii_digit()) =>
                {
                    let index: usize = w[1..]
                        .parse()
                        .map_err(|_| err(ParseErrorKind::UnknownIdentifier(w.into()), start))?;
                    if index == 0 || index > arity {
                        return Err(err(
                            ParseErrorKind::VariableOutOfRange { index, arity },
                            start,
                        ));
                    }
                    Tok::Var(index)
                }
                w => return Err(err(ParseErrorKind::UnknownIdentifier(w.into()), start)),
            };
            out.push((tok, start));
            continue;
        }
        let ch = src[start..].chars().next().unwrap_or('?');
        return Err(err(ParseErrorKind::UnexpectedChar(ch), start));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        let at = self.offset();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(err(ParseErrorKind::UnexpectedToken(t.describe()), at)),
            None => Err(err(ParseErrorKind::UnexpectedEnd, at)),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::add(lhs, self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Expr::mul(lhs, self.unary()?);
                }
                Some(Tok::Slash) => {
                    self.bump();
                    lhs = Expr::div(lhs, self.unary()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            return Ok(Expr::neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let at = self.offset();
            let exponent = self.unary()?;
            let n = integer_exponent(&exponent).ok_or(err(ParseErrorKind::NonIntegerExponent, at))?;
            return Ok(Expr::pow(base, n));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Num(x)) => Ok(Expr::real(x)),
            Some(Tok::Imag) => Ok(Expr::constant(Complex64::new(0.0, 1.0))),
            Some(Tok::Var(k)) => Ok(Expr::var(k - 1)),
            Some(Tok::Func(f)) => {
                self.expect(Tok::LParen)?;
                let arg = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(Expr::call(f, arg))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Some(t) => Err(err(ParseErrorKind::UnexpectedToken(t.describe()), at)),
            None => Err(err(ParseErrorKind::UnexpectedEnd, at)),
        }
    }
}

fn integer_exponent(e: &Expr) -> Option<i32> {
    let c = e.as_const()?;
    if c.im != 0.0 || c.re.fract() != 0.0 || c.re.abs() > i32::MAX as f64 {
        return None;
    }
    Some(c.re as i32)
}

/// Parses `text` as a function of `z1..z{arity}`.
pub fn parse(text: &str, arity: usize) -> Result<Expr, ParseError> {
    let toks = tokenize(text, arity)?;
    if toks.is_empty() {
        return Err(err(ParseErrorKind::Empty, 0));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        let (t, at) = &p.toks[p.pos];
        return Err(err(ParseErrorKind::UnexpectedToken(t.describe()), *at));
    }
    Ok(e)
}
