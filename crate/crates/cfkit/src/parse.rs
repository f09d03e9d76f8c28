//! Parser for rational-function expressions and exact rational literals.
//!
//! Grammar: `+ - * / ^` with the usual precedence, parentheses, unary minus,
//! integer / decimal / `p/q` literals, and identifiers drawn from a
//! caller-supplied allow list. Decimals are exact (1.25 = 5/4); exponents are
//! non-negative integers.

use num_bigint::BigInt;

use crate::poly::var_index;
use crate::ratfunc::RatFunc;
use crate::rational::{pow10, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    UnexpectedChar { pos: usize, ch: char },
    UnexpectedEnd,
    UnknownIdent { pos: usize, name: String },
    BadNumber { pos: usize },
    BadExponent { pos: usize },
    TrailingInput { pos: usize },
    DivisionByZero { pos: usize },
    NotConstant,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParseError::UnexpectedChar { pos, ch } => {
                write!(f, "unexpected character '{ch}' at byte {pos}")
            }
            ParseError::UnexpectedEnd => write!(f, "unexpected end of expression"),
            ParseError::UnknownIdent { pos, name } => {
                write!(f, "unknown identifier '{name}' at byte {pos}")
            }
            ParseError::BadNumber { pos } => write!(f, "malformed number at byte {pos}"),
            ParseError::BadExponent { pos } => {
                write!(f, "exponent at byte {pos} must be a non-negative integer")
            }
            ParseError::TrailingInput { pos } => {
                write!(f, "unparsed input starting at byte {pos}")
            }
            ParseError::DivisionByZero { pos } => {
                write!(f, "division by an identically zero expression at byte {pos}")
            }
            ParseError::NotConstant => write!(f, "expected a constant expression"),
        }
    }
}

impl std::error::Error for ParseError {}

/// Parse an expression over the named variables. Every identifier must be in
/// `allowed` and must name a variable of the polynomial universe.
pub fn parse_ratfunc(src: &str, allowed: &[&str]) -> Result<RatFunc, ParseError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, allowed };
    p.skip_ws();
    let rf = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(ParseError::TrailingInput { pos: p.pos });
    }
    Ok(rf)
}

/// Parse an exact rational: integer, `p/q`, or finite decimal. Arithmetic on
/// constants is allowed ("3/4", "-(1+2)/8"), variables are not.
pub fn parse_q(src: &str) -> Result<Q, ParseError> {
    let rf = parse_ratfunc(src, &[])?;
    rf.num()
        .as_constant()
        .zip(rf.den().as_constant())
        .map(|(n, d)| n / d)
        .ok_or(ParseError::NotConstant)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    allowed: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RatFunc, ParseError> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc, ParseError> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(b'/') => {
                    let at = self.pos;
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = acc
                        .div(&rhs)
                        .map_err(|_| ParseError::DivisionByZero { pos: at })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RatFunc, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.factor()
            }
            _ => {
                let base = self.atom()?;
                self.skip_ws();
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.skip_ws();
                    let at = self.pos;
                    let e = self.uint()?;
                    let e: u32 = e.try_into().map_err(|_| ParseError::BadExponent { pos: at })?;
                    Ok(base.pow(e))
                } else {
                    Ok(base)
                }
            }
        }
    }

    fn atom(&mut self) -> Result<RatFunc, ParseError> {
        self.skip_ws();
        match self.peek() {
            None => Err(ParseError::UnexpectedEnd),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return match self.peek() {
                        None => Err(ParseError::UnexpectedEnd),
                        Some(c) => Err(ParseError::UnexpectedChar { pos: self.pos, ch: c as char }),
                    };
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.ident(),
            Some(c) => Err(ParseError::UnexpectedChar { pos: self.pos, ch: c as char }),
        }
    }

    fn uint(&mut self) -> Result<u64, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ParseError::BadExponent { pos: start });
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| ParseError::BadExponent { pos: start })
    }

    fn number(&mut self) -> Result<RatFunc, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let int_part: BigInt = std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| ParseError::BadNumber { pos: start })?;
        if self.peek() == Some(b'.') {
            self.pos += 1;
            let fstart = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if fstart == self.pos {
                return Err(ParseError::BadNumber { pos: start });
            }
            let frac: BigInt = std::str::from_utf8(&self.src[fstart..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| ParseError::BadNumber { pos: start })?;
            let scale = pow10(self.pos - fstart);
            let v = Q::new(int_part * &scale + frac, scale);
            return Ok(RatFunc::constant(v));
        }
        Ok(RatFunc::constant(Q::from_integer(int_part)))
    }

    fn ident(&mut self) -> Result<RatFunc, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        if !self.allowed.contains(&name) {
            return Err(ParseError::UnknownIdent { pos: start, name: name.to_string() });
        }
        match var_index(name) {
            Some(idx) => Ok(RatFunc::var(idx)),
            None => Err(ParseError::UnknownIdent { pos: start, name: name.to_string() }),
        }
    }
}
