//! A small recursive-descent parser for Laurent polynomial expressions.
//!
//! Accepts sums, products, exact quotients, integer powers and parentheses,
//! e.g. `(y+(1+x)^2)/z + z^3/(x*y^2)`.

use num_bigint::BigInt;
use thiserror::Error;

use super::{LaurentError, Poly};
use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    rank: usize,
    names: &'a [String],
}

pub(super) fn parse(rank: usize, names: &[String], expr: &str) -> Result<Poly, LaurentError> {
    let mut p = Parser { src: expr.as_bytes(), pos: 0, rank, names };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input").into());
    }
    Ok(out)
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ParseError {
        ParseError { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly, LaurentError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?)?;
                }
                b'-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, LaurentError> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?)?;
                }
                b'/' => {
                    self.pos += 1;
                    let d = self.unary()?;
                    acc = acc.divide_exact(&d)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, LaurentError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly, LaurentError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.exponent()?;
            return base.powi(k);
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64, LaurentError> {
        let mut sign = 1;
        match self.peek() {
            Some(b'-') => {
                sign = -1;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            Some(b'(') => {
                self.pos += 1;
                let k = self.exponent()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'").into());
                }
                self.pos += 1;
                return Ok(k);
            }
            _ => {}
        }
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.err("expected an integer exponent").into());
        }
        let k: i64 = digits.parse().map_err(|_| self.err("exponent out of range"))?;
        Ok(sign * k)
    }

    fn digits(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<Poly, LaurentError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'").into());
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits();
                let n: BigInt = d.parse().map_err(|_| self.err("bad number"))?;
                Ok(Poly::constant(self.rank, Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                match self.names.iter().position(|n| *n == name) {
                    Some(i) => Ok(Poly::var(self.rank, i)),
                    None => {
                        self.pos = start;
                        Err(self.err(&format!("unknown variable '{name}'")).into())
                    }
                }
            }
            Some(_) => Err(self.err("unexpected character").into()),
            None => Err(self.err("unexpected end of input").into()),
        }
    }
}
