//! Text syntax for bracket expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := '-' term | scalar '*' term | atom
//! atom   := name | '[' expr ',' expr ']' | '(' expr ')'
//! scalar := integer ('/' integer)?
//! ```

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::freelie::{FreeLieAlgebra, FreeLieError, LieElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Name(String),
    Bracket(Box<Expr>, Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Scale(BigInt, BigInt, Box<Expr>),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Name(n) => write!(f, "{n}"),
            Expr::Bracket(a, b) => write!(f, "[{a},{b}]"),
            Expr::Add(a, b) => write!(f, "{a} + {b}"),
            Expr::Sub(a, b) => write!(f, "{a} - ({b})"),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Scale(n, d, a) if d == &BigInt::from(1) => write!(f, "{n}*({a})"),
            Expr::Scale(n, d, a) => write!(f, "{n}/{d}*({a})"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn is_name_start(c: u8) -> bool {
    c.is_ascii_alphabetic() || c == b'_'
}

fn is_name_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_' || c == b'.' || c == b'\''
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos + 1, msg: msg.into() })
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

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => self.err(format!("expected '{}', found '{}'", c as char, x as char)),
            None => self.err(format!("expected '{}', found end of input", c as char)),
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.term()?)))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let d = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let d = self.integer()?;
                    if d == BigInt::from(0) {
                        return self.err("zero denominator");
                    }
                    d
                } else {
                    BigInt::from(1)
                };
                self.expect(b'*')?;
                Ok(Expr::Scale(n, d, Box::new(self.term()?)))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'[') => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(b',')?;
                let b = self.expr()?;
                self.expect(b']')?;
                Ok(Expr::Bracket(Box::new(a), Box::new(b)))
            }
            Some(b'(') => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(b')')?;
                Ok(a)
            }
            Some(c) if is_name_start(c) => {
                let start = self.pos;
                while self.pos < self.src.len() && is_name_char(self.src[self.pos]) {
                    self.pos += 1;
                }
                Ok(Expr::Name(String::from_utf8(self.src[start..self.pos].to_vec()).unwrap()))
            }
            Some(c) => self.err(format!("unexpected '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if let Some(c) = p.peek() {
        return p.err(format!("trailing input at '{}'", c as char));
    }
    Ok(e)
}

/// Evaluates an expression to its Hall normal form.
pub fn normal_form(expr: &Expr, alg: &Arc<FreeLieAlgebra>) -> Result<LieElement, FreeLieError> {
    Ok(match expr {
        Expr::Name(n) => LieElement::named(alg, n)?,
        Expr::Bracket(a, b) => normal_form(a, alg)?.bracket(&normal_form(b, alg)?),
        Expr::Add(a, b) => normal_form(a, alg)?.add(&normal_form(b, alg)?),
        Expr::Sub(a, b) => normal_form(a, alg)?.sub(&normal_form(b, alg)?),
        Expr::Neg(a) => normal_form(a, alg)?.neg(),
        Expr::Scale(n, d, a) => {
            let c = alg
                .field()
                .from_ratio(n, d)
                .map_err(|e| FreeLieError::Parse(ParseError { pos: 0, msg: e.to_string() }))?;
            normal_form(a, alg)?.scale(&c)
        }
    })
}

pub fn parse_element(text: &str, alg: &Arc<FreeLieAlgebra>) -> Result<LieElement, FreeLieError> {
    normal_form(&parse(text)?, alg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::FieldSpec;

    #[test]
    fn parse_and_normalize() {
        let alg = FreeLieAlgebra::on_names(&["x", "y"], FieldSpec::Rationals).unwrap();
        assert!(parse_element("[x, x]", &alg).unwrap().is_zero());
        let yx = parse_element("[y,x]", &alg).unwrap();
        assert_eq!(yx, parse_element("-[x,y]", &alg).unwrap());
        assert!(parse_element("[[x,y],x] + [[y,x],x]", &alg).unwrap().is_zero());
        let e = parse_element("1/2*[x,y] - 3*[x,[x,y]]", &alg).unwrap();
        assert_eq!(parse_element(&e.to_string(), &alg).unwrap(), e);
    }

    #[test]
    fn errors_carry_positions() {
        let alg = FreeLieAlgebra::on_names(&["x", "y"], FieldSpec::Rationals).unwrap();
        assert!(matches!(parse_element("[x,z]", &alg), Err(FreeLieError::UnknownGenerator(_))));
        let e = parse("[x,y").unwrap_err();
        assert_eq!(e.pos, 5);
        assert!(parse("x y").is_err());
        assert!(parse("2 x").is_err());
    }
}
