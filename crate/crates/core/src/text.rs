//! Text form of polynomials: a small expression parser and the canonical
//! printer (terms by y-exponent descending, then x-exponent descending).
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := power (['*'] power)*
//! power  := atom ['^' exponent]
//! atom   := number | 'x' | 'y' | '(' expr ')'
//! number := digits ['/' digits]
//! ```
//! `x` accepts rational exponents (`x^-1`, `x^(1/2)`, `x^1/2`); `y`, numbers
//! and parenthesized expressions accept nonnegative integer exponents.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{Exp, LatticePoint};
use crate::laurentpoly::LaurentPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {offset}: expected one of {}", expected.join(", "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<String>,
}

pub fn parse_poly(text: &str) -> Result<LaurentPoly, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error(&["'+'", "'-'", "'*'", "end of input"]));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

enum Atom {
    X,
    Other(LaurentPoly),
}

impl Parser<'_> {
    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError {
            offset: self.pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<LaurentPoly, ParseError> {
        let mut neg = false;
        if self.eat(b'-') {
            neg = true;
        } else {
            self.eat(b'+');
        }
        let mut acc = self.term()?;
        if neg {
            acc = -&acc;
        }
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly, ParseError> {
        let mut acc = self.power()?;
        loop {
            if self.eat(b'*') || matches!(self.peek(), Some(b'0'..=b'9' | b'x' | b'y' | b'(')) {
                acc = &acc * &self.power()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<LaurentPoly, ParseError> {
        let atom = self.atom()?;
        if !self.eat(b'^') {
            return Ok(match atom {
                Atom::X => LaurentPoly::x(),
                Atom::Other(p) => p,
            });
        }
        match atom {
            Atom::X => {
                let e = self.x_exponent()?;
                Ok(LaurentPoly::monomial(
                    BigRational::one(),
                    LatticePoint::new(e, Exp::zero()),
                ))
            }
            Atom::Other(p) => {
                let n = self.small_int()?;
                Ok(p.pow(n))
            }
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(Atom::X)
            }
            Some(b'y') => {
                self.pos += 1;
                Ok(Atom::Other(LaurentPoly::y()))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error(&["')'"]));
                }
                Ok(Atom::Other(e))
            }
            Some(b'0'..=b'9') => {
                let n = self.number()?;
                Ok(Atom::Other(LaurentPoly::constant(n)))
            }
            _ => Err(self.error(&["number", "'x'", "'y'", "'('"])),
        }
    }

    fn digits(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error(&["digit"]));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn number(&mut self) -> Result<BigRational, ParseError> {
        let n = self.digits()?;
        if self.peek() == Some(b'/')
            && self
                .src
                .get(self.pos + 1)
                .is_some_and(|c| c.is_ascii_digit() || c.is_ascii_whitespace())
        {
            self.pos += 1;
            let at = self.pos;
            let d = self.digits()?;
            if d.is_zero() {
                return Err(ParseError {
                    offset: at,
                    expected: vec!["positive integer".into()],
                });
            }
            return Ok(BigRational::new(n, d));
        }
        Ok(BigRational::from_integer(n))
    }

    fn small_int(&mut self) -> Result<u32, ParseError> {
        if self.eat(b'(') {
            let n = self.small_int()?;
            if !self.eat(b')') {
                return Err(self.error(&["')'"]));
            }
            return Ok(n);
        }
        let at = self.peek().map(|_| self.pos).unwrap_or(self.pos);
        let n = self.digits()?;
        u32::try_from(n).map_err(|_| ParseError {
            offset: at,
            expected: vec!["exponent below 2^32".into()],
        })
    }

    fn signed_rational(&mut self) -> Result<Exp, ParseError> {
        let neg = self.eat(b'-');
        let at = self.peek().map(|_| self.pos).unwrap_or(self.pos);
        let r = self.number()?;
        let to_i64 = |b: &BigInt| i64::try_from(b.clone()).ok();
        match (to_i64(r.numer()), to_i64(r.denom())) {
            (Some(n), Some(d)) => Ok(Exp::new(if neg { -n } else { n }, d)),
            _ => Err(ParseError {
                offset: at,
                expected: vec!["exponent within 64 bits".into()],
            }),
        }
    }

    fn x_exponent(&mut self) -> Result<Exp, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.signed_rational()?;
                if !self.eat(b')') {
                    return Err(self.error(&["')'"]));
                }
                Ok(e)
            }
            Some(b'-' | b'0'..=b'9') => self.signed_rational(),
            _ => Err(self.error(&["integer", "'-'", "'('"])),
        }
    }
}

fn fmt_x(e: Exp) -> String {
    if e == Exp::one() {
        "x".into()
    } else if e.is_integer() && e.is_positive() {
        format!("x^{e}")
    } else {
        format!("x^({e})")
    }
}

fn fmt_y(e: Exp) -> String {
    if e == Exp::one() {
        "y".into()
    } else {
        format!("y^{e}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&LatticePoint, &BigRational)> = self.terms().collect();
        terms.sort_by(|a, b| b.0.y.cmp(&a.0.y).then(b.0.x.cmp(&a.0.x)));
        for (i, (p, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut parts = Vec::new();
            if !p.x.is_zero() {
                parts.push(fmt_x(p.x));
            }
            if !p.y.is_zero() {
                parts.push(fmt_y(p.y));
            }
            let a = c.abs();
            if parts.is_empty() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write!(f, "{}", parts.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grammar() {
        let p = parse_poly("x^3*y + x").unwrap();
        assert_eq!(p.to_string(), "x^3*y + x");
        let g = parse_poly("-(1/2)*(1+x^2*y)^2").unwrap();
        assert_eq!(g.to_string(), "-1/2*x^4*y^2 - x^2*y - 1/2");
        assert_eq!(parse_poly("9x^14y^8").unwrap().to_string(), "9*x^14*y^8");
        assert_eq!(
            parse_poly("x^-1 + x^(1/2) + x^1/2").unwrap().to_string(),
            "2*x^(1/2) + x^(-1)"
        );
        assert_eq!(parse_poly("3/4").unwrap().to_string(), "3/4");
        assert_eq!(parse_poly(" 0 ").unwrap().to_string(), "0");
        assert_eq!(parse_poly("x - x").unwrap().to_string(), "0");
    }

    #[test]
    fn reports_offsets() {
        let e = parse_poly("x^^2").unwrap_err();
        assert_eq!(e.offset, 2);
        assert!(parse_poly("x +").is_err());
        assert_eq!(parse_poly("(x+1").unwrap_err().offset, 4);
        assert_eq!(parse_poly("x y)").unwrap_err().offset, 3);
        assert!(parse_poly("y^(1/2)").is_err());
        assert!(parse_poly("1/0").is_err());
    }

    #[test]
    fn canonical_round_trip() {
        for s in ["x^3*y + x", "-1/2*x^4*y^2 - x^2*y - 1/2", "x^(-3/2)*y^2 + 7", "y"] {
            let p = parse_poly(s).unwrap();
            assert_eq!(p.to_string(), s);
            assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
        }
    }
}
