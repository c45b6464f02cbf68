//! Textual encoding of scalars.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr  := ['+' | '-'] term (('+' | '-') term)*
//! term  := power (('*' | '/') power)*
//! power := atom ['^' integer]
//! atom  := integer | 'u' | 'y' | 'w' | '(' expr ')'
//! ```
//!
//! `u` denotes ζ_N for the declared cyclotomic index N. Rationals print as
//! `p/q` or `p`, cyclotomic numbers as `1/2 + 3*u^2` (ascending powers),
//! field scalars as a polynomial in y, w, or `(num)/(den)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::field::{Field, Rational};

use super::bipoly::BiPoly;
use super::cyclo::CycloNumber;
use super::fscalar::FieldScalar;

pub fn parse_rational(s: &str) -> Result<Rational> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let q = Rational::from_str(&t).map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))?;
    Ok(q)
}

pub fn parse_cyclo(s: &str, index: u64) -> Result<CycloNumber> {
    parse_scalar(s, index)?
        .as_cyclo()
        .ok_or_else(|| Error::Parse(format!("{s:?} is not a cyclotomic number")))
}

pub fn parse_scalar(s: &str, index: u64) -> Result<FieldScalar> {
    if index == 0 {
        return Err(Error::Parse("cyclotomic index must be positive".into()));
    }
    let toks = tokenize(s)?;
    let mut p = Parser { toks, pos: 0, index };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in {s:?}")));
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(char),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = cs[st..i].iter().collect();
            out.push(Tok::Int(digits.parse().unwrap()));
        } else if matches!(c, 'u' | 'y' | 'w') {
            out.push(Tok::Var(c));
            i += 1;
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    index: u64,
}

impl Parser {
    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<FieldScalar> {
        let mut neg = false;
        if let Some(c @ ('+' | '-')) = self.peek_op() {
            neg = c == '-';
            self.pos += 1;
        }
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        while let Some(c @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<FieldScalar> {
        let mut acc = self.power()?;
        while let Some(c @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let t = self.power()?;
            acc = if c == '*' { acc.mul(&t) } else { acc.div(&t).ok_or(Error::DivisionByZero)? };
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<FieldScalar> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            let Some(Tok::Int(e)) = self.toks.get(self.pos).cloned() else {
                return Err(Error::Parse("expected exponent".into()));
            };
            self.pos += 1;
            let e: u32 = e.try_into().map_err(|_| Error::Parse("exponent too large".into()))?;
            let mut acc = base.one_like();
            for _ in 0..e {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<FieldScalar> {
        let n = self.index;
        let tok = self.toks.get(self.pos).cloned().ok_or_else(|| Error::Parse("unexpected end of input".into()))?;
        self.pos += 1;
        match tok {
            Tok::Int(k) => Ok(FieldScalar::rational(n, Rational::from_integer(k))),
            Tok::Var('u') => Ok(FieldScalar::from_cyclo(CycloNumber::root_power(n, 1))),
            Tok::Var('y') => Ok(FieldScalar::y(n)),
            Tok::Var('w') => Ok(FieldScalar::w(n)),
            Tok::Op('(') => {
                let v = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                self.pos += 1;
                Ok(v)
            }
            t => Err(Error::Parse(format!("unexpected token {t:?}"))),
        }
    }
}

/// Writes `±q` pieces: returns (is_negative, magnitude string with optional monomial).
fn rational_piece(q: &Rational, mono: &str) -> (bool, String) {
    let neg = q.is_negative();
    let a = q.abs();
    let s = if mono.is_empty() {
        a.to_string()
    } else if a.is_one() {
        mono.to_string()
    } else {
        format!("{a}*{mono}")
    };
    (neg, s)
}

fn join_pieces(pieces: Vec<(bool, String)>) -> String {
    if pieces.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (neg, s)) in pieces.into_iter().enumerate() {
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&s);
    }
    out
}

fn power_str(var: char, e: u32) -> String {
    match e {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{e}"),
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pieces = self
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, q)| !q.is_zero())
            .map(|(i, q)| rational_piece(q, &power_str('u', i as u32)))
            .collect();
        f.write_str(&join_pieces(pieces))
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pieces = self
            .terms()
            .iter()
            .rev()
            .map(|((dy, dw), c)| {
                let mono = [power_str('y', *dy), power_str('w', *dw)]
                    .into_iter()
                    .filter(|s| !s.is_empty())
                    .collect::<Vec<_>>()
                    .join("*");
                match c.as_rational() {
                    Some(q) => rational_piece(q, &mono),
                    None if mono.is_empty() => (false, format!("({c})")),
                    None => (false, format!("({c})*{mono}")),
                }
            })
            .collect();
        f.write_str(&join_pieces(pieces))
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den().is_constant() {
            write!(f, "{}", self.num())
        } else {
            write!(f, "({})/({})", self.num(), self.den())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, rat2};

    #[test]
    fn rational_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), rat2(1, 2));
        assert_eq!(parse_rational(" -7 ").unwrap(), rat(-7));
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn cyclo_text() {
        let c = parse_cyclo("1/2 + 3*u^2", 5).unwrap();
        assert_eq!(c.coeffs()[0], rat2(1, 2));
        assert_eq!(c.coeffs()[2], rat(3));
        assert_eq!(c.to_string(), "1/2 + 3*u^2");
        // u^4 = -1 - u - u^2 - u^3 at N = 5
        assert_eq!(parse_cyclo("u^4", 5).unwrap().to_string(), "-1 - u - u^2 - u^3");
        assert!(parse_cyclo("y", 5).is_err());
    }

    #[test]
    fn scalar_text() {
        let a = parse_scalar("(y^2 - 1)/(y - 1)", 1).unwrap();
        assert_eq!(a.to_string(), "y + 1");
        let b = parse_scalar("(2*u + 1)*y*w - 3/4", 3).unwrap();
        assert_eq!(b.to_string(), "(1 + 2*u)*y*w - 3/4");
        assert_eq!(parse_scalar(&b.to_string(), 3).unwrap(), b);
        let c = parse_scalar("1/(y*w + 2)", 1).unwrap();
        assert_eq!(c.to_string(), "(1)/(y*w + 2)");
        assert_eq!(parse_scalar(&c.to_string(), 1).unwrap(), c);
        assert!(parse_scalar("1/0", 1).is_err());
        assert!(parse_scalar("y +", 1).is_err());
    }
}
