//! Text front end for polynomials.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' int)?
//! atom   := int ('/' int)? | var | '(' expr ')'
//! var    := ('x' | 'z') (digits | '{' digits '}')
//! ```
//!
//! `z` is accepted as an alias of `x` so relation reports re-parse.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::{Monomial, Polynomial};
use crate::{rational, Error, Rational, Result};

pub fn parse_poly(text: &str, nvars: usize) -> Result<Polynomial> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, nvars };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.to_string() }
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

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
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

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while self.eat(b'*') {
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            let k: u32 = digits
                .parse()
                .map_err(|_| Error::Syntax { pos: start, msg: "expected a non-negative integer exponent".into() })?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits().parse().expect("digits");
                let save = self.pos;
                if self.eat(b'/') {
                    self.skip_ws();
                    let ds = self.digits();
                    if ds.is_empty() {
                        self.pos = save;
                        return Err(self.error("expected a denominator after `/`"));
                    }
                    let den: BigInt = ds.parse().expect("digits");
                    if !den.is_positive() {
                        return Err(self.error("zero denominator"));
                    }
                    return Ok(Polynomial::constant(self.nvars, Rational::new(num, den)));
                }
                Ok(Polynomial::constant(self.nvars, Rational::from_integer(num)))
            }
            Some(b'x') | Some(b'z') => {
                let start = self.pos;
                self.pos += 1;
                let braced = self.src.get(self.pos) == Some(&b'{');
                if braced {
                    self.pos += 1;
                }
                let ds = self.digits();
                if braced && self.src.get(self.pos) != Some(&b'}') {
                    return Err(self.error("expected `}`"));
                }
                if braced {
                    self.pos += 1;
                }
                let index: usize =
                    ds.parse().map_err(|_| Error::Syntax { pos: start, msg: "expected a variable index".into() })?;
                if index == 0 || index > self.nvars {
                    return Err(Error::VariableOutOfRange { index, nvars: self.nvars });
                }
                Ok(Polynomial::var(self.nvars, index - 1))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Canonical text, descending lexicographic order, variables named `x`.
pub fn format_poly(p: &Polynomial) -> String {
    format_poly_with(p, 'x')
}

/// Canonical text with a custom variable letter (`z` for relations).
pub fn format_poly_with(p: &Polynomial, letter: char) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let abs = c.abs();
        let mono = format_monomial(m, letter);
        match (abs.is_one(), mono.is_empty()) {
            (true, false) => out.push_str(&mono),
            (_, true) => out.push_str(&rational::format(&abs)),
            (false, false) => {
                out.push_str(&rational::format(&abs));
                out.push('*');
                out.push_str(&mono);
            }
        }
    }
    out
}

fn format_monomial(m: &Monomial, letter: char) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let k = i + 1;
        let var = if k < 10 { format!("{letter}{k}") } else { format!("{letter}{{{k}}}") };
        parts.push(if e == 1 { var } else { format!("{var}^{e}") });
    }
    parts.join("*")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn parses_sums() {
        let p = parse_poly("x1 + x2", 2).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.coeff(&Monomial::var(2, 0)), int(1));
        assert_eq!(parse_poly("x3^2 + 5*x2^3", 3).unwrap().len(), 2);
    }

    #[test]
    fn distributes() {
        let p = parse_poly("-2*x2*(x1*x3+x2^2)", 3).unwrap();
        assert_eq!(format_poly(&p), "-2*x1*x2*x3 - 2*x2^3");
    }

    #[test]
    fn rational_literals_and_unary_minus() {
        let p = parse_poly("3/2*x1 - -x2^2", 2).unwrap();
        assert_eq!(format_poly(&p), "3/2*x1 + x2^2");
        assert_eq!(format_poly(&parse_poly("-x1^2", 1).unwrap()), "-x1^2");
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse_poly("x1 + * x2", 2), Err(Error::Syntax { pos: 5, .. })));
        assert_eq!(parse_poly("x3", 2), Err(Error::VariableOutOfRange { index: 3, nvars: 2 }));
        assert!(parse_poly("(x1", 1).is_err());
        assert!(parse_poly("1/0", 1).is_err());
    }

    #[test]
    fn wide_variables() {
        let p = parse_poly("x{12}^2 + x10 - z1", 12).unwrap();
        assert_eq!(format_poly(&p), "-x1 + x{10} + x{12}^2");
        assert_eq!(parse_poly(&format_poly(&p), 12).unwrap(), p);
        assert_eq!(format_poly_with(&parse_poly("x1-x2^2", 2).unwrap(), 'z'), "z1 - z2^2");
    }
}
