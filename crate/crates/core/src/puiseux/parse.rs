//! Recursive-descent parser for series such as `x^(5/2) - 2*zeta(4)^1*x^(11/4)`.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::PuiseuxSeries;
use crate::arith::cyclotomic::CyclotomicNumber;
use crate::arith::{lcm_u64, Rational};
use crate::error::{Error, Result};

/// Parses a Newton-Puiseux polynomial.
///
/// The literal `0` denotes the branch `Z(y)`. Positions in errors are byte
/// offsets into `text`.
pub fn parse_branch(text: &str) -> Result<PuiseuxSeries> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.at_end() {
        return Err(Error::parse(0, "empty series"));
    }
    let mut terms: Vec<(usize, Rational, CyclotomicNumber)> = Vec::new();
    let mut first = true;
    loop {
        p.skip_ws();
        let start = p.pos;
        let mut negative = false;
        if !first {
            match p.peek() {
                Some(b'+') => p.pos += 1,
                Some(b'-') => {
                    p.pos += 1;
                    negative = true;
                }
                _ => return Err(p.error("expected '+' or '-'")),
            }
        }
        let (exp, coeff) = p.term()?;
        let coeff = if negative { coeff.neg() } else { coeff };
        terms.push((start, exp, coeff));
        first = false;
        p.skip_ws();
        if p.at_end() {
            break;
        }
    }

    if terms.len() == 1 && terms[0].1.is_zero() && terms[0].2.is_zero() {
        return Ok(PuiseuxSeries::zero());
    }
    for (i, (pos, exp, coeff)) in terms.iter().enumerate() {
        if exp.is_zero() {
            return Err(Error::parse(*pos, "constant term: a branch must pass through the origin"));
        }
        if coeff.is_zero() {
            return Err(Error::parse(*pos, "zero coefficient"));
        }
        if terms[..i].iter().any(|(_, e, _)| e == exp) {
            return Err(Error::parse(*pos, format!("duplicate exponent {}", exp)));
        }
    }
    PuiseuxSeries::new(terms.into_iter().map(|(_, e, c)| (e, c)).collect())
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        let found = match self.peek() {
            Some(c) => format!("{}, found {:?}", msg, c as char),
            None => format!("{}, found end of input", msg),
        };
        Error::parse(self.pos, found)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {:?}", c as char)))
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    /// `[sign] (coeff ["*" monomial] | monomial)`; returns (exponent, coefficient).
    fn term(&mut self) -> Result<(Rational, CyclotomicNumber)> {
        let negative = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        self.skip_ws();
        let (exp, coeff) = if self.peek() == Some(b'x') {
            (self.monomial()?, CyclotomicNumber::one(1))
        } else {
            let coeff = self.coefficient()?;
            if self.eat(b'*') {
                (self.monomial()?, coeff)
            } else {
                (Rational::zero(), coeff)
            }
        };
        Ok((exp, if negative { coeff.neg() } else { coeff }))
    }

    /// `"x" ["^" (int | "(" rational ")")]`.
    fn monomial(&mut self) -> Result<Rational> {
        self.skip_ws();
        if self.peek() != Some(b'x') {
            return Err(self.error("expected 'x'"));
        }
        self.pos += 1;
        if !self.eat(b'^') {
            return Ok(Rational::from_integer(1.into()));
        }
        let start = self.pos;
        let exp = if self.eat(b'(') {
            let r = self.rational(true)?;
            self.expect(b')')?;
            r
        } else {
            self.rational(false)?
        };
        if exp.is_negative() {
            return Err(Error::parse(start, "negative exponent"));
        }
        Ok(exp)
    }

    /// A product of factors, each a rational, a root of unity or a
    /// parenthesised sum.
    fn coefficient(&mut self) -> Result<CyclotomicNumber> {
        let mut acc = self.factor()?;
        loop {
            let save = self.pos;
            if !self.eat(b'*') {
                break;
            }
            self.skip_ws();
            if self.peek() == Some(b'x') {
                self.pos = save;
                break;
            }
            let f = self.factor()?;
            acc = mul_lifted(&acc, &f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<CyclotomicNumber> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.coefficient_sum()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(b'z') => self.zeta(),
            Some(c) if c.is_ascii_digit() => {
                let r = self.rational(true)?;
                Ok(CyclotomicNumber::from_rational(1, r))
            }
            _ => Err(self.error("expected a coefficient or 'x'")),
        }
    }

    fn coefficient_sum(&mut self) -> Result<CyclotomicNumber> {
        let mut negative = self.eat(b'-');
        let mut acc: Option<CyclotomicNumber> = None;
        loop {
            let v = self.coefficient()?;
            let v = if negative { v.neg() } else { v };
            acc = Some(match acc {
                Some(a) => add_lifted(&a, &v),
                None => v,
            });
            if self.eat(b'+') {
                negative = false;
            } else if self.eat(b'-') {
                negative = true;
            } else {
                break;
            }
        }
        Ok(acc.expect("at least one summand"))
    }

    /// `"zeta(" m ")" ["^" k]`.
    fn zeta(&mut self) -> Result<CyclotomicNumber> {
        let start = self.pos;
        if !self.eat_keyword("zeta") {
            return Err(self.error("expected 'zeta'"));
        }
        self.expect(b'(')?;
        let m = self.integer()?;
        self.expect(b')')?;
        let k = if self.eat(b'^') { self.integer()? } else { BigInt::from(1) };
        let m: u64 = (&m)
            .try_into()
            .ok()
            .filter(|&m| m >= 1 && m <= 1 << 16)
            .ok_or_else(|| Error::parse(start, "root order must be a positive integer"))?;
        let k: i64 = (&k % BigInt::from(m))
            .try_into()
            .map_err(|_| Error::parse(start, "invalid root exponent"))?;
        crate::arith::cyclotomic::embed_root(m, k, m)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let parsed = core::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii")
            .parse::<BigInt>();
        parsed.map_err(|_| {
            self.pos = start;
            self.error("expected an integer")
        })
    }

    /// `int ["/" int]`; the slash is only consumed when `allow_slash` is set.
    fn rational(&mut self, allow_slash: bool) -> Result<Rational> {
        let start = self.pos;
        let num = self.integer()?;
        let den = if allow_slash && self.eat(b'/') { self.integer()? } else { BigInt::from(1) };
        if den.is_zero() {
            return Err(Error::parse(start, "zero denominator"));
        }
        Ok(Rational::new(num, den))
    }
}

fn common_order(a: &CyclotomicNumber, b: &CyclotomicNumber) -> (CyclotomicNumber, CyclotomicNumber) {
    let n = lcm_u64(a.order(), b.order());
    (a.lift(n).expect("multiple"), b.lift(n).expect("multiple"))
}

fn mul_lifted(a: &CyclotomicNumber, b: &CyclotomicNumber) -> CyclotomicNumber {
    let (a, b) = common_order(a, b);
    a.mul(&b).expect("same order")
}

fn add_lifted(a: &CyclotomicNumber, b: &CyclotomicNumber) -> CyclotomicNumber {
    let (a, b) = common_order(a, b);
    a.add(&b).expect("same order")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn parses_the_running_example() {
        let s = parse_branch("x^2").unwrap();
        assert_eq!(s.ramification_index(), 1);
        assert_eq!(s.terms().len(), 1);
        assert_eq!(s.terms()[0].0, int(2));

        let s = parse_branch("x^(5/2) + x^(8/3)").unwrap();
        assert_eq!(s.ramification_index(), 6);
        assert_eq!(s.support().cloned().collect::<Vec<_>>(), [rat(5, 2), rat(8, 3)]);

        let s = parse_branch("-x^(5/2) + x^(11/4)").unwrap();
        assert_eq!(s.ramification_index(), 4);
        assert_eq!(s.coefficient(&rat(5, 2)).unwrap().as_rational(), Some(&int(-1)));
    }

    #[test]
    fn coefficients_and_roots() {
        let s = parse_branch("2*zeta(4)^3*x^(9/4) - 1/3*x^3").unwrap();
        assert_eq!(s.field_order(), 4);
        let c = s.coefficient(&rat(9, 4)).unwrap();
        assert_eq!(c, &crate::embed_root(4, 3, 4).unwrap().scale(&int(2)));
        assert_eq!(s.coefficient(&int(3)).unwrap().as_rational(), Some(&rat(-1, 3)));

        let s = parse_branch("zeta(3)^2 * x + x^(3/2)").unwrap();
        assert_eq!(s.field_order(), 6);
        let s = parse_branch("x + x^(3/2) + x ^ 4").unwrap();
        assert_eq!(s.terms().len(), 3);
    }

    #[test]
    fn zero_is_the_y_axis() {
        assert!(parse_branch(" 0 ").unwrap().is_zero());
    }

    #[test]
    fn reports_positions() {
        let err = |s: &str| match parse_branch(s) {
            Err(Error::Parse { position, .. }) => position,
            other => panic!("expected parse error for {s:?}, got {other:?}"),
        };
        assert_eq!(err("x^2 + x^2"), 4);
        assert_eq!(err("x^(-1/2)"), 2);
        assert_eq!(err("x^2 +"), 5);
        assert_eq!(err("x^2 * 3"), 4);
        assert_eq!(err("1 + x^2"), 0);
        assert_eq!(err(""), 0);
        assert_eq!(err("x^(1/0)"), 3);
        assert_eq!(err("0*x^2"), 0);
        assert_eq!(err("y^2"), 0);
    }
}
