//! Newton-Puiseux polynomials `y = η(x)` with cyclotomic coefficients.

mod branch;
mod parse;

pub use branch::{intersection_oracle, multiplicity_origin, Branch, BranchRecord};
pub use parse::parse_branch;

use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::cyclotomic::CyclotomicNumber;
use crate::arith::{denom_u64, lcm_u64, Ext, Rational};
use crate::error::{Error, Result};

/// A finite Newton-Puiseux series.
///
/// All coefficients live in one field `Q(ζ_N)` whose order `N` is a multiple
/// of the ramification index, so conjugation never leaves the field.
#[derive(Clone)]
pub struct PuiseuxSeries {
    n: u64,
    field_order: u64,
    terms: Vec<(Rational, CyclotomicNumber)>,
}

impl PuiseuxSeries {
    /// The zero series, which parametrizes the branch `Z(y)`.
    pub fn zero() -> Self {
        PuiseuxSeries { n: 1, field_order: 1, terms: Vec::new() }
    }

    /// Builds a series from `(exponent, coefficient)` pairs in any order.
    ///
    /// Zero coefficients are dropped. Exponents must be positive and distinct.
    pub fn new(terms: Vec<(Rational, CyclotomicNumber)>) -> Result<Self> {
        let mut terms: Vec<_> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        for w in terms.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::parse(0, alloc::format!("duplicate exponent {}", w[0].0)));
            }
        }
        if let Some((e, _)) = terms.first() {
            if !e.is_positive() {
                return Err(Error::parse(0, alloc::format!("exponent {} is not positive", e)));
            }
        }
        let n = terms.iter().fold(1, |acc, (e, _)| lcm_u64(acc, denom_u64(e)));
        let field_order = terms.iter().fold(n, |acc, (_, c)| lcm_u64(acc, c.order()));
        let terms = terms
            .into_iter()
            .map(|(e, c)| c.lift(field_order).map(|c| (e, c)))
            .collect::<Result<_>>()?;
        Ok(PuiseuxSeries { n, field_order, terms })
    }

    /// Builds a series with rational coefficients.
    pub fn from_rational_terms(terms: &[(Rational, Rational)]) -> Result<Self> {
        Self::new(
            terms
                .iter()
                .map(|(e, c)| (e.clone(), CyclotomicNumber::from_rational(1, c.clone())))
                .collect(),
        )
    }

    pub fn ramification_index(&self) -> u64 {
        self.n
    }

    pub fn field_order(&self) -> u64 {
        self.field_order
    }

    pub fn terms(&self) -> &[(Rational, CyclotomicNumber)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &Rational> {
        self.terms.iter().map(|(e, _)| e)
    }

    pub fn coefficient(&self, exponent: &Rational) -> Option<&CyclotomicNumber> {
        self.terms
            .binary_search_by(|(e, _)| e.cmp(exponent))
            .ok()
            .map(|i| &self.terms[i].1)
    }

    /// `ν_x`, the least exponent of the support.
    pub fn order(&self) -> Ext {
        match self.terms.first() {
            Some((e, _)) => Ext::Finite(e.clone()),
            None => Ext::Infinite,
        }
    }

    /// Re-expresses every coefficient in `Q(ζ_order)`.
    pub fn lift(&self, order: u64) -> Result<Self> {
        if order % self.field_order != 0 {
            return Err(Error::RootOrder(self.field_order, order));
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| c.lift(order).map(|c| (e.clone(), c)))
            .collect::<Result<_>>()?;
        Ok(PuiseuxSeries { n: self.n, field_order: order, terms })
    }

    /// Substitutes `x^{1/n} ↦ ζ_n^k x^{1/n}`.
    pub fn conjugate(&self, k: u64) -> Self {
        let k = k % self.n;
        if k == 0 {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let p = (e * Rational::from_integer(self.n.into())).to_integer();
                let p = (p % num_bigint::BigInt::from(self.n)).try_into().unwrap_or(0i64);
                let root = c.root_like(self.n, k as i64 * p).expect("field contains ζ_n");
                (e.clone(), c.mul(&root).expect("same field"))
            })
            .collect();
        PuiseuxSeries { n: self.n, field_order: self.field_order, terms }
    }

    /// `self - other`, computed in the compositum of both coefficient fields.
    pub fn sub(&self, other: &Self) -> Self {
        let order = lcm_u64(self.field_order, other.field_order);
        let a = self.lift(order).expect("multiple of own order");
        let b = other.lift(order).expect("multiple of own order");
        let mut terms = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() || j < b.terms.len() {
            let take_a = j == b.terms.len() || (i < a.terms.len() && a.terms[i].0 < b.terms[j].0);
            let take_b = i == a.terms.len() || (j < b.terms.len() && b.terms[j].0 < a.terms[i].0);
            if take_a {
                terms.push(a.terms[i].clone());
                i += 1;
            } else if take_b {
                let (e, c) = &b.terms[j];
                terms.push((e.clone(), c.neg()));
                j += 1;
            } else {
                let d = a.terms[i].1.sub(&b.terms[j].1).expect("same field");
                if !d.is_zero() {
                    terms.push((a.terms[i].0.clone(), d));
                }
                i += 1;
                j += 1;
            }
        }
        let n = terms.iter().fold(1, |acc, (e, _)| lcm_u64(acc, denom_u64(e)));
        PuiseuxSeries { n, field_order: order, terms }
    }

    /// The terms of exponent strictly below `bound`.
    pub fn truncate_below(&self, bound: &Rational) -> Self {
        let terms: Vec<_> = self.terms.iter().filter(|(e, _)| e < bound).cloned().collect();
        let n = terms.iter().fold(1, |acc, (e, _)| lcm_u64(acc, denom_u64(e)));
        PuiseuxSeries { n, field_order: self.field_order, terms }
    }

    /// Adds a term whose exponent exceeds the whole support.
    pub fn push_term(&self, exponent: Rational, coeff: CyclotomicNumber) -> Result<Self> {
        if let Some((last, _)) = self.terms.last() {
            if &exponent <= last {
                return Err(Error::OutOfRange(alloc::format!(
                    "exponent {} does not exceed {}",
                    exponent,
                    last
                )));
            }
        }
        let mut terms = self.terms.clone();
        terms.push((exponent, coeff));
        Self::new(terms)
    }

    /// Exponents at which the running common denominator strictly grows.
    pub fn characteristic_exponents(&self) -> Vec<Rational> {
        let mut e = 1;
        let mut out = Vec::new();
        for (exp, _) in &self.terms {
            let d = denom_u64(exp);
            if e % d != 0 {
                out.push(exp.clone());
                e = e.lcm(&d);
            }
        }
        debug_assert_eq!(e, self.n);
        out
    }

    /// The index at `alpha`: lcm of the denominators of the characteristic
    /// exponents strictly smaller than `alpha`.
    pub fn index_at(&self, alpha: &Ext) -> u64 {
        let mut e = 1;
        for (exp, _) in &self.terms {
            if &Ext::Finite(exp.clone()) >= alpha {
                break;
            }
            e = e.lcm(&denom_u64(exp));
        }
        e
    }

    /// Order of coincidence `k(self, other)`: the largest order of
    /// `self - other'` over the conjugates `other'` of `other`.
    pub fn coincidence_order(&self, other: &Self) -> Ext {
        (0..other.n)
            .map(|k| self.sub(&other.conjugate(k)).order())
            .max()
            .expect("at least one conjugate")
    }

    pub fn same_branch(&self, other: &Self) -> bool {
        self.n == other.n && self.coincidence_order(other).is_infinite()
    }
}

impl PartialEq for PuiseuxSeries {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.terms.len() == other.terms.len()
            && self.sub(other).is_zero()
    }
}

impl Eq for PuiseuxSeries {}

impl fmt::Debug for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PuiseuxSeries(n={}, {})", self.n, self)
    }
}

/// Writes the series in the input grammar; the output parses back to an equal
/// series.
impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let (negative, body) = coefficient_text(c);
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if let Some(body) = body {
                write!(f, "{}*", body)?;
            }
            if e.is_integer() {
                if e.is_one() {
                    f.write_str("x")?;
                } else {
                    write!(f, "x^{}", e)?;
                }
            } else {
                write!(f, "x^({})", e)?;
            }
        }
        Ok(())
    }
}

/// Splits a coefficient into a sign and a magnitude text, `None` meaning 1.
fn coefficient_text(c: &CyclotomicNumber) -> (bool, Option<alloc::string::String>) {
    use alloc::string::ToString;
    let nonzero: Vec<_> = c.coords().iter().enumerate().filter(|(_, a)| !a.is_zero()).collect();
    if nonzero.len() == 1 {
        let (i, a) = nonzero[0];
        let negative = a.is_negative();
        let mag = a.abs();
        let body = match (i, mag.is_one()) {
            (0, true) => None,
            (0, false) => Some(mag.to_string()),
            (_, true) => Some(alloc::format!("zeta({})^{}", c.order(), i)),
            (_, false) => Some(alloc::format!("{}*zeta({})^{}", mag, c.order(), i)),
        };
        (negative, body)
    } else {
        (false, Some(alloc::format!("({})", c)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::embed_root;

    fn p(s: &str) -> PuiseuxSeries {
        parse_branch(s).unwrap()
    }

    #[test]
    fn order_of_examples() {
        assert_eq!(p("x^2").order(), Ext::from_int(2));
        assert_eq!(p("x^(5/2) + x^(8/3)").order(), Ext::from_ratio(5, 2));
        assert_eq!(PuiseuxSeries::zero().order(), Ext::Infinite);
    }

    #[test]
    fn conjugate_examples() {
        let eta3 = p("-x^(5/2) + x^(11/4)");
        let expected = PuiseuxSeries::new(alloc::vec![
            (rat(5, 2), CyclotomicNumber::one(4)),
            (rat(11, 4), embed_root(4, 1, 4).unwrap().neg()),
        ])
        .unwrap();
        assert_eq!(eta3.conjugate(1), expected);
        assert_eq!(eta3.conjugate(0), eta3);
        assert_eq!(p("x^(5/2)").conjugate(1), p("-x^(5/2)"));
    }

    #[test]
    fn characteristic_exponents_examples() {
        assert!(p("x^2").characteristic_exponents().is_empty());
        assert_eq!(p("x^(5/2) + x^(8/3)").characteristic_exponents(), [rat(5, 2), rat(8, 3)]);
        assert_eq!(
            p("x^(7/2) + 2*x^(17/4) + x^(14/3)").characteristic_exponents(),
            [rat(7, 2), rat(17, 4), rat(14, 3)]
        );
    }

    #[test]
    fn index_examples() {
        let eta5 = p("x^(7/2) + 2*x^(17/4) + x^(14/3)");
        assert_eq!(eta5.index_at(&Ext::from_int(4)), 2);
        assert_eq!(eta5.index_at(&Ext::from_ratio(9, 2)), 4);
        assert_eq!(eta5.index_at(&Ext::from_int(5)), 12);
        assert_eq!(eta5.index_at(&Ext::from_ratio(7, 2)), 1);
        assert_eq!(eta5.index_at(&Ext::Infinite), 12);
    }

    #[test]
    fn coincidence_examples() {
        let eta1 = p("x^2");
        let eta2 = p("x^(5/2) + x^(8/3)");
        let eta3 = p("-x^(5/2) + x^(11/4)");
        let eta4 = p("x^(7/2) + x^(17/4)");
        let eta5 = p("x^(7/2) + 2*x^(17/4) + x^(14/3)");
        assert_eq!(eta2.coincidence_order(&eta3), Ext::from_ratio(8, 3));
        assert_eq!(eta1.coincidence_order(&eta5), Ext::from_int(2));
        assert_eq!(eta4.coincidence_order(&eta5), Ext::from_ratio(17, 4));
        assert_eq!(eta3.coincidence_order(&eta2), Ext::from_ratio(8, 3));
    }

    #[test]
    fn same_branch_examples() {
        assert!(p("x^(5/2)").same_branch(&p("-x^(5/2)")));
        assert!(!p("x^(5/2) + x^(8/3)").same_branch(&p("-x^(5/2) + x^(11/4)")));
        let s = p("x^(3/2) + zeta(3)^1*x^(7/4)");
        assert!(s.same_branch(&s));
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "x^2",
            "x^(5/2) + x^(8/3)",
            "-x^(5/2) + x^(11/4)",
            "x^(7/2) + 2*x^(17/4) + x^(14/3)",
            "1/2*x - 3*zeta(4)^1*x^(9/4)",
            "(1 + zeta(12)^2)*x^(7/6)",
            "0",
        ] {
            let s = p(text);
            let again = p(&alloc::format!("{}", s));
            assert_eq!(s, again, "{text}");
        }
    }

    #[test]
    fn truncation_and_extension() {
        let eta5 = p("x^(7/2) + 2*x^(17/4) + x^(14/3)");
        let head = eta5.truncate_below(&rat(14, 3));
        assert_eq!(head, p("x^(7/2) + 2*x^(17/4)"));
        let back = head.push_term(rat(14, 3), CyclotomicNumber::one(1)).unwrap();
        assert_eq!(back, eta5);
        assert!(head.push_term(int(3), CyclotomicNumber::one(1)).is_err());
    }
}
