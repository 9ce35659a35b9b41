//! Exact scalars: arbitrary-precision rationals, the extended half-line
//! `[0, ∞]` used by exponents and contact values, and cyclotomic numbers.

pub mod cyclotomic;

use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn uint(value: u64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Denominator of a rational as a machine integer.
pub(crate) fn denom_u64(r: &Rational) -> u64 {
    r.denom().to_u64().expect("denominator exceeds u64")
}

pub(crate) fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Converts an integral rational to `u64`; `None` if it is not a nonnegative
/// machine-sized integer.
pub(crate) fn to_u64_exact(r: &Rational) -> Option<u64> {
    if r.is_integer() && !r.is_negative() {
        r.to_integer().to_u64()
    } else {
        None
    }
}

/// A value of `[0, ∞]` (or more generally `Q ∪ {∞}`).
///
/// Finite values compare below `Infinite`. Arithmetic involving `∞` follows
/// the conventions `a + ∞ = ∞` and `a / ∞ = 0`; indeterminate forms are
/// reported as `None` by the `checked_*` methods.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ext {
    Finite(Rational),
    Infinite,
}

impl Ext {
    pub fn zero() -> Self {
        Ext::Finite(Rational::zero())
    }

    pub fn from_int(v: i64) -> Self {
        Ext::Finite(int(v))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Ext::Finite(rat(n, d))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Ext::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Ext::Infinite)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Ext::Finite(r) if r.is_zero())
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Ext::Finite(r) => Some(r),
            Ext::Infinite => None,
        }
    }

    pub fn into_finite(self) -> Option<Rational> {
        match self {
            Ext::Finite(r) => Some(r),
            Ext::Infinite => None,
        }
    }

    /// The value as a nonnegative machine integer, if it is one.
    pub fn to_u64(&self) -> Option<u64> {
        self.finite().and_then(to_u64_exact)
    }

    pub fn add(&self, other: &Ext) -> Ext {
        match (self, other) {
            (Ext::Finite(a), Ext::Finite(b)) => Ext::Finite(a + b),
            _ => Ext::Infinite,
        }
    }

    pub fn add_rational(&self, other: &Rational) -> Ext {
        match self {
            Ext::Finite(a) => Ext::Finite(a + other),
            Ext::Infinite => Ext::Infinite,
        }
    }

    /// Product; `0 · ∞` is indeterminate.
    pub fn checked_mul(&self, other: &Ext) -> Option<Ext> {
        match (self, other) {
            (Ext::Finite(a), Ext::Finite(b)) => Some(Ext::Finite(a * b)),
            (Ext::Finite(a), Ext::Infinite) | (Ext::Infinite, Ext::Finite(a)) => {
                if a.is_zero() {
                    None
                } else {
                    Some(Ext::Infinite)
                }
            }
            (Ext::Infinite, Ext::Infinite) => Some(Ext::Infinite),
        }
    }

    /// Multiplication by a positive rational never hits an indeterminate form.
    pub fn scale(&self, factor: &Rational) -> Ext {
        debug_assert!(factor.is_positive());
        match self {
            Ext::Finite(a) => Ext::Finite(a * factor),
            Ext::Infinite => Ext::Infinite,
        }
    }

    /// Quotient for nonnegative operands: `a/∞ = 0`, `a/0 = ∞` for `a > 0`;
    /// `0/0` and `∞/∞` are indeterminate.
    pub fn checked_div(&self, other: &Ext) -> Option<Ext> {
        match (self, other) {
            (Ext::Finite(a), Ext::Finite(b)) => {
                if b.is_zero() {
                    if a.is_zero() {
                        None
                    } else {
                        Some(Ext::Infinite)
                    }
                } else {
                    Some(Ext::Finite(a / b))
                }
            }
            (Ext::Finite(_), Ext::Infinite) => Some(Ext::zero()),
            (Ext::Infinite, Ext::Finite(_)) => Some(Ext::Infinite),
            (Ext::Infinite, Ext::Infinite) => None,
        }
    }

    /// `1/x` with `1/0 = ∞` and `1/∞ = 0`.
    pub fn recip(&self) -> Ext {
        match self {
            Ext::Finite(a) if a.is_zero() => Ext::Infinite,
            Ext::Finite(a) => Ext::Finite(a.recip()),
            Ext::Infinite => Ext::zero(),
        }
    }
}

impl From<Rational> for Ext {
    fn from(r: Rational) -> Self {
        Ext::Finite(r)
    }
}

impl PartialOrd for Ext {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ext {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Ext::Finite(a), Ext::Finite(b)) => a.cmp(b),
            (Ext::Finite(_), Ext::Infinite) => Ordering::Less,
            (Ext::Infinite, Ext::Finite(_)) => Ordering::Greater,
            (Ext::Infinite, Ext::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Finite(r) => write!(f, "{}", r),
            Ext::Infinite => f.write_str("inf"),
        }
    }
}

/// Parses `"p/q"`, `"p"` or `"inf"`.
impl FromStr for Ext {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" || s == "∞" {
            return Ok(Ext::Infinite);
        }
        parse_rational(s).map(Ext::Finite)
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::parse(0, alloc::format!("invalid rational {:?}", s));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_ordering_puts_infinity_last() {
        let mut v = alloc::vec![Ext::Infinite, Ext::from_ratio(17, 4), Ext::zero()];
        v.sort();
        assert_eq!(v, alloc::vec![Ext::zero(), Ext::from_ratio(17, 4), Ext::Infinite]);
    }

    #[test]
    fn ext_division_conventions() {
        let a = Ext::from_int(3);
        assert_eq!(a.checked_div(&Ext::Infinite), Some(Ext::zero()));
        assert_eq!(a.checked_div(&Ext::zero()), Some(Ext::Infinite));
        assert_eq!(Ext::zero().checked_div(&Ext::zero()), None);
        assert_eq!(Ext::Infinite.checked_div(&Ext::Infinite), None);
        assert_eq!(Ext::zero().checked_mul(&Ext::Infinite), None);
    }

    #[test]
    fn ext_round_trips_through_strings() {
        for s in ["0", "17/4", "191/48", "inf", "-3/2"] {
            let v: Ext = s.parse().unwrap();
            assert_eq!(alloc::format!("{}", v), s);
        }
        assert!("1/0".parse::<Ext>().is_err());
        assert!("x".parse::<Ext>().is_err());
    }
}
