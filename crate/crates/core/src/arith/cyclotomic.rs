//! Arithmetic in `Q(ζ_N)` in the power basis `1, ζ_N, …, ζ_N^{φ(N)-1}`.
//!
//! Only ring operations and exact zero tests are provided; nothing downstream
//! ever divides by a cyclotomic number.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Coefficients of the `n`-th cyclotomic polynomial, lowest degree first.
///
/// Obtained by exact division of `x^n - 1` by `Φ_d` for every proper divisor
/// `d` of `n`.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic order must be positive");
    let mut memo = BTreeMap::new();
    cyclotomic_memo(n, &mut memo)
}

fn cyclotomic_memo(n: u64, memo: &mut BTreeMap<u64, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut p = vec![BigInt::zero(); n as usize + 1];
    p[0] = -BigInt::one();
    p[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let divisor = cyclotomic_memo(d, memo);
            p = exact_div_monic(&p, &divisor);
        }
    }
    memo.insert(n, p.clone());
    p
}

/// Quotient of `num` by a monic `den`; the remainder is asserted to vanish.
fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

/// The field `Q(ζ_N)`, shared by all of its elements.
#[derive(Debug, PartialEq, Eq)]
struct Field {
    order: u64,
    /// `Φ_N`, monic, lowest degree first.
    modulus: Vec<BigInt>,
}

impl Field {
    fn new(order: u64) -> Arc<Field> {
        Arc::new(Field { order, modulus: cyclotomic_polynomial(order) })
    }

    fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Reduces a polynomial in `ζ_N` modulo `Φ_N`.
    fn reduce(&self, mut poly: Vec<Rational>) -> Vec<Rational> {
        let d = self.degree();
        for i in (d..poly.len()).rev() {
            if poly[i].is_zero() {
                continue;
            }
            let c = core::mem::replace(&mut poly[i], Rational::zero());
            for (j, mj) in self.modulus[..d].iter().enumerate() {
                if !mj.is_zero() {
                    poly[i - d + j] -= &c * Rational::from_integer(mj.clone());
                }
            }
        }
        poly.resize(d, Rational::zero());
        poly
    }
}

/// The ring operations exposed through [`CyclotomicNumber::apply`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
}

/// An element of `Q(ζ_N)`.
#[derive(Clone)]
pub struct CyclotomicNumber {
    field: Arc<Field>,
    coords: Vec<Rational>,
}

impl CyclotomicNumber {
    pub fn zero(order: u64) -> Self {
        let field = Field::new(order);
        let coords = vec![Rational::zero(); field.degree()];
        CyclotomicNumber { field, coords }
    }

    pub fn one(order: u64) -> Self {
        Self::from_rational(order, Rational::one())
    }

    pub fn from_rational(order: u64, value: Rational) -> Self {
        let mut z = Self::zero(order);
        z.coords[0] = value;
        z
    }

    /// Builds an element from power-basis coordinates (padded or reduced as
    /// needed).
    pub fn from_coords(order: u64, coords: Vec<Rational>) -> Self {
        let field = Field::new(order);
        let coords = field.reduce(coords);
        CyclotomicNumber { field, coords }
    }

    fn with_field(&self, coords: Vec<Rational>) -> Self {
        CyclotomicNumber { field: self.field.clone(), coords }
    }

    /// A rational constant in the same field as `self`.
    pub fn rational_like(&self, value: Rational) -> Self {
        let mut coords = vec![Rational::zero(); self.coords.len()];
        coords[0] = value;
        self.with_field(coords)
    }

    /// `ζ_m^k` in the same field as `self`, without rebuilding the modulus.
    pub fn root_like(&self, m: u64, k: i64) -> Result<Self> {
        let order = self.field.order;
        if m == 0 || order % m != 0 {
            return Err(Error::RootOrder(m, order));
        }
        let exponent = (k.rem_euclid(m as i64) as u64) * (order / m);
        let mut poly = vec![Rational::zero(); exponent as usize + 1];
        poly[exponent as usize] = Rational::one();
        Ok(self.with_field(self.field.reduce(poly)))
    }

    pub fn order(&self) -> u64 {
        self.field.order
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    /// The element as a rational, when it lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coords[1..].iter().all(Zero::is_zero) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.field.order == other.field.order {
            Ok(())
        } else {
            Err(Error::IncompatibleOrders(self.field.order, other.field.order))
        }
    }

    pub fn apply(&self, other: &Self, op: RingOp) -> Result<Self> {
        match op {
            RingOp::Add => self.add(other),
            RingOp::Sub => self.sub(other),
            RingOp::Mul => self.mul(other),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(self.with_field(coords))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        Ok(self.with_field(coords))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let d = self.field.degree();
        let mut prod = vec![Rational::zero(); 2 * d - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(self.with_field(self.field.reduce(prod)))
    }

    pub fn neg(&self) -> Self {
        self.with_field(self.coords.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        self.with_field(self.coords.iter().map(|a| a * factor).collect())
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.order());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            base = base.mul(&base).expect("same field");
            exp >>= 1;
        }
        acc
    }

    /// Re-expresses the element in `Q(ζ_M)` for a multiple `M` of its order,
    /// via `ζ_N = ζ_M^{M/N}`.
    pub fn lift(&self, order: u64) -> Result<Self> {
        let own = self.field.order;
        if order == own {
            return Ok(self.clone());
        }
        if order % own != 0 {
            return Err(Error::RootOrder(own, order));
        }
        let step = (order / own) as usize;
        let mut poly = vec![Rational::zero(); step * self.coords.len().max(1)];
        for (i, a) in self.coords.iter().enumerate() {
            poly[i * step] = a.clone();
        }
        Ok(Self::from_coords(order, poly))
    }
}

/// `ζ_m^k` inside `Q(ζ_N)`, that is `ζ_N^{kN/m}` reduced modulo `Φ_N`.
pub fn embed_root(m: u64, k: i64, order: u64) -> Result<CyclotomicNumber> {
    if m == 0 || order % m != 0 {
        return Err(Error::RootOrder(m, order));
    }
    let exponent = (k.rem_euclid(m as i64) as u64) * (order / m);
    let mut poly = vec![Rational::zero(); exponent as usize + 1];
    poly[exponent as usize] = Rational::one();
    Ok(CyclotomicNumber::from_coords(order, poly))
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.coords == other.coords
    }
}

impl Eq for CyclotomicNumber {}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclotomicNumber(N={}, {})", self.order(), self)
    }
}

/// Writes the element in the coefficient grammar accepted by the series
/// parser, e.g. `1/2 - 3*zeta(12)^2`.
impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "zeta({})^{}", self.order(), i)?;
            } else {
                write!(f, "{}*zeta({})^{}", mag, self.order(), i)?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn phi_12_matches_division_of_x12_minus_1() {
        // x^12 - 1 = Φ1 Φ2 Φ3 Φ4 Φ6 Φ12; multiply back and compare.
        let mut prod = ints(&[1]);
        for d in [1u64, 2, 3, 4, 6, 12] {
            let p = cyclotomic_polynomial(d);
            let mut next = vec![BigInt::zero(); prod.len() + p.len() - 1];
            for (i, a) in prod.iter().enumerate() {
                for (j, b) in p.iter().enumerate() {
                    next[i + j] += a * b;
                }
            }
            prod = next;
        }
        let mut expected = vec![BigInt::zero(); 13];
        expected[0] = BigInt::from(-1);
        expected[12] = BigInt::one();
        assert_eq!(prod, expected);
    }

    #[test]
    fn degree_is_totient() {
        let totient = |n: u64| (1..=n).filter(|k| num_integer::gcd(*k, n) == 1).count();
        for n in 1..=36u64 {
            assert_eq!(cyclotomic_polynomial(n).len() - 1, totient(n), "n = {n}");
        }
    }

    #[test]
    fn roots_of_unity_examples() {
        let i = embed_root(4, 1, 4).unwrap();
        assert_eq!(i.mul(&i).unwrap(), CyclotomicNumber::from_rational(4, int(-1)));

        let w = embed_root(3, 1, 3).unwrap();
        let w2 = embed_root(3, 2, 3).unwrap();
        assert_eq!(w.add(&w2).unwrap(), CyclotomicNumber::from_rational(3, int(-1)));

        let z = embed_root(8, 1, 8).unwrap();
        let z7 = embed_root(8, 7, 8).unwrap();
        assert!(z.mul(&z7).unwrap().is_one());
    }

    #[test]
    fn embed_root_examples() {
        assert_eq!(embed_root(2, 1, 4).unwrap(), CyclotomicNumber::from_rational(4, int(-1)));
        assert_eq!(embed_root(4, 2, 4).unwrap(), CyclotomicNumber::from_rational(4, int(-1)));
        // ζ_12^4 = ζ_12^2 - 1
        let w = embed_root(3, 1, 12).unwrap();
        assert_eq!(w.coords(), &[int(-1), int(0), int(1), int(0)]);
        assert!(embed_root(5, 0, 12).is_err());
        assert!(embed_root(7, 0, 7).unwrap().is_one());
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let a = CyclotomicNumber::one(4);
        let b = CyclotomicNumber::one(6);
        assert_eq!(a.add(&b), Err(Error::IncompatibleOrders(4, 6)));
        assert_eq!(a.apply(&b, RingOp::Mul), Err(Error::IncompatibleOrders(4, 6)));
    }

    #[test]
    fn lift_preserves_roots() {
        let i4 = embed_root(4, 1, 4).unwrap();
        assert_eq!(i4.lift(12).unwrap(), embed_root(4, 1, 12).unwrap());
        assert!(i4.lift(6).is_err());
    }

    #[test]
    fn display_uses_series_grammar() {
        let x = CyclotomicNumber::from_coords(12, alloc::vec![int(1), int(0), int(-3)]);
        assert_eq!(alloc::format!("{}", x), "1 - 3*zeta(12)^2");
        assert_eq!(alloc::format!("{}", CyclotomicNumber::zero(5)), "0");
    }
}
