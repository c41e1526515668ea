//! Exact rationals: machine-word fast path, arbitrary precision on overflow.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::GolombError;

/// Reduced fraction on machine words: `d > 0`, `gcd(n, d) = 1`, and
/// neither field is `i64::MIN`, so negation and i128 products never overflow.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Small {
    n: i64,
    d: i64,
}

impl Small {
    const ZERO: Small = Small { n: 0, d: 1 };
    const ONE: Small = Small { n: 1, d: 1 };

    #[inline]
    fn int(n: i64) -> Option<Small> {
        (n != i64::MIN).then_some(Small { n, d: 1 })
    }

    /// Reduces `n / d` (with `d > 0`) and checks it fits.
    #[inline]
    fn reduce(n: i128, d: i128) -> Option<Small> {
        debug_assert!(d > 0);
        let (n, d) = if d == 1 {
            (n, d)
        } else {
            let (un, ud) = (n.unsigned_abs(), d as u128);
            let g = if un <= u64::MAX as u128 && ud <= u64::MAX as u128 {
                (un as u64).gcd(&(ud as u64)) as i128
            } else {
                un.gcd(&ud) as i128
            };
            if g > 1 && n.unsigned_abs() <= i64::MAX as u128 && d <= i64::MAX as i128 {
                ((n as i64 / g as i64) as i128, (d as i64 / g as i64) as i128)
            } else if g > 1 {
                (n / g, d / g)
            } else {
                (n, d)
            }
        };
        let fits = |v: i128| v > i64::MIN as i128 && v <= i64::MAX as i128;
        (fits(n) && fits(d)).then_some(Small {
            n: n as i64,
            d: d as i64,
        })
    }

    #[inline]
    fn add(a: Small, b: Small) -> Option<Small> {
        if a.d == 1 && b.d == 1 {
            return a.n.checked_add(b.n).and_then(Small::int);
        }
        if a.d == b.d {
            return Small::reduce(a.n as i128 + b.n as i128, a.d as i128);
        }
        let n = a.n as i128 * b.d as i128 + b.n as i128 * a.d as i128;
        Small::reduce(n, a.d as i128 * b.d as i128)
    }

    #[inline]
    fn neg(a: Small) -> Small {
        Small { n: -a.n, d: a.d }
    }

    #[inline]
    fn mul(a: Small, b: Small) -> Option<Small> {
        if a.d == 1 && b.d == 1 {
            return a.n.checked_mul(b.n).and_then(Small::int);
        }
        Small::reduce(a.n as i128 * b.n as i128, a.d as i128 * b.d as i128)
    }

    #[inline]
    fn recip(a: Small) -> Small {
        debug_assert!(a.n != 0);
        if a.n < 0 {
            Small { n: -a.d, d: -a.n }
        } else {
            Small { n: a.d, d: a.n }
        }
    }

    #[inline]
    fn cmp(a: Small, b: Small) -> Ordering {
        if a.d == b.d {
            return a.n.cmp(&b.n);
        }
        (a.n as i128 * b.d as i128).cmp(&(b.n as i128 * a.d as i128))
    }

    fn floor(a: Small) -> Small {
        Small {
            n: a.n.div_euclid(a.d),
            d: 1,
        }
    }

    fn ceil(a: Small) -> Small {
        Small {
            n: -(-a.n).div_euclid(a.d),
            d: 1,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(Small),
    Big(Box<BigRational>),
}

/// An exact rational number.
///
/// Values that fit in `i64 / i64` stay on the fast path; anything larger is
/// promoted to `BigRational` and demoted again once it fits. Representation
/// is therefore canonical and structural equality is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

impl Rational {
    pub fn zero() -> Rational {
        Rational(Repr::Small(Small::ZERO))
    }

    pub fn one() -> Rational {
        Rational(Repr::Small(Small::ONE))
    }

    pub fn from_int(v: i64) -> Rational {
        match Small::int(v) {
            Some(s) => Rational(Repr::Small(s)),
            None => Rational::from_big(BigRational::from_integer(v.into())),
        }
    }

    /// `numer / denom`; panics when `denom == 0`.
    pub fn new(numer: i64, denom: i64) -> Rational {
        assert!(denom != 0, "zero denominator");
        let (n, d) = if denom < 0 {
            (-(numer as i128), -(denom as i128))
        } else {
            (numer as i128, denom as i128)
        };
        match Small::reduce(n, d) {
            Some(s) => Rational(Repr::Small(s)),
            None => Rational::from_big(BigRational::new(numer.into(), denom.into())),
        }
    }

    fn from_big(b: BigRational) -> Rational {
        match (b.numer().to_i64(), b.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN && d != i64::MIN => Rational(Repr::Small(Small { n, d })),
            _ => Rational(Repr::Big(Box::new(b))),
        }
    }

    pub(crate) fn to_big_rational(&self) -> BigRational {
        self.to_big()
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(s) => BigRational::new_raw(BigInt::from(s.n), BigInt::from(s.d)),
            Repr::Big(b) => (**b).clone(),
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(s) => s.n == 0,
            Repr::Big(b) => b.is_zero(),
        }
    }

    #[inline]
    pub fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Small(s) => s.n > 0,
            Repr::Big(b) => b.is_positive(),
        }
    }

    #[inline]
    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(s) => s.n < 0,
            Repr::Big(b) => b.is_negative(),
        }
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(Small { n: 1, d: 1 }))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(s) => s.d == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    pub fn floor(&self) -> Rational {
        match &self.0 {
            Repr::Small(s) => Rational(Repr::Small(Small::floor(*s))),
            Repr::Big(b) => Rational::from_big(b.floor()),
        }
    }

    pub fn ceil(&self) -> Rational {
        match &self.0 {
            Repr::Small(s) => Rational(Repr::Small(Small::ceil(*s))),
            Repr::Big(b) => Rational::from_big(b.ceil()),
        }
    }

    pub fn abs(&self) -> Rational {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Integer value, when this is an integer that fits in `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if !self.is_integer() {
            return None;
        }
        match &self.0 {
            Repr::Small(s) => Some(s.n),
            Repr::Big(b) => b.numer().to_i64(),
        }
    }

    /// Lossy conversion, for display and heuristics only.
    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(s) => s.n as f64 / s.d as f64,
            Repr::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// `self -= factor * x`, the simplex row update.
    #[inline]
    pub fn sub_mul(&mut self, factor: &Rational, x: &Rational) {
        if x.is_zero() || factor.is_zero() {
            return;
        }
        if let (Repr::Small(a), Repr::Small(f), Repr::Small(b)) = (&self.0, &factor.0, &x.0) {
            if let Some(p) = Small::mul(*f, *b) {
                if let Some(r) = Small::add(*a, Small::neg(p)) {
                    self.0 = Repr::Small(r);
                    return;
                }
            }
        }
        let prod = factor * x;
        *self = &*self - &prod;
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_int(v)
    }
}

impl From<u32> for Rational {
    fn from(v: u32) -> Self {
        Rational::from_int(v as i64)
    }
}

impl From<usize> for Rational {
    fn from(v: usize) -> Self {
        Rational::from_int(v as i64)
    }
}

impl From<BigRational> for Rational {
    fn from(v: BigRational) -> Self {
        Rational::from_big(v)
    }
}

fn small_add(a: Small, b: Small) -> Option<Small> {
    Small::add(a, b)
}

fn small_sub(a: Small, b: Small) -> Option<Small> {
    Small::add(a, Small::neg(b))
}

fn small_mul(a: Small, b: Small) -> Option<Small> {
    Small::mul(a, b)
}

fn small_div(a: Small, b: Small) -> Option<Small> {
    if b.n == 0 {
        return None;
    }
    Small::mul(a, Small::recip(b))
}

macro_rules! binop {
    ($tr:ident, $method:ident, $small:ident) => {
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            #[inline]
            fn $method(self, rhs: &'a Rational) -> Rational {
                if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
                    if let Some(r) = $small(*a, *b) {
                        return Rational(Repr::Small(r));
                    }
                }
                Rational::from_big(self.to_big().$method(rhs.to_big()))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, small_add);
binop!(Sub, sub, small_sub);
binop!(Mul, mul, small_mul);
binop!(Div, div, small_div);

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small(s) => Rational(Repr::Small(Small::neg(*s))),
            Repr::Big(b) => Rational::from_big(-(**b).clone()),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => Small::cmp(*a, *b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(s) if s.d == 1 => write!(f, "{}", s.n),
            Repr::Small(s) => write!(f, "{}/{}", s.n, s.d),
            Repr::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = GolombError;

    /// Accepts `"p"` or `"p/q"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GolombError::Parse(format!("bad rational {s:?}"));
        let (n, d) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rational::from_big(BigRational::new(n, d)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Rational::from_int(i64::MAX);
        let sum = &big + &big;
        assert!(matches!(sum.0, Repr::Big(_)));
        let back = &sum - &big;
        assert_eq!(back, big);
        assert!(matches!(back.0, Repr::Small(_)));
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(Rational::new(6, 4).to_string(), "3/2");
        assert_eq!(Rational::new(-4, 2).to_string(), "-2");
        assert_eq!("3/2".parse::<Rational>().unwrap(), Rational::new(3, 2));
        assert_eq!(" 7 ".parse::<Rational>().unwrap(), Rational::from_int(7));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn rounding() {
        assert_eq!(Rational::new(7, 2).floor(), Rational::from_int(3));
        assert_eq!(Rational::new(7, 2).ceil(), Rational::from_int(4));
        assert_eq!(Rational::new(-7, 2).floor(), Rational::from_int(-4));
    }

    proptest! {
        #[test]
        fn matches_bigrational(a in any::<i64>(), b in 1..i64::MAX, c in any::<i64>(), d in 1..i64::MAX) {
            let x = Rational::new(a, b);
            let y = Rational::new(c, d);
            let bx = BigRational::new(a.into(), b.into());
            let by = BigRational::new(c.into(), d.into());
            prop_assert_eq!((&x + &y).to_big(), &bx + &by);
            prop_assert_eq!((&x - &y).to_big(), &bx - &by);
            prop_assert_eq!((&x * &y).to_big(), &bx * &by);
            prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
            if !y.is_zero() {
                prop_assert_eq!((&x / &y).to_big(), &bx / &by);
            }
        }
    }
}
