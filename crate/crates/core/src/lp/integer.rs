//! Machine-word integers with an arbitrary-precision fallback, used for the
//! fraction-free rows of the simplex tableau.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use super::rational::Rational;

/// Canonical: `S` whenever the value fits in `i64` and is not `i64::MIN`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Int {
    S(i64),
    B(Box<BigInt>),
}

impl Int {
    pub(crate) const ZERO: Int = Int::S(0);
    pub(crate) const ONE: Int = Int::S(1);

    #[inline]
    pub(crate) fn from_i128(v: i128) -> Int {
        if v > i64::MIN as i128 && v <= i64::MAX as i128 {
            Int::S(v as i64)
        } else {
            Int::B(Box::new(BigInt::from(v)))
        }
    }

    pub(crate) fn from_big(v: BigInt) -> Int {
        match v.to_i64() {
            Some(s) if s != i64::MIN => Int::S(s),
            _ => Int::B(Box::new(v)),
        }
    }

    pub(crate) fn to_big(&self) -> BigInt {
        match self {
            Int::S(v) => BigInt::from(*v),
            Int::B(b) => (**b).clone(),
        }
    }

    #[inline]
    pub(crate) fn is_zero(&self) -> bool {
        matches!(self, Int::S(0))
    }

    #[inline]
    pub(crate) fn is_one(&self) -> bool {
        matches!(self, Int::S(1))
    }

    #[inline]
    pub(crate) fn signum(&self) -> i32 {
        match self {
            Int::S(v) => v.signum() as i32,
            Int::B(b) => {
                if b.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    #[inline]
    pub(crate) fn neg(&self) -> Int {
        match self {
            Int::S(v) => Int::S(-v),
            Int::B(b) => Int::from_big(-(**b).clone()),
        }
    }

    pub(crate) fn abs(&self) -> Int {
        if self.signum() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    #[inline]
    pub(crate) fn mul(&self, o: &Int) -> Int {
        match (self, o) {
            (Int::S(a), Int::S(b)) => Int::from_i128(*a as i128 * *b as i128),
            _ => Int::from_big(self.to_big() * o.to_big()),
        }
    }

    /// `a * x - b * y`.
    #[inline]
    pub(crate) fn mul_sub(a: &Int, x: &Int, b: &Int, y: &Int) -> Int {
        if let (Int::S(a), Int::S(x), Int::S(b), Int::S(y)) = (a, x, b, y) {
            // each product is below 2^126 in magnitude, so the difference fits
            return Int::from_i128(*a as i128 * *x as i128 - *b as i128 * *y as i128);
        }
        Int::from_big(a.to_big() * x.to_big() - b.to_big() * y.to_big())
    }

    /// Non-negative gcd; `gcd(0, 0) = 0`.
    #[inline]
    pub(crate) fn gcd(&self, o: &Int) -> Int {
        match (self, o) {
            (Int::S(a), Int::S(b)) => Int::S(a.unsigned_abs().gcd(&b.unsigned_abs()) as i64),
            _ => Int::from_big(self.to_big().gcd(&o.to_big())),
        }
    }

    /// Division known to be exact.
    #[inline]
    pub(crate) fn div_exact(&self, o: &Int) -> Int {
        match (self, o) {
            (Int::S(a), Int::S(b)) => Int::S(a / b),
            _ => Int::from_big(self.to_big() / o.to_big()),
        }
    }

    pub(crate) fn cmp(&self, o: &Int) -> Ordering {
        match (self, o) {
            (Int::S(a), Int::S(b)) => a.cmp(b),
            _ => self.to_big().cmp(&o.to_big()),
        }
    }

    /// Compares `a / b` with `c / d` for positive `b`, `d`.
    pub(crate) fn cmp_frac(a: &Int, b: &Int, c: &Int, d: &Int) -> Ordering {
        if let (Int::S(a), Int::S(b), Int::S(c), Int::S(d)) = (a, b, c, d) {
            return (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128));
        }
        (a.to_big() * d.to_big()).cmp(&(c.to_big() * b.to_big()))
    }

    /// `num / den` as a reduced rational; `den` non-zero.
    pub(crate) fn ratio(num: &Int, den: &Int) -> Rational {
        if let (Int::S(n), Int::S(d)) = (num, den) {
            return Rational::new(*n, *d);
        }
        Rational::from(BigRational::new(num.to_big(), den.to_big()))
    }
}

/// Splits a rational into integer numerator and positive denominator.
pub(crate) fn split(r: &Rational) -> (Int, Int) {
    let b = r.to_big_rational();
    (Int::from_big(b.numer().clone()), Int::from_big(b.denom().clone()))
}

impl Default for Int {
    fn default() -> Self {
        Int::ZERO
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn ops_match_bigint(a in any::<i64>(), b in any::<i64>(), c in any::<i64>(), d in any::<i64>()) {
            let (ia, ib, ic, id) = (Int::from_big(a.into()), Int::from_big(b.into()), Int::from_big(c.into()), Int::from_big(d.into()));
            let (ba, bb, bc, bd) = (BigInt::from(a), BigInt::from(b), BigInt::from(c), BigInt::from(d));
            prop_assert_eq!(Int::mul_sub(&ia, &ib, &ic, &id).to_big(), &ba * &bb - &bc * &bd);
            prop_assert_eq!(ia.mul(&ib).to_big(), &ba * &bb);
            prop_assert_eq!(ia.gcd(&ib).to_big(), ba.gcd(&bb));
            prop_assert_eq!(ia.cmp(&ib), ba.cmp(&bb));
            if b != 0 {
                let p = ia.mul(&ib);
                prop_assert_eq!(p.div_exact(&ib), ia.clone());
            }
        }
    }

    #[test]
    fn canonical_after_shrinking() {
        let big = Int::S(i64::MAX).mul(&Int::S(4));
        assert!(matches!(big, Int::B(_)));
        assert_eq!(big.div_exact(&Int::S(4)), Int::S(i64::MAX));
        assert!(matches!(Int::from_big(BigInt::from(i64::MIN)), Int::B(_)));
    }
}
