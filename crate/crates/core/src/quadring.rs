//! Exact arithmetic in `Z[sqrt(-d)]` and in the half-integer order
//! `{(a + b*sqrt(-d))/2 : a = b mod 2}` for `d = 3 (mod 4)`.
//!
//! Operations are sign-agnostic; callers that need both signs of a unit
//! enumerate them explicitly.

use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::arith::{binomial, is_prime_u64, is_squarefree};
use crate::error::{Error, Result};

/// `re + im * sqrt(-d)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadInt {
    d: u64,
    re: BigInt,
    im: BigInt,
}

impl QuadInt {
    pub fn new(d: u64, re: impl Into<BigInt>, im: impl Into<BigInt>) -> Result<Self> {
        if !is_squarefree(d) {
            return Err(Error::Domain("ring parameter d must be squarefree and positive"));
        }
        Ok(Self {
            d,
            re: re.into(),
            im: im.into(),
        })
    }

    pub fn one(d: u64) -> Result<Self> {
        Self::new(d, 1, 0)
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn re(&self) -> &BigInt {
        &self.re
    }

    pub fn im(&self) -> &BigInt {
        &self.im
    }

    /// `re^2 + d * im^2`.
    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im * self.d
    }

    pub fn conj(&self) -> Self {
        Self {
            d: self.d,
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::RingMismatch {
                left: self.d,
                right: other.d,
            });
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        Self {
            d: self.d,
            re: &self.re * &other.re - &self.im * &other.im * self.d,
            im: &self.re * &other.im + &other.re * &self.im,
        }
    }

    /// Square-and-multiply exponentiation.
    pub fn pow(&self, mut n: u32) -> Self {
        let mut acc = Self {
            d: self.d,
            re: BigInt::one(),
            im: BigInt::zero(),
        };
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{} {} {}*sqrt(-{})", self.re, sign, self.im.abs(), self.d)
    }
}

/// `(a + b * sqrt(-d)) / 2`, stored by its doubled coordinates `(a, b)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HalfQuadInt {
    d: u64,
    a: BigInt,
    b: BigInt,
}

impl HalfQuadInt {
    pub fn new(d: u64, a: impl Into<BigInt>, b: impl Into<BigInt>) -> Result<Self> {
        if d % 4 != 3 || !is_squarefree(d) {
            return Err(Error::Domain("half-integer order needs squarefree d = 3 mod 4"));
        }
        let (a, b) = (a.into(), b.into());
        if a.is_odd() != b.is_odd() {
            return Err(Error::Domain("half-integer coordinates must share parity"));
        }
        Ok(Self { d, a, b })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// Doubled rational part.
    pub fn a(&self) -> &BigInt {
        &self.a
    }

    /// Doubled coefficient of `sqrt(-d)`.
    pub fn b(&self) -> &BigInt {
        &self.b
    }

    /// `(a^2 + d * b^2) / 4`, always an integer under the parity invariant.
    pub fn norm(&self) -> BigInt {
        (&self.a * &self.a + &self.b * &self.b * self.d) / 4
    }

    /// The numerator `a + b * sqrt(-d)` as an element of `Z[sqrt(-d)]`.
    pub fn numerator(&self) -> QuadInt {
        QuadInt {
            d: self.d,
            re: self.a.clone(),
            im: self.b.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::RingMismatch {
                left: self.d,
                right: other.d,
            });
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        // ((a1 + b1 s)(a2 + b2 s)) / 4 has doubled coordinates
        // ((a1 a2 - d b1 b2) / 2, (a1 b2 + a2 b1) / 2); both halvings are exact.
        let a = &self.a * &other.a - &self.b * &other.b * self.d;
        let b = &self.a * &other.b + &other.a * &self.b;
        debug_assert!(a.is_even() && b.is_even());
        Self {
            d: self.d,
            a: a / 2,
            b: b / 2,
        }
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut acc = Self {
            d: self.d,
            a: BigInt::from(2),
            b: BigInt::zero(),
        };
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }
}

/// `z^n` in the half-integer order.
pub fn half_pow(z: &HalfQuadInt, n: u32) -> HalfQuadInt {
    z.pow(n)
}

fn check_odd_prime(p: u32) -> Result<()> {
    if p < 3 || !is_prime_u64(u64::from(p)) {
        return Err(Error::Domain("exponent must be an odd prime"));
    }
    Ok(())
}

/// Rational part of `(a + b sqrt(-d))^p` from the binomial expansion:
/// `a * sum_{k} C(p, 2k) a^(p-2k-1) (-d b^2)^k`.
pub fn real_part_sum(a: &BigInt, b: &BigInt, d: u64, p: u32) -> Result<BigInt> {
    check_odd_prime(p)?;
    let t = -(b * b * d);
    let mut sum = BigInt::zero();
    for k in 0..=(p - 1) / 2 {
        sum += binomial(u64::from(p), u64::from(2 * k))?
            * num_traits::pow(a.clone(), (p - 2 * k - 1) as usize)
            * num_traits::pow(t.clone(), k as usize);
    }
    Ok(a * sum)
}

/// Coefficient of `sqrt(-d)` in `(a + b sqrt(-d))^p`:
/// `b * sum_{k} C(p, 2k+1) a^(p-2k-1) (-d b^2)^k`.
pub fn imag_part_sum(a: &BigInt, b: &BigInt, d: u64, p: u32) -> Result<BigInt> {
    check_odd_prime(p)?;
    let t = -(b * b * d);
    let mut sum = BigInt::zero();
    for k in 0..=(p - 1) / 2 {
        sum += binomial(u64::from(p), u64::from(2 * k + 1))?
            * num_traits::pow(a.clone(), (p - 2 * k - 1) as usize)
            * num_traits::pow(t.clone(), k as usize);
    }
    Ok(b * sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(d: u64, a: i64, b: i64) -> QuadInt {
        QuadInt::new(d, a, b).unwrap()
    }

    #[test]
    fn mul_examples() {
        let z = q(19, 5, -3);
        assert_eq!(q(19, 1, 0).mul(&z).unwrap(), z);
        assert_eq!(q(19, 1, 2).mul(&q(19, 1, 2)).unwrap(), q(19, -75, 4));
        let (u, v) = (7, 4);
        assert_eq!(q(1, u, v).mul(&q(1, u, -v)).unwrap(), q(1, u * u + v * v, 0));
        assert_eq!(
            q(1, 1, 1).mul(&q(19, 1, 1)),
            Err(Error::RingMismatch { left: 1, right: 19 })
        );
    }

    #[test]
    fn pow_examples() {
        assert_eq!(q(19, 1, 0).pow(7), q(19, 1, 0));
        assert_eq!(q(19, 1, 2).pow(3), q(19, -227, -146));
        // imaginary part of (u + vi)^3 is v(3u^2 - v^2)
        for u in -5i64..=5 {
            for v in -5i64..=5 {
                assert_eq!(*q(1, u, v).pow(3).im(), BigInt::from(v * (3 * u * u - v * v)));
            }
        }
    }

    #[test]
    fn half_pow_examples() {
        let z = HalfQuadInt::new(19, 3, 1).unwrap();
        let cube = half_pow(&z, 3);
        assert_eq!(
            (cube.a().clone(), cube.b().clone()),
            (BigInt::from(-36), BigInt::from(2))
        );
        assert_eq!(z.norm(), BigInt::from(7));
        let two = HalfQuadInt::new(19, 2, 0).unwrap();
        assert_eq!(half_pow(&two, 5), two);
        assert!(HalfQuadInt::new(19, 3, 2).is_err());
        assert!(HalfQuadInt::new(5, 1, 1).is_err());
    }

    #[test]
    fn part_sum_examples() {
        let one = BigInt::one();
        let zero = BigInt::zero();
        for p in [3, 5, 7, 11] {
            assert_eq!(real_part_sum(&one, &zero, 19, p).unwrap(), one);
        }
        let two = BigInt::from(2);
        assert_eq!(real_part_sum(&one, &two, 19, 3).unwrap(), BigInt::from(-227));
        assert_eq!(imag_part_sum(&one, &two, 19, 3).unwrap(), BigInt::from(-146));
        let r5 = real_part_sum(&one, &two, 19, 5).unwrap();
        assert_eq!(r5.mod_floor(&BigInt::from(19)), one);
        assert_eq!(imag_part_sum(&one, &zero, 19, 7).unwrap(), zero);
        for a in -4i64..=4 {
            for b in -4i64..=4 {
                let expect = b * (3 * a * a - 19 * b * b);
                let got = imag_part_sum(&BigInt::from(a), &BigInt::from(b), 19, 3).unwrap();
                assert_eq!(got, BigInt::from(expect));
            }
        }
        assert!(real_part_sum(&one, &two, 19, 4).is_err());
        assert!(imag_part_sum(&one, &two, 19, 2).is_err());
    }

    #[test]
    fn rejects_non_squarefree_d() {
        assert!(QuadInt::new(4, 1, 1).is_err());
        assert!(QuadInt::new(0, 1, 1).is_err());
    }
}
