//! Exact integer primitives shared by every other module.

mod factor;

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::{BigInt, Sign};
use num_integer::Integer as _;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use factor::{is_prime_u64, is_probable_prime, prime_factors};

/// Floor square root, `r^2 <= n < (r+1)^2`.
///
/// Newton iteration from a power-of-two upper bound; the iterates decrease
/// monotonically until they reach the floor root.
pub fn isqrt(n: &BigInt) -> Result<BigInt> {
    iroot(n, 2)
}

/// Floor `e`-th root of a nonnegative integer.
pub fn iroot(n: &BigInt, e: u32) -> Result<BigInt> {
    if n.is_negative() {
        return Err(Error::Domain("root of a negative integer"));
    }
    if e == 0 {
        return Err(Error::Domain("zeroth root"));
    }
    if e == 1 || n < &BigInt::from(2) {
        return Ok(n.clone());
    }
    let bits = n.bits();
    let shift = bits.div_ceil(u64::from(e));
    let mut x: BigInt = BigInt::one() << shift;
    let e_big = BigInt::from(e);
    let e_minus_1 = BigInt::from(e - 1);
    loop {
        let y = (&e_minus_1 * &x + n / Pow::pow(&x, e - 1)) / &e_big;
        if y >= x {
            break;
        }
        x = y;
    }
    // Exact adjustment; Newton from above already lands on the floor root,
    // these loops only guard the invariant.
    while Pow::pow(&x, e) > *n {
        x -= 1;
    }
    loop {
        let next = &x + 1;
        if Pow::pow(&next, e) <= *n {
            x = next;
        } else {
            break;
        }
    }
    Ok(x)
}

/// Returns `r` with `r^e == n` when `n` is a perfect `e`-th power.
pub fn exact_root(n: &BigInt, e: u32) -> Option<BigInt> {
    if n.is_negative() {
        // Odd roots of negatives are not needed anywhere in this crate.
        return None;
    }
    let r = iroot(n, e).ok()?;
    (Pow::pow(&r, e) == *n).then_some(r)
}

/// The square root of `n` if `n` is a perfect square; always `None` for `n < 0`.
pub fn is_perfect_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    // Squares mod 64 are confined to 12 residues; cheap rejection first.
    let low = (n & BigInt::from(63u8)).to_u8().unwrap_or(0);
    if !matches!(low, 0 | 1 | 4 | 9 | 16 | 17 | 25 | 33 | 36 | 41 | 49 | 57) {
        return None;
    }
    exact_root(n, 2)
}

/// Decomposes `n >= 2` as `base^exponent` with the exponent maximal.
pub fn perfect_power_decompose(n: &BigInt) -> Result<(BigInt, u32)> {
    if n < &BigInt::from(2) {
        return Err(Error::Domain("perfect power decomposition needs n >= 2"));
    }
    let max_e = u32::try_from(n.bits() - 1).map_err(|_| Error::Domain("integer too large"))?;
    for e in (2..=max_e).rev() {
        if let Some(b) = exact_root(n, e) {
            return Ok((b, e));
        }
    }
    Ok((n.clone(), 1))
}

/// `n = p^v * unit` with `p` not dividing `unit`.
pub fn padic_valuation(p: u64, n: &BigInt) -> Result<(u64, BigInt)> {
    if !is_prime_u64(p) {
        return Err(Error::Domain("valuation base must be prime"));
    }
    if n.is_zero() {
        return Err(Error::Domain("valuation of zero is infinite"));
    }
    let p = BigInt::from(p);
    let mut v = 0u64;
    let mut unit = n.clone();
    loop {
        let (q, r) = unit.div_rem(&p);
        if !r.is_zero() {
            break;
        }
        unit = q;
        v += 1;
    }
    Ok((v, unit))
}

/// 2-adic valuation of a nonzero integer (trailing zero count).
pub fn v2(n: &BigInt) -> Option<u64> {
    n.trailing_zeros()
}

/// Exact binomial coefficient `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> Result<BigInt> {
    if k > n {
        return Err(Error::Domain("binomial coefficient with k > n"));
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    Ok(acc)
}

/// The set of squares modulo `m`.
pub fn quadratic_residues(m: u64) -> Result<BTreeSet<u64>> {
    if m < 2 {
        return Err(Error::Domain("modulus must be at least 2"));
    }
    let m128 = u128::from(m);
    Ok((0..m)
        .map(|s| {
            let s = u128::from(s);
            (s * s % m128) as u64
        })
        .collect())
}

/// `base^exp mod m` for machine-sized operands.
pub fn pow_mod_u64(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m = u128::from(m);
    let mut b = u128::from(base) % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Reduces a signed big integer into `[0, m)`.
pub fn reduce_mod(n: &BigInt, m: u64) -> u64 {
    n.mod_floor(&BigInt::from(m))
        .to_u64()
        .expect("residue below a u64 modulus")
}

pub fn is_squarefree(d: u64) -> bool {
    if d == 0 {
        return false;
    }
    let mut n = d;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// `base^exp` as a big integer.
pub fn big_pow(base: u64, exp: u32) -> BigInt {
    Pow::pow(BigInt::from(base), exp)
}

/// Floor `e`-th root for machine integers: Newton descent from a power of
/// two above the root, then an exact fix-up.
pub fn iroot_u128(n: u128, e: u32) -> u128 {
    if e == 1 || n < 2 {
        return n;
    }
    let bits = 128 - n.leading_zeros();
    let mut r = 1u128 << bits.div_ceil(e).min(127);
    loop {
        let q = match r.checked_pow(e - 1) {
            Some(p) => n / p,
            None => 0,
        };
        let next = ((u128::from(e) - 1) * r + q) / u128::from(e);
        if next >= r {
            break;
        }
        r = next;
    }
    while pow_exceeds(r, e, n) {
        r -= 1;
    }
    while !pow_exceeds(r + 1, e, n) {
        r += 1;
    }
    r
}

/// `r^e > n`, without overflow.
fn pow_exceeds(r: u128, e: u32, n: u128) -> bool {
    match r.checked_pow(e) {
        Some(v) => v > n,
        None => true,
    }
}

pub fn exact_root_u128(n: u128, e: u32) -> Option<u128> {
    let r = iroot_u128(n, e);
    (r.checked_pow(e) == Some(n)).then_some(r)
}

/// Converts to `u128` when the value is nonnegative and small enough.
pub fn to_u128(n: &BigInt) -> Option<u128> {
    match n.sign() {
        Sign::Minus => None,
        _ => n.to_u128(),
    }
}

/// The distinct odd primes up to `limit`, ascending.
pub fn odd_primes_up_to(limit: u64) -> Vec<u64> {
    (3..=limit).filter(|&p| is_prime_u64(p)).collect()
}
