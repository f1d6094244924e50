//! Pell equations `X^2 - D*Y^2 = 1`: the fundamental solution, the
//! second-kind Lucas sequence of solutions, prime-power scans and
//! primitive divisors of the `X` terms.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Zero};

use crate::arith::{is_perfect_square, perfect_power_decompose, prime_factors};
use crate::error::{Error, Result};

/// Guard on the continued-fraction expansion.
pub const CF_ITERATION_CAP: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellSolution {
    pub d: u64,
    pub x: BigInt,
    pub y: BigInt,
}

impl PellSolution {
    pub fn satisfies(&self) -> bool {
        &self.x * &self.x - &self.y * &self.y * self.d == BigInt::one()
    }
}

/// Minimal solution with `X >= 2`, read off the convergents of the
/// continued fraction of `sqrt(D)`.
pub fn fundamental_solution(d: u64) -> Result<PellSolution> {
    if d < 2 || is_perfect_square(&BigInt::from(d)).is_some() {
        return Err(Error::Domain("Pell parameter must be a positive nonsquare"));
    }
    let a0 = crate::arith::iroot_u128(u128::from(d), 2) as u64;
    let (mut m, mut den, mut a) = (0u64, 1u64, a0);
    // Convergents p/q, seeded with p_{-1}/q_{-1} = 1/0.
    let (mut p_prev, mut p) = (BigInt::one(), BigInt::from(a0));
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    for _ in 0..CF_ITERATION_CAP {
        if &p * &p - &q * &q * d == BigInt::one() {
            return Ok(PellSolution { d, x: p, y: q });
        }
        m = den * a - m;
        den = (d - m * m) / den;
        a = (a0 + m) / den;
        let p_next = &p * a + &p_prev;
        let q_next = &q * a + &q_prev;
        p_prev = core::mem::replace(&mut p, p_next);
        q_prev = core::mem::replace(&mut q, q_next);
    }
    Err(Error::IterationCap(CF_ITERATION_CAP))
}

/// `(index, X_m, Y_m)` with `X_m + Y_m sqrt(D) = (X_1 + Y_1 sqrt(D))^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellTerm {
    pub index: usize,
    pub x: BigInt,
    pub y: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LucasSequence {
    pub d: u64,
    pub terms: Vec<PellTerm>,
}

impl LucasSequence {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The term with 1-based index `m`.
    pub fn term(&self, m: usize) -> Result<&PellTerm> {
        if m == 0 || m > self.terms.len() {
            return Err(Error::IndexOutOfRange {
                index: m,
                len: self.terms.len(),
            });
        }
        Ok(&self.terms[m - 1])
    }

    pub fn x_values(&self) -> impl Iterator<Item = &BigInt> {
        self.terms.iter().map(|t| &t.x)
    }
}

/// The first `count` solutions via `X_m = 2 X_1 X_{m-1} - X_{m-2}` (and the
/// same recurrence for `Y`), seeded with `(X_0, Y_0) = (1, 0)`.
pub fn sequence(d: u64, count: usize) -> Result<LucasSequence> {
    if count == 0 {
        return Err(Error::Domain("sequence needs at least one term"));
    }
    let fund = fundamental_solution(d)?;
    let trace = &fund.x * 2;
    let mut terms = Vec::with_capacity(count);
    let (mut x_prev, mut y_prev) = (BigInt::one(), BigInt::zero());
    let (mut x, mut y) = (fund.x.clone(), fund.y.clone());
    for index in 1..=count {
        terms.push(PellTerm {
            index,
            x: x.clone(),
            y: y.clone(),
        });
        let x_next = &trace * &x - &x_prev;
        let y_next = &trace * &y - &y_prev;
        x_prev = core::mem::replace(&mut x, x_next);
        y_prev = core::mem::replace(&mut y, y_next);
    }
    Ok(LucasSequence { d, terms })
}

/// Indices `m` whose `X_m` is a power `q^j`, `j >= 1`.
pub fn prime_power_scan(seq: &LucasSequence, q: u64) -> Vec<usize> {
    let q = BigInt::from(q);
    seq.terms
        .iter()
        .filter(|t| is_power_of(&t.x, &q))
        .map(|t| t.index)
        .collect()
}

fn is_power_of(n: &BigInt, q: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    // With q prime, q^j decomposes with base exactly q.
    match perfect_power_decompose(n) {
        Ok((base, _)) => &base == q,
        Err(_) => false,
    }
}

/// Smallest prime dividing `X_m` but none of `X_1, ..., X_{m-1}`.
///
/// The prime-to-earlier-terms part of `X_m` is isolated by repeated gcd
/// stripping; any prime factor of that part is primitive.
pub fn primitive_divisor(seq: &LucasSequence, m: usize) -> Result<Option<BigInt>> {
    let target = &seq.term(m)?.x;
    let mut rest = target.clone();
    for earlier in seq.terms[..m - 1].iter() {
        loop {
            let g = rest.gcd(&earlier.x);
            if g.is_one() {
                break;
            }
            rest /= g;
        }
    }
    Ok(prime_factors(&rest).into_iter().next())
}
