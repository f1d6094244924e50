//! The 2-adic valuation lemma behind the odd-prime case of `19x^2 + 1 = y^n`.
//!
//! With `B` even and `p` an odd prime, the term `C(p, 2) (-19 B^2)` has
//! strictly smaller 2-adic valuation than every later term of
//! `sum_{k=1}^{(p-1)/2} C(p, 2k) (-19 B^2)^k`, so the sum cannot vanish.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{binomial, odd_primes_up_to, v2};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValuationReport {
    pub p_max: u64,
    pub b_max: u64,
    /// `(p, B)` pairs examined.
    pub pairs: u64,
    /// `(p, B, k)` comparisons made.
    pub instances: u64,
    /// `(p, B, k)` with `V2(term_k) <= V2(term_1)`.
    pub violations: Vec<(u64, i64, u64)>,
    /// `(p, B)` whose full sum is zero.
    pub vanishing: Vec<(u64, i64)>,
}

impl ValuationReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty() && self.vanishing.is_empty()
    }
}

/// Checks every odd prime `p <= p_max` and even `B` with `2 <= |B| <= b_max`.
pub fn verify_valuation_lemma(p_max: u64, b_max: u64) -> Result<ValuationReport> {
    if p_max < 3 {
        return Err(Error::Domain("p_max must be at least 3"));
    }
    if b_max < 2 {
        return Err(Error::Domain("b_max must be at least 2"));
    }
    let b_max_i = i64::try_from(b_max).map_err(|_| Error::Domain("b_max too large"))?;
    let mut report = ValuationReport {
        p_max,
        b_max,
        pairs: 0,
        instances: 0,
        violations: Vec::new(),
        vanishing: Vec::new(),
    };
    for p in odd_primes_up_to(p_max) {
        let binoms: Vec<BigInt> = (0..=p).map(|i| binomial(p, i)).collect::<Result<_>>()?;
        for b in (2..=b_max_i).step_by(2).flat_map(|b: i64| [-b, b]) {
            report.pairs += 1;
            let b_big = BigInt::from(b);
            let t = -(&b_big * &b_big * 19u32);
            let mut power = BigInt::from(1);
            let mut sum = BigInt::zero();
            let mut lead = 0u64;
            for k in 1..=(p - 1) / 2 {
                power *= &t;
                let term = &binoms[(2 * k) as usize] * &power;
                let val = v2(&term).expect("binomial times nonzero power");
                if k == 1 {
                    lead = val;
                } else {
                    report.instances += 1;
                    if val <= lead {
                        report.violations.push((p, b, k));
                    }
                }
                sum += term;
            }
            if sum.is_zero() {
                report.vanishing.push((p, b));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn holds_on_the_default_range() {
        let r = verify_valuation_lemma(50, 40).unwrap();
        assert!(r.holds());
        assert!(r.instances > 0);
        // 14 odd primes below 50, 20 even magnitudes, two signs
        assert_eq!(r.pairs, 14 * 40);
    }

    #[test]
    fn rejects_degenerate_ranges() {
        assert!(verify_valuation_lemma(2, 10).is_err());
        assert!(verify_valuation_lemma(10, 1).is_err());
    }
}
