use std::collections::BTreeSet;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Pow, Zero};
use proptest::prelude::*;
use rn19_core::arith::{
    big_pow, binomial, iroot, is_perfect_square, isqrt, padic_valuation, perfect_power_decompose, quadratic_residues,
};

fn big(bytes: Vec<u8>) -> BigInt {
    BigInt::from_bytes_be(Sign::Plus, &bytes)
}

proptest! {
    #[test]
    fn isqrt_brackets(bytes in prop::collection::vec(any::<u8>(), 0..200)) {
        let n = big(bytes);
        let r = isqrt(&n).unwrap();
        prop_assert!(&r * &r <= n);
        let r1 = r + 1;
        prop_assert!(&r1 * &r1 > n);
    }

    #[test]
    fn iroot_brackets(bytes in prop::collection::vec(any::<u8>(), 0..64), e in 2u32..12) {
        let n = big(bytes);
        let r = iroot(&n, e).unwrap();
        prop_assert!(Pow::pow(&r, e) <= n);
        prop_assert!(Pow::pow(&(r + 1), e) > n);
    }

    #[test]
    fn valuation_recomposes(bytes in prop::collection::vec(any::<u8>(), 1..40), p in prop::sample::select(vec![2u64, 3, 5, 19, 97]), shift in 0u32..20) {
        let n = big(bytes);
        prop_assume!(!n.is_zero());
        let n = n * big_pow(p, shift);
        let (v, unit) = padic_valuation(p, &n).unwrap();
        prop_assert!(v >= u64::from(shift));
        prop_assert_eq!(big_pow(p, v as u32) * &unit, n);
        prop_assert!(!(&unit % p).is_zero());
    }

    #[test]
    fn negative_values_have_the_same_valuation(x in 1i64..1_000_000, p in prop::sample::select(vec![2u64, 3, 19])) {
        let (v, u) = padic_valuation(p, &BigInt::from(x)).unwrap();
        let (w, t) = padic_valuation(p, &BigInt::from(-x)).unwrap();
        prop_assert_eq!(v, w);
        prop_assert_eq!(u, -t);
    }
}

#[test]
fn perfect_powers_keep_their_exponent() {
    for b in 2u64..=50 {
        for e in 1u32..=10 {
            let n = big_pow(b, e);
            let (base, exp) = perfect_power_decompose(&n).unwrap();
            assert_eq!(exp % e, 0, "{b}^{e}");
            assert_eq!(Pow::pow(&base, exp), n);
        }
    }
}

#[test]
fn perfect_power_exponent_is_maximal() {
    // 2^12 = 4096 must come back as 2^12, not 4^6 or 64^2
    assert_eq!(
        perfect_power_decompose(&BigInt::from(4096)).unwrap(),
        (BigInt::from(2), 12)
    );
    assert_eq!(perfect_power_decompose(&BigInt::from(55u64.pow(5) - 1)).unwrap().1, 1);
    let n = BigInt::from(18 * 18 + 19);
    assert_eq!(perfect_power_decompose(&n).unwrap(), (BigInt::from(7), 3));
}

#[test]
fn squares_recognised() {
    for x in 0u64..2000 {
        let sq = BigInt::from(x * x);
        assert_eq!(is_perfect_square(&sq), Some(BigInt::from(x)));
        if x > 1 {
            assert_eq!(is_perfect_square(&(sq + 1)), None);
        }
    }
}

#[test]
fn residues_match_brute_force() {
    for m in 2u64..=1000 {
        let want: BTreeSet<u64> = (0..m).map(|s| s * s % m).collect();
        assert_eq!(quadratic_residues(m).unwrap(), want, "m = {m}");
    }
}

#[test]
fn pascal() {
    for n in 1u64..=64 {
        assert_eq!(binomial(n, 0).unwrap(), BigInt::one());
        assert_eq!(binomial(n, n).unwrap(), BigInt::one());
        for k in 1..n {
            assert_eq!(
                binomial(n, k).unwrap(),
                binomial(n - 1, k - 1).unwrap() + binomial(n - 1, k).unwrap(),
                "C({n}, {k})"
            );
        }
    }
}

#[test]
fn domain_errors() {
    assert!(isqrt(&BigInt::from(-1)).is_err());
    assert!(padic_valuation(19, &BigInt::zero()).is_err());
    assert!(padic_valuation(1, &BigInt::from(5)).is_err());
    assert!(quadratic_residues(1).is_err());
}
