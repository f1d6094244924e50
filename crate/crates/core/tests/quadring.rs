use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use proptest::prelude::*;
use rn19_core::quadring::{half_pow, imag_part_sum, real_part_sum, HalfQuadInt, QuadInt};

/// `(a + b sqrt(-d))^p` by p - 1 schoolbook multiplications.
fn naive_pow(a: i64, b: i64, d: i64, p: u32) -> (BigInt, BigInt) {
    let (a, b, d) = (BigInt::from(a), BigInt::from(b), BigInt::from(d));
    let (mut re, mut im) = (a.clone(), b.clone());
    for _ in 1..p {
        let r = &re * &a - &im * &b * &d;
        let i = &re * &b + &im * &a;
        re = r;
        im = i;
    }
    (re, im)
}

#[test]
fn binomial_sums_match_repeated_multiplication() {
    for d in [1u64, 19] {
        for p in [3u32, 5, 7, 11, 13] {
            for a in -10i64..=10 {
                for b in -10i64..=10 {
                    let (re, im) = naive_pow(a, b, d as i64, p);
                    let (ab, bb) = (BigInt::from(a), BigInt::from(b));
                    assert_eq!(real_part_sum(&ab, &bb, d, p).unwrap(), re, "re ({a}, {b}) d={d} p={p}");
                    assert_eq!(imag_part_sum(&ab, &bb, d, p).unwrap(), im, "im ({a}, {b}) d={d} p={p}");
                    let z = QuadInt::new(d, a, b).unwrap().pow(p);
                    assert_eq!((z.re().clone(), z.im().clone()), (re, im));
                }
            }
        }
    }
}

#[test]
fn sums_reject_non_prime_exponents() {
    let one = BigInt::from(1);
    for p in [0u32, 1, 2, 4, 9] {
        assert!(real_part_sum(&one, &one, 19, p).is_err());
        assert!(imag_part_sum(&one, &one, 19, p).is_err());
    }
}

#[test]
fn half_cube_recovers_eighteen() {
    // ((3 + sqrt(-19)) / 2)^3 = (-36 + 2 sqrt(-19)) / 2 = -(36 - 2 sqrt(-19)) / 2
    let z = HalfQuadInt::new(19, 3, 1).unwrap();
    let w = half_pow(&z, 3);
    assert_eq!((w.a().clone(), w.b().clone()), (BigInt::from(-36), BigInt::from(2)));
    assert_eq!(w.a().clone() / 2, BigInt::from(-18));
    // norm 7^3 = 343 = 18^2 + 19
    assert_eq!(w.norm(), BigInt::from(343));
}

#[test]
fn half_integer_parity_enforced() {
    assert!(HalfQuadInt::new(19, 3, 2).is_err());
    assert!(HalfQuadInt::new(5, 1, 1).is_err());
    assert!(HalfQuadInt::new(19, 4, 2).is_ok());
}

fn ring() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![1u64, 19])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn norm_is_multiplicative(d in ring(), a in -10_000i64..10_000, b in -10_000i64..10_000, c in -10_000i64..10_000, e in -10_000i64..10_000) {
        let z1 = QuadInt::new(d, a, b).unwrap();
        let z2 = QuadInt::new(d, c, e).unwrap();
        prop_assert_eq!(z1.mul(&z2).unwrap().norm(), z1.norm() * z2.norm());
    }

    #[test]
    fn norm_vanishes_only_at_zero(d in ring(), a in -50i64..50, b in -50i64..50) {
        let z = QuadInt::new(d, a, b).unwrap();
        prop_assert!(z.norm() >= BigInt::zero());
        prop_assert_eq!(z.norm().is_zero(), a == 0 && b == 0);
    }

    #[test]
    fn half_pow_scales_to_numerator_pow(a in -200i64..200, b in -200i64..200, n in 1u32..12) {
        let b = if (a - b) % 2 == 0 { b } else { b + 1 };
        let z = HalfQuadInt::new(19, a, b).unwrap();
        let w = half_pow(&z, n);
        let num = z.numerator().pow(n);
        let scale = Pow::pow(BigInt::from(2), n - 1);
        prop_assert_eq!(w.a() * &scale, num.re().clone());
        prop_assert_eq!(w.b() * &scale, num.im().clone());
        prop_assert_eq!(w.norm(), Pow::pow(z.norm(), n));
    }

    #[test]
    fn norm_of_power_is_power_of_norm(d in ring(), a in -100i64..100, b in -100i64..100, p in prop::sample::select(vec![3u32, 5, 7])) {
        let z = QuadInt::new(d, a, b).unwrap();
        prop_assert_eq!(z.pow(p).norm(), Pow::pow(z.norm(), p));
    }
}
