use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rn19_core::arith::perfect_power_decompose;
use rn19_core::pell::{fundamental_solution, prime_power_scan, primitive_divisor, sequence};

/// Smallest `(x, y)` with `y >= 1` and `x^2 - d y^2 = 1`, by scanning `y`.
fn minimal_by_search(d: u64) -> (u64, u64) {
    for y in 1u64.. {
        let t = 1 + d * y * y;
        let x = (t as f64).sqrt() as u64;
        for x in x.saturating_sub(2)..=x + 2 {
            if x * x == t {
                return (x, y);
            }
        }
    }
    unreachable!()
}

#[test]
fn fundamental_matches_exhaustive_search() {
    for d in 2u64..=50 {
        if (1..=7).any(|r| r * r == d) {
            assert!(fundamental_solution(d).is_err());
            continue;
        }
        let f = fundamental_solution(d).unwrap();
        let (x, y) = minimal_by_search(d);
        assert_eq!((f.x, f.y), (BigInt::from(x), BigInt::from(y)), "d = {d}");
    }
}

#[test]
fn three_starts_two_seven_twenty_six() {
    let f = fundamental_solution(3).unwrap();
    assert_eq!((f.x, f.y), (BigInt::from(2), BigInt::one()));
    let s = sequence(3, 4).unwrap();
    let xs: Vec<_> = s.x_values().cloned().collect();
    assert_eq!(xs, [2, 7, 26, 97].map(BigInt::from));
}

#[test]
fn every_term_is_on_the_conic() {
    for d in [2u64, 3, 19] {
        let s = sequence(d, 200).unwrap();
        for t in &s.terms {
            assert_eq!(&t.x * &t.x - &t.y * &t.y * d, BigInt::one(), "d = {d}, m = {}", t.index);
        }
        // X_m = 2 X_1 X_(m-1) - X_(m-2)
        let x1 = &s.terms[0].x;
        for w in s.terms.windows(3) {
            assert_eq!(w[2].x.clone(), x1 * 2 * &w[1].x - &w[0].x);
        }
    }
}

#[test]
fn no_power_of_nineteen_in_two_hundred_terms() {
    let s = sequence(3, 200).unwrap();
    assert!(prime_power_scan(&s, 19).is_empty());
}

#[test]
fn scan_agrees_with_decomposition() {
    let s = sequence(3, 120).unwrap();
    for q in [2u64, 7, 19, 97] {
        let hits = prime_power_scan(&s, q);
        for t in &s.terms {
            let (base, _) = perfect_power_decompose(&t.x).unwrap();
            assert_eq!(
                hits.contains(&t.index),
                base == BigInt::from(q),
                "q = {q}, m = {}",
                t.index
            );
        }
    }
    // X_1 = 2 and X_2 = 7 are first powers
    assert_eq!(prime_power_scan(&s, 2), vec![1]);
    assert_eq!(prime_power_scan(&s, 7), vec![2]);
}

#[test]
fn primitive_divisors_from_thirteen_to_sixty() {
    let s = sequence(3, 60).unwrap();
    for m in 13..=60 {
        let p = primitive_divisor(&s, m)
            .unwrap()
            .unwrap_or_else(|| panic!("no primitive divisor at {m}"));
        assert!(s.term(m).unwrap().x.is_multiple_of(&p));
        for earlier in 1..m {
            assert!(
                !s.term(earlier).unwrap().x.is_multiple_of(&p),
                "{p} divides X_{earlier}"
            );
        }
    }
}

#[test]
fn pell_powers_match_recurrence() {
    // (2 + sqrt 3)^m by direct expansion
    let s = sequence(3, 30).unwrap();
    let (mut x, mut y) = (BigInt::one(), BigInt::from(0));
    for t in &s.terms {
        let nx = &x * 2 + &y * 3;
        let ny = &x + &y * 2;
        x = nx;
        y = ny;
        assert_eq!((&t.x, &t.y), (&x, &y));
    }
    assert!(s.term(0).is_err());
    assert!(s.term(31).is_err());
}
