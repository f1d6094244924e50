//! Bounded exhaustive search for `x^2 + c^m = y^n` and `q*x^2 + 1 = y^n`,
//! exact verification, and the family lift
//! `(x, y, m, n) -> (x c^(nM), y c^(2M), m + 2nM, n)`.
//!
//! The search walks `(n, y, m)` and tests `y^n - c^m` for squareness: at a
//! fixed bound the `y` loop is far shorter than an `x` loop. Values that fit in
//! `u128` take a machine-integer path; everything else runs on big integers.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::arith::{big_pow, exact_root, exact_root_u128, iroot, iroot_u128, is_perfect_square, to_u128};
use crate::error::{Error, Result};

/// A search box for `x^2 + c^m = y^n`: every `y^n <= bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationInstance {
    pub c: u64,
    pub m_values: Vec<u32>,
    pub n_values: Vec<u32>,
    pub bound: BigInt,
}

impl EquationInstance {
    /// Validates and normalizes (sorted, deduplicated exponent lists).
    pub fn new(c: u64, m_values: &[u32], n_values: &[u32], bound: BigInt) -> Result<Self> {
        let bad = |msg| Err(Error::InvalidInstance(msg));
        if c < 2 {
            return bad(format!("c = {c} must be at least 2"));
        }
        let mut m_values = m_values.to_vec();
        let mut n_values = n_values.to_vec();
        m_values.sort_unstable();
        m_values.dedup();
        n_values.sort_unstable();
        n_values.dedup();
        if m_values.is_empty() || n_values.is_empty() {
            return bad(String::from("empty exponent range"));
        }
        if m_values[0] == 0 {
            return bad(String::from("m must be positive"));
        }
        if n_values[0] < 3 {
            return bad(format!("n = {} must be at least 3", n_values[0]));
        }
        if bound < big_pow(c, m_values[0]) {
            return bad(format!("bound is below {c}^{}", m_values[0]));
        }
        Ok(Self {
            c,
            m_values,
            n_values,
            bound,
        })
    }

    /// Exclusive upper end of the `y` range over all exponents.
    pub fn y_end(&self) -> u64 {
        let n_min = self.n_values[0];
        iroot(&self.bound, n_min)
            .ok()
            .and_then(|r| r.to_u64())
            .map_or(u64::MAX, |r| r.saturating_add(1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Solution {
    pub x: BigInt,
    pub y: BigInt,
    pub m: u32,
    pub n: u32,
    pub c: u64,
}

impl Solution {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>, m: u32, n: u32, c: u64) -> Self {
        Self {
            x: x.into(),
            y: y.into(),
            m,
            n,
            c,
        }
    }

    /// `x = 0`, i.e. `c^m` is itself an `n`-th power.
    pub fn is_degenerate(&self) -> bool {
        self.x.is_zero()
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {}, {})", self.x, self.y, self.m, self.n, self.c)
    }
}

/// `x^2 + c^m == y^n` exactly, with `x >= 0` and `y >= 1`.
pub fn verify_solution(s: &Solution) -> bool {
    if s.x.is_negative() || s.y < BigInt::one() {
        return false;
    }
    &s.x * &s.x + big_pow(s.c, s.m) == Pow::pow(&s.y, s.n)
}

/// Solutions of one search partition, split by degeneracy.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchOutcome {
    pub solutions: Vec<Solution>,
    pub degenerate: Vec<Solution>,
}

impl SearchOutcome {
    pub fn merge(mut self, other: SearchOutcome) -> Self {
        self.solutions.extend(other.solutions);
        self.degenerate.extend(other.degenerate);
        self.solutions.sort();
        self.solutions.dedup();
        self.degenerate.sort();
        self.degenerate.dedup();
        self
    }
}

/// All solutions with `x >= 1` in the box, sorted by `(x, y, m, n)`.
pub fn brute_force(inst: &EquationInstance) -> Vec<Solution> {
    brute_force_in(inst, 1..inst.y_end()).solutions
}

/// The `x = 0` solutions in the box.
pub fn degenerate_solutions(inst: &EquationInstance) -> Vec<Solution> {
    brute_force_in(inst, 1..inst.y_end()).degenerate
}

/// Search restricted to `y` in `ys`. Partitions of the `y` axis are
/// independent; their outcomes combine with [`SearchOutcome::merge`].
pub fn brute_force_in(inst: &EquationInstance, ys: Range<u64>) -> SearchOutcome {
    let constants: Vec<(u32, BigInt)> = inst.m_values.iter().map(|&m| (m, big_pow(inst.c, m))).collect();
    let mut out = SearchOutcome::default();
    for (x, y, n, m) in power_differences(&constants, &inst.n_values, &inst.bound, ys) {
        let s = Solution { x, y, m, n, c: inst.c };
        if s.is_degenerate() {
            out.degenerate.push(s);
        } else {
            out.solutions.push(s);
        }
    }
    out.solutions.sort();
    out.degenerate.sort();
    out
}

/// `(x, y, n)` with `x >= 1`, `x^2 + k = y^n` and `y^n <= bound`.
pub fn brute_force_constant(k: &BigInt, n_values: &[u32], bound: &BigInt) -> Vec<(BigInt, BigInt, u32)> {
    let n_min = n_values.iter().copied().min().unwrap_or(3).max(1);
    let y_end = iroot(bound, n_min)
        .ok()
        .and_then(|r| r.to_u64())
        .map_or(u64::MAX, |r| r.saturating_add(1));
    let mut out: Vec<_> = power_differences(&[(0, k.clone())], n_values, bound, 1..y_end)
        .into_iter()
        .filter(|(x, ..)| !x.is_zero())
        .map(|(x, y, n, _)| (x, y, n))
        .collect();
    out.sort();
    out
}

/// Core loop: for each `n`, each `y` in range with `y^n <= bound`, and each
/// tagged constant `k <= y^n`, report `(sqrt(y^n - k), y, n, tag)` when the
/// difference is a perfect square.
fn power_differences(
    constants: &[(u32, BigInt)],
    n_values: &[u32],
    bound: &BigInt,
    ys: Range<u64>,
) -> Vec<(BigInt, BigInt, u32, u32)> {
    let mut out = Vec::new();
    let machine = to_u128(bound).filter(|b| *b < 1u128 << 126);
    let small_constants: Option<Vec<(u32, u128)>> =
        constants.iter().map(|(tag, k)| to_u128(k).map(|k| (*tag, k))).collect();
    match (machine, small_constants) {
        (Some(bound), Some(ks)) => {
            for &n in n_values {
                let y_hi = (iroot_u128(bound, n) + 1).min(u128::from(ys.end));
                for y in u128::from(ys.start.max(1))..y_hi {
                    let yn = y.pow(n);
                    for &(tag, k) in &ks {
                        if k > yn {
                            continue;
                        }
                        if let Some(x) = exact_root_u128(yn - k, 2) {
                            out.push((BigInt::from(x), BigInt::from(y), n, tag));
                        }
                    }
                }
            }
        }
        _ => {
            for &n in n_values {
                let y_hi = iroot(bound, n).expect("nonnegative bound") + 1u32;
                let y_hi = y_hi.min(BigInt::from(ys.end));
                let mut y = BigInt::from(ys.start.max(1));
                while y < y_hi {
                    let yn = Pow::pow(&y, n);
                    for (tag, k) in constants {
                        if k > &yn {
                            continue;
                        }
                        if let Some(x) = is_perfect_square(&(&yn - k)) {
                            out.push((x, y.clone(), n, *tag));
                        }
                    }
                    y += 1u32;
                }
            }
        }
    }
    out
}

/// Integer points on `q*x^2 + 1 = y^n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AuxSolution {
    pub x: BigInt,
    pub y: BigInt,
    pub n: u32,
    pub q: u64,
}

/// All `(x, y, n)` with `1 <= x <= x_max`, `n` in `n_values` and
/// `q*x^2 + 1 = y^n`, found by perfect-power testing of `q*x^2 + 1`.
pub fn brute_force_aux(q: u64, x_max: u64, n_values: &[u32]) -> Result<Vec<AuxSolution>> {
    if q < 2 {
        return Err(Error::InvalidInstance(format!("q = {q} must be at least 2")));
    }
    if n_values.iter().any(|&n| n < 2) {
        return Err(Error::InvalidInstance(String::from("exponents must be at least 2")));
    }
    let mut out = Vec::new();
    let fits = u128::from(q)
        .checked_mul(u128::from(x_max) * u128::from(x_max))
        .is_some_and(|v| v < u128::MAX);
    if fits {
        let q = u128::from(q);
        for x in 1..=u128::from(x_max) {
            let v = q * x * x + 1;
            for &n in n_values {
                if let Some(y) = exact_root_u128(v, n) {
                    out.push(AuxSolution {
                        x: BigInt::from(x),
                        y: BigInt::from(y),
                        n,
                        q: q as u64,
                    });
                }
            }
        }
    } else {
        for x in 1..=x_max {
            let v = BigInt::from(x) * BigInt::from(x) * q + 1u32;
            for &n in n_values {
                if let Some(y) = exact_root(&v, n) {
                    out.push(AuxSolution {
                        x: BigInt::from(x),
                        y,
                        n,
                        q,
                    });
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// `(x c^(nM), y c^(2M), m + 2nM, n, c)`; for a base with `m = 1` this is the
/// family `m = 2nM + 1`. Composition adds the `M`s.
pub fn lift_family(base: &Solution, lift: u32) -> Result<Solution> {
    if !verify_solution(base) {
        return Err(Error::UnverifiedSolution);
    }
    let lifted = Solution {
        x: &base.x * big_pow(base.c, base.n * lift),
        y: &base.y * big_pow(base.c, 2 * lift),
        m: base.m + 2 * base.n * lift,
        n: base.n,
        c: base.c,
    };
    debug_assert!(verify_solution(&lifted));
    Ok(lifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn inst(c: u64, m: &[u32], n: &[u32], bound: u64) -> EquationInstance {
        EquationInstance::new(c, m, n, BigInt::from(bound)).unwrap()
    }

    #[test]
    fn known_solutions_m1() {
        let i = EquationInstance::new(19, &[1], &[3, 4, 5, 6, 7, 8, 9, 10], BigInt::from(10u64.pow(12))).unwrap();
        assert_eq!(
            brute_force(&i),
            vec![Solution::new(18, 7, 1, 3, 19), Solution::new(22434, 55, 1, 5, 19)]
        );
    }

    #[test]
    fn degenerate_rows_are_separated() {
        let i = inst(19, &[2, 4], &[3, 4], 10u64.pow(8));
        assert!(brute_force(&i).is_empty());
        assert_eq!(degenerate_solutions(&i), vec![Solution::new(0, 19, 4, 4, 19)]);
    }

    #[test]
    fn big_path_matches_machine_path() {
        let i = inst(7, &[1, 2, 3], &[3, 4, 5], 2_000_000);
        let constants: Vec<(u32, BigInt)> = i.m_values.iter().map(|&m| (m, big_pow(7, m))).collect();
        let machine = power_differences(&constants, &i.n_values, &i.bound, 1..u64::MAX);
        // a bound past 2^126 forces the big-integer path; cap y to compare like for like
        let huge = BigInt::one() << 130u32;
        let mut big: Vec<_> = power_differences(&constants, &i.n_values, &huge, 1..2000)
            .into_iter()
            .filter(|(_, y, n, _)| Pow::pow(y, *n) <= i.bound)
            .collect();
        let mut machine = machine;
        machine.sort();
        big.sort();
        assert_eq!(machine, big);
        assert!(!machine.is_empty());
    }

    #[test]
    fn partitions_merge_to_the_whole() {
        let i = inst(19, &[1, 2, 3], &[3, 5], 10u64.pow(10));
        let whole = brute_force_in(&i, 1..i.y_end());
        let parts = brute_force_in(&i, 1..10)
            .merge(brute_force_in(&i, 10..60))
            .merge(brute_force_in(&i, 60..i.y_end()));
        assert_eq!(whole, parts);
    }

    #[test]
    fn verify_examples() {
        assert!(verify_solution(&Solution::new(18, 7, 1, 3, 19)));
        assert!(verify_solution(&Solution::new(22434, 55, 1, 5, 19)));
        assert!(verify_solution(&Solution::new(2_759_646, 377, 1, 5, 341)));
        assert!(!verify_solution(&Solution::new(18, 7, 2, 3, 19)));
        assert!(!verify_solution(&Solution::new(-18, 7, 1, 3, 19)));
    }

    #[test]
    fn lift_examples() {
        let base = Solution::new(22434, 55, 1, 5, 19);
        let l1 = lift_family(&base, 1).unwrap();
        assert_eq!(
            l1,
            Solution::new(BigInt::from(22434) * big_pow(19, 5), 55 * 361, 11, 5, 19)
        );
        assert!(verify_solution(&l1));
        assert_eq!(lift_family(&base, 0).unwrap(), base);
        let other = Solution::new(2_759_646, 377, 1, 5, 341);
        assert!(verify_solution(&lift_family(&other, 1).unwrap()));
        assert_eq!(
            lift_family(&Solution::new(1, 1, 1, 3, 19), 1),
            Err(Error::UnverifiedSolution)
        );
    }

    #[test]
    fn aux_examples() {
        assert!(brute_force_aux(19, 20_000, &[3, 4, 5, 6, 7, 8, 9, 10, 11, 12])
            .unwrap()
            .is_empty());
        assert!(brute_force_aux(2, 10, &[3]).unwrap().is_empty());
        assert!(brute_force_aux(3, 10, &[3]).unwrap().is_empty());
        // 7 * 1^2 + 1 = 2^3 and 7 * 3^2 + 1 = 4^3
        assert_eq!(
            brute_force_aux(7, 10, &[3]).unwrap(),
            vec![
                AuxSolution {
                    x: BigInt::from(1),
                    y: BigInt::from(2),
                    n: 3,
                    q: 7
                },
                AuxSolution {
                    x: BigInt::from(3),
                    y: BigInt::from(4),
                    n: 3,
                    q: 7
                },
            ]
        );
        assert!(brute_force_aux(1, 10, &[3]).is_err());
    }

    #[test]
    fn constant_search_finds_lebesgue_nothing() {
        let bound = BigInt::from(10u64.pow(12));
        assert!(brute_force_constant(&BigInt::one(), &[3, 4, 5, 6, 7], &bound).is_empty());
        // x^2 + 19 = y^n recovers the m = 1 rows
        let rows = brute_force_constant(&BigInt::from(19), &[3, 5], &bound);
        assert_eq!(rows.len(), 2);
    }

    #[test]
    fn instance_validation() {
        assert!(EquationInstance::new(1, &[1], &[3], BigInt::from(100)).is_err());
        assert!(EquationInstance::new(19, &[1], &[2], BigInt::from(100)).is_err());
        assert!(EquationInstance::new(19, &[], &[3], BigInt::from(100)).is_err());
        assert!(EquationInstance::new(19, &[3], &[3], BigInt::from(100)).is_err());
        assert!(EquationInstance::new(19, &[0], &[3], BigInt::from(100)).is_err());
    }
}
