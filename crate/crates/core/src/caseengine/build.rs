//! Assembly of the three certificate trees.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::divisor::{enumerate_divisor_cases_even, enumerate_divisor_cases_odd, factor_pair_n4};
use super::reduction::{class_label, DescentBox, DescentClass, Minimum, Parity};
use super::tree::{BranchKind, CertificateTree, Citation, Leaf, Reference, SearchCheck};
use super::valuation::verify_valuation_lemma;
use super::{CertifyOptions, Theorem};
use crate::arith::{big_pow, perfect_power_decompose};
use crate::error::{Error, Result};
use crate::sieve::{self, Base, CongruenceSpec, VarConstraint};

fn obstruction(label: impl Into<alloc::string::String>, spec: &CongruenceSpec) -> Result<CertificateTree> {
    Ok(CertificateTree::leaf(label, Leaf::Obstruction(sieve::check(spec)?)))
}

/// Search bound for `x^2 + 19^m = y^n`: the configured bound, raised past
/// `19^m` when that is larger.
fn bound_for(m: u32, opts: &CertifyOptions) -> BigInt {
    let floor = big_pow(19, m + 1);
    if opts.search_bound >= floor {
        opts.search_bound.clone()
    } else {
        floor
    }
}

fn equation_check(m_values: &[u32], n_values: &[u32], opts: &CertifyOptions) -> SearchCheck {
    let m_max = m_values.iter().copied().max().unwrap_or(1);
    SearchCheck::equation(19, m_values, n_values, &bound_for(m_max, opts))
}

/// `19x^2 + 1 = y^n` has no solutions with `x >= 1`, `n >= 3`.
pub fn lemma1_tree(opts: &CertifyOptions) -> Result<CertificateTree> {
    let y_even = CongruenceSpec::new(8)
        .variable("x", VarConstraint::Any)
        .variable("y", VarConstraint::Even)
        .parameter("n", Base::Variable(1), 3, 1)
        .term(19, &[(0, 2)], None)
        .term(1, &[], None)
        .term(-1, &[], Some(0));
    let x_odd = CongruenceSpec::new(8)
        .variable("x", VarConstraint::Odd)
        .variable("y", VarConstraint::Any)
        .parameter("n", Base::Variable(1), 3, 1)
        .term(19, &[(0, 2)], None)
        .term(1, &[], None)
        .term(-1, &[], Some(0));
    let a_minus_one = CongruenceSpec::new(19)
        .parameter("p", Base::Constant(18), 3, 2)
        .term(1, &[], None)
        .term(-1, &[], Some(0));
    let b_odd = CongruenceSpec::new(2)
        .variable("B", VarConstraint::Odd)
        .variable("y", VarConstraint::Odd)
        .term(1, &[], None)
        .term(19, &[(0, 2)], None)
        .term(-1, &[(1, 1)], None);
    let report = verify_valuation_lemma(opts.valuation_p_max, opts.valuation_b_max)?;
    let aux_n: Vec<u32> = (3..=opts.aux_n_max.max(3)).collect();

    let odd_prime = CertificateTree::branch(
        "n = p odd prime: 1 + x*sqrt(-19) = (A + B*sqrt(-19))^p, y = A^2 + 19B^2",
        BranchKind::CaseSplit,
        vec![
            CertificateTree::leaf(
                "Z[sqrt(-19)] factorization, units +-1",
                Leaf::Citation {
                    citation: Citation::ClassNumberOne,
                    check: None,
                },
            ),
            obstruction("A | 1; A = -1: 1 = (-1)^p (mod 19)", &a_minus_one)?,
            obstruction("A = 1, B odd: y = 1 + 19B^2 is even", &b_odd)?,
            CertificateTree::leaf(
                "A = 1, B even: sum C(p, 2k)(-19B^2)^k = 0 is impossible 2-adically",
                Leaf::ValuationLemma(report),
            ),
        ],
    );

    Ok(CertificateTree::branch(
        "19x^2 + 1 = y^n, x >= 1, n > 2 (so 4 | n or an odd prime divides n)",
        BranchKind::CaseSplit,
        vec![
            obstruction("y even: 19x^2 + 1 = y^n (mod 8)", &y_even)?,
            obstruction("x odd: 19x^2 + 1 = y^n (mod 8)", &x_odd)?,
            CertificateTree::leaf(
                "n = 4: 19x^2 + 1 = y^4",
                Leaf::Citation {
                    citation: Citation::CohnQuartic,
                    check: Some(SearchCheck::aux(19, opts.aux_x_max, &[4])),
                },
            ),
            odd_prime,
            CertificateTree::leaf(
                format!("19x^2 + 1 = y^n, x <= {}, 3 <= n <= {}", opts.aux_x_max, opts.aux_n_max),
                Leaf::BoundedSearch(SearchCheck::aux(19, opts.aux_x_max, &aux_n)),
            ),
        ],
    ))
}

/// Leaf closing one class of the valuation split.
fn class_leaf(class: DescentClass, n: u32, opts: &CertifyOptions) -> Result<Leaf> {
    let x_coprime = VarConstraint::NotDivisibleBy(19);
    Ok(match class {
        DescentClass::Lebesgue => Leaf::Citation {
            citation: Citation::Lebesgue,
            check: Some(SearchCheck::constant(BigInt::from(1), &[n], &opts.search_bound)),
        },
        DescentClass::MixedPower => {
            let spec = CongruenceSpec::new(19)
                .variable("X", VarConstraint::Any)
                .variable("Y", x_coprime)
                .parameter("w", Base::Constant(19), 1, 1)
                .term(1, &[(0, 2)], None)
                .term(1, &[], None)
                .term(-1, &[(1, n)], Some(0));
            Leaf::Obstruction(sieve::check(&spec)?)
        }
        DescentClass::Mod19(zero) => {
            // The two sides not cancelled carry parameters a, b >= 1.
            let mut spec = CongruenceSpec::new(19)
                .variable("X", x_coprime)
                .variable("Y", x_coprime)
                .parameter("a", Base::Constant(19), 1, 1)
                .parameter("b", Base::Constant(19), 1, 1);
            let (px, pc, py) = match zero {
                Minimum::X => (None, Some(0), Some(1)),
                Minimum::C => (Some(0), None, Some(1)),
                Minimum::Y => (Some(0), Some(1), None),
            };
            spec = spec.term(1, &[(0, 2)], px).term(1, &[], pc).term(-1, &[(1, n)], py);
            Leaf::Obstruction(sieve::check(&spec)?)
        }
        DescentClass::CoprimeEven { j } if n == 3 => Leaf::Reference(Reference::CoprimeEven { k: j }),
        DescentClass::CoprimeEven { j } => Leaf::Citation {
            citation: Citation::BerczesPink,
            check: Some(equation_check(&[2 * j], &[n], opts)),
        },
        DescentClass::CoprimeOdd { j } if j >= 1 && n == 3 => Leaf::Reference(Reference::CoprimeOdd { k: j }),
        DescentClass::CoprimeOdd { j: 0 } => Leaf::Citation {
            citation: Citation::CohnM1,
            check: Some(equation_check(&[1], &[n], opts)),
        },
        DescentClass::CoprimeOdd { j } => Leaf::Citation {
            citation: Citation::ArifMuriefahOdd,
            check: Some(equation_check(&[2 * j + 1], &[n], opts)),
        },
        DescentClass::AuxPell => Leaf::Reference(Reference::Lemma1),
    })
}

/// `19 | x`: cancel the smallest power of 19 and close every reduced shape.
pub fn descent_split(parity: Parity, k: u32, n: u32, opts: &CertifyOptions) -> Result<CertificateTree> {
    let bx = DescentBox::new(parity, k, n);
    let mut children = Vec::new();
    for (class, cells) in bx.classes()? {
        children.push(CertificateTree::leaf(
            class_label(class, n, &cells),
            class_leaf(class, n, opts)?,
        ));
    }
    Ok(CertificateTree::branch(
        format!(
            "19 | x: x^2 + 19^{} = y^{n}, x = 19^u X, y = 19^v Y",
            parity.exponent(k)
        ),
        BranchKind::ValuationSplit(bx),
        children,
    ))
}

/// Even `n`: `(y^(n/2) - x)(y^(n/2) + x) = 19^(2k)` pins `y^(n/2)` to
/// finitely many values, none of them a perfect power.
fn even_n_pairs(k: u32) -> Result<CertificateTree> {
    let mut children = Vec::new();
    for i in 0..k {
        let big = big_pow(19, i) + big_pow(19, 2 * k - i);
        let z = big / 2;
        let (_, e) = perfect_power_decompose(&z)?;
        children.push(CertificateTree::leaf(
            format!("y^(n/2) - x = 19^{i}: y^(n/2) = {z}"),
            Leaf::NotPerfectPower { value: z, exponent: e },
        ));
    }
    Ok(CertificateTree::branch(
        format!("n even: 19^{} = (y^(n/2) - x)(y^(n/2) + x)", 2 * k),
        BranchKind::DivisorEnumeration,
        children,
    ))
}

/// `x^2 + 19^(2k) = y^n` has no solutions with `x >= 1`, `n > 2`.
pub fn theorem2_tree(k_values: &[u32], opts: &CertifyOptions) -> Result<CertificateTree> {
    let ms: Vec<u32> = k_values.iter().map(|k| 2 * k).collect();
    let even_n: Vec<u32> = (2..=opts.n_max / 2).map(|h| 2 * h).collect();

    let mut even = vec![CertificateTree::leaf(
        "(19, x) = 1, 19 = 3 (mod 8)",
        Leaf::Citation {
            citation: Citation::ArifMuriefahEven,
            check: Some(equation_check(&ms, &even_n, opts)),
        },
    )];
    for &k in k_values {
        even.push(even_n_pairs(k)?);
    }

    let mut cubic = vec![CertificateTree::leaf(
        format!(
            "X_m = 4X_(m-1) - X_(m-2) has primitive divisors for m <= {}",
            opts.primitive_max
        ),
        Leaf::Citation {
            citation: Citation::PrimitiveDivisor,
            check: Some(SearchCheck::primitive_divisors(3, 1, opts.primitive_max)),
        },
    )];
    for &k in k_values {
        cubic.push(enumerate_divisor_cases_even(k, opts)?);
        cubic.push(descent_split(Parity::Even, k, 3, opts)?);
    }

    let mut higher = vec![CertificateTree::leaf(
        "(x, y) = 1",
        Leaf::Citation {
            citation: Citation::BerczesPink,
            check: Some(equation_check(&ms, &opts.descent_primes, opts)),
        },
    )];
    for &k in k_values {
        for &p in &opts.descent_primes {
            higher.push(descent_split(Parity::Even, k, p, opts)?);
        }
    }

    let all_n: Vec<u32> = (3..=opts.n_max.max(3)).collect();
    Ok(CertificateTree::branch(
        format!("x^2 + 19^(2k) = y^n, x >= 1, n > 2, k in {k_values:?}"),
        BranchKind::CaseSplit,
        vec![
            CertificateTree::branch("n even", BranchKind::CaseSplit, even),
            CertificateTree::branch("n = 3: x + 19^k i = (u + vi)^3", BranchKind::CaseSplit, cubic),
            CertificateTree::branch("n = p >= 5 prime", BranchKind::CaseSplit, higher),
            CertificateTree::leaf(
                format!("bounded search, 3 <= n <= {}", opts.n_max),
                Leaf::BoundedSearch(equation_check(&ms, &all_n, opts)),
            ),
        ],
    ))
}

/// `x^2 + 19^(2k+1) = y^n` has no solutions with `x >= 1`, `n in {3, 4}`.
pub fn theorem6_tree(k_values: &[u32], opts: &CertifyOptions) -> Result<CertificateTree> {
    let ms: Vec<u32> = k_values.iter().map(|k| 2 * k + 1).collect();
    let mut cubic = vec![CertificateTree::leaf(
        "x + 19^k sqrt(-19) = ((a + b*sqrt(-19))/2)^3",
        Leaf::Citation {
            citation: Citation::ClassNumberOne,
            check: None,
        },
    )];
    for &k in k_values {
        cubic.push(enumerate_divisor_cases_odd(k, opts)?);
        cubic.push(descent_split(Parity::Odd, k, 3, opts)?);
    }
    let quartic = k_values
        .iter()
        .map(|&k| factor_pair_n4(k))
        .collect::<Result<Vec<_>>>()?;
    Ok(CertificateTree::branch(
        format!("x^2 + 19^(2k+1) = y^n, x >= 1, n in {{3, 4}}, k in {k_values:?}"),
        BranchKind::CaseSplit,
        vec![
            CertificateTree::branch("n = 3", BranchKind::CaseSplit, cubic),
            CertificateTree::branch("n = 4", BranchKind::CaseSplit, quartic),
            CertificateTree::leaf(
                "bounded search, n in {3, 4}",
                Leaf::BoundedSearch(equation_check(&ms, &[3, 4], opts)),
            ),
        ],
    ))
}

pub fn assemble(theorem: Theorem, k_values: &[u32], opts: &CertifyOptions) -> Result<CertificateTree> {
    match theorem {
        Theorem::Lemma1 => lemma1_tree(opts),
        _ if k_values.is_empty() => Err(Error::Domain("at least one k is required")),
        _ if k_values.contains(&0) => Err(Error::Domain("k must be positive")),
        Theorem::Theorem2 => theorem2_tree(k_values, opts),
        Theorem::Theorem6 => theorem6_tree(k_values, opts),
    }
}

/// The certificate a reference leaf points at. Construction failures yield
/// an empty branch, which never verifies.
pub fn reference_target(r: Reference, opts: &CertifyOptions) -> CertificateTree {
    let built = match r {
        Reference::Lemma1 => lemma1_tree(opts),
        Reference::CoprimeEven { k } => enumerate_divisor_cases_even(k, opts),
        Reference::CoprimeOdd { k } => enumerate_divisor_cases_odd(k, opts),
    };
    built.unwrap_or_else(|e| CertificateTree::branch(format!("{e}"), BranchKind::CaseSplit, Vec::new()))
}
