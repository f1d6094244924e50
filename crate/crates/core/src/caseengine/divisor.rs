//! Divisor enumerations for the cubic coprime cases and the quartic
//! factor-pair split.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Signed;

use super::tree::{BranchKind, CertificateTree, Leaf, PellScan, PowerTerm, SquareEquation};
use super::CertifyOptions;
use crate::error::{Error, Result};
use crate::sieve::{self, Base, CongruenceSpec, VarConstraint};

/// Moduli tried, in order, before falling back to an exact check.
pub const CONCRETE_MODULI: [u64; 9] = [3, 4, 8, 9, 16, 19, 24, 361, 6859];

/// Moduli tried for the parametric family `3a^2 = 19^t +- 8`.
pub const FAMILY_MODULI: [u64; 7] = [3, 4, 8, 9, 16, 19, 24];

/// `coefficient * var^2 - rhs = 0 (mod modulus)`.
fn concrete_spec(eq: &SquareEquation, modulus: u64, coprime_to_19: bool) -> CongruenceSpec {
    let constraint = if coprime_to_19 && modulus.is_multiple_of(19) {
        VarConstraint::NotDivisibleBy(19)
    } else {
        VarConstraint::Any
    };
    CongruenceSpec::new(modulus)
        .variable(&eq.variable, constraint)
        .term(eq.coefficient, &[(0, 2)], None)
        .term(-eq.rhs_value(), &[], None)
}

/// Closes `eq` by sign, by the first unsolvable template, by the first
/// unsolvable concrete modulus, or else by exact evaluation.
pub fn close_square_equation(eq: &SquareEquation, templates: &[CongruenceSpec], coprime_to_19: bool) -> Leaf {
    if eq.rhs_value().is_negative() {
        return Leaf::Sign(eq.clone());
    }
    for spec in templates {
        if let Ok(o) = sieve::check(spec) {
            if o.is_unsolvable() {
                return Leaf::Obstruction(o);
            }
        }
    }
    for m in CONCRETE_MODULI {
        if let Ok(o) = sieve::check(&concrete_spec(eq, m, coprime_to_19)) {
            if o.is_unsolvable() {
                return Leaf::Obstruction(o);
            }
        }
    }
    Leaf::ExactCheck(eq.clone())
}

/// `3u^2 - 19^a - 19^b = 0 (mod 3)` with `a, b >= 1`.
fn two_power_mod3() -> CongruenceSpec {
    CongruenceSpec::new(3)
        .variable("u", VarConstraint::Any)
        .parameter("a", Base::Constant(19), 1, 1)
        .parameter("b", Base::Constant(19), 1, 1)
        .term(3, &[(0, 2)], None)
        .term(-1, &[], Some(0))
        .term(-1, &[], Some(1))
}

/// `3a^2 - 19^t - shift = 0 (mod modulus)`, `t >= 3` odd.
fn odd_family(modulus: u64, shift: i64) -> CongruenceSpec {
    CongruenceSpec::new(modulus)
        .variable("a", VarConstraint::Any)
        .parameter("t", Base::Constant(19), 3, 2)
        .term(3, &[(0, 2)], None)
        .term(-1, &[], Some(0))
        .term(-shift, &[], None)
}

/// `s * c * 19^j` written compactly.
fn divisor_name(s: i64, c: u64, j: u32) -> String {
    let sign = if s < 0 { "-" } else { "" };
    match (c, j) {
        (c, 0) => format!("{sign}{c}"),
        (1, j) => format!("{sign}19^{j}"),
        (c, j) => format!("{sign}{c}*19^{j}"),
    }
}

/// Cases of `19^k = v(3u^2 - v^2)`, `gcd(u, v) = 1`, over the divisors
/// `v in {+-1, +-19, ..., +-19^k}`. Each case is the equation
/// `3u^2 = 19^k / v + v^2`.
pub fn enumerate_divisor_cases_even(k: u32, opts: &CertifyOptions) -> Result<CertificateTree> {
    if k == 0 {
        return Err(Error::Domain("k must be positive"));
    }
    let mut children = Vec::new();
    for j in 0..=k {
        for s in [1i64, -1] {
            let eq = SquareEquation {
                variable: "u".to_string(),
                coefficient: 3,
                rhs: vec![PowerTerm::new(s, 19, k - j), PowerTerm::new(1, 19, 2 * j)],
                nonzero: true,
            };
            let label = format!("v = {}: {eq}", divisor_name(s, 1, j));
            let leaf = if s < 0 && j == k {
                // 3u^2 = 19^(2k) - 1 is the Pell equation (19^k)^2 - 3u^2 = 1.
                Leaf::PellScan(PellScan::run(3, 19, k, opts.pell_terms))
            } else {
                let templates = match (s, j) {
                    (1, j) if j == 0 || j == k => vec![sieve::divisor_mod3_template()],
                    (1, _) => vec![two_power_mod3()],
                    _ => vec![],
                };
                close_square_equation(&eq, &templates, j > 0)
            };
            children.push(CertificateTree::leaf(label, leaf));
        }
    }
    Ok(CertificateTree::branch(
        format!("x^2 + 19^{} = y^3, 19 !| x: 19^{k} = v(3u^2 - v^2)", 2 * k),
        BranchKind::DivisorEnumeration,
        children,
    ))
}

/// Cases of `8 * 19^k = b(3a^2 - 19b^2)` over `b = +-2^i 19^l`, `i <= 3`,
/// `l <= k`. Each case is the equation `3a^2 = 8 * 19^k / b + 19b^2`. Since
/// `x = a(a^2 - 57b^2) / 8` is nonzero and prime to 19, `a != 0`, and
/// `19 !| a` once `19 | b`.
pub fn enumerate_divisor_cases_odd(k: u32, _opts: &CertifyOptions) -> Result<CertificateTree> {
    if k == 0 {
        return Err(Error::Domain("k must be positive"));
    }
    let mut children = Vec::new();
    for i in 0..=3u32 {
        for l in 0..=k {
            for s in [1i64, -1] {
                let eq = SquareEquation {
                    variable: "a".to_string(),
                    coefficient: 3,
                    rhs: vec![
                        PowerTerm::new(s * (8 >> i), 19, k - l),
                        PowerTerm::new(1 << (2 * i), 19, 2 * l + 1),
                    ],
                    nonzero: true,
                };
                let b = divisor_name(s, 1 << i, l);
                let label = format!("b = {b}: {eq}");
                let templates: Vec<CongruenceSpec> = if i == 0 && l == k {
                    FAMILY_MODULI.iter().map(|&m| odd_family(m, 8 * s)).collect()
                } else if l >= 1 && l < k {
                    // 19 divides the right side but not 3a^2.
                    vec![concrete_spec(&eq, 19, true)]
                } else {
                    vec![]
                };
                children.push(CertificateTree::leaf(
                    label,
                    close_square_equation(&eq, &templates, l >= 1),
                ));
            }
        }
    }
    Ok(CertificateTree::branch(
        format!("x^2 + 19^{} = y^3, 19 !| x: 8 * 19^{k} = b(3a^2 - 19b^2)", 2 * k + 1),
        BranchKind::DivisorEnumeration,
        children,
    ))
}

/// `2y^2 - 19^a - 19^b = 0 (mod 8)` with the parities of `a` and `b` fixed.
fn pair_mod8(a_odd: bool, b_odd: bool) -> CongruenceSpec {
    let start = |odd: bool| if odd { 1 } else { 2 };
    CongruenceSpec::new(8)
        .variable("y", VarConstraint::Any)
        .parameter("a", Base::Constant(19), start(a_odd), 2)
        .parameter("b", Base::Constant(19), start(b_odd), 2)
        .term(2, &[(0, 2)], None)
        .term(-1, &[], Some(0))
        .term(-1, &[], Some(1))
}

/// `x^2 + 19^(2k+1) = y^4`: `y` even fails mod 8; for `y` odd the factors
/// `y^2 - x = 19^i`, `y^2 + x = 19^(2k+1-i)` give `2y^2 = 19^i + 19^(2k+1-i)`.
pub fn factor_pair_n4(k: u32) -> Result<CertificateTree> {
    let even_y = CongruenceSpec::new(8)
        .variable("x", VarConstraint::Any)
        .variable("y", VarConstraint::Even)
        .parameter("t", Base::Constant(19), 1, 2)
        .term(1, &[(0, 2)], None)
        .term(1, &[], Some(0))
        .term(-1, &[(1, 4)], None);
    let mut pairs = Vec::new();
    for i in 0..=k {
        let other = 2 * k + 1 - i;
        let spec = if i == 0 {
            sieve::n4_mod8_template()
        } else {
            pair_mod8(i % 2 == 1, other % 2 == 1)
        };
        let o = sieve::check(&spec)?;
        pairs.push(CertificateTree::leaf(
            format!("y^2 - x = 19^{i}, y^2 + x = 19^{other}: 2y^2 = 19^{i} + 19^{other}"),
            Leaf::Obstruction(o),
        ));
    }
    Ok(CertificateTree::branch(
        format!("x^2 + 19^{} = y^4", 2 * k + 1),
        BranchKind::CaseSplit,
        vec![
            CertificateTree::leaf("y even", Leaf::Obstruction(sieve::check(&even_y)?)),
            CertificateTree::branch(
                format!("y odd: 19^{} = (y^2 - x)(y^2 + x)", 2 * k + 1),
                BranchKind::DivisorEnumeration,
                pairs,
            ),
        ],
    ))
}
