//! Proof-obligation trees for the non-existence results on
//! `x^2 + 19^m = y^n`, with every leaf re-checkable by the other modules.

mod build;
mod divisor;
mod reduction;
mod tree;
mod valuation;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::arith::big_pow;
use crate::error::{Error, Result};

pub use build::{assemble, descent_split, lemma1_tree, reference_target, theorem2_tree, theorem6_tree};
pub use divisor::{
    close_square_equation, enumerate_divisor_cases_even, enumerate_divisor_cases_odd, factor_pair_n4, CONCRETE_MODULI,
    FAMILY_MODULI,
};
pub use reduction::{classify_reduction, DescentBox, DescentClass, Minimum, Parity, ReducedEquation, ReducedKind};
pub use tree::{
    verify, BranchKind, CertificateTree, Citation, Leaf, Node, OpenNode, PellScan, PowerTerm, Reference, SearchCheck,
    SquareEquation,
};
pub use valuation::{verify_valuation_lemma, ValuationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Theorem {
    /// `19x^2 + 1 = y^n`
    Lemma1,
    /// `x^2 + 19^(2k) = y^n`
    Theorem2,
    /// `x^2 + 19^(2k+1) = y^n`, `n in {3, 4}`
    Theorem6,
}

impl Theorem {
    pub const ALL: [Theorem; 3] = [Theorem::Lemma1, Theorem::Theorem2, Theorem::Theorem6];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::Lemma1 => "lemma1",
            Theorem::Theorem2 => "theorem2",
            Theorem::Theorem6 => "theorem6",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == s)
    }
}

/// Sizes of the finite checks embedded in a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifyOptions {
    /// `y^n` bound of the bounded searches on the main equation.
    pub search_bound: BigInt,
    /// `x` bound of the searches on `19x^2 + 1 = y^n`.
    pub aux_x_max: u64,
    pub aux_n_max: u32,
    /// Largest `n` in the main bounded searches.
    pub n_max: u32,
    /// Terms of the Pell sequence scanned for powers of 19.
    pub pell_terms: usize,
    /// Indices checked for primitive divisors.
    pub primitive_max: usize,
    pub valuation_p_max: u64,
    pub valuation_b_max: u64,
    /// Odd primes `p >= 5` given an explicit valuation split.
    pub descent_primes: Vec<u32>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            search_bound: big_pow(10, 12),
            aux_x_max: 100_000,
            aux_n_max: 12,
            n_max: 10,
            pell_terms: 200,
            primitive_max: 24,
            valuation_p_max: 50,
            valuation_b_max: 40,
            descent_primes: vec![5, 7],
        }
    }
}

impl CertifyOptions {
    pub fn validate(&self) -> Result<()> {
        if self.search_bound < BigInt::from(2) {
            return Err(Error::Domain("search bound must be at least 2"));
        }
        if self.aux_x_max == 0 || self.pell_terms == 0 || self.primitive_max == 0 {
            return Err(Error::Domain("search sizes must be positive"));
        }
        if self.aux_n_max < 3 || self.n_max < 3 {
            return Err(Error::Domain("exponent ranges must reach 3"));
        }
        if self.valuation_p_max < 3 || self.valuation_b_max < 2 {
            return Err(Error::Domain("valuation ranges too small"));
        }
        if self
            .descent_primes
            .iter()
            .any(|&p| p < 5 || !crate::arith::is_prime_u64(u64::from(p)))
        {
            return Err(Error::Domain("descent primes must be primes >= 5"));
        }
        Ok(())
    }
}

/// A closed certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub theorem: Theorem,
    pub k_values: Vec<u32>,
    pub options: CertifyOptions,
    pub tree: CertificateTree,
}

/// Assembles the tree for `theorem` over `k_values` and verifies every leaf.
/// Fails with [`Error::OpenLeaf`] on the first node that does not close.
pub fn build_certificate(theorem: Theorem, k_values: &[u32], opts: &CertifyOptions) -> Result<Certificate> {
    opts.validate()?;
    let mut ks = k_values.to_vec();
    ks.sort_unstable();
    ks.dedup();
    if theorem == Theorem::Lemma1 {
        ks.clear();
    }
    let tree = assemble(theorem, &ks, opts)?;
    if let Some(open) = verify(&tree, opts).into_iter().next() {
        return Err(Error::OpenLeaf {
            path: open.path,
            reason: format!("{}: {}", open.label, open.reason),
        });
    }
    Ok(Certificate {
        theorem,
        k_values: ks,
        options: opts.clone(),
        tree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> CertifyOptions {
        CertifyOptions {
            search_bound: big_pow(10, 9),
            aux_x_max: 2_000,
            ..CertifyOptions::default()
        }
    }

    #[test]
    fn lemma1_closes() {
        let c = build_certificate(Theorem::Lemma1, &[], &small()).unwrap();
        assert!(c.tree.leaves().len() >= 6);
    }

    #[test]
    fn theorem2_closes_for_small_k() {
        build_certificate(Theorem::Theorem2, &[1, 2, 3], &small()).unwrap();
    }

    #[test]
    fn theorem6_closes_for_k_1_2() {
        build_certificate(Theorem::Theorem6, &[1, 2], &small()).unwrap();
    }

    #[test]
    fn theorem6_is_open_at_k_3() {
        let opts = small();
        assert!(matches!(
            build_certificate(Theorem::Theorem6, &[3], &opts),
            Err(Error::OpenLeaf { .. })
        ));
        // The descent to x^2 + 19 = y^3 meets (18, 7); the search meets its
        // lift (123462, 2527).
        let tree = assemble(Theorem::Theorem6, &[3], &opts).unwrap();
        let open = verify(&tree, &opts);
        assert_eq!(open.len(), 2, "{open:?}");
        assert!(open[0].label.starts_with("X^2 + 19^1 = Y^3"), "{}", open[0].label);
        assert!(open[1].label.starts_with("bounded search"), "{}", open[1].label);
    }

    #[test]
    fn names_round_trip() {
        for t in Theorem::ALL {
            assert_eq!(Theorem::from_name(t.name()), Some(t));
        }
        for c in Citation::ALL {
            assert_eq!(Citation::from_key(c.key()), Some(c));
        }
    }
}
