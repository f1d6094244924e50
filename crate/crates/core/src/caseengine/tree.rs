//! Certificate trees and their re-verification.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{Signed, Zero};

use super::reduction::DescentBox;
use super::valuation::{verify_valuation_lemma, ValuationReport};
use super::CertifyOptions;
use crate::arith::{big_pow, is_perfect_square, perfect_power_decompose};
use crate::pell;
use crate::search::{self, AuxSolution, EquationInstance, Solution};
use crate::sieve::{self, Obstruction};

/// `coeff * base^exp`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PowerTerm {
    pub coeff: i64,
    pub base: u64,
    pub exp: u32,
}

impl PowerTerm {
    pub fn new(coeff: i64, base: u64, exp: u32) -> Self {
        Self { coeff, base, exp }
    }

    pub fn value(&self) -> BigInt {
        big_pow(self.base, self.exp) * self.coeff
    }
}

/// `coefficient * variable^2 = sum(rhs)`, optionally with `variable != 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SquareEquation {
    pub variable: String,
    pub coefficient: u64,
    pub rhs: Vec<PowerTerm>,
    pub nonzero: bool,
}

impl SquareEquation {
    pub fn rhs_value(&self) -> BigInt {
        self.rhs.iter().map(PowerTerm::value).sum()
    }

    /// Whether some integer value of the variable satisfies the equation.
    pub fn has_integer_solution(&self) -> bool {
        let rhs = self.rhs_value();
        if rhs.is_negative() || self.coefficient == 0 {
            return false;
        }
        let (q, r) = rhs.div_rem(&BigInt::from(self.coefficient));
        r.is_zero() && !(self.nonzero && q.is_zero()) && is_perfect_square(&q).is_some()
    }
}

impl fmt::Display for SquareEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficient != 1 {
            write!(f, "{}", self.coefficient)?;
        }
        write!(f, "{}^2 = ", self.variable)?;
        for (i, t) in self.rhs.iter().enumerate() {
            let mag = t.coeff.unsigned_abs();
            match (i, t.coeff < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            match (mag, t.exp) {
                (m, 0) => write!(f, "{m}")?,
                (1, e) => write!(f, "{}^{e}", t.base)?,
                (m, e) => write!(f, "{m}*{}^{e}", t.base)?,
            }
        }
        if self.nonzero {
            write!(f, ", {} != 0", self.variable)?;
        }
        Ok(())
    }
}

/// Results the certificate relies on without reproving them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Citation {
    /// `x^2 + q^(2k) = y^n`, `n >= 4` even, `q = +-3 mod 8`, `(q, x) = 1`: no solutions.
    ArifMuriefahEven,
    /// `x^2 + q^(2k+1) = y^n`, `n >= 5` odd: exactly the two lifted families.
    ArifMuriefahOdd,
    /// `x^2 + 19^(2k) = y^n`, `n >= 5`, `(x, y) = 1`: no solutions.
    BerczesPink,
    /// Primitive divisors of Lucas sequences beyond index 12.
    PrimitiveDivisor,
    /// `x^2 + 19 = y^n`: only `(18, 7, 3)` and `(22434, 55, 5)`.
    CohnM1,
    /// `19x^2 + 1 = y^4`: no positive solutions.
    CohnQuartic,
    /// `x^2 + 1 = y^n`: no solutions with `x >= 1`.
    Lebesgue,
    /// The class number of `Q(sqrt(-19))` is 1 and its units are `+-1`.
    ClassNumberOne,
}

impl Citation {
    pub const ALL: [Citation; 8] = [
        Citation::ArifMuriefahEven,
        Citation::ArifMuriefahOdd,
        Citation::BerczesPink,
        Citation::PrimitiveDivisor,
        Citation::CohnM1,
        Citation::CohnQuartic,
        Citation::Lebesgue,
        Citation::ClassNumberOne,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Citation::ArifMuriefahEven => "[1]",
            Citation::ArifMuriefahOdd => "[2]",
            Citation::BerczesPink => "[3]",
            Citation::PrimitiveDivisor => "[4]",
            Citation::CohnM1 => "[6]",
            Citation::CohnQuartic => "[7]",
            Citation::Lebesgue => "[10]",
            Citation::ClassNumberOne => "[h=1]",
        }
    }

    /// Stable identifier used in serialized certificates.
    pub fn key(self) -> &'static str {
        match self {
            Citation::ArifMuriefahEven => "arif-muriefah-even",
            Citation::ArifMuriefahOdd => "arif-muriefah-odd",
            Citation::BerczesPink => "berczes-pink",
            Citation::PrimitiveDivisor => "primitive-divisor",
            Citation::CohnM1 => "cohn-m1",
            Citation::CohnQuartic => "cohn-quartic",
            Citation::Lebesgue => "lebesgue",
            Citation::ClassNumberOne => "class-number-one",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.key() == key)
    }

    /// Hypotheses of the cited result that can be checked mechanically here.
    fn precondition_holds(self) -> bool {
        match self {
            Citation::ArifMuriefahEven => matches!(19 % 8, 3 | 5),
            _ => true,
        }
    }
}

/// A re-runnable desk-scale search together with what it found.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SearchCheck {
    /// `x^2 + c^m = y^n` over `y^n <= bound`.
    Equation {
        c: u64,
        m_values: Vec<u32>,
        n_values: Vec<u32>,
        bound: BigInt,
        found: Vec<Solution>,
    },
    /// `q*x^2 + 1 = y^n` over `1 <= x <= x_max`.
    Aux {
        q: u64,
        x_max: u64,
        n_values: Vec<u32>,
        found: Vec<AuxSolution>,
    },
    /// `x^2 + k = y^n` over `y^n <= bound`, `x >= 1`.
    Constant {
        k: BigInt,
        n_values: Vec<u32>,
        bound: BigInt,
        found: Vec<(BigInt, BigInt, u32)>,
    },
    /// Indices in `lo..=hi` of the Pell `X` sequence lacking a primitive divisor.
    PrimitiveDivisors {
        d: u64,
        lo: usize,
        hi: usize,
        missing: Vec<usize>,
    },
}

impl SearchCheck {
    pub fn equation(c: u64, m_values: &[u32], n_values: &[u32], bound: &BigInt) -> Self {
        let found = EquationInstance::new(c, m_values, n_values, bound.clone())
            .map(|inst| search::brute_force(&inst))
            .unwrap_or_default();
        let mut m_values = m_values.to_vec();
        m_values.sort_unstable();
        m_values.dedup();
        let mut n_values = n_values.to_vec();
        n_values.sort_unstable();
        n_values.dedup();
        SearchCheck::Equation {
            c,
            m_values,
            n_values,
            bound: bound.clone(),
            found,
        }
    }

    pub fn aux(q: u64, x_max: u64, n_values: &[u32]) -> Self {
        SearchCheck::Aux {
            q,
            x_max,
            n_values: n_values.to_vec(),
            found: search::brute_force_aux(q, x_max, n_values).unwrap_or_default(),
        }
    }

    pub fn constant(k: BigInt, n_values: &[u32], bound: &BigInt) -> Self {
        let found = search::brute_force_constant(&k, n_values, bound);
        SearchCheck::Constant {
            k,
            n_values: n_values.to_vec(),
            bound: bound.clone(),
            found,
        }
    }

    pub fn primitive_divisors(d: u64, lo: usize, hi: usize) -> Self {
        let missing = match pell::sequence(d, hi) {
            Ok(seq) => (lo..=hi)
                .filter(|&m| !matches!(pell::primitive_divisor(&seq, m), Ok(Some(_))))
                .collect(),
            Err(_) => (lo..=hi).collect(),
        };
        SearchCheck::PrimitiveDivisors { d, lo, hi, missing }
    }

    /// Runs the same search again from its recorded parameters.
    pub fn rerun(&self) -> Self {
        match self {
            SearchCheck::Equation {
                c,
                m_values,
                n_values,
                bound,
                ..
            } => Self::equation(*c, m_values, n_values, bound),
            SearchCheck::Aux { q, x_max, n_values, .. } => Self::aux(*q, *x_max, n_values),
            SearchCheck::Constant { k, n_values, bound, .. } => Self::constant(k.clone(), n_values, bound),
            SearchCheck::PrimitiveDivisors { d, lo, hi, .. } => Self::primitive_divisors(*d, *lo, *hi),
        }
    }

    /// Number of hits (solutions, or indices without a primitive divisor).
    pub fn hits(&self) -> usize {
        match self {
            SearchCheck::Equation { found, .. } => found.len(),
            SearchCheck::Aux { found, .. } => found.len(),
            SearchCheck::Constant { found, .. } => found.len(),
            SearchCheck::PrimitiveDivisors { missing, .. } => missing.len(),
        }
    }
}

/// Exclusion of `X = q^target_exp` from the solutions of `X^2 - d*Y^2 = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PellScan {
    pub d: u64,
    pub q: u64,
    pub target_exp: u32,
    pub terms: usize,
    /// Indices `m <= terms` with `X_m` a power of `q`.
    pub hits: Vec<usize>,
}

impl PellScan {
    pub fn run(d: u64, q: u64, target_exp: u32, terms: usize) -> Self {
        let hits = pell::sequence(d, terms)
            .map(|seq| pell::prime_power_scan(&seq, q))
            .unwrap_or_default();
        Self {
            d,
            q,
            target_exp,
            terms,
            hits,
        }
    }

    /// `Ok` when the scan is complete (the last term exceeds the target) and
    /// no term equals the target.
    fn closes(&self) -> Result<(), String> {
        let seq = pell::sequence(self.d, self.terms).map_err(|e| e.to_string())?;
        let hits = pell::prime_power_scan(&seq, self.q);
        if hits != self.hits {
            return Err(format!("recorded hits {:?} differ from rerun {hits:?}", self.hits));
        }
        let target = big_pow(self.q, self.target_exp);
        if let Some(t) = seq.terms.iter().find(|t| t.x == target) {
            return Err(format!("X_{} equals the target", t.index));
        }
        match seq.terms.last() {
            Some(last) if last.x > target => Ok(()),
            _ => Err(format!("{} terms do not reach the target", self.terms)),
        }
    }
}

/// Another certificate this one depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Reference {
    /// `19x^2 + 1 = y^n` has no positive solutions.
    Lemma1,
    /// `x^2 + 19^(2k) = y^3` with `19 !| x`, for a smaller `k`.
    CoprimeEven { k: u32 },
    /// `x^2 + 19^(2k+1) = y^3` with `19 !| x`, for a smaller `k`.
    CoprimeOdd { k: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Leaf {
    Obstruction(Obstruction),
    /// The equation's right-hand side is negative.
    Sign(SquareEquation),
    /// Direct exact test: the right-hand side is not `coefficient * square`.
    ExactCheck(SquareEquation),
    Citation {
        citation: Citation,
        check: Option<SearchCheck>,
    },
    PellScan(PellScan),
    /// `value` is not a perfect power; `exponent` is the largest `e` with
    /// `value` an exact `e`-th power.
    NotPerfectPower {
        value: BigInt,
        exponent: u32,
    },
    BoundedSearch(SearchCheck),
    ValuationLemma(ValuationReport),
    Reference(Reference),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BranchKind {
    CaseSplit,
    DivisorEnumeration,
    /// Cancellation of the smallest power of 19, over a saturating box.
    ValuationSplit(DescentBox),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Branch {
        kind: BranchKind,
        children: Vec<CertificateTree>,
    },
    Leaf(Leaf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateTree {
    /// Human-readable descriptor of the equation or case.
    pub label: String,
    pub node: Node,
}

impl CertificateTree {
    pub fn leaf(label: impl Into<String>, leaf: Leaf) -> Self {
        Self {
            label: label.into(),
            node: Node::Leaf(leaf),
        }
    }

    pub fn branch(label: impl Into<String>, kind: BranchKind, children: Vec<CertificateTree>) -> Self {
        Self {
            label: label.into(),
            node: Node::Branch { kind, children },
        }
    }

    /// Depth-first walk with dotted paths (`"0"`, `"0.1"`, ...).
    pub fn walk<'a>(&'a self, mut visit: impl FnMut(&str, &'a CertificateTree)) {
        fn go<'a>(t: &'a CertificateTree, path: &str, visit: &mut dyn FnMut(&str, &'a CertificateTree)) {
            visit(path, t);
            if let Node::Branch { children, .. } = &t.node {
                for (i, c) in children.iter().enumerate() {
                    go(c, &format!("{path}.{i}"), visit);
                }
            }
        }
        go(self, "0", &mut visit);
    }

    pub fn leaves(&self) -> Vec<(String, &Leaf)> {
        let mut out = Vec::new();
        self.walk(|path, t| {
            if let Node::Leaf(l) = &t.node {
                out.push((path.to_string(), l));
            }
        });
        out
    }
}

/// A leaf (or branch) that failed re-verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenNode {
    pub path: String,
    pub label: String,
    pub reason: String,
}

/// Re-verifies every node; returns the nodes that are not closed, in walk
/// order. An empty result means the certificate is closed.
pub fn verify(tree: &CertificateTree, opts: &CertifyOptions) -> Vec<OpenNode> {
    let mut memo = BTreeMap::new();
    verify_with(tree, opts, &mut memo)
}

fn verify_with(tree: &CertificateTree, opts: &CertifyOptions, memo: &mut BTreeMap<Reference, bool>) -> Vec<OpenNode> {
    let mut open = Vec::new();
    let mut nodes = Vec::new();
    tree.walk(|path, t| nodes.push((path.to_string(), t)));
    for (path, t) in nodes {
        let status = match &t.node {
            Node::Leaf(leaf) => leaf_closes(leaf, opts, memo),
            Node::Branch { kind, children } => branch_closes(kind, children),
        };
        if let Err(reason) = status {
            open.push(OpenNode {
                path,
                label: t.label.clone(),
                reason,
            });
        }
    }
    open
}

fn branch_closes(kind: &BranchKind, children: &[CertificateTree]) -> Result<(), String> {
    if children.is_empty() {
        return Err("branch has no cases".into());
    }
    if let BranchKind::ValuationSplit(bx) = kind {
        let expected = bx.class_labels();
        let got: Vec<&str> = children.iter().map(|c| c.label.as_str()).collect();
        if expected.iter().map(String::as_str).collect::<Vec<_>>() != got {
            return Err("children do not match the cases of the descent box".into());
        }
    }
    Ok(())
}

fn leaf_closes(leaf: &Leaf, opts: &CertifyOptions, memo: &mut BTreeMap<Reference, bool>) -> Result<(), String> {
    match leaf {
        Leaf::Obstruction(o) => {
            let again = sieve::check(&o.spec).map_err(|e| e.to_string())?;
            if &again != o {
                return Err("recorded enumeration differs from rerun".into());
            }
            if !again.is_unsolvable() {
                return Err("congruence is solvable".into());
            }
            Ok(())
        }
        Leaf::Sign(eq) => {
            if eq.coefficient > 0 && eq.rhs_value().is_negative() {
                Ok(())
            } else {
                Err(format!("right-hand side of {eq} is not negative"))
            }
        }
        Leaf::ExactCheck(eq) => {
            if eq.has_integer_solution() {
                Err(format!("{eq} has an integer solution"))
            } else {
                Ok(())
            }
        }
        Leaf::Citation { citation, check } => {
            if !citation.precondition_holds() {
                return Err(format!("hypotheses of {} fail", citation.tag()));
            }
            match check {
                Some(c) => search_closes(c),
                None => Ok(()),
            }
        }
        Leaf::PellScan(scan) => scan.closes(),
        Leaf::NotPerfectPower { value, exponent } => {
            let (_, e) = perfect_power_decompose(value).map_err(|e| e.to_string())?;
            if e != *exponent {
                return Err(format!("recorded exponent {exponent} differs from {e}"));
            }
            if e == 1 {
                Ok(())
            } else {
                Err(format!("{value} is a perfect {e}-th power"))
            }
        }
        Leaf::BoundedSearch(c) => search_closes(c),
        Leaf::ValuationLemma(report) => {
            let again = verify_valuation_lemma(report.p_max, report.b_max).map_err(|e| e.to_string())?;
            if &again != report {
                return Err("recorded report differs from rerun".into());
            }
            if again.holds() {
                Ok(())
            } else {
                Err(format!(
                    "{} violations, {} vanishing sums",
                    again.violations.len(),
                    again.vanishing.len()
                ))
            }
        }
        Leaf::Reference(r) => {
            if let Some(&closed) = memo.get(r) {
                return if closed {
                    Ok(())
                } else {
                    Err("referenced certificate is open".into())
                };
            }
            let target = super::build::reference_target(*r, opts);
            let closed = verify_with(&target, opts, memo).is_empty();
            memo.insert(*r, closed);
            if closed {
                Ok(())
            } else {
                Err("referenced certificate is open".into())
            }
        }
    }
}

fn search_closes(check: &SearchCheck) -> Result<(), String> {
    let again = check.rerun();
    if &again != check {
        return Err("recorded search result differs from rerun".into());
    }
    match again.hits() {
        0 => Ok(()),
        n => Err(format!("bounded search found {n} counterexample(s)")),
    }
}
