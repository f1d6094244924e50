//! Congruence obstruction engine.
//!
//! A [`CongruenceSpec`] describes a polynomial congruence in at most two
//! residue variables and at most two exponent parameters. Each parameter
//! contributes a power `q^t` with `t` ranging over an arithmetic progression
//! `{min, min + step, ...}`, where `q` is either a constant or one of the
//! variables. Because `q^t mod m` is eventually periodic in `t`, deciding the
//! congruence "for all t" reduces to a finite enumeration, and [`check`]
//! performs that enumeration exhaustively.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::arith::{pow_mod_u64, reduce_mod};
use crate::error::{Error, Result};

pub const MAX_VARIABLES: usize = 2;
pub const MAX_PARAMETERS: usize = 2;
/// Upper bound on the size of the variable box `#values(x) * #values(y)`.
pub const MAX_VARIABLE_BOX: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarConstraint {
    Any,
    Odd,
    Even,
    /// The residue is not divisible by the given prime (which divides the modulus).
    NotDivisibleBy(u64),
}

impl VarConstraint {
    fn admits(self, value: u64) -> bool {
        match self {
            VarConstraint::Any => true,
            VarConstraint::Odd => value % 2 == 1,
            VarConstraint::Even => value.is_multiple_of(2),
            VarConstraint::NotDivisibleBy(p) => !value.is_multiple_of(p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub constraint: VarConstraint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Base {
    Constant(u64),
    /// Index into [`CongruenceSpec::variables`].
    Variable(usize),
}

/// An exponent `t` ranging over `{min + step * i : i >= 0}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Parameter {
    pub name: String,
    pub base: Base,
    pub min: u32,
    pub step: u32,
}

/// `coeff * prod(var^e) * (base^t)` for an optional parameter `t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: BigInt,
    pub powers: Vec<(usize, u32)>,
    pub param: Option<usize>,
}

/// `sum(terms) = 0 (mod modulus)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CongruenceSpec {
    pub modulus: u64,
    pub variables: Vec<Variable>,
    pub parameters: Vec<Parameter>,
    pub terms: Vec<Term>,
}

impl CongruenceSpec {
    pub fn new(modulus: u64) -> Self {
        Self {
            modulus,
            variables: Vec::new(),
            parameters: Vec::new(),
            terms: Vec::new(),
        }
    }

    pub fn variable(mut self, name: &str, constraint: VarConstraint) -> Self {
        self.variables.push(Variable {
            name: name.to_string(),
            constraint,
        });
        self
    }

    pub fn parameter(mut self, name: &str, base: Base, min: u32, step: u32) -> Self {
        self.parameters.push(Parameter {
            name: name.to_string(),
            base,
            min,
            step,
        });
        self
    }

    pub fn term(mut self, coeff: impl Into<BigInt>, powers: &[(usize, u32)], param: Option<usize>) -> Self {
        self.terms.push(Term {
            coeff: coeff.into(),
            powers: powers.to_vec(),
            param,
        });
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::IllFormedSpec(msg));
        if self.modulus < 2 {
            return bad(format!("modulus {} < 2", self.modulus));
        }
        if self.variables.len() > MAX_VARIABLES {
            return bad(format!("{} variables (at most {MAX_VARIABLES})", self.variables.len()));
        }
        if self.parameters.len() > MAX_PARAMETERS {
            return bad(format!(
                "{} parameters (at most {MAX_PARAMETERS})",
                self.parameters.len()
            ));
        }
        let mut names: Vec<&str> = Vec::new();
        for name in self
            .variables
            .iter()
            .map(|v| v.name.as_str())
            .chain(self.parameters.iter().map(|p| p.name.as_str()))
        {
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return bad(format!("invalid name {name:?}"));
            }
            if names.contains(&name) {
                return bad(format!("duplicate name {name:?}"));
            }
            names.push(name);
        }
        for v in &self.variables {
            match v.constraint {
                VarConstraint::Odd | VarConstraint::Even if !self.modulus.is_multiple_of(2) => {
                    return bad(format!("parity constraint on {} needs an even modulus", v.name));
                }
                VarConstraint::NotDivisibleBy(p) if p < 2 || !self.modulus.is_multiple_of(p) => {
                    return bad(format!("constraint {p} must divide the modulus"));
                }
                _ => {}
            }
        }
        for p in &self.parameters {
            if p.step == 0 {
                return bad(format!("parameter {} has step 0", p.name));
            }
            if let Base::Variable(i) = p.base {
                if i >= self.variables.len() {
                    return bad(format!("parameter {} refers to missing variable {i}", p.name));
                }
            }
        }
        for t in &self.terms {
            let mut seen = Vec::new();
            for &(i, _) in &t.powers {
                if i >= self.variables.len() || seen.contains(&i) {
                    return bad(format!("term refers to variable index {i} invalidly"));
                }
                seen.push(i);
            }
            if let Some(j) = t.param {
                if j >= self.parameters.len() {
                    return bad(format!("term refers to missing parameter {j}"));
                }
            }
        }
        if self.variable_box() > MAX_VARIABLE_BOX {
            return bad(format!("variable box exceeds {MAX_VARIABLE_BOX}"));
        }
        Ok(())
    }

    fn variable_box(&self) -> u64 {
        self.variables
            .iter()
            .fold(1u64, |acc, _| acc.saturating_mul(self.modulus))
    }

    fn admissible_values(&self, v: &Variable) -> Vec<u64> {
        (0..self.modulus).filter(|&x| v.constraint.admits(x)).collect()
    }
}

impl fmt::Display for CongruenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            f.write_str("0")?;
        }
        for (i, t) in self.terms.iter().enumerate() {
            let neg = t.coeff.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = t.coeff.abs();
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || (t.powers.is_empty() && t.param.is_none()) {
                factors.push(mag.to_string());
            }
            for &(v, e) in &t.powers {
                let name = &self.variables[v].name;
                factors.push(if e == 1 { name.clone() } else { format!("{name}^{e}") });
            }
            if let Some(j) = t.param {
                let p = &self.parameters[j];
                let base = match p.base {
                    Base::Constant(q) => q.to_string(),
                    Base::Variable(v) => self.variables[v].name.clone(),
                };
                factors.push(format!("{base}^{}", p.name));
            }
            f.write_str(&factors.join("*"))?;
        }
        write!(f, " = 0 (mod {})", self.modulus)?;
        let mut conds: Vec<String> = Vec::new();
        for v in &self.variables {
            match v.constraint {
                VarConstraint::Any => {}
                VarConstraint::Odd => conds.push(format!("{} odd", v.name)),
                VarConstraint::Even => conds.push(format!("{} even", v.name)),
                VarConstraint::NotDivisibleBy(p) => conds.push(format!("{p} !| {}", v.name)),
            }
        }
        for p in &self.parameters {
            if p.step == 1 {
                conds.push(format!("{} >= {}", p.name, p.min));
            } else {
                conds.push(format!("{} in {}, {}, ...", p.name, p.min, p.min + p.step));
            }
        }
        if !conds.is_empty() {
            write!(f, " [{}]", conds.join("; "))?;
        }
        Ok(())
    }
}

/// One satisfying assignment.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Witness {
    pub values: Vec<u64>,
    pub exponents: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Verdict {
    Solvable(Witness),
    Unsolvable,
}

/// Preperiod and period lengths of `q^t mod m` for a constant-base parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CycleShape {
    pub preperiod: u32,
    pub period: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Evidence {
    /// Residue combinations examined (all of them when unsolvable).
    pub cases: u64,
    /// Admissible residue count for each variable.
    pub variable_values: Vec<u64>,
    /// Cycle shape per parameter; `None` when the base is a variable and the
    /// cycle is recomputed for every residue of that variable.
    pub cycles: Vec<Option<CycleShape>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Obstruction {
    pub spec: CongruenceSpec,
    pub verdict: Verdict,
    pub evidence: Evidence,
}

impl Obstruction {
    pub fn is_unsolvable(&self) -> bool {
        self.verdict == Verdict::Unsolvable
    }
}

/// The eventually periodic sequence `q^0, q^1, ... mod m`, split at the first
/// repetition into its (minimal) preperiod and period.
pub fn exponent_cycle(q: u64, m: u64) -> (Vec<u64>, Vec<u64>) {
    let mut seen: BTreeMap<u64, usize> = BTreeMap::new();
    let mut values = Vec::new();
    let mut cur = 1 % m;
    loop {
        if let Some(&start) = seen.get(&cur) {
            let period = values.split_off(start);
            return (values, period);
        }
        seen.insert(cur, values.len());
        values.push(cur);
        cur = ((u128::from(cur) * u128::from(q)) % u128::from(m)) as u64;
    }
}

/// `(t, q^t mod m)` pairs and the cycle they were read from.
type Representatives = (Vec<(u32, u64)>, CycleShape);

/// Exponent representatives of `{min + step*i}` together with `q^t mod m`.
fn exponent_representatives(q: u64, m: u64, min: u32, step: u32) -> Representatives {
    let (pre, period) = exponent_cycle(q, m);
    let pre_len = pre.len() as u32;
    let per_len = period.len() as u32;
    let value = |t: u32| -> u64 {
        if t < pre_len {
            pre[t as usize]
        } else {
            period[((t - pre_len) % per_len) as usize]
        }
    };
    let mut reps = Vec::new();
    let mut t = min;
    while t < pre_len {
        reps.push((t, value(t)));
        t += step;
    }
    // Past the preperiod the values repeat with period lcm(per_len, step) in t.
    let window = per_len.lcm(&step) / step;
    for i in 0..window {
        let ti = t + i * step;
        reps.push((ti, value(ti)));
    }
    (
        reps,
        CycleShape {
            preperiod: pre_len,
            period: per_len,
        },
    )
}

/// Decides the congruence by exhaustive enumeration of variable residues and
/// exponent representatives. Stops at the first witness.
pub fn check(spec: &CongruenceSpec) -> Result<Obstruction> {
    spec.validate()?;
    let m = spec.modulus;
    let m128 = u128::from(m);
    let coeffs: Vec<u64> = spec.terms.iter().map(|t| reduce_mod(&t.coeff, m)).collect();
    let domains: Vec<Vec<u64>> = spec.variables.iter().map(|v| spec.admissible_values(v)).collect();
    let variable_values: Vec<u64> = domains.iter().map(|d| d.len() as u64).collect();

    let const_reps: Vec<Option<Representatives>> = spec
        .parameters
        .iter()
        .map(|p| match p.base {
            Base::Constant(q) => Some(exponent_representatives(q, m, p.min, p.step)),
            Base::Variable(_) => None,
        })
        .collect();
    let cycles = const_reps.iter().map(|r| r.as_ref().map(|(_, s)| *s)).collect();

    let mut cases = 0u64;
    let mut verdict = Verdict::Unsolvable;
    let mut assignment = vec![0u64; spec.variables.len()];

    'outer: for idx in 0..domains.iter().map(|d| d.len()).product::<usize>() {
        let mut rem = idx;
        for (slot, dom) in assignment.iter_mut().zip(&domains).rev() {
            *slot = dom[rem % dom.len()];
            rem /= dom.len();
        }
        let param_reps: Vec<Vec<(u32, u64)>> = spec
            .parameters
            .iter()
            .zip(&const_reps)
            .map(|(p, reps)| match (reps, p.base) {
                (Some((r, _)), _) => r.clone(),
                (None, Base::Variable(v)) => exponent_representatives(assignment[v], m, p.min, p.step).0,
                (None, Base::Constant(_)) => unreachable!(),
            })
            .collect();
        let combos: usize = param_reps.iter().map(Vec::len).product();
        for pidx in 0..combos {
            let mut rem = pidx;
            let mut chosen = vec![(0u32, 0u64); param_reps.len()];
            for (slot, reps) in chosen.iter_mut().zip(&param_reps).rev() {
                *slot = reps[rem % reps.len()];
                rem /= reps.len();
            }
            cases += 1;
            let mut total = 0u128;
            for (term, &c) in spec.terms.iter().zip(&coeffs) {
                let mut v = u128::from(c);
                for &(var, e) in &term.powers {
                    v = v * u128::from(pow_mod_u64(assignment[var], u64::from(e), m)) % m128;
                }
                if let Some(j) = term.param {
                    v = v * u128::from(chosen[j].1) % m128;
                }
                total = (total + v) % m128;
            }
            if total == 0 {
                verdict = Verdict::Solvable(Witness {
                    values: assignment.clone(),
                    exponents: chosen.iter().map(|c| c.0).collect(),
                });
                break 'outer;
            }
        }
    }

    Ok(Obstruction {
        spec: spec.clone(),
        verdict,
        evidence: Evidence {
            cases,
            variable_values,
            cycles,
        },
    })
}

/// Evaluates the spec's polynomial at an explicit assignment, mod the modulus.
pub fn evaluate(spec: &CongruenceSpec, values: &[u64], exponents: &[u32]) -> u64 {
    let m = spec.modulus;
    let mut total = BigInt::zero();
    for term in &spec.terms {
        let mut v = term.coeff.clone();
        for &(var, e) in &term.powers {
            v *= BigInt::from(values[var]).modpow(&BigInt::from(e), &BigInt::from(m));
        }
        if let Some(j) = term.param {
            let p = &spec.parameters[j];
            let base = match p.base {
                Base::Constant(q) => q,
                Base::Variable(i) => values[i],
            };
            v *= pow_mod_u64(base, u64::from(exponents[j]), m);
        }
        total += v;
    }
    reduce_mod(&total.mod_floor(&BigInt::from(m)), m)
}

/// `2y^2 - 19^t - 1 = 0 (mod 8)` for odd `t`: the two-squares relation left by
/// the quartic factor pair.
pub fn n4_mod8_template() -> CongruenceSpec {
    CongruenceSpec::new(8)
        .variable("y", VarConstraint::Any)
        .parameter("t", Base::Constant(19), 1, 2)
        .term(2, &[(0, 2)], None)
        .term(-1, &[], Some(0))
        .term(-1, &[], None)
}

/// `3u^2 - 19^k - 1 = 0 (mod 3)`, `k >= 1`: the right side is `2 mod 3`.
pub fn divisor_mod3_template() -> CongruenceSpec {
    CongruenceSpec::new(3)
        .variable("u", VarConstraint::Any)
        .parameter("k", Base::Constant(19), 1, 1)
        .term(3, &[(0, 2)], None)
        .term(-1, &[], Some(0))
        .term(-1, &[], None)
}

/// `X^2 + 1 = 0 (mod modulus)`.
pub fn square_plus_one(modulus: u64) -> CongruenceSpec {
    CongruenceSpec::new(modulus)
        .variable("X", VarConstraint::Any)
        .term(1, &[(0, 2)], None)
        .term(1, &[], None)
}

/// `X^2 + 1 = 0 (mod 19)` is unsolvable since `-1` is a non-residue mod 19.
pub fn mod19_square_obstruction() -> Obstruction {
    check(&square_plus_one(19)).expect("fixed template is well formed")
}

/// `X^2 + 19^w = 0 (mod 19)`, `w >= 1`, `19 !| X`.
pub fn square_plus_power_mod19() -> CongruenceSpec {
    CongruenceSpec::new(19)
        .variable("X", VarConstraint::NotDivisibleBy(19))
        .parameter("w", Base::Constant(19), 1, 1)
        .term(1, &[(0, 2)], None)
        .term(1, &[], Some(0))
}

/// The named templates, each expected to be unsolvable.
pub fn named_templates() -> Vec<(&'static str, CongruenceSpec)> {
    vec![
        ("mod8-quartic", n4_mod8_template()),
        ("mod3-divisor", divisor_mod3_template()),
        ("mod19-square", square_plus_one(19)),
        ("mod19-square-power", square_plus_power_mod19()),
    ]
}
