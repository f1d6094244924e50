//! Line-oriented certificate format.
//!
//! ```text
//! rn19-certificate 1
//! theorem theorem6
//! k 1 2
//! option search-bound 1000000000000
//! ...
//! node 0 case-split 3
//! label x^2 + 19^(2k+1) = y^n, ...
//! end
//! node 0.0 case-split 4
//! ...
//! ```
//!
//! Nodes appear in pre-order. A branch line carries its kind and child count;
//! a leaf line carries its kind and is followed by the leaf's evidence. Every
//! block ends with `end`. Integers are exact decimal.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use rn19_core::caseengine::{
    BranchKind, Certificate, CertificateTree, CertifyOptions, Citation, DescentBox, Leaf, Node, Parity, PellScan,
    PowerTerm, Reference, SearchCheck, SquareEquation, Theorem, ValuationReport,
};
use rn19_core::search::{AuxSolution, Solution};
use rn19_core::sieve::{
    Base, CongruenceSpec, CycleShape, Evidence, Obstruction, Parameter, Term, VarConstraint, Variable, Verdict, Witness,
};

pub const SCHEMA: &str = "rn19-certificate";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct FormatError {
    pub line: usize,
    pub msg: String,
}

pub fn serialize(cert: &Certificate) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{SCHEMA} {SCHEMA_VERSION}");
    let _ = writeln!(out, "theorem {}", cert.theorem.name());
    out.push('k');
    for k in &cert.k_values {
        let _ = write!(out, " {k}");
    }
    out.push('\n');
    write_options(&mut out, &cert.options);
    write_node(&mut out, "0", &cert.tree);
    out
}

fn write_options(out: &mut String, o: &CertifyOptions) {
    let _ = writeln!(out, "option search-bound {}", o.search_bound);
    let _ = writeln!(out, "option aux-x-max {}", o.aux_x_max);
    let _ = writeln!(out, "option aux-n-max {}", o.aux_n_max);
    let _ = writeln!(out, "option n-max {}", o.n_max);
    let _ = writeln!(out, "option pell-terms {}", o.pell_terms);
    let _ = writeln!(out, "option primitive-max {}", o.primitive_max);
    let _ = writeln!(out, "option valuation-p-max {}", o.valuation_p_max);
    let _ = writeln!(out, "option valuation-b-max {}", o.valuation_b_max);
    let _ = writeln!(out, "option descent-primes {}", list(&o.descent_primes));
}

fn list<T: ToString>(xs: &[T]) -> String {
    if xs.is_empty() {
        return "-".into();
    }
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn branch_kind_name(kind: &BranchKind) -> &'static str {
    match kind {
        BranchKind::CaseSplit => "case-split",
        BranchKind::DivisorEnumeration => "divisor-enumeration",
        BranchKind::ValuationSplit(_) => "valuation-split",
    }
}

fn leaf_kind_name(leaf: &Leaf) -> &'static str {
    match leaf {
        Leaf::Obstruction(_) => "obstruction",
        Leaf::Sign(_) => "sign",
        Leaf::ExactCheck(_) => "exact-check",
        Leaf::Citation { .. } => "citation",
        Leaf::PellScan(_) => "pell-scan",
        Leaf::NotPerfectPower { .. } => "not-perfect-power",
        Leaf::BoundedSearch(_) => "bounded-search",
        Leaf::ValuationLemma(_) => "valuation-lemma",
        Leaf::Reference(_) => "reference",
    }
}

fn write_node(out: &mut String, path: &str, t: &CertificateTree) {
    match &t.node {
        Node::Branch { kind, children } => {
            let _ = writeln!(out, "node {path} {} {}", branch_kind_name(kind), children.len());
            let _ = writeln!(out, "label {}", t.label);
            if let BranchKind::ValuationSplit(b) = kind {
                let _ = writeln!(
                    out,
                    "box parity={} k={} n={} u-max={} v-max={}",
                    b.parity.name(),
                    b.k,
                    b.n,
                    b.u_max,
                    b.v_max
                );
            }
            out.push_str("end\n");
            for (i, c) in children.iter().enumerate() {
                write_node(out, &format!("{path}.{i}"), c);
            }
        }
        Node::Leaf(leaf) => {
            let _ = writeln!(out, "node {path} {}", leaf_kind_name(leaf));
            let _ = writeln!(out, "label {}", t.label);
            write_leaf(out, leaf);
            out.push_str("end\n");
        }
    }
}

fn write_leaf(out: &mut String, leaf: &Leaf) {
    match leaf {
        Leaf::Obstruction(o) => write_obstruction_body(out, o),
        Leaf::Sign(eq) | Leaf::ExactCheck(eq) => write_equation(out, eq),
        Leaf::Citation { citation, check } => {
            let _ = writeln!(out, "citation {} {}", citation.key(), citation.tag());
            if let Some(c) = check {
                write_search(out, c);
            }
        }
        Leaf::PellScan(p) => {
            let _ = writeln!(
                out,
                "pell d={} q={} target-exp={} terms={}",
                p.d, p.q, p.target_exp, p.terms
            );
            for h in &p.hits {
                let _ = writeln!(out, "hit {h}");
            }
        }
        Leaf::NotPerfectPower { value, exponent } => {
            let _ = writeln!(out, "value {value}");
            let _ = writeln!(out, "exponent {exponent}");
        }
        Leaf::BoundedSearch(c) => write_search(out, c),
        Leaf::ValuationLemma(r) => {
            let _ = writeln!(
                out,
                "report p-max={} b-max={} pairs={} instances={}",
                r.p_max, r.b_max, r.pairs, r.instances
            );
            for (p, b, k) in &r.violations {
                let _ = writeln!(out, "violation {p} {b} {k}");
            }
            for (p, b) in &r.vanishing {
                let _ = writeln!(out, "vanishing {p} {b}");
            }
        }
        Leaf::Reference(r) => {
            let _ = match r {
                Reference::Lemma1 => writeln!(out, "reference lemma1"),
                Reference::CoprimeEven { k } => writeln!(out, "reference coprime-even {k}"),
                Reference::CoprimeOdd { k } => writeln!(out, "reference coprime-odd {k}"),
            };
        }
    }
}

fn write_equation(out: &mut String, eq: &SquareEquation) {
    let _ = writeln!(
        out,
        "equation variable={} coefficient={} nonzero={}",
        eq.variable,
        eq.coefficient,
        u8::from(eq.nonzero)
    );
    for t in &eq.rhs {
        let _ = writeln!(out, "rhs {} {} {}", t.coeff, t.base, t.exp);
    }
}

fn write_search(out: &mut String, c: &SearchCheck) {
    match c {
        SearchCheck::Equation {
            c,
            m_values,
            n_values,
            bound,
            found,
        } => {
            let _ = writeln!(
                out,
                "search equation c={c} bound={bound} m={} n={}",
                list(m_values),
                list(n_values)
            );
            for s in found {
                let _ = writeln!(out, "found {} {} {} {} {}", s.x, s.y, s.m, s.n, s.c);
            }
        }
        SearchCheck::Aux {
            q,
            x_max,
            n_values,
            found,
        } => {
            let _ = writeln!(out, "search aux q={q} x-max={x_max} n={}", list(n_values));
            for s in found {
                let _ = writeln!(out, "found {} {} {} {}", s.x, s.y, s.n, s.q);
            }
        }
        SearchCheck::Constant {
            k,
            n_values,
            bound,
            found,
        } => {
            let _ = writeln!(out, "search constant k={k} bound={bound} n={}", list(n_values));
            for (x, y, n) in found {
                let _ = writeln!(out, "found {x} {y} {n}");
            }
        }
        SearchCheck::PrimitiveDivisors { d, lo, hi, missing } => {
            let _ = writeln!(out, "search primitive-divisors d={d} lo={lo} hi={hi}");
            for m in missing {
                let _ = writeln!(out, "missing {m}");
            }
        }
    }
}

fn constraint_name(c: VarConstraint) -> String {
    match c {
        VarConstraint::Any => "any".into(),
        VarConstraint::Odd => "odd".into(),
        VarConstraint::Even => "even".into(),
        VarConstraint::NotDivisibleBy(p) => format!("coprime:{p}"),
    }
}

/// The congruence and its enumeration result, without node framing.
pub fn serialize_obstruction(o: &Obstruction) -> String {
    let mut out = String::new();
    write_obstruction_body(&mut out, o);
    out
}

fn write_obstruction_body(out: &mut String, o: &Obstruction) {
    let s = &o.spec;
    let _ = writeln!(out, "modulus {}", s.modulus);
    for v in &s.variables {
        let _ = writeln!(out, "var {} {}", v.name, constraint_name(v.constraint));
    }
    for p in &s.parameters {
        let base = match p.base {
            Base::Constant(q) => format!("const:{q}"),
            Base::Variable(i) => format!("var:{i}"),
        };
        let _ = writeln!(out, "param {} {base} {} {}", p.name, p.min, p.step);
    }
    for t in &s.terms {
        let _ = write!(out, "term {}", t.coeff);
        for (v, e) in &t.powers {
            let _ = write!(out, " {v}^{e}");
        }
        if let Some(j) = t.param {
            let _ = write!(out, " @{j}");
        }
        out.push('\n');
    }
    let _ = match &o.verdict {
        Verdict::Unsolvable => writeln!(out, "verdict unsolvable"),
        Verdict::Solvable(w) => writeln!(
            out,
            "verdict solvable values={} exponents={}",
            list(&w.values),
            list(&w.exponents)
        ),
    };
    let cycles: Vec<String> = o
        .evidence
        .cycles
        .iter()
        .map(|c| match c {
            Some(c) => format!("{}/{}", c.preperiod, c.period),
            None => "var".into(),
        })
        .collect();
    let _ = writeln!(
        out,
        "evidence cases={} values={} cycles={}",
        o.evidence.cases,
        list(&o.evidence.variable_values),
        list(&cycles)
    );
}

struct Reader<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            lines: text.lines().collect(),
            pos: 0,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, FormatError> {
        Err(FormatError {
            line: self.pos,
            msg: msg.into(),
        })
    }

    fn next(&mut self) -> Result<&'a str, FormatError> {
        match self.lines.get(self.pos) {
            Some(l) => {
                self.pos += 1;
                Ok(l)
            }
            None => {
                self.pos += 1;
                self.err("unexpected end of input")
            }
        }
    }

    fn peek(&self) -> Option<&'a str> {
        self.lines.get(self.pos).copied()
    }

    /// Reads `<keyword> <rest>` and returns `rest`.
    fn keyword(&mut self, kw: &str) -> Result<&'a str, FormatError> {
        let line = self.next()?;
        match line.strip_prefix(kw) {
            Some("") => Ok(""),
            Some(rest) if rest.starts_with(' ') => Ok(&rest[1..]),
            _ => self.err(format!("expected `{kw}`, found `{line}`")),
        }
    }
}

fn num<T: FromStr>(r: &Reader, s: &str) -> Result<T, FormatError> {
    s.parse().or_else(|_| r.err(format!("bad number `{s}`")))
}

fn num_list<T: FromStr>(r: &Reader, s: &str) -> Result<Vec<T>, FormatError> {
    if s == "-" {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| num(r, x)).collect()
}

/// `key=value` tokens, all keys required, in any order.
fn kv<'a>(r: &Reader, rest: &'a str, keys: &[&str]) -> Result<Vec<&'a str>, FormatError> {
    let mut vals = vec![None; keys.len()];
    for tok in rest.split_whitespace() {
        let Some((k, v)) = tok.split_once('=') else {
            return r.err(format!("expected key=value, found `{tok}`"));
        };
        match keys.iter().position(|x| *x == k) {
            Some(i) if vals[i].is_none() => vals[i] = Some(v),
            _ => return r.err(format!("unexpected key `{k}`")),
        }
    }
    vals.into_iter()
        .zip(keys)
        .map(|(v, k)| v.map_or_else(|| r.err(format!("missing key `{k}`")), Ok))
        .collect()
}

pub fn parse(text: &str) -> Result<Certificate, FormatError> {
    let mut r = Reader::new(text);
    let header = r.keyword(SCHEMA)?;
    let version: u32 = num(&r, header)?;
    if version != SCHEMA_VERSION {
        return r.err(format!("unsupported schema version {version}"));
    }
    let name = r.keyword("theorem")?;
    let theorem = Theorem::from_name(name).map_or_else(|| r.err(format!("unknown theorem `{name}`")), Ok)?;
    let ks = r.keyword("k")?;
    let k_values = ks.split_whitespace().map(|s| num(&r, s)).collect::<Result<_, _>>()?;
    let options = parse_options(&mut r)?;
    let tree = parse_node(&mut r, "0")?;
    if let Some(extra) = r.peek() {
        r.pos += 1;
        return r.err(format!("trailing content `{extra}`"));
    }
    Ok(Certificate {
        theorem,
        k_values,
        options,
        tree,
    })
}

fn parse_options(r: &mut Reader) -> Result<CertifyOptions, FormatError> {
    let mut o = CertifyOptions::default();
    while let Some(line) = r.peek() {
        if !line.starts_with("option ") {
            break;
        }
        let rest = r.keyword("option")?;
        let Some((key, val)) = rest.split_once(' ') else {
            return r.err("option without value");
        };
        match key {
            "search-bound" => o.search_bound = num(r, val)?,
            "aux-x-max" => o.aux_x_max = num(r, val)?,
            "aux-n-max" => o.aux_n_max = num(r, val)?,
            "n-max" => o.n_max = num(r, val)?,
            "pell-terms" => o.pell_terms = num(r, val)?,
            "primitive-max" => o.primitive_max = num(r, val)?,
            "valuation-p-max" => o.valuation_p_max = num(r, val)?,
            "valuation-b-max" => o.valuation_b_max = num(r, val)?,
            "descent-primes" => o.descent_primes = num_list(r, val)?,
            _ => return r.err(format!("unknown option `{key}`")),
        }
    }
    Ok(o)
}

fn parse_node(r: &mut Reader, path: &str) -> Result<CertificateTree, FormatError> {
    let head = r.keyword("node")?;
    let toks: Vec<&str> = head.split_whitespace().collect();
    if toks.first() != Some(&path) {
        return r.err(format!("expected node {path}"));
    }
    let label = r.keyword("label")?.to_string();
    match toks.as_slice() {
        [_, kind, count] => {
            let count: usize = num(r, count)?;
            let kind = match *kind {
                "case-split" => BranchKind::CaseSplit,
                "divisor-enumeration" => BranchKind::DivisorEnumeration,
                "valuation-split" => {
                    let rest = r.keyword("box")?;
                    let v = kv(r, rest, &["parity", "k", "n", "u-max", "v-max"])?;
                    let parity = match v[0] {
                        "even" => Parity::Even,
                        "odd" => Parity::Odd,
                        p => return r.err(format!("bad parity `{p}`")),
                    };
                    BranchKind::ValuationSplit(DescentBox {
                        parity,
                        k: num(r, v[1])?,
                        n: num(r, v[2])?,
                        u_max: num(r, v[3])?,
                        v_max: num(r, v[4])?,
                    })
                }
                other => return r.err(format!("unknown branch kind `{other}`")),
            };
            r.keyword("end")?;
            let children = (0..count)
                .map(|i| parse_node(r, &format!("{path}.{i}")))
                .collect::<Result<_, _>>()?;
            Ok(CertificateTree::branch(label, kind, children))
        }
        [_, kind] => {
            let leaf = parse_leaf(r, kind)?;
            r.keyword("end")?;
            Ok(CertificateTree::leaf(label, leaf))
        }
        _ => r.err("malformed node line"),
    }
}

fn parse_leaf(r: &mut Reader, kind: &str) -> Result<Leaf, FormatError> {
    Ok(match kind {
        "obstruction" => Leaf::Obstruction(parse_obstruction_body(r)?),
        "sign" => Leaf::Sign(parse_equation(r)?),
        "exact-check" => Leaf::ExactCheck(parse_equation(r)?),
        "citation" => {
            let rest = r.keyword("citation")?;
            let key = rest.split_whitespace().next().unwrap_or("");
            let citation = Citation::from_key(key).map_or_else(|| r.err(format!("unknown citation `{key}`")), Ok)?;
            let check = match r.peek() {
                Some(l) if l.starts_with("search ") => Some(parse_search(r)?),
                _ => None,
            };
            Leaf::Citation { citation, check }
        }
        "pell-scan" => {
            let rest = r.keyword("pell")?;
            let v = kv(r, rest, &["d", "q", "target-exp", "terms"])?;
            let mut scan = PellScan {
                d: num(r, v[0])?,
                q: num(r, v[1])?,
                target_exp: num(r, v[2])?,
                terms: num(r, v[3])?,
                hits: Vec::new(),
            };
            while r.peek().is_some_and(|l| l.starts_with("hit ")) {
                let h = r.keyword("hit")?;
                scan.hits.push(num(r, h)?);
            }
            Leaf::PellScan(scan)
        }
        "not-perfect-power" => {
            let value = r.keyword("value")?;
            let value = num(r, value)?;
            let e = r.keyword("exponent")?;
            Leaf::NotPerfectPower {
                value,
                exponent: num(r, e)?,
            }
        }
        "bounded-search" => Leaf::BoundedSearch(parse_search(r)?),
        "valuation-lemma" => {
            let rest = r.keyword("report")?;
            let v = kv(r, rest, &["p-max", "b-max", "pairs", "instances"])?;
            let mut rep = ValuationReport {
                p_max: num(r, v[0])?,
                b_max: num(r, v[1])?,
                pairs: num(r, v[2])?,
                instances: num(r, v[3])?,
                violations: Vec::new(),
                vanishing: Vec::new(),
            };
            loop {
                match r.peek() {
                    Some(l) if l.starts_with("violation ") => {
                        let t = {
                            let line = r.keyword("violation")?;
                            ints(r, line, 3)?
                        };
                        rep.violations.push((t[0] as u64, t[1] as i64, t[2] as u64));
                    }
                    Some(l) if l.starts_with("vanishing ") => {
                        let t = {
                            let line = r.keyword("vanishing")?;
                            ints(r, line, 2)?
                        };
                        rep.vanishing.push((t[0] as u64, t[1] as i64));
                    }
                    _ => break,
                }
            }
            Leaf::ValuationLemma(rep)
        }
        "reference" => {
            let rest = r.keyword("reference")?;
            let toks: Vec<&str> = rest.split_whitespace().collect();
            Leaf::Reference(match toks.as_slice() {
                ["lemma1"] => Reference::Lemma1,
                ["coprime-even", k] => Reference::CoprimeEven { k: num(r, k)? },
                ["coprime-odd", k] => Reference::CoprimeOdd { k: num(r, k)? },
                _ => return r.err(format!("bad reference `{rest}`")),
            })
        }
        other => return r.err(format!("unknown leaf kind `{other}`")),
    })
}

fn ints(r: &Reader, s: &str, count: usize) -> Result<Vec<i128>, FormatError> {
    let v: Vec<i128> = s.split_whitespace().map(|t| num(r, t)).collect::<Result<_, _>>()?;
    if v.len() != count {
        return r.err(format!("expected {count} integers"));
    }
    Ok(v)
}

fn parse_equation(r: &mut Reader) -> Result<SquareEquation, FormatError> {
    let rest = r.keyword("equation")?;
    let v = kv(r, rest, &["variable", "coefficient", "nonzero"])?;
    let mut eq = SquareEquation {
        variable: v[0].to_string(),
        coefficient: num(r, v[1])?,
        rhs: Vec::new(),
        nonzero: match v[2] {
            "0" => false,
            "1" => true,
            x => return r.err(format!("bad flag `{x}`")),
        },
    };
    while r.peek().is_some_and(|l| l.starts_with("rhs ")) {
        let t = {
            let line = r.keyword("rhs")?;
            ints(r, line, 3)?
        };
        let coeff = i64::try_from(t[0]).or_else(|_| r.err("coefficient out of range"))?;
        let base = u64::try_from(t[1]).or_else(|_| r.err("base out of range"))?;
        let exp = u32::try_from(t[2]).or_else(|_| r.err("exponent out of range"))?;
        eq.rhs.push(PowerTerm::new(coeff, base, exp));
    }
    Ok(eq)
}

/// Consecutive `<key> <rest>` lines.
fn found_lines<'a>(r: &mut Reader<'a>, key: &str) -> Result<Vec<&'a str>, FormatError> {
    let mut out = Vec::new();
    while r
        .peek()
        .is_some_and(|l| l.starts_with(key) && l[key.len()..].starts_with(' '))
    {
        out.push(r.keyword(key)?);
    }
    Ok(out)
}

fn parse_search(r: &mut Reader) -> Result<SearchCheck, FormatError> {
    let rest = r.keyword("search")?;
    let (kind, rest) = rest.split_once(' ').unwrap_or((rest, ""));
    Ok(match kind {
        "equation" => {
            let v = kv(r, rest, &["c", "bound", "m", "n"])?;
            let (c, bound, m_values, n_values) = (num(r, v[0])?, num(r, v[1])?, num_list(r, v[2])?, num_list(r, v[3])?);
            let mut found = Vec::new();
            for line in found_lines(r, "found")? {
                let t: Vec<&str> = line.split_whitespace().collect();
                if t.len() != 5 {
                    return r.err("expected x y m n c");
                }
                found.push(Solution::new(
                    num::<BigInt>(r, t[0])?,
                    num::<BigInt>(r, t[1])?,
                    num(r, t[2])?,
                    num(r, t[3])?,
                    num(r, t[4])?,
                ));
            }
            SearchCheck::Equation {
                c,
                m_values,
                n_values,
                bound,
                found,
            }
        }
        "aux" => {
            let v = kv(r, rest, &["q", "x-max", "n"])?;
            let (q, x_max, n_values) = (num(r, v[0])?, num(r, v[1])?, num_list(r, v[2])?);
            let mut found = Vec::new();
            for line in found_lines(r, "found")? {
                let t: Vec<&str> = line.split_whitespace().collect();
                if t.len() != 4 {
                    return r.err("expected x y n q");
                }
                found.push(AuxSolution {
                    x: num(r, t[0])?,
                    y: num(r, t[1])?,
                    n: num(r, t[2])?,
                    q: num(r, t[3])?,
                });
            }
            SearchCheck::Aux {
                q,
                x_max,
                n_values,
                found,
            }
        }
        "constant" => {
            let v = kv(r, rest, &["k", "bound", "n"])?;
            let (k, bound, n_values) = (num(r, v[0])?, num(r, v[1])?, num_list(r, v[2])?);
            let mut found = Vec::new();
            for line in found_lines(r, "found")? {
                let t: Vec<&str> = line.split_whitespace().collect();
                if t.len() != 3 {
                    return r.err("expected x y n");
                }
                found.push((num(r, t[0])?, num(r, t[1])?, num(r, t[2])?));
            }
            SearchCheck::Constant {
                k,
                n_values,
                bound,
                found,
            }
        }
        "primitive-divisors" => {
            let v = kv(r, rest, &["d", "lo", "hi"])?;
            let (d, lo, hi) = (num(r, v[0])?, num(r, v[1])?, num(r, v[2])?);
            let missing = found_lines(r, "missing")?
                .into_iter()
                .map(|s| num(r, s))
                .collect::<Result<_, _>>()?;
            SearchCheck::PrimitiveDivisors { d, lo, hi, missing }
        }
        other => return r.err(format!("unknown search kind `{other}`")),
    })
}

/// Parses the output of [`serialize_obstruction`].
pub fn parse_obstruction(text: &str) -> Result<Obstruction, FormatError> {
    let mut r = Reader::new(text);
    let o = parse_obstruction_body(&mut r)?;
    if r.peek().is_some() {
        r.pos += 1;
        return r.err("trailing content");
    }
    Ok(o)
}

fn parse_obstruction_body(r: &mut Reader) -> Result<Obstruction, FormatError> {
    let modulus = r.keyword("modulus")?;
    let mut spec = CongruenceSpec::new(num(r, modulus)?);
    while r.peek().is_some_and(|l| l.starts_with("var ")) {
        let rest = r.keyword("var")?;
        let Some((name, c)) = rest.split_once(' ') else {
            return r.err("expected var <name> <constraint>");
        };
        let constraint = match c {
            "any" => VarConstraint::Any,
            "odd" => VarConstraint::Odd,
            "even" => VarConstraint::Even,
            _ => match c.strip_prefix("coprime:") {
                Some(p) => VarConstraint::NotDivisibleBy(num(r, p)?),
                None => return r.err(format!("bad constraint `{c}`")),
            },
        };
        spec.variables.push(Variable {
            name: name.to_string(),
            constraint,
        });
    }
    while r.peek().is_some_and(|l| l.starts_with("param ")) {
        let rest = r.keyword("param")?;
        let t: Vec<&str> = rest.split_whitespace().collect();
        let [name, base, min, step] = t.as_slice() else {
            return r.err("expected param <name> <base> <min> <step>");
        };
        let base = if let Some(q) = base.strip_prefix("const:") {
            Base::Constant(num(r, q)?)
        } else if let Some(i) = base.strip_prefix("var:") {
            Base::Variable(num(r, i)?)
        } else {
            return r.err(format!("bad base `{base}`"));
        };
        spec.parameters.push(Parameter {
            name: name.to_string(),
            base,
            min: num(r, min)?,
            step: num(r, step)?,
        });
    }
    while r.peek().is_some_and(|l| l.starts_with("term ")) {
        let rest = r.keyword("term")?;
        let mut toks = rest.split_whitespace();
        let coeff: BigInt = num(r, toks.next().unwrap_or(""))?;
        let mut powers = Vec::new();
        let mut param = None;
        for tok in toks {
            if let Some(j) = tok.strip_prefix('@') {
                param = Some(num(r, j)?);
            } else if let Some((v, e)) = tok.split_once('^') {
                powers.push((num(r, v)?, num(r, e)?));
            } else {
                return r.err(format!("bad term token `{tok}`"));
            }
        }
        spec.terms.push(Term { coeff, powers, param });
    }
    let verdict = r.keyword("verdict")?;
    let verdict = if verdict == "unsolvable" {
        Verdict::Unsolvable
    } else if let Some(rest) = verdict.strip_prefix("solvable ") {
        let v = kv(r, rest, &["values", "exponents"])?;
        Verdict::Solvable(Witness {
            values: num_list(r, v[0])?,
            exponents: num_list(r, v[1])?,
        })
    } else {
        return r.err(format!("bad verdict `{verdict}`"));
    };
    let ev = r.keyword("evidence")?;
    let v = kv(r, ev, &["cases", "values", "cycles"])?;
    let cycles = if v[2] == "-" {
        Vec::new()
    } else {
        v[2].split(',')
            .map(|c| {
                if c == "var" {
                    return Ok(None);
                }
                let (p, q) = c
                    .split_once('/')
                    .map_or_else(|| r.err(format!("bad cycle `{c}`")), Ok)?;
                Ok(Some(CycleShape {
                    preperiod: num(r, p)?,
                    period: num(r, q)?,
                }))
            })
            .collect::<Result<_, FormatError>>()?
    };
    Ok(Obstruction {
        spec,
        verdict,
        evidence: Evidence {
            cases: num(r, v[0])?,
            variable_values: num_list(r, v[1])?,
            cycles,
        },
    })
}
