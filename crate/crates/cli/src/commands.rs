use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{ArgAction, Args, Parser, Subcommand};
use num_bigint::BigInt;

use rn19_core::caseengine::{
    assemble, build_certificate, verify, verify_valuation_lemma, CertifyOptions, Leaf, Theorem,
};
use rn19_core::search::{self, EquationInstance, SearchOutcome, Solution};
use rn19_core::{pell, sieve, Error};

use crate::certfmt;
use crate::config::{self, parse_bound, parse_set};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "rn19", version, about = "Exact tools for x^2 + 19^m = y^n")]
struct Cli {
    /// Report timings on stderr.
    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Search x^2 + c^m = y^n with y^n <= bound.
    Search(SearchArgs),
    /// Search q*x^2 + 1 = y^n with x <= x-max.
    AuxSearch(AuxArgs),
    /// Fundamental solution and first terms of X^2 - D*Y^2 = 1.
    Pell(PellArgs),
    /// Prime-power terms and primitive divisors of the Pell X sequence.
    LucasScan(LucasArgs),
    /// Check the named congruence obstruction templates.
    Sieve(SieveArgs),
    /// Check the 2-adic valuation lemma on a finite range.
    VerifyLemma(LemmaArgs),
    /// Lift a solution along (x c^(nM), y c^(2M), m + 2nM).
    Family(FamilyArgs),
    /// Build and verify a certificate.
    Certify(CertifyArgs),
    /// Re-verify a certificate file.
    CheckCert(CheckArgs),
}

fn bound_arg(s: &str) -> Result<BigInt, String> {
    parse_bound(s).map_err(|e| e.to_string())
}

fn u64_arg(s: &str) -> Result<u64, String> {
    let n = parse_bound(s).map_err(|e| e.to_string())?;
    config::bound_u64(&n).ok_or_else(|| format!("`{s}` does not fit in 64 bits"))
}

/// A parsed `3..10` / `3,5,7` argument.
#[derive(Debug, Clone)]
struct Set(Vec<u32>);

fn set_arg(s: &str) -> Result<Set, String> {
    parse_set(s).map(Set).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 19)]
    c: u64,
    /// Exponents of c, e.g. `1`, `2,4`, `1..5`.
    #[arg(long, value_parser = set_arg, default_value = "1")]
    m: Set,
    #[arg(long, value_parser = set_arg, default_value = "3..10")]
    n: Set,
    /// Upper bound on y^n (default 1e12, or $RN19_DEFAULT_BOUND).
    #[arg(long, value_parser = bound_arg)]
    bound: Option<BigInt>,
    /// Worker threads splitting the y range.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug, Args)]
struct AuxArgs {
    #[arg(long, default_value_t = 19)]
    q: u64,
    #[arg(long, value_parser = u64_arg, default_value = "1e6")]
    x_max: u64,
    #[arg(long, value_parser = set_arg, default_value = "3..12")]
    n: Set,
}

#[derive(Debug, Args)]
struct PellArgs {
    #[arg(long)]
    d: u64,
    #[arg(long, default_value_t = 10)]
    count: usize,
}

#[derive(Debug, Args)]
struct LucasArgs {
    #[arg(long, default_value_t = 3)]
    d: u64,
    #[arg(long, default_value_t = 200)]
    count: usize,
    /// Prime whose powers are looked for among the X terms.
    #[arg(long, default_value_t = 19)]
    q: u64,
    /// Indices that must have a primitive divisor.
    #[arg(long, value_parser = set_arg, default_value = "13..60")]
    primitive: Set,
}

#[derive(Debug, Args)]
struct SieveArgs {
    /// Template name; all templates when omitted.
    #[arg(long)]
    template: Vec<String>,
    /// Print the full enumeration record of each template.
    #[arg(long)]
    structured: bool,
}

#[derive(Debug, Args)]
struct LemmaArgs {
    #[arg(long, default_value_t = 50)]
    p_max: u64,
    #[arg(long, default_value_t = 40)]
    b_max: u64,
}

#[derive(Debug, Args)]
struct FamilyArgs {
    #[arg(long, value_parser = bound_arg, default_value = "22434")]
    x: BigInt,
    #[arg(long, value_parser = bound_arg, default_value = "55")]
    y: BigInt,
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long, default_value_t = 5)]
    n: u32,
    #[arg(long, default_value_t = 19)]
    c: u64,
    /// Lift amounts M.
    #[arg(long, value_parser = set_arg, default_value = "1..3")]
    lift: Set,
}

#[derive(Debug, Args)]
struct CertifyArgs {
    /// lemma1, theorem2 or theorem6.
    #[arg(long)]
    theorem: String,
    /// Values of k, e.g. `1..2`.
    #[arg(long, value_parser = set_arg)]
    k: Option<Set>,
    /// Write the certificate here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Bound on y^n in the bounded searches.
    #[arg(long, value_parser = bound_arg)]
    bound: Option<BigInt>,
    #[arg(long, value_parser = u64_arg)]
    aux_x_max: Option<u64>,
    #[arg(long)]
    pell_terms: Option<usize>,
    #[arg(long)]
    primitive_max: Option<usize>,
    #[arg(long)]
    n_max: Option<u32>,
    #[arg(long)]
    p_max: Option<u64>,
    #[arg(long)]
    b_max: Option<u64>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    path: PathBuf,
}

/// Runs the command line `argv` (program name first). Returns the exit code:
/// 0 on success, 1 on argument errors, 2 when a check fails.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let start = Instant::now();
    let result = dispatch(cli.command, out, err);
    if cli.verbose > 0 {
        let _ = writeln!(err, "elapsed: {:.3} s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

type Outcome = Result<i32, Failure>;

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Search(a) => cmd_search(a, out),
        Command::AuxSearch(a) => cmd_aux(a, out),
        Command::Pell(a) => cmd_pell(a, out),
        Command::LucasScan(a) => cmd_lucas(a, out),
        Command::Sieve(a) => cmd_sieve(a, out),
        Command::VerifyLemma(a) => cmd_lemma(a, out),
        Command::Family(a) => cmd_family(a, out),
        Command::Certify(a) => cmd_certify(a, out, err),
        Command::CheckCert(a) => cmd_check(a, out, err),
    }
}

fn fmt_set(xs: &[u32]) -> String {
    xs.iter().map(u32::to_string).collect::<Vec<_>>().join(", ")
}

/// Splits `1..y_end` into `jobs` contiguous slices searched concurrently.
fn parallel_search(inst: &EquationInstance, jobs: usize) -> SearchOutcome {
    let end = inst.y_end();
    let jobs = jobs.max(1) as u64;
    let width = (end.saturating_sub(1)).div_ceil(jobs).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..jobs)
            .map(|i| {
                let lo = 1 + i * width;
                let hi = (lo.saturating_add(width)).min(end);
                s.spawn(move || {
                    if lo < hi {
                        search::brute_force_in(inst, lo..hi)
                    } else {
                        SearchOutcome::default()
                    }
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("search worker panicked"))
            .fold(SearchOutcome::default(), SearchOutcome::merge)
    })
}

fn cmd_search(a: SearchArgs, out: &mut dyn Write) -> Outcome {
    let bound = match a.bound {
        Some(b) => b,
        None => config::default_bound().map_err(usage)?,
    };
    let inst = EquationInstance::new(a.c, &a.m.0, &a.n.0, bound.clone()).map_err(usage)?;
    let found = parallel_search(&inst, a.jobs);
    writeln!(
        out,
        "# x^2 + {}^m = y^n, m in {{{}}}, n in {{{}}}, y^n <= {bound}",
        a.c,
        fmt_set(&inst.m_values),
        fmt_set(&inst.n_values)
    )?;
    writeln!(out, "x\ty\tm\tn\tc")?;
    for s in &found.solutions {
        writeln!(out, "{}\t{}\t{}\t{}\t{}", s.x, s.y, s.m, s.n, s.c)?;
    }
    writeln!(out, "# {} solution(s) with x >= 1", found.solutions.len())?;
    for s in &found.degenerate {
        writeln!(out, "# degenerate x = 0: {}\t{}\t{}\t{}\t{}", s.x, s.y, s.m, s.n, s.c)?;
    }
    Ok(EXIT_OK)
}

fn cmd_aux(a: AuxArgs, out: &mut dyn Write) -> Outcome {
    let found = search::brute_force_aux(a.q, a.x_max, &a.n.0).map_err(usage)?;
    writeln!(
        out,
        "# {}x^2 + 1 = y^n, 1 <= x <= {}, n in {{{}}}",
        a.q,
        a.x_max,
        fmt_set(&a.n.0)
    )?;
    writeln!(out, "x\ty\tn\tq")?;
    for s in &found {
        writeln!(out, "{}\t{}\t{}\t{}", s.x, s.y, s.n, s.q)?;
    }
    writeln!(out, "# {} solution(s)", found.len())?;
    Ok(EXIT_OK)
}

fn cmd_pell(a: PellArgs, out: &mut dyn Write) -> Outcome {
    let fund = pell::fundamental_solution(a.d).map_err(usage)?;
    let seq = pell::sequence(a.d, a.count).map_err(usage)?;
    writeln!(out, "# X^2 - {}Y^2 = 1", a.d)?;
    writeln!(out, "fundamental\t{}\t{}", fund.x, fund.y)?;
    writeln!(out, "m\tX_m\tY_m")?;
    for t in &seq.terms {
        writeln!(out, "{}\t{}\t{}", t.index, t.x, t.y)?;
    }
    Ok(EXIT_OK)
}

fn cmd_lucas(a: LucasArgs, out: &mut dyn Write) -> Outcome {
    let need = a.primitive.0.iter().copied().max().unwrap_or(0) as usize;
    let count = a.count.max(need);
    let seq = pell::sequence(a.d, count).map_err(usage)?;
    let hits = pell::prime_power_scan(&seq, a.q);
    writeln!(out, "# X_m for X^2 - {}Y^2 = 1, m <= {count}", a.d)?;
    writeln!(
        out,
        "powers of {} among the first {} terms: {}",
        a.q,
        a.count,
        if hits.iter().all(|&m| m > a.count) {
            "none".to_string()
        } else {
            hits.iter()
                .filter(|&&m| m <= a.count)
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        }
    )?;
    writeln!(out, "m\tprimitive_divisor")?;
    let mut missing = 0;
    for &m in &a.primitive.0 {
        let p = pell::primitive_divisor(&seq, m as usize).map_err(usage)?;
        match p {
            Some(p) => writeln!(out, "{m}\t{p}")?,
            None => {
                missing += 1;
                writeln!(out, "{m}\tnone")?
            }
        }
    }
    Ok(if missing == 0 { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_sieve(a: SieveArgs, out: &mut dyn Write) -> Outcome {
    let all = sieve::named_templates();
    let chosen: Vec<_> = if a.template.is_empty() {
        all
    } else {
        let mut v = Vec::new();
        for name in &a.template {
            match all.iter().find(|(n, _)| n == name) {
                Some(t) => v.push(t.clone()),
                None => {
                    let names: Vec<_> = all.iter().map(|(n, _)| *n).collect();
                    return Err(usage(format!(
                        "unknown template `{name}` (known: {})",
                        names.join(", ")
                    )));
                }
            }
        }
        v
    };
    let mut failed = false;
    for (name, spec) in chosen {
        let o = sieve::check(&spec).map_err(usage)?;
        let verdict = if o.is_unsolvable() { "unsolvable" } else { "SOLVABLE" };
        failed |= !o.is_unsolvable();
        writeln!(out, "{name}\t{spec}\t{verdict}\t{} cases", o.evidence.cases)?;
        if a.structured {
            out.write_all(certfmt::serialize_obstruction(&o).as_bytes())?;
        }
    }
    Ok(if failed { EXIT_FAILED } else { EXIT_OK })
}

fn cmd_lemma(a: LemmaArgs, out: &mut dyn Write) -> Outcome {
    let r = verify_valuation_lemma(a.p_max, a.b_max).map_err(usage)?;
    writeln!(
        out,
        "# odd primes p <= {}, even B with 2 <= |B| <= {}",
        r.p_max, r.b_max
    )?;
    writeln!(out, "pairs\t{}", r.pairs)?;
    writeln!(out, "comparisons\t{}", r.instances)?;
    writeln!(out, "violations\t{}", r.violations.len())?;
    for (p, b, k) in &r.violations {
        writeln!(out, "violation\tp={p}\tB={b}\tk={k}")?;
    }
    writeln!(out, "vanishing sums\t{}", r.vanishing.len())?;
    for (p, b) in &r.vanishing {
        writeln!(out, "vanishing\tp={p}\tB={b}")?;
    }
    Ok(if r.holds() { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_family(a: FamilyArgs, out: &mut dyn Write) -> Outcome {
    let base = Solution::new(a.x, a.y, a.m, a.n, a.c);
    if !search::verify_solution(&base) {
        writeln!(out, "base {base} does not satisfy x^2 + c^m = y^n")?;
        return Ok(EXIT_FAILED);
    }
    writeln!(out, "M\tx\ty\tm\tn\tc\tverified")?;
    let mut ok = true;
    for &lift in &a.lift.0 {
        let s = search::lift_family(&base, lift).map_err(usage)?;
        let v = search::verify_solution(&s);
        ok &= v;
        writeln!(
            out,
            "{lift}\t{}\t{}\t{}\t{}\t{}\t{}",
            s.x,
            s.y,
            s.m,
            s.n,
            s.c,
            if v { "yes" } else { "no" }
        )?;
    }
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

fn certify_options(a: &CertifyArgs) -> Result<CertifyOptions, Failure> {
    let mut o = CertifyOptions {
        search_bound: config::default_bound().map_err(usage)?,
        ..CertifyOptions::default()
    };
    if let Some(b) = &a.bound {
        o.search_bound = b.clone();
    }
    if let Some(v) = a.aux_x_max {
        o.aux_x_max = v;
    }
    if let Some(v) = a.pell_terms {
        o.pell_terms = v;
    }
    if let Some(v) = a.primitive_max {
        o.primitive_max = v;
    }
    if let Some(v) = a.n_max {
        o.n_max = v;
    }
    if let Some(v) = a.p_max {
        o.valuation_p_max = v;
    }
    if let Some(v) = a.b_max {
        o.valuation_b_max = v;
    }
    o.validate().map_err(usage)?;
    Ok(o)
}

fn cmd_certify(a: CertifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let theorem = Theorem::from_name(&a.theorem)
        .ok_or_else(|| usage(format!("unknown theorem `{}` (lemma1, theorem2, theorem6)", a.theorem)))?;
    let ks = a.k.clone().map(|s| s.0).unwrap_or_default();
    if theorem != Theorem::Lemma1 && ks.is_empty() {
        return Err(usage("--k is required for theorem2 and theorem6"));
    }
    if ks.contains(&0) {
        return Err(usage("k must be positive"));
    }
    let opts = certify_options(&a)?;
    let cert = match build_certificate(theorem, &ks, &opts) {
        Ok(c) => c,
        Err(Error::OpenLeaf { .. }) => {
            let tree = assemble(theorem, &ks, &opts).map_err(usage)?;
            for o in verify(&tree, &opts) {
                writeln!(err, "open {}: {}: {}", o.path, o.label, o.reason)?;
            }
            writeln!(err, "certificate for {} is not closed", theorem.name())?;
            return Ok(EXIT_FAILED);
        }
        Err(e) => return Err(usage(e)),
    };
    let text = certfmt::serialize(&cert);
    match &a.out {
        Some(path) => {
            std::fs::write(path, &text)?;
            let leaves = cert.tree.leaves();
            let cited = leaves
                .iter()
                .filter(|(_, l)| matches!(l, Leaf::Citation { .. }))
                .count();
            writeln!(
                out,
                "{}: closed, {} leaves ({} citation{}), written to {}",
                theorem.name(),
                leaves.len(),
                cited,
                if cited == 1 { "" } else { "s" },
                path.display()
            )?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn cmd_check(a: CheckArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let text = std::fs::read_to_string(&a.path)?;
    let cert = match certfmt::parse(&text) {
        Ok(c) => c,
        Err(e) => {
            writeln!(err, "malformed certificate: {e}")?;
            return Ok(EXIT_FAILED);
        }
    };
    if let Err(e) = cert.options.validate() {
        writeln!(err, "invalid options: {e}")?;
        return Ok(EXIT_FAILED);
    }
    match assemble(cert.theorem, &cert.k_values, &cert.options) {
        Ok(t) if t == cert.tree => {}
        Ok(_) => {
            writeln!(err, "tree differs from the assembly for {}", cert.theorem.name())?;
            return Ok(EXIT_FAILED);
        }
        Err(e) => {
            writeln!(err, "cannot assemble: {e}")?;
            return Ok(EXIT_FAILED);
        }
    }
    let open = verify(&cert.tree, &cert.options);
    for o in &open {
        writeln!(err, "open {}: {}: {}", o.path, o.label, o.reason)?;
    }
    if open.is_empty() {
        writeln!(
            out,
            "{}: closed, {} leaves verified",
            cert.theorem.name(),
            cert.tree.leaves().len()
        )?;
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_FAILED)
    }
}
