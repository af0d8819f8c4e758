//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when a comparison or verification fails,
//! 2 on malformed input or an evaluation error.

use crate::arith::Assignment;
use crate::error::Error;
use crate::fillings::{packed_nat, st0, standard_fillings, SizeBound};
use crate::macdonald::{self, FormulaTag};
use crate::qsym::{Basis, QSymExpr, XPoly};
use crate::shapes::{Composition, SubsetMask};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;
use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;

const COMPUTE_GUARD: usize = 8;
const VERIFY_GUARD: usize = 6;

#[derive(Parser, Debug)]
#[command(name = "qmac", version, about = "Exact quasisymmetric Macdonald polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print G_γ by one formula.
    Compute {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "direct", value_parser = parse_formula)]
        formula: FormulaTag,
        /// Output basis; defaults to the formula's own basis.
        #[arg(long, value_parser = parse_basis)]
        basis: Option<Basis>,
    },
    /// Check two formulas agree, reporting the first differing coefficient.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_formula)]
        lhs: FormulaTag,
        #[arg(long, value_parser = parse_formula)]
        rhs: FormulaTag,
    },
    /// Expand G_γ as a polynomial in finitely many variables.
    Expand {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "direct", value_parser = parse_formula)]
        formula: FormulaTag,
        #[arg(long)]
        vars: usize,
        /// Sum the defining nonsymmetric pieces instead of expanding a formula.
        #[arg(long)]
        definition: bool,
    },
    /// Run the identity checks for every composition up to a size.
    Verify {
        #[arg(long, default_value_t = VERIFY_GUARD)]
        max_n: usize,
        #[arg(long, value_name = "N")]
        unsafe_n: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Strong composition, e.g. `1,2`.
    #[arg(long, value_parser = parse_gamma)]
    gamma: Composition,
    /// Partial specialization, e.g. `q=0,t=1/2`.
    #[arg(long, value_parser = parse_spec)]
    spec: Option<Assignment>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Raise the size guard to N.
    #[arg(long, value_name = "N")]
    unsafe_n: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

fn parse_formula(s: &str) -> Result<FormulaTag, String> {
    FormulaTag::parse(s).map_err(|e| e.to_string())
}

fn parse_basis(s: &str) -> Result<Basis, String> {
    Basis::parse(s).map_err(|e| e.to_string())
}

fn parse_gamma(s: &str) -> Result<Composition, String> {
    Composition::strong(Composition::parse(s).map_err(|e| e.to_string())?.parts().to_vec())
        .map_err(|e| e.to_string())
}

fn parse_spec(s: &str) -> Result<Assignment, String> {
    Assignment::parse(s).map_err(|e| e.to_string())
}

/// Failure of a command: exit status plus message.
struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(2, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure(2, format!("write failed: {e}"))
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let mut buf = Vec::new();
    let result = with_thread_pool(|| dispatch(cli.command, &mut buf));
    if let Err(e) = out.write_all(&buf) {
        let _ = writeln!(err, "error: write failed: {e}");
        return 2;
    }
    match result {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

/// Honours `QMAC_THREADS` when set to a positive integer.
fn with_thread_pool<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let threads = std::env::var("QMAC_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok());
    match threads.filter(|&n| n > 0) {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}

fn guard(n: usize, default: usize, unsafe_n: Option<usize>) -> Result<SizeBound, Failure> {
    let bound = SizeBound(unsafe_n.unwrap_or(default));
    bound.check(n).map_err(|_| {
        Failure(2, format!("|γ| = {n} exceeds the size guard {}; pass --unsafe-n {n} to override", bound.0))
    })?;
    Ok(bound)
}

fn evaluate(tag: FormulaTag, common: &Common, bound: SizeBound) -> Result<QSymExpr, Failure> {
    let e = macdonald::compute(tag, &common.gamma, bound)?;
    Ok(match &common.spec {
        Some(a) => e.specialize(a)?,
        None => e,
    })
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Compute { common, formula, basis } => {
            let bound = guard(common.gamma.size(), COMPUTE_GUARD, common.unsafe_n)?;
            let e = evaluate(formula, &common, bound)?.to_basis(basis.unwrap_or(formula.native_basis()));
            write_qsym(out, &e, common.format)?;
            Ok(0)
        }
        Command::Compare { common, lhs, rhs } => {
            let bound = guard(common.gamma.size(), COMPUTE_GUARD, common.unsafe_n)?;
            let l = evaluate(lhs, &common, bound)?.to_basis(Basis::Monomial);
            let r = evaluate(rhs, &common, bound)?.to_basis(Basis::Monomial);
            let diff = l.first_difference(&r)?;
            write_compare(out, &common, lhs, rhs, &l, &r, diff.as_ref())?;
            Ok(if diff.is_none() { 0 } else { 1 })
        }
        Command::Expand { common, formula, vars, definition } => {
            let bound = guard(common.gamma.size(), COMPUTE_GUARD, common.unsafe_n)?;
            if vars == 0 {
                return Err(Failure(2, "--vars must be at least 1".into()));
            }
            let mut x = if definition {
                if formula.is_jack() {
                    return Err(Failure(2, "--definition expands G_γ, not a Jack formula".into()));
                }
                macdonald::g_truncated(&common.gamma, vars, SizeBound(bound.0.max(vars)))?
            } else {
                macdonald::compute(formula, &common.gamma, bound)?.expand_vars(vars)
            };
            if let Some(a) = &common.spec {
                x = x.specialize(a)?;
            }
            write_xpoly(out, &x, common.format)?;
            Ok(0)
        }
        Command::Verify { max_n, unsafe_n, format } => {
            guard(max_n, VERIFY_GUARD, unsafe_n)?;
            let report = verify(max_n)?;
            write_report(out, &report, format)?;
            Ok(if report.iter().all(|r| r.failures.is_empty()) { 0 } else { 1 })
        }
    }
}

fn write_qsym(out: &mut dyn Write, e: &QSymExpr, format: Format) -> std::io::Result<()> {
    match format {
        Format::Text => writeln!(out, "{e}"),
        Format::Json => writeln!(out, "{}", e.to_json()),
        Format::Latex => writeln!(out, "{}", e.latex()),
    }
}

fn write_xpoly(out: &mut dyn Write, x: &XPoly, format: Format) -> std::io::Result<()> {
    match format {
        Format::Text => writeln!(out, "{x}"),
        Format::Json => writeln!(out, "{}", x.to_json()),
        Format::Latex => writeln!(out, "{}", x.latex()),
    }
}

fn subset_label(s: &SubsetMask) -> String {
    let m: Vec<String> = s.members().iter().map(usize::to_string).collect();
    format!("M_{{({})}}", m.join(","))
}

fn write_compare(
    out: &mut dyn Write,
    common: &Common,
    lhs: FormulaTag,
    rhs: FormulaTag,
    l: &QSymExpr,
    r: &QSymExpr,
    diff: Option<&(SubsetMask, crate::arith::RatExpr, crate::arith::RatExpr)>,
) -> std::io::Result<()> {
    let verdict = if diff.is_none() { "PASS" } else { "FAIL" };
    match common.format {
        Format::Json => {
            let difference = diff.map(|(s, a, b)| {
                json!({ "subset": s.members(), "composition": s.to_composition().parts(),
                        "lhs": a.to_json(), "rhs": b.to_json() })
            });
            let v = json!({
                "gamma": common.gamma.parts(), "lhs_formula": lhs.name(), "rhs_formula": rhs.name(),
                "result": verdict, "difference": difference, "lhs": l.to_json(), "rhs": r.to_json(),
            });
            writeln!(out, "{v}")
        }
        Format::Text | Format::Latex => {
            writeln!(out, "{verdict}: {lhs} vs {rhs} for γ = {}", common.gamma)?;
            if let Some((s, a, b)) = diff {
                if common.format == Format::Latex {
                    writeln!(out, "first difference at {}: {} \\neq {}", subset_label(s), a.latex(), b.latex())
                } else {
                    writeln!(out, "first difference at {}: lhs = {a}, rhs = {b}", subset_label(s))
                }
            } else {
                Ok(())
            }
        }
    }
}

/// Outcome of one named identity across all cases.
pub struct CheckReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

type CaseResult = (usize, usize, Result<bool, Error>);

fn tally(name: &'static str, mut results: Vec<(String, CaseResult)>) -> CheckReport {
    results.sort_by_key(|(_, (k, j, _))| (*k, *j));
    let cases = results.len();
    let failures = results
        .into_iter()
        .filter_map(|(label, (_, _, r))| match r {
            Ok(true) => None,
            Ok(false) => Some(label),
            Err(e) => Some(format!("{label}: {e}")),
        })
        .collect();
    CheckReport { name, cases, failures }
}

fn run_over<F>(name: &'static str, gammas: &[Composition], f: F) -> CheckReport
where
    F: Fn(&Composition) -> Result<bool, Error> + Sync,
{
    let results = gammas
        .par_iter()
        .enumerate()
        .map(|(k, g)| (format!("γ = {g}"), (k, 0, f(g))))
        .collect();
    tally(name, results)
}

fn destandardization_bijection(g: &Composition, bound: SizeBound) -> Result<bool, Error> {
    let packed: BTreeSet<String> = packed_nat(g, bound)?.iter().map(|f| f.to_string()).collect();
    let mut seen = BTreeSet::new();
    for tau in standard_fillings(g, bound)? {
        let v = tau.v_set();
        for s in v.supersets() {
            let f = tau.destandardize(&s)?;
            if f.weight() != tau.destandardized_weight(&s)? || !seen.insert(f.to_string()) {
                return Ok(false);
            }
        }
    }
    Ok(seen == packed)
}

fn iota_bookkeeping(g: &Composition, bound: SizeBound) -> Result<bool, Error> {
    let h = g.h_stat();
    for tau in st0(g, bound)? {
        let w = tau.w_set();
        for u in w.subsets() {
            let tp = tau.iota(&u)?;
            let ok = tp.is_st1()
                && tp.descents().len() == u.len()
                && tp.omega() == h - w.len()
                && tp.nu_set() == tau.v_set().union(&u)
                && tp.column_sorted() == tau;
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Runs every identity check for strong compositions of size at most `max_n`.
pub fn verify(max_n: usize) -> Result<Vec<CheckReport>, Error> {
    let bound = SizeBound(max_n.max(4));
    let upto = |k: usize| -> Vec<Composition> { (1..=k).flat_map(Composition::all_strong).collect() };
    let all = upto(max_n);
    let small = upto(max_n.min(5));
    let q0 = Assignment::parse("q=0")?;
    let q0t0 = Assignment::parse("q=0,t=0")?;

    let mut reports = vec![
        run_over("fundamental = direct", &all, |g| {
            Ok(macdonald::g_fundamental(g, bound)?.f_to_m()? == macdonald::g_direct(g, bound)?)
        }),
        run_over("hall-littlewood chain", &all, |g| {
            let a = macdonald::g_hl_fundamental(g, bound)?;
            let b = macdonald::g_hl_direct(g, bound)?;
            let c = macdonald::g_fundamental(g, bound)?.specialize(&q0)?;
            Ok(a == b && b == c)
        }),
        run_over("jack chain", &small, |g| {
            Ok(macdonald::jack_fundamental(g, bound)?.f_to_m()? == macdonald::jack_direct(g, bound)?)
        }),
    ];

    let trunc_cases: Vec<(usize, usize, Composition, usize)> = small
        .iter()
        .enumerate()
        .flat_map(|(k, g)| {
            let l = g.len();
            [l, l + 1].into_iter().filter(|&m| m <= 4).map(move |m| (k, m, g.clone(), m))
        })
        .collect();
    let trunc = trunc_cases
        .par_iter()
        .map(|(k, j, g, m)| {
            let r = macdonald::g_truncated(g, *m, bound)
                .and_then(|x| Ok(x == macdonald::g_direct(g, bound)?.expand_vars(*m)));
            (format!("γ = {g}, m = {m}"), (*k, *j, r))
        })
        .collect();
    reports.push(tally("definition truncation", trunc));

    reports.push(run_over("destandardization", &all, |g| destandardization_bijection(g, bound)));
    reports.push(run_over("iota bookkeeping", &all, |g| iota_bookkeeping(g, bound)));

    let partitions: Vec<Composition> = (1..=max_n.min(5)).flat_map(Composition::partitions).collect();
    reports.push(run_over("rearrangement symmetry", &partitions, |lambda| {
        let mut sum = QSymExpr::zero(lambda.size(), Basis::Monomial)?;
        for g in lambda.rearrangements() {
            sum = sum.add(&macdonald::g_direct(&g, bound)?)?;
        }
        Ok(sum.is_symmetric())
    }));

    reports.push(run_over("schur specialization", &all, |g| {
        let e = macdonald::g_fundamental(g, bound)?.specialize(&q0t0)?;
        let ok = e.terms().all(|(_, c)| {
            c.as_constant().is_some_and(|r| r.is_integer() && r >= num_traits::Zero::zero())
        });
        Ok(ok)
    }));
    Ok(reports)
}

fn write_report(out: &mut dyn Write, report: &[CheckReport], format: Format) -> std::io::Result<()> {
    if format == Format::Json {
        let rows: Vec<_> = report
            .iter()
            .map(|r| json!({ "check": r.name, "cases": r.cases, "failed": r.failures }))
            .collect();
        return writeln!(out, "{}", json!(rows));
    }
    writeln!(out, "{:<24} {:>6} {:>7} {:>7}", "check", "cases", "passed", "failed")?;
    for r in report {
        let f = r.failures.len();
        writeln!(out, "{:<24} {:>6} {:>7} {:>7}", r.name, r.cases, r.cases - f, f)?;
    }
    for r in report {
        for f in &r.failures {
            writeln!(out, "FAIL {}: {f}", r.name)?;
        }
    }
    let total: usize = report.iter().map(|r| r.failures.len()).sum();
    writeln!(out, "{}", if total == 0 { "all checks passed" } else { "some checks failed" })
}
