//! Command-line front end: π digits, the coefficient table, verification
//! suites and benchmarks.

pub mod bench;
pub mod output;
pub mod suites;
pub mod table;

use std::io::Write;

use chudnovsky::piengine::{compute_pi, find_formula, terms_needed, Method};
use chudnovsky::PrecisionCtx;
use clap::{Args, Parser, Subcommand, ValueEnum};

use output::Record;
use suites::{catalog_checks, run_suite, Check, Suite, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "chudnovsky", version, about = "Ramanujan-Chudnovsky series for pi, with executable checks")]
pub struct Cli {
    /// Working precision in bits for table and verify.
    #[arg(long, global = true, env = "CHUDPI_PRECISION", default_value_t = 256,
          value_parser = clap::value_parser!(u32).range(64..))]
    pub precision: u32,

    #[arg(long, global = true, value_enum, default_value_t = OutputMode::Plain)]
    pub output: OutputMode,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputMode {
    Plain,
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Bs,
    Naive,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Bs => Method::BinarySplit,
            MethodArg::Naive => Method::Naive,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print pi to the requested number of decimals.
    Pi(PiArgs),
    /// Recognize j, s2, b and a for every series.
    Table,
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Time binary splitting against naive summation.
    Bench(BenchArgs),
}

fn parse_formula(s: &str) -> Result<u32, String> {
    let n: u32 = s.parse().map_err(|e| format!("{e}"))?;
    find_formula(n).map(|_| n).ok_or_else(|| "expected one of 7, 8, 11, 12, 16, 19, 27, 28, 43, 67, 163".to_string())
}

#[derive(Debug, Args)]
pub struct PiArgs {
    #[arg(long, default_value_t = 163, value_parser = parse_formula)]
    pub formula: u32,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub digits: u64,
    #[arg(long, value_enum, default_value_t = MethodArg::Bs)]
    pub method: MethodArg,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated suite names; all suites when omitted.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub suite: Vec<Suite>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 163, value_parser = parse_formula)]
    pub formula: u32,
    /// Largest rung of the 10^3, 10^4, 10^5 ladder to run.
    #[arg(long, default_value_t = 100_000)]
    pub max_digits: u64,
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            code
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> i32 {
    let ctx = PrecisionCtx::new(cli.precision);
    let structured = cli.output == OutputMode::Structured;
    let result = match &cli.command {
        Command::Pi(a) => run_pi(a, structured, out),
        Command::Table => run_table(ctx, structured, out),
        Command::Verify(a) => run_verify(a, ctx, structured, out),
        Command::Bench(a) => run_bench(a, structured, out),
    };
    result.unwrap_or(EXIT_FAILURE)
}

type IoResult = std::io::Result<i32>;

fn run_pi(a: &PiArgs, structured: bool, out: &mut dyn Write) -> IoResult {
    let spec = find_formula(a.formula).expect("validated by the parser");
    let value = compute_pi(&spec, a.digits, a.method.into());
    if structured {
        let rec = Record::Pi {
            formula: a.formula,
            method: bench::method_name(a.method.into()),
            digits: a.digits,
            terms: terms_needed(&spec, a.digits),
            value,
        };
        writeln!(out, "{}", rec.to_line())?;
    } else {
        writeln!(out, "{value}")?;
    }
    Ok(EXIT_OK)
}

fn run_table(ctx: PrecisionCtx, structured: bool, out: &mut dyn Write) -> IoResult {
    let rows = match table::build(ctx) {
        Ok(r) => r,
        Err(e) => {
            writeln!(out, "recognition failed: {e}")?;
            return Ok(EXIT_FAILURE);
        }
    };
    if structured {
        for r in &rows {
            writeln!(out, "{}", table::record(r).to_line())?;
        }
    } else {
        write!(out, "{}", table::plain(&rows))?;
    }
    Ok(EXIT_OK)
}

pub fn check_record(c: &Check) -> Record {
    Record::Check {
        suite: c.suite,
        name: c.name.clone(),
        passed: c.passed(),
        residual: c.residual_value(),
        tolerance: c.tolerance(),
        error: match &c.verdict {
            Verdict::Error(e) => Some(e.clone()),
            _ => None,
        },
    }
}

pub fn check_line(c: &Check) -> String {
    let status = if c.passed() { "PASS" } else { "FAIL" };
    let detail = match &c.verdict {
        Verdict::Exact(_) => "exact".to_string(),
        Verdict::Residual { .. } => {
            format!("residual {:.3e} < {:.0e}", c.residual_value().unwrap_or(0.0), c.tolerance().unwrap_or(0.0))
        }
        Verdict::Error(e) => format!("error: {e}"),
    };
    format!("{status}  {:<18} {}  [{detail}]", c.suite, c.name)
}

fn run_verify(a: &VerifyArgs, ctx: PrecisionCtx, structured: bool, out: &mut dyn Write) -> IoResult {
    let selected: Vec<Suite> = if a.suite.is_empty() { Suite::ALL.to_vec() } else { a.suite.clone() };
    let mut checks = catalog_checks(ctx);
    for s in selected {
        checks.extend(run_suite(s, ctx));
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    for c in &checks {
        let line = if structured { check_record(c).to_line() } else { check_line(c) };
        writeln!(out, "{line}")?;
    }
    let summary = Record::Summary { command: "verify", passed: checks.len() - failed, failed, ok: failed == 0 };
    if structured {
        writeln!(out, "{}", summary.to_line())?;
    } else {
        writeln!(out, "{} passed, {failed} failed", checks.len() - failed)?;
    }
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILURE })
}

fn run_bench(a: &BenchArgs, structured: bool, out: &mut dyn Write) -> IoResult {
    let spec = find_formula(a.formula).expect("validated by the parser");
    for r in bench::run(&spec, a.max_digits) {
        if structured {
            writeln!(out, "{}", bench::record(&r).to_line())?;
        } else {
            writeln!(out, "{:>7} digits  {:<5}  {:>5} terms  {:.4} s", r.digits, bench::method_name(r.method), r.terms, r.seconds)?;
        }
    }
    Ok(EXIT_OK)
}
