//! The `kdyck` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 oracle work bound exceeded, 4 disagreement between methods.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;

use crate::closedform::{self, StatRequest};
use crate::error::Error;
use crate::oracle;
use crate::report::{self, ReportRow};
use crate::series;
use crate::verify::{self, Mutation, TurnGfs, VerifyConfig};
use crate::TurnKind;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BOUND: i32 = 3;
pub const EXIT_DISAGREE: i32 = 4;

pub const ORACLE_BOUND_ENV: &str = "KDYCK_ORACLE_BOUND";
pub const DEFAULT_ORACLE_BOUND: u64 = 10_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "kdyck",
    version,
    about = "Turn statistics of k-Dyck paths, computed exactly"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Number of k-Dyck paths with N up-steps.
    Count(CountArgs),
    /// Cumulative and average s-th turn levels.
    Turns(TurnsArgs),
    /// Cross-check series, closed forms and enumeration.
    Verify(VerifyArgs),
    /// List all paths in lexicographic order (U < D).
    Paths(PathsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Series,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Min,
    Max,
    Osc,
    All,
}

#[derive(Debug, Args)]
struct Output {
    /// Write to FILE instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CountArgs {
    #[arg(long, allow_negative_numbers = true)]
    k: i64,
    #[arg(long, allow_negative_numbers = true)]
    n: i64,
    /// Print a row instead of the bare number.
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct TurnsArgs {
    #[arg(long, allow_negative_numbers = true)]
    k: i64,
    #[arg(long, allow_negative_numbers = true)]
    n: i64,
    /// A single turn index.
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["s_from", "s_to"])]
    s: Option<i64>,
    /// First turn index (default 1).
    #[arg(long, allow_negative_numbers = true)]
    s_from: Option<i64>,
    /// Last turn index (default N).
    #[arg(long, allow_negative_numbers = true)]
    s_to: Option<i64>,
    #[arg(long, value_enum, default_value_t = KindArg::All)]
    kind: KindArg,
    #[arg(long, value_enum, default_value_t = Method::Closed)]
    method: Method,
    /// Recompute with a second method and fail (exit 4) on any difference.
    #[arg(long, value_enum)]
    check_against: Option<Method>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, allow_negative_numbers = true, default_value_t = 3)]
    k_max: i64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 6)]
    n_max: i64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 30)]
    z_order: i64,
    /// Defaults to max(N-max, 1).
    #[arg(long, allow_negative_numbers = true)]
    w_order: Option<i64>,
    #[arg(long, hide = true, default_value = "none")]
    mutate: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct PathsArgs {
    #[arg(long, allow_negative_numbers = true)]
    k: i64,
    #[arg(long, allow_negative_numbers = true)]
    n: i64,
    #[command(flatten)]
    output: Output,
}

/// A failure carrying its exit code and a diagnostic.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParameter(_) | Error::TurnOutOfRange { .. } => EXIT_USAGE,
            Error::WorkBoundExceeded { .. } => EXIT_BOUND,
            Error::NotDivisible(_) | Error::InternalInconsistency(_) => EXIT_VERIFY_FAILED,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: EXIT_VERIFY_FAILED,
            message: format!("i/o error: {e}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn positive(name: &str, v: i64) -> CliResult<u32> {
    u32::try_from(v)
        .ok()
        .filter(|&v| v >= 1)
        .ok_or_else(|| Failure::usage(format!("--{name} must be a positive integer, got {v}")))
}

fn nonnegative(name: &str, v: i64) -> CliResult<u32> {
    u32::try_from(v)
        .map_err(|_| Failure::usage(format!("--{name} must be a nonnegative integer, got {v}")))
}

/// Oracle work bound from the environment, or the default.
pub fn oracle_bound() -> std::result::Result<u64, String> {
    match std::env::var(ORACLE_BOUND_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("{ORACLE_BOUND_ENV} must be a nonnegative integer, got `{v}`")),
        Err(_) => Ok(DEFAULT_ORACLE_BOUND),
    }
}

fn enforce_bound(k: u32, n: u32) -> CliResult<()> {
    let bound = oracle_bound().map_err(Failure::usage)?;
    let count = closedform::fuss_catalan(k, n);
    if count > BigUint::from(bound) {
        return Err(Error::WorkBoundExceeded {
            count: count.to_string(),
            bound,
        }
        .into());
    }
    Ok(())
}

fn with_output<F>(out: &Output, stdout: &mut dyn Write, body: F) -> CliResult<()>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match &out.out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| Failure::usage(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            body(&mut w)?;
            w.flush()?;
        }
        None => body(stdout)?,
    }
    Ok(())
}

fn emit<T: Serialize>(format: Format, rows: &[T], w: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Json => report::write_json(w, rows),
        Format::Csv => report::write_csv(w, rows),
    }
}

#[derive(Debug, Serialize)]
struct CountRow {
    k: u32,
    #[serde(rename = "N")]
    n: u32,
    count: String,
}

fn cmd_count(args: &CountArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let k = positive("k", args.k)?;
    let n = nonnegative("n", args.n)?;
    let count = closedform::fuss_catalan(k, n);
    with_output(&args.output, stdout, |w| match args.format {
        None => writeln!(w, "{count}"),
        Some(format) => emit(
            format,
            &[CountRow {
                k,
                n,
                count: count.to_string(),
            }],
            w,
        ),
    })
}

/// Rows for `s_range × kinds`, computed by one method.
pub fn turn_rows(
    k: u32,
    n: u32,
    s_range: std::ops::RangeInclusive<u32>,
    kinds: &[TurnKind],
    method: Method,
) -> crate::Result<Vec<ReportRow>> {
    for s in [*s_range.start(), *s_range.end()] {
        StatRequest::new(k, n, s)?;
    }
    let mut rows = Vec::new();
    match method {
        Method::Closed => {
            let count = closedform::fuss_catalan(k, n);
            for s in s_range {
                let req = StatRequest::new(k, n, s)?;
                for &kind in kinds {
                    rows.push(ReportRow::new(
                        k,
                        n,
                        s,
                        kind,
                        &closedform::turn_sum(kind, &req),
                        &count,
                    ));
                }
            }
        }
        Method::Series => {
            let gfs = TurnGfs::new(k, n)?;
            let width = i64::from(k) + 1;
            let ub = series::ubar(k, width * i64::from(n) + 1, n)?;
            let count = to_natural(ub.int_coeff(width * i64::from(n) + 1, n), "path count")?;
            for s in s_range {
                for &kind in kinds {
                    let sum = to_natural(gfs.coeff(kind, n, s), "turn coefficient")?;
                    rows.push(ReportRow::new(k, n, s, kind, &sum, &count));
                }
            }
        }
        Method::Oracle => {
            let sums = oracle::turn_sums(k, n);
            let count = BigUint::from(sums.count);
            for s in s_range {
                for &kind in kinds {
                    let sum = BigUint::from(sums.get(kind, s).expect("s validated"));
                    rows.push(ReportRow::new(k, n, s, kind, &sum, &count));
                }
            }
        }
    }
    Ok(rows)
}

fn to_natural(x: Option<num_bigint::BigInt>, what: &str) -> crate::Result<BigUint> {
    x.and_then(|v| v.to_biguint())
        .ok_or_else(|| Error::InternalInconsistency(format!("{what} is not a nonnegative integer")))
}

/// Describes the first row where two methods' results differ.
fn first_disagreement(a: &[ReportRow], b: &[ReportRow]) -> Option<String> {
    if a.len() != b.len() {
        return Some(format!("methods produced {} and {} rows", a.len(), b.len()));
    }
    a.iter().zip(b).find(|(x, y)| x != y).map(|(x, y)| {
        format!(
            "methods disagree at k={} N={} s={} {}: sum {} vs {}, count {} vs {}",
            x.k, x.n, x.s, x.kind, x.sum, y.sum, x.count, y.count
        )
    })
}

fn cmd_turns(args: &TurnsArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let k = positive("k", args.k)?;
    let n = nonnegative("n", args.n)?;
    if n == 0 {
        return Err(Failure::usage("paths with N=0 have no turns; need N >= 1"));
    }
    let (from, to) = match args.s {
        Some(s) => {
            let s = positive("s", s)?;
            (s, s)
        }
        None => (
            positive("s-from", args.s_from.unwrap_or(1))?,
            positive("s-to", args.s_to.unwrap_or(i64::from(n)))?,
        ),
    };
    if from > to {
        return Err(Failure::usage(format!("empty turn range {from}..{to}")));
    }
    let kinds: Vec<TurnKind> = match args.kind {
        KindArg::Min => vec![TurnKind::Min],
        KindArg::Max => vec![TurnKind::Max],
        KindArg::Osc => vec![TurnKind::Osc],
        KindArg::All => TurnKind::ALL.to_vec(),
    };
    let methods = std::iter::once(args.method).chain(args.check_against);
    let mut results = Vec::new();
    for method in methods {
        if method == Method::Oracle {
            enforce_bound(k, n)?;
        }
        results.push(turn_rows(k, n, from..=to, &kinds, method)?);
    }
    let rows = &results[0];
    if let Some(other) = results.get(1) {
        if let Some(message) = first_disagreement(rows, other) {
            return Err(Failure {
                code: EXIT_DISAGREE,
                message,
            });
        }
    }
    with_output(&args.output, stdout, |w| emit(args.format, rows, w))
}

fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let k_max = positive("k-max", args.k_max)?;
    let n_max = nonnegative("n-max", args.n_max)?;
    if args.z_order < 1 {
        return Err(Failure::usage("--z-order must be >= 1"));
    }
    let w_order = match args.w_order {
        Some(w) => nonnegative("w-order", w)?,
        None => n_max.max(1),
    };
    let mutation: Mutation = args.mutate.parse()?;
    for k in 1..=k_max {
        enforce_bound(k, n_max)?;
    }
    let cfg = VerifyConfig {
        k_max,
        n_max,
        z_order: args.z_order,
        w_order,
        mutation,
    };
    let outcomes = verify::run(&cfg);
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    with_output(&args.output, stdout, |w| {
        for o in &outcomes {
            writeln!(w, "{o}")?;
        }
        writeln!(
            w,
            "{} of {} checks passed (k <= {k_max}, N <= {n_max}, z_order {}, w_order {w_order})",
            outcomes.len() - failed,
            outcomes.len(),
            args.z_order
        )
    })?;
    if failed > 0 {
        return Err(Failure {
            code: EXIT_VERIFY_FAILED,
            message: format!("{failed} check(s) failed"),
        });
    }
    Ok(())
}

fn cmd_paths(args: &PathsArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let k = positive("k", args.k)?;
    let n = nonnegative("n", args.n)?;
    enforce_bound(k, n)?;
    let paths = oracle::enumerate_paths(k, n)?;
    with_output(&args.output, stdout, |w| {
        for p in paths {
            writeln!(w, "{p}")?;
        }
        Ok(())
    })
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{rendered}");
            } else {
                let _ = write!(stderr, "{rendered}");
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Count(a) => cmd_count(a, stdout),
        Command::Turns(a) => cmd_turns(a, stdout),
        Command::Verify(a) => cmd_verify(a, stdout),
        Command::Paths(a) => cmd_paths(a, stdout),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "kdyck: {}", f.message);
            f.code
        }
    }
}
