//! Command-line front end.
//!
//! Exit codes: 0 success (or nothing found), 2 usage or input error, 3 a
//! representation was found (or a witness failed: a theorem-violation alarm),
//! 4 a local obstruction, 5 an undecided local verdict.

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::arith::{factor, integer_nth_root};
use crate::error::Error;
use crate::families::{self, density_report, witness, DensityRow, Family, FamilyTarget, Witness};
use crate::local::{self, LocalVerdict};
use crate::search::{verify_none, ResidueClass, SearchSpec};
use crate::two_squares::{is_sum_of_two_squares, two_square_representations};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FOUND: i32 = 3;
pub const EXIT_OBSTRUCTED: i32 = 4;
pub const EXIT_UNDECIDED: i32 = 5;

/// Environment variable overriding the worker thread count.
pub const THREADS_ENV: &str = "SUMSQ_THREADS";
/// Environment variable setting the stdout buffer size in bytes.
pub const BUFFER_ENV: &str = "SUMSQ_OUTPUT_BUFFER";
pub const DEFAULT_BUFFER: usize = 64 * 1024;

#[derive(Parser, Debug)]
#[command(
    name = "sumsq",
    version,
    about = "Exceptional integers for x^2 + y^2 + z^k = n: generate, verify, certify, check locally",
    after_help = "EXAMPLES:\n\
                  \n  sumsq generate --family thm1 --k 3 --limit 100000\
                  \n  sumsq verify --n 2197 --k 3 --z-class 6/12 --z-min -30 --z-max 13\
                  \n  sumsq witness --family thm2 --k 4 --p 7 --z 1\
                  \n  sumsq local --n 2197 --k 3 --z-class 6/12\
                  \n  sumsq count --family thm1 --k 3 --limits 1000000,1000000000000\
                  \n  sumsq twosquares --n 25 --list\n\
                  \nENVIRONMENT:\n\
                  \n  SUMSQ_THREADS        worker threads (default: one per core)\
                  \n  SUMSQ_OUTPUT_BUFFER  stdout buffer in bytes (default: 65536)"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Jsonl,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit every target of a family up to a bound
    Generate {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        limit: u128,
        #[arg(long, value_enum, default_value = "jsonl")]
        format: Format,
    },
    /// Exhaustively search a z-window for a representation
    Verify {
        #[arg(long)]
        n: u128,
        #[arg(long)]
        k: u32,
        #[arg(long, value_parser = parse_class, default_value = "0/1")]
        z_class: ResidueClass,
        #[arg(long, allow_negative_numbers = true)]
        z_min: Option<i128>,
        #[arg(long, allow_negative_numbers = true)]
        z_max: Option<i128>,
        /// Require x, y, z >= 1 (zeros are admitted otherwise)
        #[arg(long)]
        positive: bool,
    },
    /// Certificate of non-representability for one target and one z
    Witness {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        cofactor: u64,
        #[arg(long, allow_negative_numbers = true)]
        z: i128,
    },
    /// Local solvability report over all primes
    Local {
        #[arg(long)]
        n: u128,
        #[arg(long)]
        k: u32,
        #[arg(long, value_parser = parse_class, default_value = "0/1")]
        z_class: ResidueClass,
        /// Generic prime bound (default: max(100, k + 1, largest prime of the modulus))
        #[arg(long)]
        bound: Option<u64>,
        #[arg(long, default_value_t = 12)]
        max_level: u32,
    },
    /// Family counts against the asymptotic prediction
    Count {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        k: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        limits: Vec<u128>,
        #[arg(long, value_enum, default_value = "jsonl")]
        format: Format,
    },
    /// Sum-of-two-squares classification
    Twosquares {
        #[arg(long)]
        n: u128,
        /// Also list every representation x <= y
        #[arg(long)]
        list: bool,
    },
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_class(s: &str) -> Result<ResidueClass, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Parses `args` (including the program name), writes records to `out` and
/// diagnostics to `err`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => {
            if let Err(e) = out.flush() {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
            code
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::TheoremViolation(_) => EXIT_FOUND,
                _ => EXIT_USAGE,
            }
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

enum Failure {
    Lib(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, record: &T) -> Result<(), Failure> {
    serde_json::to_writer(&mut *out, record)?;
    out.write_all(b"\n")?;
    Ok(())
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Generate {
            family,
            k,
            limit,
            format,
        } => {
            let targets = families::generate(family, k, limit)?;
            match format {
                Format::Jsonl => {
                    for t in &targets {
                        emit(out, t)?;
                    }
                }
                Format::Csv => {
                    writeln!(
                        out,
                        "family,k,p,cofactor_n,target,z_class_r,z_class_m,positivity"
                    )?;
                    for t in &targets {
                        writeln!(
                            out,
                            "{},{},{},{},{},{},{},{}",
                            t.family,
                            t.k,
                            t.p,
                            t.cofactor_n,
                            t.target,
                            t.z_class.r(),
                            t.z_class.m(),
                            t.positivity
                        )?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Verify {
            n,
            k,
            z_class,
            z_min,
            z_max,
            positive,
        } => {
            let spec = verify_spec(n, k, z_class, z_min, z_max, positive)?;
            let family = detect_family(n, k, z_class, positive).map(|t| t.family);
            let v = verify_none(&spec)?;
            let found = v.found.is_some();
            emit(
                out,
                &VerifyRecord {
                    n: spec.n,
                    k: spec.k,
                    z_class: spec.z_class,
                    z_min: spec.z_min,
                    z_max: spec.z_max,
                    positive: spec.require_positive,
                    family,
                    exhausted_window: v.exhausted_window,
                    count_checked: v.count_checked,
                    found: v.found,
                },
            )?;
            Ok(if found { EXIT_FOUND } else { EXIT_OK })
        }
        Command::Witness {
            family,
            k,
            p,
            cofactor,
            z,
        } => {
            let target = FamilyTarget::new(family, k, p, cofactor)?;
            let w = witness(&target, z)?;
            emit(
                out,
                &WitnessRecord {
                    target: &target,
                    witness: &w,
                },
            )?;
            Ok(EXIT_OK)
        }
        Command::Local {
            n,
            k,
            z_class,
            bound,
            max_level,
        } => {
            let bound = match bound {
                Some(b) => b,
                None => default_generic_bound(k, z_class)?,
            };
            let report = local::local_report(n, k, z_class, bound, max_level)?;
            emit(out, &report)?;
            Ok(match report.verdict {
                LocalVerdict::NoObstructionFound => EXIT_OK,
                LocalVerdict::Obstructed => EXIT_OBSTRUCTED,
                LocalVerdict::Undecided => EXIT_UNDECIDED,
            })
        }
        Command::Count {
            family,
            k,
            limits,
            format,
        } => {
            let rows = density_report(family, k, &limits)?;
            match format {
                Format::Jsonl => {
                    for row in &rows {
                        emit(out, &CountRecord { family, k, row })?;
                    }
                }
                Format::Csv => {
                    writeln!(
                        out,
                        "family,k,limit,actual,predicted,ratio,lower_bound_order"
                    )?;
                    let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
                    for r in &rows {
                        writeln!(
                            out,
                            "{family},{k},{},{},{},{},{}",
                            r.limit,
                            r.actual,
                            opt(r.predicted),
                            opt(r.ratio),
                            r.lower_bound_order
                        )?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Twosquares { n, list } => {
            let sum_of_two_squares = is_sum_of_two_squares(n)?;
            let representations = if list {
                let n = u64::try_from(n).map_err(|_| Error::Budget {
                    what: "two-squares enumeration target",
                    actual: n,
                    limit: crate::two_squares::ENUMERATION_BOUND as u128,
                })?;
                Some(two_square_representations(n)?)
            } else {
                None
            };
            emit(
                out,
                &TwoSquaresRecord {
                    n,
                    sum_of_two_squares,
                    representations,
                },
            )?;
            Ok(EXIT_OK)
        }
    }
}

/// `max(100, k + 1, largest prime factor of the class modulus)`.
pub fn default_generic_bound(k: u32, z_class: ResidueClass) -> Result<u64, Error> {
    let largest = factor(z_class.m() as u128)?.primes().last().unwrap_or(1) as u64;
    Ok(100.max(k as u64 + 1).max(largest).max(z_class.m()))
}

/// Recognizes `(n, k, class, positivity)` as a target of one of the families.
pub fn detect_family(
    n: u128,
    k: u32,
    z_class: ResidueClass,
    positive: bool,
) -> Option<FamilyTarget> {
    if k >= 3 && k % 2 == 1 && !positive && z_class == Family::Thm1.z_class(k) {
        let p = integer_nth_root(n, k);
        if p.checked_pow(k) == Some(n) {
            return FamilyTarget::new(Family::Thm1, k, u64::try_from(p).ok()?, 1).ok();
        }
        return None;
    }
    let family = match k % 4 {
        0 if k >= 4 => Family::Thm2,
        2 if k >= 6 => Family::Thm3,
        _ => return None,
    };
    if !positive || z_class != family.z_class(k) {
        return None;
    }
    let np = integer_nth_root(n, 2);
    if np * np != n || np == 0 {
        return None;
    }
    let f = factor(np).ok()?;
    let (p, _) = *f.factors().iter().find(|&&(q, _)| q % 4 == 3)?;
    let cofactor = u64::try_from(np / p).ok()?;
    FamilyTarget::new(family, k, u64::try_from(p).ok()?, cofactor).ok()
}

fn verify_spec(
    n: u128,
    k: u32,
    z_class: ResidueClass,
    z_min: Option<i128>,
    z_max: Option<i128>,
    positive: bool,
) -> Result<SearchSpec, Error> {
    let (lo, hi) = match detect_family(n, k, z_class, positive) {
        Some(t) => t.acceptance_window(),
        None => {
            let lo = if positive { 1 } else { 0 };
            (lo, (integer_nth_root(n, k.max(1)) as i128).max(lo))
        }
    };
    SearchSpec::new(
        n,
        k,
        z_class,
        z_min.unwrap_or(lo),
        z_max.unwrap_or(hi),
        positive,
    )
}

#[derive(Serialize)]
struct VerifyRecord {
    #[serde(with = "crate::dec")]
    n: u128,
    k: u32,
    z_class: ResidueClass,
    #[serde(with = "crate::dec")]
    z_min: i128,
    #[serde(with = "crate::dec")]
    z_max: i128,
    positive: bool,
    family: Option<Family>,
    exhausted_window: bool,
    count_checked: u64,
    found: Option<crate::search::Representation>,
}

#[derive(Serialize)]
struct WitnessRecord<'a> {
    target: &'a FamilyTarget,
    #[serde(flatten)]
    witness: &'a Witness,
}

#[derive(Serialize)]
struct CountRecord<'a> {
    family: Family,
    k: u32,
    #[serde(flatten)]
    row: &'a DensityRow,
}

#[derive(Serialize)]
struct TwoSquaresRecord {
    n: u128,
    sum_of_two_squares: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    representations: Option<Vec<(u64, u64)>>,
}
