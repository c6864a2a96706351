//! `ellcarm`: command-line front end for the elliptic pseudoprime toolkit.
//!
//! Exit codes: 0 = success (including "predicate is false"), 1 = runtime or
//! verification failure, 2 = parse/input error, 3 = bad reduction,
//! 4 = predicate undefined or case unsupported.

use clap::{Parser, Subcommand, ValueEnum};
use ellcarm_core::arith::factorize;
use ellcarm_core::classify::{classify_report, is_gordon_elliptic_pseudoprime};
use ellcarm_core::curve::WeierstrassCurve;
use ellcarm_core::error::Error;
use ellcarm_core::experiments::{sample_density, trace_census, hurwitz_class_number};
use ellcarm_core::lseries::find_anomalous;
use num_bigint::{BigInt, BigUint};
use serde::Deserialize;
use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

mod examples;

#[derive(Parser)]
#[command(name = "ellcarm", version, about = "Elliptic pseudoprime tests, Korselt criteria, and class-number experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Classify (N, E, P): pseudoprime tests and Korselt/Carmichael criteria.
    Classify {
        /// Curve as [A,B] or [a1,a2,a3,a4,a6], decimal integers.
        #[arg(long)]
        curve: String,
        /// Composite modulus N (decimal).
        #[arg(long)]
        n: String,
        /// Base point "x,y" (decimal); omit for point-free criteria only.
        #[arg(long)]
        point: Option<String>,
        /// CM discriminant d for the Gordon-style test (requires --point).
        #[arg(long)]
        d: Option<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify the built-in golden examples; exits nonzero on any failure.
    VerifyExamples,
    /// List anomalous primes for a curve, or Korselt Type I prime products.
    Anomalous {
        #[arg(long)]
        curve: String,
        /// Upper bound on the primes scanned.
        #[arg(long)]
        max: u64,
        /// Emit Type I products p*q instead of single anomalous primes.
        #[arg(long)]
        products: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo density experiment for anomalous-pair pseudoprimes.
    Density {
        /// Primes are drawn from [5, M].
        #[arg(long)]
        m: u64,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = ellcarm_core::experiments::DEFAULT_DENSITY_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-trace curve census over F_p against Hurwitz class numbers.
    Census {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run JobSpec JSON lines from a file (one job per line), merging output
    /// in input order.
    Batch {
        #[arg(long)]
        file: PathBuf,
    },
}

/// One line of a batch file.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JobSpec {
    command: String,
    curve: Option<String>,
    n: Option<String>,
    point: Option<String>,
    d: Option<i64>,
    max: Option<u64>,
    products: Option<bool>,
    m: Option<u64>,
    trials: Option<u64>,
    seed: Option<u64>,
    p: Option<u64>,
    format: Option<String>,
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn parse(msg: impl Into<String>) -> Self {
        Failure { code: 2, message: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::BadReduction(_) => 3,
            Error::UndefinedPredicate(_) | Error::Unsupported(_) | Error::FactorizationTimeout(_) => 4,
            Error::InvalidInput(_) | Error::SingularCurve => 2,
            Error::FactorFound(_) => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

fn parse_point(text: &str) -> Result<(BigInt, BigInt), Failure> {
    let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
    let mut parts = inner.split(',');
    let (Some(xs), Some(ys), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(Failure::parse(format!("point must be \"x,y\": {text}")));
    };
    let x = BigInt::from_str(xs.trim())
        .map_err(|e| Failure::parse(format!("point x: {e}")))?;
    let y = BigInt::from_str(ys.trim())
        .map_err(|e| Failure::parse(format!("point y: {e}")))?;
    Ok((x, y))
}

fn parse_n(text: &str) -> Result<BigUint, Failure> {
    BigUint::from_str(text.trim()).map_err(|e| Failure::parse(format!("n: {e}")))
}

fn parse_curve(text: &str) -> Result<WeierstrassCurve, Failure> {
    WeierstrassCurve::parse(text).map_err(Failure::from)
}

/// Write to `out` atomically (temp file + rename), or to stdout when absent.
fn emit(out: Option<&Path>, content: &str) -> Result<(), Failure> {
    match out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => {
            let tmp = path.with_extension("tmp");
            std::fs::write(&tmp, content)?;
            std::fs::rename(&tmp, path)?;
            Ok(())
        }
    }
}

fn cmd_classify(
    curve: &str,
    n: &str,
    point: Option<&str>,
    d: Option<i64>,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let curve = parse_curve(curve)?;
    let n = parse_n(n)?;
    let point = point.map(parse_point).transpose()?;
    let fact = factorize(&n)?;
    let report = classify_report(&fact, &curve, point.clone())?;
    let mut value = serde_json::to_value(&report).expect("report serializes");
    if let Some(d) = d {
        let (x, y) = point
            .ok_or_else(|| Failure::parse("--d requires --point".to_string()))?;
        let p = ellcarm_core::ecpoint::ProjectivePoint::from_affine(x, y, &n);
        let gordon = is_gordon_elliptic_pseudoprime(&fact, &curve, &p, d)?;
        value["gordon_pp"] = serde_json::json!({ "value": gordon, "d": d });
    }
    emit(out, &format!("{value}\n"))
}

fn cmd_anomalous(
    curve: &str,
    max: u64,
    products: bool,
    format: Format,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let curve = parse_curve(curve)?;
    if products {
        let rows = ellcarm_core::experiments::korselt_type1_products(&curve, max)?;
        let content = match format {
            Format::Json => format!("{}\n", serde_json::to_value(&rows).expect("rows serialize")),
            Format::Csv => {
                let mut s = String::from("p,q,n,a_p,a_q\n");
                for r in &rows {
                    writeln!(s, "{},{},{},{},{}", r.p, r.q, r.n, r.a_p, r.a_q).unwrap();
                }
                s
            }
        };
        emit(out, &content)
    } else {
        let primes = find_anomalous(&curve, 2, max);
        let content = match format {
            Format::Json => format!("{}\n", serde_json::to_value(&primes).expect("primes serialize")),
            Format::Csv => {
                let mut s = String::from("p\n");
                for p in &primes {
                    writeln!(s, "{p}").unwrap();
                }
                s
            }
        };
        emit(out, &content)
    }
}

fn cmd_density(
    m: u64,
    trials: u64,
    seed: u64,
    format: Format,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let est = sample_density(m, trials, seed)?;
    let content = match format {
        Format::Json => format!("{}\n", serde_json::to_value(&est).expect("estimate serializes")),
        Format::Csv => format!(
            "m,trials,accepted,anomalous_fraction\n{},{},{},{}\n",
            est.m, est.trials, est.conditioned_successes, est.anomalous_fraction
        ),
    };
    emit(out, &content)
}

fn cmd_census(p: u64, format: Format, out: Option<&Path>) -> Result<(), Failure> {
    let census = trace_census(p)?;
    let content = match format {
        Format::Json => format!("{}\n", serde_json::to_value(&census).expect("census serializes")),
        Format::Csv => {
            let mut s = String::from("p,t,class_count,hurwitz_value\n");
            for &t in census.pairs.keys() {
                let counted = census.classes(t);
                let oracle = hurwitz_class_number(t * t - 4 * p as i64)?;
                writeln!(s, "{p},{t},{counted},{oracle}").unwrap();
            }
            s
        }
    };
    emit(out, &content)
}

fn parse_format(text: Option<&str>) -> Result<Format, Failure> {
    match text {
        None | Some("csv") => Ok(Format::Csv),
        Some("json") => Ok(Format::Json),
        Some(other) => Err(Failure::parse(format!("format: expected json or csv, got {other}"))),
    }
}

fn require<T>(field: Option<T>, name: &str) -> Result<T, Failure> {
    field.ok_or_else(|| Failure::parse(format!("missing field: {name}")))
}

fn run_job(job: &JobSpec) -> Result<(), Failure> {
    match job.command.as_str() {
        "classify" => cmd_classify(
            require(job.curve.as_deref(), "curve")?,
            require(job.n.as_deref(), "n")?,
            job.point.as_deref(),
            job.d,
            job.out.as_deref(),
        ),
        "anomalous" => cmd_anomalous(
            require(job.curve.as_deref(), "curve")?,
            require(job.max, "max")?,
            job.products.unwrap_or(false),
            parse_format(job.format.as_deref())?,
            job.out.as_deref(),
        ),
        "density" => cmd_density(
            require(job.m, "m")?,
            require(job.trials, "trials")?,
            job.seed.unwrap_or(ellcarm_core::experiments::DEFAULT_DENSITY_SEED),
            parse_format(job.format.as_deref())?,
            job.out.as_deref(),
        ),
        "census" => cmd_census(
            require(job.p, "p")?,
            parse_format(job.format.as_deref())?,
            job.out.as_deref(),
        ),
        other => Err(Failure::parse(format!("unknown command: {other}"))),
    }
}

fn cmd_batch(file: &Path) -> Result<(), Failure> {
    let mut text = String::new();
    std::fs::File::open(file)?.read_to_string(&mut text)?;
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let job: JobSpec = serde_json::from_str(line)
            .map_err(|e| Failure::parse(format!("line {}: {e}", lineno + 1)))?;
        run_job(&job).map_err(|f| Failure {
            code: f.code,
            message: format!("line {}: {}", lineno + 1, f.message),
        })?;
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Classify { curve, n, point, d, out } => {
            cmd_classify(&curve, &n, point.as_deref(), d, out.as_deref())
        }
        Command::VerifyExamples => examples::verify_all(),
        Command::Anomalous { curve, max, products, format, out } => {
            cmd_anomalous(&curve, max, products, format, out.as_deref())
        }
        Command::Density { m, trials, seed, format, out } => {
            cmd_density(m, trials, seed, format, out.as_deref())
        }
        Command::Census { p, format, out } => cmd_census(p, format, out.as_deref()),
        Command::Batch { file } => cmd_batch(&file),
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("ELLCARM_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
