//! `borwein`: verification sweeps and coefficient dumps.
//!
//! Exit codes: 0 all checks pass, 1 a claim failed, 2 usage or I/O problem,
//! 3 internal cross-validation failure.

mod commands;
mod sweep;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use borwein_core::exactmath::is_prime;
use borwein_core::qpoly::{expand_product_with, Engine};
use borwein_core::report::{json_int, ReportDocument, Status};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use commands::Product;
use sweep::{merge, run_sweep, SweepOptions};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
}

#[derive(Parser)]
#[command(name = "borwein", version, about = "Exact verification of Borwein-type sign conjectures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dump the coefficients of one product.
    Expand(ExpandArgs),
    /// Sign pattern of the first Borwein product over a range of n.
    Verify(SweepCommand),
    /// Positivity of residue partial sums mod 3(n+1), against signed subset counts.
    PartialSums(SweepCommand),
    /// Signed subset-sum counts by DP, enumeration and the divisor formula.
    Modcount(SweepCommand),
    /// Alternating q-binomial formula for the A-polynomial.
    Identity(IdentityArgs),
    /// Stanley's restricted-partition formula for a_{p,pk}.
    Stanley(StanleyArgs),
    /// a_{p,j} a_{p,j+p} >= 0 for the eta quotient.
    Coherence(CoherenceArgs),
    /// Sign patterns of the squared and mod-5 products.
    Conjecture23(Conjecture23Args),
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Auto,
    Reference,
    Multimodular,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Auto => Engine::Auto,
            EngineArg::Reference => Engine::Reference,
            EngineArg::Multimodular => Engine::MultiModular,
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Report destination, `-` for stdout (the default).
    #[arg(long, value_name = "PATH|-")]
    json: Option<String>,
    /// Record start time and elapsed seconds (makes reports run-dependent).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Worker threads; results are merged in ascending order.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
    /// Resumable record of completed items.
    #[arg(long, value_name = "PATH")]
    manifest: Option<PathBuf>,
    /// Discard a manifest written for different parameters.
    #[arg(long)]
    fresh: bool,
}

#[derive(Args)]
struct RangeArgs {
    /// A single n.
    #[arg(long, conflicts_with_all = ["n_min", "n_max"])]
    n: Option<u64>,
    #[arg(long)]
    n_min: Option<u64>,
    #[arg(long)]
    n_max: Option<u64>,
}

impl RangeArgs {
    fn items(&self) -> Result<Vec<u64>, CliError> {
        match (self.n, self.n_min, self.n_max) {
            (Some(n), _, _) => Ok(vec![n]),
            (None, lo, Some(hi)) => {
                let lo = lo.unwrap_or(0);
                if lo > hi {
                    return Err(CliError::Usage(format!("--n-min {lo} exceeds --n-max {hi}")));
                }
                Ok((lo..=hi).collect())
            }
            (None, _, None) => Err(CliError::Usage("give --n or --n-max".into())),
        }
    }

    fn describe(&self, params: &mut Map<String, Value>) -> Result<(), CliError> {
        let items = self.items()?;
        params.insert("n_min".into(), items[0].into());
        params.insert("n_max".into(), items[items.len() - 1].into());
        Ok(())
    }
}

#[derive(Args)]
struct SweepCommand {
    #[command(flatten)]
    range: RangeArgs,
    #[arg(long, value_enum, default_value = "auto")]
    engine: EngineArg,
    #[command(flatten)]
    sweep: SweepArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ExpandArgs {
    #[arg(long)]
    n: u64,
    #[arg(long, value_enum, default_value = "first")]
    product: Product,
    #[arg(long, value_enum, default_value = "auto")]
    engine: EngineArg,
    /// Coefficient CSV destination, `-` for stdout.
    #[arg(long, value_name = "PATH|-")]
    csv: Option<String>,
    /// Report with all coefficients, `-` for stdout.
    #[arg(long, value_name = "PATH|-")]
    json: Option<String>,
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct IdentityArgs {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    m_min: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    m_max: u64,
    #[arg(long, value_enum, default_value = "auto")]
    engine: EngineArg,
    #[command(flatten)]
    sweep: SweepArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct StanleyArgs {
    /// Odd prime; repeat for several.
    #[arg(long, required = true)]
    p: Vec<u64>,
    #[arg(long, default_value_t = 100)]
    k_max: usize,
    #[command(flatten)]
    sweep: SweepArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct CoherenceArgs {
    /// Prime; repeat for several.
    #[arg(long, required = true)]
    p: Vec<u64>,
    #[arg(long, default_value_t = 2000)]
    j_max: usize,
    #[command(flatten)]
    sweep: SweepArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichProducts {
    Squared,
    Mod5,
    Both,
}

#[derive(Args)]
struct Conjecture23Args {
    #[command(flatten)]
    range: RangeArgs,
    #[arg(long, value_enum, default_value = "both")]
    product: WhichProducts,
    #[arg(long, value_enum, default_value = "auto")]
    engine: EngineArg,
    #[command(flatten)]
    sweep: SweepArgs,
    #[command(flatten)]
    out: OutputArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(status) => ExitCode::from(exit_code(status)),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn exit_code(status: Status) -> u8 {
    match status {
        Status::Pass => 0,
        Status::Fail => 1,
        Status::Error => 3,
    }
}

fn run(cli: Cli) -> Result<Status, CliError> {
    let started = Instant::now();
    let started_at = SystemTime::now();
    let (mut report, out) = match cli.command {
        Command::Expand(a) => return expand(a, started, started_at),
        Command::Verify(a) => {
            let engine = a.engine.into();
            (
                n_sweep("verify", &a.range, &a.sweep, Map::new(), |n| commands::verify(n, engine))?,
                a.out,
            )
        }
        Command::PartialSums(a) => {
            let engine = a.engine.into();
            (
                n_sweep("partial-sums", &a.range, &a.sweep, Map::new(), |n| {
                    commands::partial_sums(n, engine)
                })?,
                a.out,
            )
        }
        Command::Modcount(a) => (
            n_sweep("modcount", &a.range, &a.sweep, Map::new(), commands::modcount)?,
            a.out,
        ),
        Command::Conjecture23(a) => {
            let products: &[Product] = match a.product {
                WhichProducts::Squared => &[Product::Squared],
                WhichProducts::Mod5 => &[Product::Mod5],
                WhichProducts::Both => &[Product::Squared, Product::Mod5],
            };
            let mut hashed = Map::new();
            hashed.insert(
                "products".into(),
                products.iter().map(|p| p.name()).collect::<Vec<_>>().into(),
            );
            let engine = a.engine.into();
            (
                n_sweep("conjecture23", &a.range, &a.sweep, hashed, |n| {
                    commands::conjecture23(n, products, engine)
                })?,
                a.out,
            )
        }
        Command::Identity(a) => {
            if a.m_min > a.m_max {
                return Err(CliError::Usage(format!("--m-min {} exceeds --m-max {}", a.m_min, a.m_max)));
            }
            let items: Vec<u64> = (a.m_min..=a.m_max).collect();
            let engine = a.engine.into();
            let mut params = Map::new();
            params.insert("m_min".into(), a.m_min.into());
            params.insert("m_max".into(), a.m_max.into());
            let parts = run_sweep("identity", &Map::new(), &items, &sweep_opts(&a.sweep), |m| {
                commands::identity(m, engine)
            })?;
            (merge("identity", params, "m", parts), a.out)
        }
        Command::Stanley(a) => {
            for &p in &a.p {
                if p == 2 || !is_prime(p) {
                    return Err(CliError::Usage(format!("--p {p}: Stanley's formula needs an odd prime")));
                }
            }
            let mut hashed = Map::new();
            hashed.insert("k_max".into(), a.k_max.into());
            let parts = run_sweep("stanley", &hashed, &a.p, &sweep_opts(&a.sweep), |p| {
                commands::stanley(p, a.k_max)
            })?;
            let mut params = hashed.clone();
            params.insert("p".into(), sorted(&a.p).into());
            (merge("stanley", params, "p", parts), a.out)
        }
        Command::Coherence(a) => {
            for &p in &a.p {
                if !is_prime(p) {
                    return Err(CliError::Usage(format!("--p {p} is not prime")));
                }
            }
            let mut hashed = Map::new();
            hashed.insert("j_max".into(), a.j_max.into());
            let parts = run_sweep("coherence", &hashed, &a.p, &sweep_opts(&a.sweep), |p| {
                commands::coherence(p, a.j_max)
            })?;
            let mut params = hashed.clone();
            params.insert("p".into(), sorted(&a.p).into());
            (merge("coherence", params, "p", parts), a.out)
        }
    };
    if out.timings {
        stamp(&mut report, started, started_at);
    }
    emit_report(&report, out.json.as_deref().unwrap_or("-"))?;
    log_summary(&report);
    Ok(report.status)
}

fn sorted(xs: &[u64]) -> Vec<u64> {
    let mut v = xs.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

fn sweep_opts(a: &SweepArgs) -> SweepOptions<'_> {
    SweepOptions {
        jobs: a.jobs as usize,
        manifest: a.manifest.as_deref(),
        fresh: a.fresh,
    }
}

fn n_sweep<F>(
    command: &str,
    range: &RangeArgs,
    sweep_args: &SweepArgs,
    hashed: Map<String, Value>,
    per_n: F,
) -> Result<ReportDocument, CliError>
where
    F: Fn(u64) -> ReportDocument + Sync,
{
    let items = range.items()?;
    let mut params = hashed.clone();
    range.describe(&mut params)?;
    let parts = run_sweep(command, &hashed, &items, &sweep_opts(sweep_args), per_n)?;
    Ok(merge(command, params, "n", parts))
}

fn stamp(report: &mut ReportDocument, started: Instant, at: SystemTime) {
    let secs = at.duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    report.started = Some(format!("{secs}"));
    report.elapsed = Some(started.elapsed().as_secs_f64());
}

fn log_summary(report: &ReportDocument) {
    let disagreeing = report.cross_checks.iter().filter(|c| !c.agree).count();
    eprintln!(
        "{}: {:?} ({} violation(s), {} cross-check(s), {} disagreeing, {} error(s))",
        report.command,
        report.status,
        report.violations.len(),
        report.cross_checks.len(),
        disagreeing,
        report.errors.len()
    );
}

/// Opens `dest` for writing; `-` is stdout.
fn open_destination(dest: &str) -> Result<Box<dyn Write>, CliError> {
    if dest == "-" {
        return Ok(Box::new(BufWriter::new(io::stdout().lock())));
    }
    File::create(dest)
        .map(|f| Box::new(BufWriter::new(f)) as Box<dyn Write>)
        .map_err(|e| CliError::Usage(format!("cannot write {dest}: {e}")))
}

/// Writes the report as one JSON object followed by a newline.
fn emit_report(report: &ReportDocument, dest: &str) -> Result<(), CliError> {
    let mut w = open_destination(dest)?;
    writeln!(w, "{}", report.to_json())
        .and_then(|_| w.flush())
        .map_err(|e| CliError::Usage(format!("cannot write {dest}: {e}")))
}

fn write_csv(coeffs: &[num_bigint::BigInt], dest: &str) -> Result<(), CliError> {
    let mut w = open_destination(dest)?;
    let res = (|| -> io::Result<()> {
        writeln!(w, "exponent,coefficient")?;
        for (j, c) in coeffs.iter().enumerate() {
            writeln!(w, "{j},{c}")?;
        }
        w.flush()
    })();
    res.map_err(|e| CliError::Usage(format!("cannot write {dest}: {e}")))
}

fn expand(a: ExpandArgs, started: Instant, started_at: SystemTime) -> Result<Status, CliError> {
    let spec = a.product.spec(a.n);
    let engine: Engine = a.engine.into();
    let mut report = ReportDocument::new("expand")
        .param("n", a.n)
        .param("product", a.product.name());
    let poly = match expand_product_with(&spec, engine) {
        Ok(p) => p,
        Err(e) => {
            report.error(e.to_string());
            emit_report(&report, a.json.as_deref().unwrap_or("-"))?;
            return Ok(report.status);
        }
    };
    eprintln!("expand: degree {:?}", poly.degree());
    let (expected, actual) = commands::structure(&spec, &poly);
    report.cross_check(format!("structure, {} n={}", a.product.name(), a.n), expected, actual);

    let csv_dest = match (&a.csv, &a.json) {
        (None, None) => Some("-"),
        (c, _) => c.as_deref(),
    };
    if let Some(dest) = csv_dest {
        write_csv(poly.coeffs(), dest)?;
    }
    if let Some(dest) = &a.json {
        report.set_data("degree", json!(poly.degree()));
        report.set_data(
            "coefficients",
            Value::Array(poly.coeffs().iter().map(json_int).collect()),
        );
        if a.timings {
            stamp(&mut report, started, started_at);
        }
        emit_report(&report, dest)?;
    }
    log_summary(&report);
    Ok(report.status)
}
