//! `sobolev`: generate the polynomial families and run verification suites.

mod config;
mod family;
mod report;
mod suites;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::thread;
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use family::{csv_row, FamilyKind, FamilySpec, Row, Table};
use report::{Check, Report};
use suites::{Suite, SuiteParams};

#[derive(Parser)]
#[command(name = "sobolev", version, about = "Classical-type Sobolev orthogonal polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print coefficient tables of a family
    Gen(GenArgs),
    /// Run one verification suite and print its JSON report
    Check(CheckArgs),
    /// Run every suite over a parameter grid and print the aggregate report
    ReportAll(ReportAllArgs),
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: Option<FamilyKind>,
    #[arg(long, default_value_t = 2)]
    r: usize,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    alpha: f64,
    /// Coefficients of p, lowest degree first, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    p: Vec<f64>,
}

impl FamilyArgs {
    fn spec(&self, default: FamilyKind) -> FamilySpec {
        FamilySpec::new(self.family.unwrap_or(default), self.r, self.alpha, self.p.clone())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
#[command(group(ArgGroup::new("degree").required(true).args(["n", "nmax"])))]
struct GenArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Emit the single member of degree n
    #[arg(long)]
    n: Option<usize>,
    /// Emit members 0..=nmax
    #[arg(long)]
    nmax: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[command(flatten)]
    family: FamilyArgs,
    /// Shorthand for --family example21
    #[arg(long, conflicts_with = "family")]
    example21: bool,
    /// Largest degree checked (suite default if omitted)
    #[arg(long, visible_alias = "n")]
    nmax: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Multiplies every tolerance
    #[arg(long, default_value_t = 1.0)]
    tol_scale: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportAllArgs {
    /// TOML parameter grid; the built-in grid if omitted
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Errors that end the process before a report exists.
struct Usage(String);

fn emit(text: &str, out: Option<&Path>) -> Result<(), Usage> {
    match out {
        Some(path) => {
            fs::write(path, format!("{text}\n")).map_err(|e| Usage(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn gen(args: &GenArgs) -> Result<ExitCode, Usage> {
    let spec = args.family.spec(FamilyKind::Y);
    spec.validate().map_err(|e| Usage(format!("invalid parameters: {e}")))?;
    let (lo, hi) = match (args.n, args.nmax) {
        (Some(n), _) => (n, n),
        (None, Some(nmax)) => (0, nmax),
        (None, None) => unreachable!("clap requires --n or --nmax"),
    };
    let polys = spec
        .polys(hi + 1)
        .map_err(|e| Usage(format!("invalid parameters: {e}")))?;
    let members = polys.iter().enumerate().skip(lo);
    let text = match args.format {
        Format::Csv => members.map(|(n, y)| csv_row(n, y)).collect::<Vec<_>>().join("\n"),
        Format::Json => {
            let table = Table {
                params: spec.clone(),
                rows: members.map(|(n, y)| Row::new(n, y)).collect(),
            };
            serde_json::to_string_pretty(&table).expect("finite coefficients")
        }
    };
    emit(&text, args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn exit_for(report: &Report) -> ExitCode {
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn check(args: &CheckArgs) -> Result<ExitCode, Usage> {
    let default = if args.example21 {
        FamilyKind::Example21
    } else {
        args.suite.default_family()
    };
    let family = args.family.spec(default);
    let params = SuiteParams::new(args.suite, family, args.nmax, args.seed, args.tol_scale);
    let report = suites::run(args.suite, &params).map_err(Usage)?;
    emit(&report.to_json(), args.out.as_deref())?;
    Ok(exit_for(&report))
}

fn report_all(args: &ReportAllArgs) -> Result<ExitCode, Usage> {
    let start = Instant::now();
    let (source, text) = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Usage(format!("cannot read config {}: {e}", path.display())))?;
            (path.display().to_string(), text)
        }
        None => ("default".to_string(), config::DEFAULT_CONFIG.to_string()),
    };
    let runs = config::parse(&text).map_err(Usage)?;

    // suites are independent; results are merged in config order
    let results: Vec<Result<Report, String>> = thread::scope(|scope| {
        let handles: Vec<_> = runs
            .iter()
            .map(|run| scope.spawn(move || suites::run(run.suite, &run.params)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err("suite panicked".to_string())))
            .collect()
    });

    let mut checks = Vec::new();
    for (run, result) in runs.iter().zip(results) {
        let prefix = format!("{}[{}]", run.suite.name(), run.params.label());
        match result {
            Ok(report) => checks.extend(report.checks.into_iter().map(|mut c| {
                c.id = format!("{prefix}/{}", c.id);
                c
            })),
            Err(msg) => checks.push(Check::failed(&prefix, "suite evaluation", msg)),
        }
    }
    let params = serde_json::json!({ "config": source, "runs": runs.len() });
    let report = Report::new("all", params, checks, start.elapsed().as_secs_f64());
    emit(&report.to_json(), args.out.as_deref())?;
    Ok(exit_for(&report))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Gen(args) => gen(args),
        Command::Check(args) => check(args),
        Command::ReportAll(args) => report_all(args),
    };
    outcome.unwrap_or_else(|Usage(msg)| {
        eprintln!("error: {msg}");
        ExitCode::from(2)
    })
}
