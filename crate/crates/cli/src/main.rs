use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gerechte::framework::{classify, generate, reduce, FrameworkError, GenerateRequest};
use gerechte::latin::SymbolGrid;
use gerechte::realize::{RealizeError, RealizeOptions};
use gerechte::verify::{enumerate_rect_frameworks, BruteForceError, SearchBudget};
use gerechte::{realize, verify_realization, Method, RegionPartition};

/// Exit statuses. Scripts rely on these values.
const EXIT_FAILURE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_UNSUPPORTED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "gerechte",
    version,
    about = "Build and check gerechte designs with rectangular regions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a latin square realizing a framework.
    Realize(RealizeArgs),
    /// Check that a square realizes a framework.
    Verify(VerifyArgs),
    /// Print every class label that applies to a framework.
    Classify(ClassifyArgs),
    /// Merge k x k blocks of cells of a framework.
    Reduce(ReduceArgs),
    /// Write a seeded random framework.
    Generate(GenerateArgs),
    /// Enumerate and realize every rectangular framework of one order.
    Census(CensusArgs),
}

#[derive(Args)]
struct RealizeArgs {
    /// Framework file (label grid or rect list).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "auto")]
    method: MethodArg,
    /// Write the square here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Accepted for uniformity; every realization method is deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Assignment budget for the brute-force search.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Uniform,
    Divides,
    Mixed,
    Columns,
    Tree,
    Brute,
}

impl From<MethodArg> for Method {
    fn from(arg: MethodArg) -> Self {
        match arg {
            MethodArg::Auto => Method::Auto,
            MethodArg::Uniform => Method::Uniform,
            MethodArg::Divides => Method::Divides,
            MethodArg::Mixed => Method::Mixed,
            MethodArg::Columns => Method::Columns,
            MethodArg::Tree => Method::Tree,
            MethodArg::Brute => Method::Brute,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    framework: PathBuf,
    #[arg(long)]
    square: PathBuf,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Uniform,
    Mixed,
    Columns,
    Tree,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Grid,
    Rects,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    kind: Kind,
    /// Short side (mixed) or region height (uniform).
    #[arg(long)]
    s: Option<usize>,
    /// Long side (mixed) or region width (uniform).
    #[arg(long)]
    t: Option<usize>,
    /// Order (columns, tree).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "grid")]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long)]
    n: usize,
    /// `brute` realizes every framework by search; `auto` prefers the
    /// constructions.
    #[arg(long, default_value = "brute")]
    method: CensusMethod,
    #[arg(long)]
    budget: Option<u64>,
    /// Allow orders above the enumeration cap.
    #[arg(long)]
    allow_large: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum CensusMethod {
    Brute,
    Auto,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Display) -> Self {
        Failure {
            code,
            message: message.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn read_framework(path: &Path) -> Result<RegionPartition, Failure> {
    RegionPartition::parse(&read(path)?)
        .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::new(EXIT_FAILURE, format!("{}: {e}", path.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::new(EXIT_FAILURE, e)),
    }
}

fn realize_code(err: &RealizeError) -> u8 {
    match err {
        RealizeError::NotGerechte | RealizeError::BruteForce(BruteForceError::NotGerechte) => {
            EXIT_INPUT
        }
        RealizeError::ClassificationMismatch { .. }
        | RealizeError::NoMethod { .. }
        | RealizeError::BruteForceOrderLimit { .. }
        | RealizeError::BruteForce(_)
        | RealizeError::Framework(_) => EXIT_UNSUPPORTED,
        RealizeError::Unrealizable
        | RealizeError::Outline(_)
        | RealizeError::Invariant { .. }
        | RealizeError::VerificationFailed { .. } => EXIT_FAILURE,
    }
}

fn options(budget: Option<u64>) -> RealizeOptions {
    let mut options = RealizeOptions::default();
    if let Some(max_assignments) = budget {
        options.budget = SearchBudget {
            max_assignments,
            ..options.budget
        };
    }
    options
}

fn cmd_realize(args: RealizeArgs) -> Result<(), Failure> {
    let framework = read_framework(&args.input)?;
    let found = realize(&framework, args.method.into(), &options(args.budget))
        .map_err(|e| Failure::new(realize_code(&e), e))?;
    // checked again here so nothing unverified is ever written
    let report = verify_realization(found.square.grid(), &framework)
        .map_err(|e| Failure::new(EXIT_FAILURE, e))?;
    if let Some(first) = report.violations.first() {
        return Err(Failure::new(
            EXIT_FAILURE,
            format!("realization failed verification: {first}"),
        ));
    }
    write_out(args.output.as_deref(), &found.square.to_string())?;
    eprintln!("method: {}", found.method);
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let framework = read_framework(&args.framework)?;
    let square = SymbolGrid::parse(&read(&args.square)?)
        .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", args.square.display())))?;
    let report =
        verify_realization(&square, &framework).map_err(|e| Failure::new(EXIT_INPUT, e))?;
    if report.ok() {
        println!("ok");
        return Ok(());
    }
    for violation in report.violations.iter().take(5) {
        eprintln!("{violation}");
    }
    if report.violations.len() > 5 {
        eprintln!("... {} more", report.violations.len() - 5);
    }
    Err(Failure::new(
        EXIT_FAILURE,
        format!("{} violations", report.violations.len()),
    ))
}

fn cmd_classify(args: ClassifyArgs) -> Result<(), Failure> {
    let framework = read_framework(&args.input)?;
    let classification = classify(&framework);
    if !classification.gerechte {
        return Err(Failure::new(
            EXIT_INPUT,
            "partition is not a gerechte framework",
        ));
    }
    println!("{classification}");
    Ok(())
}

fn framework_code(err: &FrameworkError) -> u8 {
    match err {
        FrameworkError::GenerationExhausted => EXIT_FAILURE,
        _ => EXIT_INPUT,
    }
}

fn cmd_reduce(args: ReduceArgs) -> Result<(), Failure> {
    let framework = read_framework(&args.input)?;
    let reduced = reduce(&framework, args.k).map_err(|e| Failure::new(framework_code(&e), e))?;
    write_out(args.output.as_deref(), &reduced.to_grid_text())
}

fn cmd_generate(args: GenerateArgs) -> Result<(), Failure> {
    let need = |value: Option<usize>, flag: &str| {
        value.ok_or_else(|| Failure::new(EXIT_INPUT, format!("--{flag} is required for this kind")))
    };
    let request = match args.kind {
        Kind::Uniform => GenerateRequest::Uniform {
            height: need(args.s, "s")?,
            width: need(args.t, "t")?,
        },
        Kind::Mixed => GenerateRequest::Mixed {
            s: need(args.s, "s")?,
            t: need(args.t, "t")?,
        },
        Kind::Columns => GenerateRequest::Columns {
            n: need(args.n, "n")?,
        },
        Kind::Tree => GenerateRequest::Tree {
            n: need(args.n, "n")?,
        },
    };
    let framework =
        generate(request, args.seed).map_err(|e| Failure::new(framework_code(&e), e))?;
    let text = match args.format {
        Format::Grid => framework.to_grid_text(),
        Format::Rects => framework
            .to_rect_text()
            .map_err(|e| Failure::new(EXIT_FAILURE, e))?,
    };
    write_out(args.output.as_deref(), &text)
}

fn cmd_census(args: CensusArgs) -> Result<(), Failure> {
    let frameworks = enumerate_rect_frameworks(args.n, args.allow_large)
        .map_err(|e| Failure::new(EXIT_INPUT, e))?;
    let method = match args.method {
        CensusMethod::Brute => Method::Brute,
        CensusMethod::Auto => Method::Auto,
    };
    let mut options = options(args.budget);
    options.brute_max_order = options.brute_max_order.max(args.n);
    let mut found = 0usize;
    let mut realized = 0usize;
    let mut classes: BTreeMap<&'static str, usize> = BTreeMap::new();
    let mut worst: Option<Failure> = None;
    for framework in frameworks {
        found += 1;
        *classes
            .entry(classify(&framework).most_specific().name())
            .or_default() += 1;
        match realize(&framework, method, &options) {
            Ok(_) => realized += 1,
            Err(e) => {
                let failure = Failure::new(realize_code(&e), format!("{e}\n{framework}"));
                eprintln!("{}", failure.message);
                // an unrealizable framework outranks a blown budget
                if worst
                    .as_ref()
                    .is_none_or(|w| failure.code == EXIT_FAILURE && w.code != EXIT_FAILURE)
                {
                    worst = Some(failure);
                }
            }
        }
    }
    let class_counts: Vec<String> = classes
        .iter()
        .map(|(name, count)| format!("{name}={count}"))
        .collect();
    println!("n\tframeworks\trealized\tclass_counts");
    println!(
        "{}\t{found}\t{realized}\t{}",
        args.n,
        class_counts.join(",")
    );
    let all = realized == found;
    eprintln!("all realizable: {}", if all { "yes" } else { "no" });
    match worst {
        None => Ok(()),
        Some(failure) => Err(Failure::new(
            failure.code,
            format!("{} of {found} frameworks not realized", found - realized),
        )),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Realize(args) => cmd_realize(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Classify(args) => cmd_classify(args),
        Command::Reduce(args) => cmd_reduce(args),
        Command::Generate(args) => cmd_generate(args),
        Command::Census(args) => cmd_census(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
