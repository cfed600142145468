//! `lms` — least-median-of-squares regression from the command line.
//!
//! Subcommands: `fit` (run a solver on a CSV instance), `enumerate-minima`
//! (list all local minima of a k-drop objective), `verify-theorem` (check
//! measured local-minima counts against the closed form on random
//! instances), and `generate` (emit a synthetic CSV instance).
//!
//! Exit codes: 0 on success, 2 for malformed input or invalid arguments,
//! 3 for datasets that violate the model assumptions (rank, shape), and
//! 1 when `verify-theorem` observes a mismatch.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lms_core::{
    bpb_solve_fk, brute_force_fk, count_local_minima_theory, enumerate_all_local_minima,
    exhaustive_solve_drops, greedy_solve_drops, profile_fk, random_general_position_instance,
    verify_counting_identity, BpbConfig, CandidateFit, Dataset, Error, IndexSet,
    LocalMinimumRecord, ObjectiveProfile, SolverReport, SynthConfig, TraceStep,
};

const SCHEMA_VERSION: u32 = 1;

const EXIT_MISMATCH: u8 = 1;
const EXIT_BAD_INPUT: u8 = 2;
const EXIT_BAD_DATASET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "lms",
    version,
    about = "Least median of squares regression: exact and approximate solvers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a dataset and report the optimizer(s)
    Fit(FitArgs),
    /// List all local minima of the k-drop objective
    EnumerateMinima(EnumerateArgs),
    /// Compare measured local-minima counts against C(p+k, p) on random
    /// general-position instances
    VerifyTheorem(VerifyArgs),
    /// Emit a synthetic CSV instance on standard output
    Generate(GenerateArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    Greedy,
    Exhaustive,
    Bpb,
    BruteForce,
}

impl Algorithm {
    fn name(self) -> &'static str {
        match self {
            Algorithm::Greedy => "greedy",
            Algorithm::Exhaustive => "exhaustive",
            Algorithm::Bpb => "bpb",
            Algorithm::BruteForce => "brute-force",
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
    Human,
}

#[derive(Args)]
struct FitArgs {
    /// Input CSV file with header x1,...,xp,y
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Algorithm::Exhaustive)]
    algorithm: Algorithm,
    /// Drop count of the objective; defaults to floor((n-1)/2), the median
    #[arg(long)]
    k: Option<usize>,
    /// Absolute tolerance for equality checks
    #[arg(long)]
    tolerance: Option<f64>,
    /// Seed for the bpb algorithm
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Iteration budget for the bpb algorithm
    #[arg(long, default_value_t = 1000)]
    iterations: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Human)]
    output: OutputFormat,
    /// Override the p > 8 guard of the exhaustive solver
    #[arg(long, default_value_t = false)]
    force_large: bool,
    /// Append the exact piecewise-linear objective profile (p = 1 only)
    #[arg(long, default_value_t = false)]
    profile: bool,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Input CSV file with header x1,...,xp,y
    #[arg(long, short)]
    input: PathBuf,
    /// Drop count of the objective; defaults to floor((n-1)/2)
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Human)]
    output: OutputFormat,
    /// Worker threads for the subset enumeration
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Random instances per (n, p) combination
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    p_min: usize,
    #[arg(long, default_value_t = 2)]
    p_max: usize,
    /// Smallest n; raised to 2p when necessary
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Human)]
    output: OutputFormat,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: usize,
    /// Fraction of contaminated observations, below 0.5
    #[arg(long, default_value_t = 0.0)]
    outliers: f64,
    /// Half-width of the uniform noise on clean responses
    #[arg(long, default_value_t = 0.5)]
    noise: f64,
    /// Magnitude of the outlier shift
    #[arg(long, default_value_t = 50.0)]
    outlier_shift: f64,
    /// Comma-separated true coefficients; defaults to 1,2,...,p
    #[arg(long, value_delimiter = ',')]
    coef: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Fit(args) => cmd_fit(args),
        Command::EnumerateMinima(args) => cmd_enumerate(args),
        Command::VerifyTheorem(args) => cmd_verify(args),
        Command::Generate(args) => cmd_generate(args),
    }
}

/// Reads and validates a dataset; distinguishes malformed files (exit 2)
/// from inadmissible data (exit 3).
fn load_dataset(path: &PathBuf, tolerance: Option<f64>) -> Result<Dataset, ExitCode> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(EXIT_BAD_INPUT)
    })?;
    let data = lms_core::csv::parse_dataset(&text).map_err(|e| {
        eprintln!("error: {e}");
        match e {
            Error::Csv { .. } => ExitCode::from(EXIT_BAD_INPUT),
            _ => ExitCode::from(EXIT_BAD_DATASET),
        }
    })?;
    Ok(match tolerance {
        Some(t) => data.with_tolerance(t),
        None => data,
    })
}

fn resolve_drop_count(data: &Dataset, k: Option<usize>) -> Result<usize, ExitCode> {
    let k = k.unwrap_or_else(|| data.lms_drop_count());
    if k > data.max_drop_count() {
        eprintln!(
            "error: k={k} out of range 0..={} for this dataset",
            data.max_drop_count()
        );
        return Err(ExitCode::from(EXIT_BAD_INPUT));
    }
    Ok(k)
}

#[derive(Serialize)]
struct FitReport<'a> {
    schema_version: u32,
    command: &'static str,
    algorithm: &'static str,
    n: usize,
    p: usize,
    h: usize,
    k: usize,
    tolerance: f64,
    value: f64,
    value_squared: f64,
    optimizers: &'a [CandidateFit],
    subproblems_solved: usize,
    candidates_examined: usize,
    trace: &'a [TraceStep],
    #[serde(skip_serializing_if = "Option::is_none")]
    profile: Option<&'a ObjectiveProfile>,
}

fn cmd_fit(args: FitArgs) -> ExitCode {
    let data = match load_dataset(&args.input, args.tolerance) {
        Ok(d) => d,
        Err(code) => return code,
    };
    let k = match resolve_drop_count(&data, args.k) {
        Ok(k) => k,
        Err(code) => return code,
    };
    if args.profile && data.p() != 1 {
        eprintln!("error: --profile requires a single-parameter model (p = 1)");
        return ExitCode::from(EXIT_BAD_INPUT);
    }

    let solved: Result<SolverReport, Error> = match args.algorithm {
        Algorithm::Greedy => greedy_solve_drops(&data, k),
        Algorithm::Exhaustive => exhaustive_solve_drops(&data, k, args.force_large),
        Algorithm::BruteForce => brute_force_fk(&data, k),
        Algorithm::Bpb => {
            let config = BpbConfig {
                seed: args.seed,
                iterations: args.iterations,
                ..BpbConfig::default()
            };
            bpb_solve_fk(&data, &config, k)
        }
    };
    let report = match solved {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_BAD_DATASET);
        }
    };
    let profile = if args.profile {
        match profile_fk(&data, k) {
            Ok(p) => Some(p),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_BAD_DATASET);
            }
        }
    } else {
        None
    };

    let out = FitReport {
        schema_version: SCHEMA_VERSION,
        command: "fit",
        algorithm: args.algorithm.name(),
        n: data.n(),
        p: data.p(),
        h: data.median_rank(),
        k,
        tolerance: data.tolerance(),
        value: report.value,
        value_squared: report.value * report.value,
        optimizers: &report.optimizers,
        subproblems_solved: report.subproblems_solved,
        candidates_examined: report.candidates_examined,
        trace: &report.trace,
        profile: profile.as_ref(),
    };
    emit(&match args.output {
        OutputFormat::Json => render_json(&out),
        OutputFormat::Csv => render_fit_csv(&out),
        OutputFormat::Human => render_fit_human(&out),
    });
    ExitCode::SUCCESS
}

/// Writes the finished output in one pass. A closed pipe downstream (for
/// example `lms ... | head`) ends the process quietly instead of
/// panicking.
fn emit(text: &str) {
    use std::io::{ErrorKind, Write};
    let mut stdout = std::io::stdout().lock();
    let result = stdout
        .write_all(text.as_bytes())
        .and_then(|()| stdout.flush());
    if let Err(e) = result {
        if e.kind() == ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write output: {e}");
        std::process::exit(1);
    }
}

fn render_json<T: Serialize>(value: &T) -> String {
    let mut out =
        serde_json::to_string_pretty(value).expect("report serialization cannot fail");
    out.push('\n');
    out
}

fn join_floats(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn join_indices(set: &IndexSet) -> String {
    set.one_based()
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn render_fit_csv(report: &FitReport) -> String {
    use std::fmt::Write;
    let mut out = String::from("optimizer,algorithm,k,value,value_squared,theta,active,rho\n");
    for (i, fit) in report.optimizers.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            i + 1,
            report.algorithm,
            report.k,
            report.value,
            report.value_squared,
            join_floats(&fit.theta),
            join_indices(&fit.active),
            fit.rho
        );
    }
    if let Some(profile) = report.profile {
        out.push_str("\ntheta,value\n");
        for pt in &profile.points {
            let _ = writeln!(out, "{},{}", pt.theta, pt.value);
        }
    }
    out
}

fn render_fit_human(report: &FitReport) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "algorithm {}   n={} p={} h={} k={}",
        report.algorithm, report.n, report.p, report.h, report.k
    );
    let _ = writeln!(
        out,
        "objective value {}   (squared {})",
        report.value, report.value_squared
    );
    let _ = writeln!(
        out,
        "subproblems solved {}   candidates examined {}",
        report.subproblems_solved, report.candidates_examined
    );
    for (i, fit) in report.optimizers.iter().enumerate() {
        let _ = writeln!(
            out,
            "optimizer {}: theta = [{}]  level = {}  active = {}",
            i + 1,
            join_floats(&fit.theta).replace(';', ", "),
            fit.rho,
            fit.active
        );
    }
    if !report.trace.is_empty() {
        out.push_str("trace:\n");
        for step in report.trace {
            let _ = writeln!(out, "  |I|={:>3}  value {}", step.subset.len(), step.value);
        }
    }
    if let Some(profile) = report.profile {
        let _ = writeln!(out, "objective profile ({} vertices):", profile.points.len());
        let _ = writeln!(out, "{:>20} {:>20}", "theta", "value");
        for pt in &profile.points {
            let _ = writeln!(out, "{:>20} {:>20}", pt.theta, pt.value);
        }
    }
    out
}

#[derive(Serialize)]
struct EnumerateReport<'a> {
    schema_version: u32,
    command: &'static str,
    n: usize,
    p: usize,
    k: usize,
    tolerance: f64,
    count: usize,
    theory_count: u128,
    records: &'a [LocalMinimumRecord],
    degenerate_subsets: &'a [IndexSet],
}

fn cmd_enumerate(args: EnumerateArgs) -> ExitCode {
    let data = match load_dataset(&args.input, args.tolerance) {
        Ok(d) => d,
        Err(code) => return code,
    };
    let k = match resolve_drop_count(&data, args.k) {
        Ok(k) => k,
        Err(code) => return code,
    };
    let all = enumerate_all_local_minima(&data, args.threads);
    let records = all.for_drop_count(k);
    let theory = count_local_minima_theory(data.p(), k).unwrap_or(0);

    let out = EnumerateReport {
        schema_version: SCHEMA_VERSION,
        command: "enumerate-minima",
        n: data.n(),
        p: data.p(),
        k,
        tolerance: data.tolerance(),
        count: records.len(),
        theory_count: theory,
        records,
        degenerate_subsets: &all.degenerate_subsets,
    };
    let text = match args.output {
        OutputFormat::Json => render_json(&out),
        OutputFormat::Csv => {
            use std::fmt::Write;
            let mut s = String::from("record,k,value,theta,active,rho\n");
            for (i, rec) in records.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    i + 1,
                    rec.k,
                    rec.value,
                    join_floats(&rec.fit.theta),
                    join_indices(&rec.fit.active),
                    rec.fit.rho
                );
            }
            s
        }
        OutputFormat::Human => {
            use std::fmt::Write;
            let mut s = String::new();
            let _ = writeln!(
                s,
                "{} local minima of the k={} objective (theory: {}){}",
                records.len(),
                k,
                theory,
                if all.degenerate_subsets.is_empty() {
                    String::new()
                } else {
                    format!(
                        "; {} degenerate subsets skipped",
                        all.degenerate_subsets.len()
                    )
                }
            );
            for (i, rec) in records.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "{:>4}. value {}  theta = [{}]  active = {}",
                    i + 1,
                    rec.value,
                    join_floats(&rec.fit.theta).replace(';', ", "),
                    rec.fit.active
                );
            }
            s
        }
    };
    emit(&text);
    ExitCode::SUCCESS
}

#[derive(Serialize)]
struct VerifyRow {
    instance: usize,
    n: usize,
    p: usize,
    k: usize,
    measured: usize,
    expected: u128,
    matches: bool,
}

#[derive(Serialize)]
struct IdentityRow {
    instance: usize,
    n: usize,
    p: usize,
    holds: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    schema_version: u32,
    command: &'static str,
    seed: u64,
    trials: usize,
    redraws: usize,
    rows: Vec<VerifyRow>,
    identities: Vec<IdentityRow>,
    all_match: bool,
}

fn cmd_verify(args: VerifyArgs) -> ExitCode {
    if args.p_min == 0 || args.p_min > args.p_max || args.n_min > args.n_max || args.trials == 0 {
        eprintln!("error: empty verification ranges");
        return ExitCode::from(EXIT_BAD_INPUT);
    }
    let mut rows = Vec::new();
    let mut identities = Vec::new();
    let mut redraws_total = 0usize;
    let mut instance = 0usize;
    let mut all_match = true;

    for p in args.p_min..=args.p_max {
        let n_lo = args.n_min.max(2 * p).max(p + 1);
        if n_lo > args.n_max {
            continue;
        }
        for trial in 0..args.trials {
            let n = n_lo + (trial % (args.n_max - n_lo + 1));
            let seed = args
                .seed
                .wrapping_add(1_000_003u64.wrapping_mul(instance as u64 + 1));
            let (data, redraws) = match random_general_position_instance(n, p, seed) {
                Ok(v) => v,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_BAD_INPUT);
                }
            };
            redraws_total += redraws;
            let counts = enumerate_all_local_minima(&data, args.threads).counts();
            for (k, &measured) in counts.iter().enumerate() {
                let expected = match count_local_minima_theory(p, k) {
                    Ok(v) => v,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(EXIT_BAD_INPUT);
                    }
                };
                let matches = measured as u128 == expected;
                all_match &= matches;
                rows.push(VerifyRow {
                    instance,
                    n,
                    p,
                    k,
                    measured,
                    expected,
                    matches,
                });
            }
            let holds = verify_counting_identity(n, p, &counts).unwrap_or(false);
            all_match &= holds;
            identities.push(IdentityRow {
                instance,
                n,
                p,
                holds,
            });
            instance += 1;
        }
    }

    let report = VerifyReport {
        schema_version: SCHEMA_VERSION,
        command: "verify-theorem",
        seed: args.seed,
        trials: args.trials,
        redraws: redraws_total,
        rows,
        identities,
        all_match,
    };
    let text = match args.output {
        OutputFormat::Json => render_json(&report),
        OutputFormat::Csv => {
            use std::fmt::Write;
            let mut s = String::from("instance,n,p,k,measured,expected,match\n");
            for r in &report.rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    r.instance, r.n, r.p, r.k, r.measured, r.expected, r.matches
                );
            }
            s
        }
        OutputFormat::Human => {
            use std::fmt::Write;
            let mut s = String::new();
            let _ = writeln!(
                s,
                "{:>8} {:>4} {:>3} {:>3} {:>10} {:>10} {:>6}",
                "instance", "n", "p", "k", "measured", "expected", "match"
            );
            for r in &report.rows {
                let _ = writeln!(
                    s,
                    "{:>8} {:>4} {:>3} {:>3} {:>10} {:>10} {:>6}",
                    r.instance, r.n, r.p, r.k, r.measured, r.expected, r.matches
                );
            }
            for id in &report.identities {
                let _ = writeln!(
                    s,
                    "instance {} (n={}, p={}): counting identity {}",
                    id.instance,
                    id.n,
                    id.p,
                    if id.holds { "holds" } else { "FAILS" }
                );
            }
            let _ = writeln!(
                s,
                "redraws: {}   overall: {}",
                report.redraws,
                if report.all_match {
                    "all match"
                } else {
                    "MISMATCH"
                }
            );
            s
        }
    };
    emit(&text);
    if report.all_match {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_MISMATCH)
    }
}

fn cmd_generate(args: GenerateArgs) -> ExitCode {
    let config = SynthConfig {
        n: args.n,
        p: args.p,
        outlier_fraction: args.outliers,
        noise_scale: args.noise,
        outlier_shift: args.outlier_shift,
        coefficients: args.coef,
    };
    match lms_core::generate(&config, args.seed) {
        Ok(instance) => {
            emit(&lms_core::csv::write_dataset(&instance.dataset));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_BAD_INPUT)
        }
    }
}
