//! Command-line front end for the structure-family verifier.
//!
//! Five modes, selected by exactly one flag:
//!
//! * `--lambda VALUE` — classify a single member of the family,
//! * `--sweep START:STOP:COUNT` — classify a whole parameter grid and locate
//!   the distinguished parameters inside the window,
//! * `--find-special` — locate the distinguished parameters in `[0.1, 10]`,
//! * `--dump-structure` — print the frozen algebra tables as JSON,
//! * `--selftest` — run the built-in verification suite.
//!
//! Exit codes: `0` on success, `1` when a verification or computation fails,
//! `2` for usage errors (bad flags or bad parameter values).

use std::fmt::Display;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, ValueEnum};

use aqh_core::lie::So7;
use aqh_core::selftest::{self, CheckResult};
use aqh_core::sweep::{find_special_points, sweep_reports, SpecialPoint, SweepSpec};
use aqh_core::torsion::AqhStructure;
use aqh_core::{parse_scalar, Rational, Scalar, TorsionReport, DEFAULT_TOL};

/// Window scanned by `--find-special`; wide enough to contain every
/// distinguished parameter of the family.
const SPECIAL_WINDOW: (f64, f64) = (0.1, 10.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Human-readable text.
    Table,
    /// Pretty-printed JSON with a stable field order.
    Json,
    /// Comma-separated records with a header row.
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "aqh",
    version,
    about = "Verify and classify the one-parameter family of invariant almost \
             quaternion-Hermitian structures on the twistor space of the six-sphere",
    group = ArgGroup::new("mode")
        .required(true)
        .args(["lambda", "sweep", "selftest", "find_special", "dump_structure"])
)]
struct Cli {
    /// Family parameter: a fraction like 2/3 or a decimal like 0.75; must be
    /// positive (the second parameter is its reciprocal)
    #[arg(long, value_name = "VALUE")]
    lambda: Option<String>,

    /// Classify a grid of parameters given as START:STOP:COUNT, e.g.
    /// 0.4:1.2:9 (COUNT >= 2); with COUNT >= 3 the distinguished parameters
    /// inside the window are located and appended
    #[arg(long, value_name = "START:STOP:COUNT")]
    sweep: Option<String>,

    /// Space sweep grid points geometrically instead of linearly
    #[arg(long)]
    log: bool,

    /// Compute over exact rationals instead of floats (single-parameter mode
    /// only); identities are then checked exactly
    #[arg(
        long,
        conflicts_with_all = ["sweep", "selftest", "find_special", "dump_structure"]
    )]
    exact: bool,

    /// Tolerance for float comparisons and for turning norms into flags
    #[arg(long, value_name = "FLOAT", default_value_t = DEFAULT_TOL)]
    tol: f64,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Write the output to a file instead of standard output
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Run the built-in verification suite
    #[arg(long)]
    selftest: bool,

    /// Seed for the randomized parts of the verification suite
    #[arg(long, value_name = "U64", default_value_t = 17)]
    seed: u64,

    /// Locate the distinguished parameters (closed fundamental two-form,
    /// vanishing aligned torsion, Einstein metrics, pure-W1 members) in the
    /// window [0.1, 10]
    #[arg(long)]
    find_special: bool,

    /// Print the frozen structure tables of the underlying algebra as JSON
    #[arg(long)]
    dump_structure: bool,
}

/// Error classification that drives the process exit code.
enum AppError {
    /// The invocation or an input value was unusable: exit code 2.
    Usage(String),
    /// A verification failed or a computation could not complete: exit code 1.
    Failure(String),
    /// The reader went away (e.g. piped into `head`): exit quietly.
    Pipe,
}

fn usage<E: Display>(e: E) -> AppError {
    AppError::Usage(e.to_string())
}

fn failure<E: Display>(e: E) -> AppError {
    AppError::Failure(e.to_string())
}

fn write_failed(e: io::Error) -> AppError {
    if e.kind() == io::ErrorKind::BrokenPipe {
        AppError::Pipe
    } else {
        AppError::Failure(format!("could not write output: {e}"))
    }
}

fn json_failed(e: serde_json::Error) -> AppError {
    if e.io_error_kind() == Some(io::ErrorKind::BrokenPipe) {
        AppError::Pipe
    } else {
        AppError::Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) | Err(AppError::Pipe) => ExitCode::SUCCESS,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(AppError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<(), AppError> {
    // clap cannot express this one: `requires` aimed at a group member is
    // already satisfied by the mode group, so enforce it by hand.
    if cli.log && cli.sweep.is_none() {
        return Err(AppError::Usage(
            "--log only applies to --sweep, which was not given".into(),
        ));
    }
    let algebra = So7::new();
    let mut sink = open_sink(cli.out.as_deref())?;
    let outcome = if cli.selftest {
        run_selftest(cli, sink.as_mut())
    } else if cli.dump_structure {
        run_dump(&algebra, sink.as_mut())
    } else if cli.find_special {
        run_find_special(&algebra, cli, sink.as_mut())
    } else if let Some(text) = &cli.sweep {
        run_sweep(&algebra, text, cli, sink.as_mut())
    } else {
        let text = cli.lambda.as_deref().expect("the mode group guarantees a value");
        run_single(&algebra, text, cli, sink.as_mut())
    };
    let flushed = sink.flush();
    if outcome.is_ok() {
        flushed.map_err(write_failed)?;
    }
    outcome
}

fn open_sink(out: Option<&Path>) -> Result<Box<dyn Write>, AppError> {
    match out {
        None => Ok(Box::new(io::stdout())),
        Some(path) => {
            let file = File::create(path).map_err(|e| {
                AppError::Usage(format!("cannot open {} for writing: {e}", path.display()))
            })?;
            Ok(Box::new(BufWriter::new(file)))
        }
    }
}

// ---------------------------------------------------------------------------
// single-parameter mode

fn run_single(
    algebra: &So7,
    text: &str,
    cli: &Cli,
    sink: &mut dyn Write,
) -> Result<(), AppError> {
    if cli.exact {
        let lambda: Rational = parse_scalar(text).ok_or_else(|| {
            AppError::Usage(format!("could not parse `{text}` as a rational parameter"))
        })?;
        // Exact arithmetic admits exact identity checks: tolerance zero.
        single_report(algebra, lambda, 0.0, cli, sink)
    } else {
        let lambda: f64 = parse_scalar(text).ok_or_else(|| {
            AppError::Usage(format!("could not parse `{text}` as a numeric parameter"))
        })?;
        single_report(algebra, lambda, cli.tol, cli, sink)
    }
}

fn single_report<S: Scalar>(
    algebra: &So7,
    lambda: S,
    identity_tol: f64,
    cli: &Cli,
    sink: &mut dyn Write,
) -> Result<(), AppError> {
    if !lambda.is_positive() || !lambda.to_f64().is_finite() {
        return Err(AppError::Usage(format!(
            "the family parameter must be a positive finite number, got {lambda}"
        )));
    }
    let s = AqhStructure::new(algebra, lambda).map_err(usage)?;
    let report = TorsionReport::classify(&s, cli.tol).map_err(failure)?;
    emit_report(&report, cli.format, sink)?;
    // The report is printed regardless; a failed identity check still exits
    // nonzero so scripts notice.
    selftest::verify_identities(&s, identity_tol)
        .map_err(|e| AppError::Failure(format!("identity verification failed: {e}")))?;
    Ok(())
}

fn emit_report(
    report: &TorsionReport,
    format: Format,
    sink: &mut dyn Write,
) -> Result<(), AppError> {
    match format {
        Format::Table => write_report_table(report, sink).map_err(write_failed),
        Format::Json => {
            serde_json::to_writer_pretty(&mut *sink, report).map_err(json_failed)?;
            writeln!(sink).map_err(write_failed)
        }
        Format::Csv => {
            writeln!(sink, "{}", TorsionReport::csv_header()).map_err(write_failed)?;
            writeln!(sink, "{}", report.csv_row()).map_err(write_failed)
        }
    }
}

fn write_report_table(r: &TorsionReport, sink: &mut dyn Write) -> io::Result<()> {
    writeln!(sink, "parameter             lambda = {}   mu = {}", r.lambda, r.mu)?;
    writeln!(sink, "torsion form norm     {:.12e}", r.psi3_norm)?;
    writeln!(sink, "aligned torsion norm  {:.12e}", r.psi3_i_norm)?;
    writeln!(sink, "max contraction       {:.3e}", r.contractions_max)?;
    writeln!(
        sink,
        "torsion classes       I: {}   J: {}   K: {}",
        TorsionReport::gh_text(&r.gh_i),
        TorsionReport::gh_text(&r.gh_j),
        TorsionReport::gh_text(&r.gh_k)
    )?;
    writeln!(
        sink,
        "obstruction norms     N_I = {:.6e}   N_J = {:.6e}   N_K = {:.6e}",
        r.nijenhuis.ni_norm, r.nijenhuis.nj_norm, r.nijenhuis.nk_norm
    )?;
    writeln!(sink, "einstein deviation    {:.12e}", r.einstein_deviation)?;
    writeln!(sink, "flags                 {}", r.flag_summary())?;
    Ok(())
}

// ---------------------------------------------------------------------------
// sweep mode

fn run_sweep(
    algebra: &So7,
    text: &str,
    cli: &Cli,
    sink: &mut dyn Write,
) -> Result<(), AppError> {
    let spec = SweepSpec::parse(text, cli.log).map_err(usage)?;
    if spec.count < 2 {
        return Err(AppError::Usage(
            "a sweep needs at least two grid points; use --lambda for a single value".into(),
        ));
    }
    let reports = sweep_reports(algebra, &spec, cli.tol).map_err(failure)?;
    // Root refinement needs a real window; a two-point sweep is treated as a
    // pair of independent evaluations.
    let special: Vec<SpecialPoint> = if spec.count >= 3 {
        find_special_points(algebra, spec.start, spec.stop).map_err(failure)?
    } else {
        Vec::new()
    };

    match cli.format {
        Format::Table => {
            write_sweep_table(&reports, sink).map_err(write_failed)?;
            if spec.count >= 3 {
                writeln!(sink).map_err(write_failed)?;
                writeln!(
                    sink,
                    "distinguished parameters in [{}, {}]:",
                    spec.start, spec.stop
                )
                .map_err(write_failed)?;
                if special.is_empty() {
                    writeln!(sink, "  none").map_err(write_failed)?;
                }
                for p in &special {
                    writeln!(
                        sink,
                        "  {:<10} lambda = {:.12}   residual = {:.3e}",
                        p.kind, p.lambda, p.residual
                    )
                    .map_err(write_failed)?;
                }
            }
            Ok(())
        }
        Format::Json => {
            let doc = serde_json::json!({
                "reports": reports,
                "special_points": special,
            });
            serde_json::to_writer_pretty(&mut *sink, &doc).map_err(json_failed)?;
            writeln!(sink).map_err(write_failed)
        }
        Format::Csv => {
            writeln!(sink, "{}", TorsionReport::csv_header()).map_err(write_failed)?;
            for r in &reports {
                writeln!(sink, "{}", r.csv_row()).map_err(write_failed)?;
            }
            // Keep the CSV stream machine-readable: the summary of located
            // parameters goes to stderr as comment lines.
            for p in &special {
                eprintln!(
                    "# special kind={} lambda={:.12} residual={:.3e}",
                    p.kind, p.lambda, p.residual
                );
            }
            Ok(())
        }
    }
}

fn write_sweep_table(reports: &[TorsionReport], sink: &mut dyn Write) -> io::Result<()> {
    writeln!(
        sink,
        "{:>12} {:>14} {:>14} {:>8} {:>8} {:>8} {:>14}  {}",
        "lambda", "psi3_norm", "psi3_I_norm", "gh_I", "gh_J", "gh_K", "einstein_dev", "flags"
    )?;
    for r in reports {
        writeln!(
            sink,
            "{:>12.8} {:>14.6e} {:>14.6e} {:>8} {:>8} {:>8} {:>14.6e}  {}",
            r.lambda.as_f64(),
            r.psi3_norm,
            r.psi3_i_norm,
            TorsionReport::gh_text(&r.gh_i),
            TorsionReport::gh_text(&r.gh_j),
            TorsionReport::gh_text(&r.gh_k),
            r.einstein_deviation,
            r.flag_summary()
        )?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// special-point search

fn run_find_special(algebra: &So7, cli: &Cli, sink: &mut dyn Write) -> Result<(), AppError> {
    let (lo, hi) = SPECIAL_WINDOW;
    let points = find_special_points(algebra, lo, hi).map_err(failure)?;
    match cli.format {
        Format::Table => {
            writeln!(sink, "distinguished parameters in [{lo}, {hi}]:").map_err(write_failed)?;
            for p in &points {
                writeln!(
                    sink,
                    "  {:<10} lambda = {:.12}   residual = {:.3e}",
                    p.kind, p.lambda, p.residual
                )
                .map_err(write_failed)?;
            }
            Ok(())
        }
        Format::Json => {
            let doc = serde_json::json!({ "special_points": points });
            serde_json::to_writer_pretty(&mut *sink, &doc).map_err(json_failed)?;
            writeln!(sink).map_err(write_failed)
        }
        Format::Csv => {
            writeln!(sink, "kind,lambda,residual").map_err(write_failed)?;
            for p in &points {
                writeln!(sink, "{},{:.12e},{:.3e}", p.kind, p.lambda, p.residual)
                    .map_err(write_failed)?;
            }
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// structure dump

fn run_dump(algebra: &So7, sink: &mut dyn Write) -> Result<(), AppError> {
    // The dump is inherently hierarchical, so it is emitted as JSON whatever
    // --format says.
    let doc = algebra.structure_json();
    serde_json::to_writer_pretty(&mut *sink, &doc).map_err(json_failed)?;
    writeln!(sink).map_err(write_failed)
}

// ---------------------------------------------------------------------------
// verification suite

fn run_selftest(cli: &Cli, sink: &mut dyn Write) -> Result<(), AppError> {
    let results = selftest::run(cli.seed);
    let passed = results.iter().filter(|r| r.passed).count();
    let total = results.len();

    match cli.format {
        Format::Table => {
            for r in &results {
                writeln!(
                    sink,
                    "{:<22} {}  {}",
                    r.name,
                    if r.passed { "pass" } else { "FAIL" },
                    r.detail
                )
                .map_err(write_failed)?;
            }
            writeln!(sink, "{passed}/{total} checks passed (seed {})", cli.seed)
                .map_err(write_failed)?;
        }
        Format::Json => {
            let doc = serde_json::json!({
                "seed": cli.seed,
                "checks": results,
                "all_passed": passed == total,
            });
            serde_json::to_writer_pretty(&mut *sink, &doc).map_err(json_failed)?;
            writeln!(sink).map_err(write_failed)?;
        }
        Format::Csv => {
            writeln!(sink, "name,passed,detail").map_err(write_failed)?;
            for r in &results {
                writeln!(sink, "{},{},{}", r.name, r.passed, csv_field(&r.detail))
                    .map_err(write_failed)?;
            }
        }
    }

    if passed == total {
        Ok(())
    } else {
        let names: Vec<&str> = results
            .iter()
            .filter(|r| !r.passed)
            .map(|r: &CheckResult| r.name.as_str())
            .collect();
        Err(AppError::Failure(format!(
            "{} of {total} checks failed: {}",
            total - passed,
            names.join(", ")
        )))
    }
}

/// Quote a CSV field if it contains a delimiter, quote, or newline.
fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}
