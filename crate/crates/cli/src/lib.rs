//! Command-line front end: `validate`, `solve` and `example`.

pub mod config;
pub mod example;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fouranchor_core::{solve_with, validate, Classification, Configuration, SolveOptions, SolveReport};

use crate::config::{parse_config, ConfigEcho, ConfigFile};
use crate::report::ReportFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_POSITIVE_DIMENSIONAL: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_USAGE: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed input at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("unknown example `{0}`; expected `square` or `collinear`")]
    UnknownExample(String),
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("output failed: {0}")]
    Output(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "fouranchor", version, about = "Solve planar four-anchor inverse-square distance systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SolveFlags {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Residual acceptance tolerance.
    #[arg(long)]
    tol_accept: Option<f64>,
    /// Relative imaginary-part bound for real solutions.
    #[arg(long)]
    tol_real: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Print elimination diagnostics to stderr.
    #[arg(long)]
    verbose: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the non-degeneracy conditions of a configuration.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Solve a configuration and print the report.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        flags: SolveFlags,
    },
    /// Solve a built-in configuration and compare against its closed form.
    Example {
        /// `square` or `collinear`.
        name: String,
        #[command(flatten)]
        flags: SolveFlags,
    },
}

pub fn exit_code(c: Classification) -> i32 {
    match c {
        Classification::Finite => EXIT_OK,
        Classification::PositiveDimensional => EXIT_POSITIVE_DIMENSIONAL,
        Classification::InvalidInput => EXIT_INVALID,
    }
}

pub fn read_config(path: &Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    parse_config(&text)
}

fn options(file: Option<&ConfigFile>, flags: &SolveFlags) -> SolveOptions {
    let mut opts = SolveOptions::default();
    if let Some(f) = file {
        f.tolerances.apply(&mut opts.tolerances);
        if let Some(s) = f.seed {
            opts.seed = s;
        }
    }
    if let Some(v) = flags.tol_accept {
        opts.tolerances.accept = v;
    }
    if let Some(v) = flags.tol_real {
        opts.tolerances.real = v;
    }
    if let Some(s) = flags.seed {
        opts.seed = s;
    }
    opts
}

/// Solves and wraps the result with timing and the input echo.
pub fn solve_to_report(config: &Configuration, opts: &SolveOptions) -> (SolveReport, ReportFile) {
    let start = Instant::now();
    let rep = solve_with(config, opts);
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let echo = config.check().is_ok().then(|| ConfigEcho::of(config));
    let file = ReportFile::new(&rep, echo, ms);
    (rep, file)
}

fn write_diagnostics(err: &mut dyn Write, rep: &SolveReport) -> std::io::Result<()> {
    let d = &rep.diagnostics;
    writeln!(err, "reduction: {}", d.reduction)?;
    if let Some((a, b)) = d.constraint_degrees {
        writeln!(err, "constraint degrees: {a}, {b}")?;
    }
    if let Some(s) = &d.shear {
        writeln!(err, "shear: {s} (attempt {})", d.shear_attempts)?;
    }
    if let Some(r) = d.resultant_degree {
        writeln!(err, "eliminant degree: {r}")?;
    }
    for (deg, m) in &d.square_free_factors {
        writeln!(err, "  factor of degree {deg} with multiplicity {m}")?;
    }
    writeln!(err, "candidates: {}, rejected: {}", d.candidates, d.rejected)?;
    for m in &d.messages {
        writeln!(err, "{m}")?;
    }
    Ok(())
}

fn emit(out: &mut dyn Write, report: &ReportFile, format: Format) -> Result<(), CliError> {
    match format {
        Format::Json => writeln!(out, "{}", report.to_json())?,
        Format::Csv => report.write_csv(out)?,
    }
    Ok(())
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Validate { input } => {
            let file = read_config(&input)?;
            match validate(&file.config) {
                Ok(v) => {
                    writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("validation serializes"))?;
                    Ok(if v.all_ok() { EXIT_OK } else { EXIT_INVALID })
                }
                Err(e) => {
                    writeln!(err, "invalid configuration: {e}")?;
                    Ok(EXIT_INVALID)
                }
            }
        }
        Command::Solve { input, flags } => {
            let file = read_config(&input)?;
            let opts = options(Some(&file), &flags);
            let (rep, report) = solve_to_report(&file.config, &opts);
            if flags.verbose {
                write_diagnostics(err, &rep)?;
            }
            if let Some(reason) = &rep.invalid_reason {
                writeln!(err, "invalid configuration: {reason}")?;
            }
            emit(out, &report, flags.format)?;
            Ok(exit_code(rep.classification))
        }
        Command::Example { name, flags } => {
            let ex = example::Example::from_name(&name)?;
            let opts = options(None, &flags);
            let result = example::run_example(ex, &opts);
            if flags.verbose {
                write_diagnostics(err, &result.solve)?;
            }
            match flags.format {
                Format::Json => writeln!(out, "{}", result.output.to_json())?,
                Format::Csv => result.output.report.write_csv(&mut *out)?,
            }
            Ok(exit_code(result.solve.classification))
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                EXIT_OK
            } else {
                let _ = write!(err, "{e}");
                EXIT_USAGE
            };
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}
