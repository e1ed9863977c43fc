//! `conedet`: zeta-regularized determinants, zeta singularities and spectra
//! for self-adjoint extensions on a generalized cone.
//!
//! ```text
//! conedet <validate|det|singularities|spectrum|verify> <file> [flags]
//! ```
//!
//! The report goes to stdout, diagnostics to stderr.

mod commands;
mod exit;
mod problem;
mod report;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use conedet_core::Method;

use crate::commands::{DetArgs, Outcome, DEFAULT_N_QUAD, DEFAULT_T};
use crate::exit::CliError;
use crate::problem::Problem;
use crate::report::{CommandEcho, Report};

#[derive(Debug, Parser)]
#[command(name = "conedet", version, about = "Zeta determinants of self-adjoint extensions on a generalized cone")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Omit the timestamp so identical inputs give byte-identical reports.
    #[arg(long, global = true)]
    reproducible: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
struct FileArg {
    /// Problem file (JSON).
    file: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that (A, B) is a Lagrangian pair.
    Validate(FileArg),
    /// Compute the cone determinant.
    Det {
        #[command(flatten)]
        input: FileArg,
        #[arg(long, value_enum, default_value_t = MethodArg::General)]
        method: MethodArg,
        /// Imaginary part of the oracle point t.
        #[arg(long, default_value_t = DEFAULT_T)]
        t: f64,
        /// Quadrature panels on the oracle arc.
        #[arg(long, default_value_t = DEFAULT_N_QUAD)]
        n_quad: usize,
    },
    /// Poles and logarithmic terms of the zeta function.
    Singularities {
        #[command(flatten)]
        input: FileArg,
        /// Largest ξ kept.
        #[arg(short = 'N')]
        n: Option<f64>,
        /// Window for log powers.
        #[arg(short = 'M')]
        m: Option<i64>,
    },
    /// The first eigenvalues, including negative ones and the kernel.
    Spectrum {
        #[command(flatten)]
        input: FileArg,
        /// Number of positive eigenvalues.
        #[arg(short = 'k')]
        k: Option<usize>,
        /// Upper end of the positive scan in μ = sqrt(eigenvalue).
        #[arg(long)]
        mu_max: Option<f64>,
    },
    /// Run the invariant battery. CONEDET_SEED seeds the random checks.
    Verify(FileArg),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    General,
    Ratio,
    Neumann,
    Rowcol,
    Decomposable,
    Oned,
    Oracle,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::General => Method::General,
            MethodArg::Ratio => Method::Ratio,
            MethodArg::Neumann => Method::Neumann,
            MethodArg::Rowcol => Method::Rowcol,
            MethodArg::Decomposable => Method::Decomposable,
            MethodArg::Oned => Method::Oned,
            MethodArg::Oracle => Method::ContourOracle,
        }
    }
}

fn run(cli: &Cli) -> Result<(Report, i32), CliError> {
    let mut flags = BTreeMap::new();
    let (name, file) = match &cli.command {
        Command::Validate(f) => ("validate", &f.file),
        Command::Det { input, method, t, n_quad } => {
            flags.insert("method".into(), Method::from(*method).as_str().into());
            if *method == MethodArg::Oracle {
                flags.insert("t".into(), t.to_string());
                flags.insert("n_quad".into(), n_quad.to_string());
            }
            ("det", &input.file)
        }
        Command::Singularities { input, n, m } => {
            n.map(|n| flags.insert("N".into(), n.to_string()));
            m.map(|m| flags.insert("M".into(), m.to_string()));
            ("singularities", &input.file)
        }
        Command::Spectrum { input, k, mu_max } => {
            k.map(|k| flags.insert("k".into(), k.to_string()));
            mu_max.map(|m| flags.insert("mu_max".into(), m.to_string()));
            ("spectrum", &input.file)
        }
        Command::Verify(f) => ("verify", &f.file),
    };
    let problem = Problem::load(file)?;
    let outcome: Outcome = match &cli.command {
        Command::Validate(_) => commands::validate(&problem)?,
        Command::Det { method, t, n_quad, .. } => {
            commands::det(&problem, DetArgs { method: (*method).into(), t: *t, n_quad: *n_quad })?
        }
        Command::Singularities { n, m, .. } => commands::singularities(&problem, *n, *m)?,
        Command::Spectrum { k, mu_max, .. } => commands::spectrum(&problem, *k, *mu_max)?,
        Command::Verify(_) => {
            let seed = commands::seed_from_env()?;
            flags.insert("seed".into(), seed.to_string());
            commands::verify(&problem, seed)?
        }
    };
    let echo = CommandEcho { name: name.into(), file: file.display().to_string(), flags };
    let timestamp = (!cli.reproducible).then(|| {
        std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
    });
    let report = Report {
        input_digest: report::digest(&problem.raw, &echo),
        command: echo,
        results: outcome.results,
        residuals: outcome.residuals,
        warnings: outcome.warnings,
        versions: report::versions(),
        timestamp,
    };
    Ok((report, outcome.code))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => exit::OK,
                _ => exit::INPUT,
            };
            return ExitCode::from(code as u8);
        }
    };
    match run(&cli) {
        Ok((report, code)) => {
            let body = match cli.format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(body.as_bytes());
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
