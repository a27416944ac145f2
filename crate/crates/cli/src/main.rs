//! `bankcover`: expected test counts, reference tables, simulations and
//! self-validation from the command line.
//!
//! Exit codes: 0 success, 1 validation failure, 2 bad arguments, 3 a
//! computation did not converge within its budget, 4 I/O failure.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bankcover::report::{
    build_table, render_svg, validate, ReportError, TableName, ValidationLevel, ValidationOptions,
};
use bankcover::{expected_tests, run_experiment, BankSpec, Error, SimulationConfig, TruncationPolicy};
use clap::{Parser, Subcommand, ValueEnum};

const EXIT_VALIDATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_COMPUTE: u8 = 3;
const EXIT_IO: u8 = 4;

/// Environment variable naming the default output directory for `table`
/// and `figure`.
const OUT_DIR_ENV: &str = "BANKCOVER_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "bankcover", version, about = "How many random multi-question tests until every question has appeared?")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print E N_q with its certified truncation bound.
    Expect {
        /// Alternatives per bank.
        #[arg(long)]
        a: u32,
        /// Questions per test.
        #[arg(long)]
        q: u64,
        /// Series terms below this stop the sum (once the tail is certified).
        #[arg(long, default_value_t = 1e-12)]
        policy_eps: f64,
        /// Hard cap on summed terms.
        #[arg(long, default_value_t = 100_000)]
        n_cap: u64,
    },
    /// Write one of the reference tables as CSV.
    Table {
        #[arg(value_enum)]
        name: TableArg,
        /// Output path; `-` for stdout. Defaults to <name>.csv in $BANKCOVER_OUT_DIR or the working directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo estimate of the distribution of N_q, printed as one JSON line.
    Simulate {
        #[arg(long)]
        a: u32,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        reps: u64,
        #[arg(long)]
        seed: u64,
        /// Worker threads; output does not depend on this.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Run the self-check suite and print a pass/fail report.
    Validate {
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
        /// Replace the Euler–Mascheroni constant in γ-dependent checks.
        #[arg(long, hide = true)]
        euler_gamma: Option<f64>,
    },
    /// Write one of the E N_q figures as SVG or as its underlying CSV.
    Figure {
        #[arg(value_enum)]
        name: FigureArg,
        /// Output path; `-` for stdout. Defaults to <name>.<format> in $BANKCOVER_OUT_DIR or the working directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Svg)]
        format: FormatArg,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
enum TableArg {
    EnQ,
    Centred,
    SdBounds,
    FigLow,
    FigHigh,
}

impl From<TableArg> for TableName {
    fn from(t: TableArg) -> Self {
        match t {
            TableArg::EnQ => TableName::EnQ,
            TableArg::Centred => TableName::Centred,
            TableArg::SdBounds => TableName::SdBounds,
            TableArg::FigLow => TableName::FigLow,
            TableArg::FigHigh => TableName::FigHigh,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
enum FigureArg {
    FigLow,
    FigHigh,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Svg,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

/// A failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidSpec(_)
            | Error::UnsupportedAlternatives { .. }
            | Error::InvalidPolicy(_)
            | Error::InvalidConfig(_)
            | Error::OracleRange(_)
            | Error::Domain(_) => EXIT_USAGE,
            Error::CapExceeded { .. } | Error::QuadratureFailure { .. } => EXIT_COMPUTE,
            Error::NegativeProbability(_) => EXIT_VALIDATION,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Self {
        match e {
            ReportError::Compute(inner) => inner.into(),
            ReportError::UnknownTable(_) => Failure {
                code: EXIT_USAGE,
                message: e.to_string(),
            },
            ReportError::Io(_) | ReportError::Csv(_) | ReportError::Parse(_) => Failure {
                code: EXIT_IO,
                message: e.to_string(),
            },
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    }
}

fn default_path(stem: &str, ext: &str) -> PathBuf {
    let dir = std::env::var_os(OUT_DIR_ENV).map_or_else(|| PathBuf::from("."), PathBuf::from);
    dir.join(format!("{stem}.{ext}"))
}

/// Writes `bytes` to `path`, or to stdout when the path is `-`.
fn emit(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    if path == Path::new("-") {
        let mut out = io::stdout().lock();
        return out
            .write_all(bytes)
            .and_then(|()| out.flush())
            .map_err(|e| io_failure(path, e));
    }
    fs::write(path, bytes).map_err(|e| io_failure(path, e))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Expect {
            a,
            q,
            policy_eps,
            n_cap,
        } => {
            let spec = BankSpec::new(a, q)?;
            let policy = TruncationPolicy::new(policy_eps, n_cap, true)?;
            let est = expected_tests(spec, &policy)?;
            println!("{} ± {:.3e} ({} terms)", est.value, est.tail_bound, est.terms);
        }
        Command::Table { name, out } => {
            let name = TableName::from(name);
            let table = build_table(name, &TruncationPolicy::default())?;
            let csv = table.to_csv_string()?;
            let path = out.unwrap_or_else(|| default_path(name.as_str(), "csv"));
            emit(&path, csv.as_bytes())?;
        }
        Command::Simulate {
            a,
            q,
            reps,
            seed,
            workers,
        } => {
            let workers = workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let config = SimulationConfig::new(BankSpec::new(a, q)?, reps, seed, workers)?;
            let result = run_experiment(&config)?;
            let line = serde_json::to_string(&result.summary()).map_err(|e| Failure {
                code: EXIT_IO,
                message: e.to_string(),
            })?;
            println!("{line}");
        }
        Command::Validate { level, euler_gamma } => {
            let mut opts = ValidationOptions::new(match level {
                LevelArg::Quick => ValidationLevel::Quick,
                LevelArg::Full => ValidationLevel::Full,
            });
            if let Some(g) = euler_gamma {
                opts.gumbel_mean = g;
            }
            let report = validate(&opts)?;
            print!("{report}");
            if !report.passed() {
                return Ok(EXIT_VALIDATION);
            }
        }
        Command::Figure { name, out, format } => {
            let name = match name {
                FigureArg::FigLow => TableName::FigLow,
                FigureArg::FigHigh => TableName::FigHigh,
            };
            let table = build_table(name, &TruncationPolicy::default())?;
            let (bytes, ext) = match format {
                FormatArg::Svg => (render_svg(&table).into_bytes(), "svg"),
                FormatArg::Csv => (table.to_csv_string()?.into_bytes(), "csv"),
            };
            let path = out.unwrap_or_else(|| default_path(name.as_str(), ext));
            emit(&path, &bytes)?;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
