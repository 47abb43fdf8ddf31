//! Command-line front end. Exit codes: 0 success, 1 malformed input,
//! 2 mathematical precondition violated (witness printed to stderr as
//! JSON), 3 internal invariant failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sosgram_cli::commands::{self, CertifyMode};
use sosgram_cli::{experiment, CliError, CliResult};

#[derive(Parser)]
#[command(
    name = "sosgram",
    version,
    about = "Exact Gram matrix certificates for sums-of-squares binary forms"
)]
struct Cli {
    /// Write the output to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the degree-d monomial lift of a rational point.
    Lift {
        /// Comma-separated rational coordinates, e.g. "2,3" or "1/2,-3".
        #[arg(long)]
        point: String,
        #[arg(long)]
        degree: usize,
        /// Print the scaled-basis entries as floats (approximate).
        #[arg(long)]
        scaled_float: bool,
    },
    /// The induced matrix of a linear map on the degree-d monomial basis.
    Induced {
        /// Transformation matrix document (d = 1, not necessarily symmetric).
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        degree: usize,
    },
    /// Gram matrix operations.
    Gram {
        #[command(subcommand)]
        action: GramAction,
    },
    /// Exact positive-semidefiniteness verdict with witness on failure.
    Psd {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Transvectants.
    Transvect {
        #[command(subcommand)]
        action: TransvectAction,
    },
    /// Symmetric tensor product of two monomial-indexed matrices.
    Symprod {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Harmonic decomposition of an even-degree binary form.
    Harmonic {
        #[arg(long)]
        form: PathBuf,
    },
    /// Support profile of a symmetric matrix under repeated transvection.
    Support {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Build a structured psd Gram certificate for an SOS binary form.
    Certify {
        #[arg(long)]
        form: PathBuf,
        /// Exact psd Gram matrix for the harmonic-support quotient.
        #[arg(long, value_name = "FILE")]
        quotient_gram: Option<PathBuf>,
        /// exact: validate --quotient-gram; roots: derive one numerically.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Conjugate-pairing tolerance for --mode roots.
        #[arg(long, default_value_t = sosgram::structured::DEFAULT_PAIRING_TOL)]
        pairing_tol: f64,
    },
    /// Batch experiments emitting CSV.
    Experiment {
        #[command(subcommand)]
        which: ExperimentKind,
    },
}

#[derive(Subcommand)]
enum GramAction {
    /// The canonical Gram matrix of an even-degree form.
    Canonical {
        #[arg(long)]
        form: PathBuf,
        /// Print the scaled-basis view as floats (approximate).
        #[arg(long)]
        scaled_float: bool,
    },
    /// The form represented by a Gram matrix.
    Eval {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Congruence transform by the induced matrix of a linear map.
    Transform {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        by: PathBuf,
    },
}

#[derive(Subcommand)]
enum TransvectAction {
    /// Apply the matrix transvectant (optionally k times).
    Matrix {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = 1)]
        power: usize,
    },
    /// The order-n transvectant of two binary forms.
    Poly {
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
        #[arg(long)]
        order: usize,
    },
}

#[derive(Subcommand)]
enum ExperimentKind {
    /// Random structured certificates; observed component counts vs the
    /// claimed and guaranteed bounds.
    Theorem {
        #[arg(long)]
        d1: usize,
        #[arg(long)]
        d2: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Roots,
}

fn run(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Lift {
            point,
            degree,
            scaled_float,
        } => commands::lift(point, *degree, *scaled_float),
        Command::Induced { matrix, degree } => commands::induced(matrix, *degree),
        Command::Gram { action } => match action {
            GramAction::Canonical { form, scaled_float } => {
                commands::gram_canonical(form, *scaled_float)
            }
            GramAction::Eval { matrix } => commands::gram_eval_cmd(matrix),
            GramAction::Transform { matrix, by } => commands::gram_transform_cmd(matrix, by),
        },
        Command::Psd { matrix } => commands::psd(matrix),
        Command::Transvect { action } => match action {
            TransvectAction::Matrix { matrix, power } => commands::transvect_matrix(matrix, *power),
            TransvectAction::Poly { p, q, order } => commands::transvect_poly(p, q, *order),
        },
        Command::Symprod { a, b } => commands::symprod(a, b),
        Command::Harmonic { form } => commands::harmonic(form),
        Command::Support { matrix } => commands::support(matrix),
        Command::Certify {
            form,
            quotient_gram,
            mode,
            pairing_tol,
        } => {
            let mode = mode.map(|m| match m {
                ModeArg::Exact => CertifyMode::Exact,
                ModeArg::Roots => CertifyMode::Roots,
            });
            commands::certify(form, quotient_gram.as_deref(), mode, *pairing_tol)
        }
        Command::Experiment { which } => match which {
            ExperimentKind::Theorem {
                d1,
                d2,
                trials,
                seed,
            } => experiment::run_theorem(*d1, *d2, *trials, *seed),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                print!("{err}");
                return ExitCode::SUCCESS;
            }
            eprint!("{err}");
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(output) => {
            if let Some(path) = &cli.out {
                if let Err(source) = std::fs::write(path, &output) {
                    let err = CliError::Io {
                        path: path.display().to_string(),
                        source,
                    };
                    eprintln!("{}", err.to_json());
                    return ExitCode::from(err.exit_code() as u8);
                }
            } else {
                print!("{output}");
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
