mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use commands::{Fail, Output};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Exact series coefficients, identities and π representations built on
/// Stirling numbers and Q(k, m).
#[derive(Debug, Parser)]
#[command(name = "arcseries", version)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Decimal digits for numeric output.
    #[arg(long, global = true, default_value_t = 30)]
    pub digits: u32,
    /// Seed for randomized identity sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExprName {
    ArcsinPow,
    ArcsinhPow,
    ArccosRatio,
    ArccoshRatio,
    Shifted,
    AlphaRatio,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShiftedName {
    PiMinusArccos,
    PiPlusIArccosh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Arccos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormName {
    Ratio,
    RatioHyp,
    Shifted,
    ShiftedHyp,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Stirling numbers of the first kind: one value or row n.
    Stirling {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Q(k, m) or a table of it.
    Q {
        #[arg(long, required_unless_present = "table")]
        k: Option<usize>,
        #[arg(long, required_unless_present = "table")]
        m: Option<usize>,
        #[arg(long, num_args = 2, value_names = ["KMAX", "MMAX"], conflicts_with_all = ["k", "m"])]
        table: Option<Vec<usize>>,
    },
    /// Partial Bell polynomial B(n, k) at explicit arguments or a preset.
    Bell {
        #[arg(long, required_unless_present = "preset")]
        n: Option<usize>,
        #[arg(long)]
        k: usize,
        /// Comma-separated x_1, x_2, ... as p/q.
        #[arg(long, required_unless_present = "preset", conflicts_with = "preset")]
        values: Option<String>,
        #[arg(long, value_enum, requires = "m")]
        preset: Option<Preset>,
        #[arg(long)]
        m: Option<usize>,
    },
    /// Expansion of prod (l^2 + t) or prod ((2l-1)^2 + t).
    Prod {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "consecutive")]
        variant: String,
        /// Build from Stirling numbers instead of multiplying out.
        #[arg(long)]
        stirling: bool,
    },
    /// Truncated series coefficients.
    Series {
        #[arg(long, value_enum)]
        expr: ExprName,
        #[arg(long, conflicts_with = "alpha")]
        k: Option<usize>,
        /// Rational p/q or decimal; anything else is parsed as a float.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long, value_enum, default_value_t = ShiftedName::PiMinusArccos)]
        variant: ShiftedName,
        #[arg(long, required_unless_present = "tol", conflicts_with = "tol")]
        terms: Option<usize>,
        /// Grow the order until the tail estimate at --eval is below this.
        #[arg(long, requires = "eval")]
        tol: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        eval: Option<String>,
    },
    /// π series partial sums and residuals.
    Pi {
        #[arg(long)]
        repr: String,
        #[arg(long, conflicts_with = "alpha")]
        k: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long)]
        terms: usize,
    },
    /// Run an identity suite: stirling, q, bell, products, series, pi or all.
    Verify {
        suite: String,
        #[arg(long = "max", default_value_t = 12)]
        max: usize,
    },
    /// Diagnostics and single-value queries.
    Diag {
        #[command(subcommand)]
        what: Diag,
    },
}

#[derive(Debug, Subcommand)]
pub enum Diag {
    /// Convergence rate of the (pi^2/8)^k series.
    Rate {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        terms: usize,
    },
    /// Root and ratio estimates for sq8 and the classical series.
    Limits {
        #[arg(long)]
        terms: usize,
    },
    /// Compare a truncated series with the numeric oracle.
    Compare {
        #[arg(long, value_enum)]
        expr: ExprName,
        #[arg(long, conflicts_with = "alpha")]
        k: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long, value_enum, default_value_t = ShiftedName::PiMinusArccos)]
        variant: ShiftedName,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        terms: usize,
    },
    /// Coefficient of x^j in (arccos x)^(2k).
    Maclaurin {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        terms: usize,
    },
    /// m-th one-sided derivative of a ratio power.
    Deriv {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = FormName::Ratio)]
        form: FormName,
    },
    /// n-th derivative of (arccos x)^(2k) at 1.
    EvenDeriv {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        hyperbolic: bool,
    },
    /// Coefficient of a trigonometric composition.
    Trig {
        #[arg(long)]
        tag: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        n: usize,
    },
    /// Odd powers of arccos at 1 (always an error).
    Odd {
        #[arg(long)]
        k: usize,
    },
}

fn emit(out: &Output, cli: &Cli) -> Result<(), Fail> {
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(&out.json).expect("serializable") + "\n",
        Format::Text => out.text.clone(),
        Format::Csv => out
            .csv
            .clone()
            .ok_or_else(|| Fail::Usage("this command has no CSV form".into()))?,
    };
    match &cli.out {
        Some(path) => std::fs::write(path, body).map_err(|e| Fail::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes()).map_err(|e| Fail::Io(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = commands::dispatch(&cli).and_then(|out| {
        emit(&out, &cli)?;
        match out.failed {
            Some(counterexamples) => Err(Fail::Verification(counterexamples)),
            None => Ok(()),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if let Fail::Verification(v) = &f {
                if cli.format != Format::Json || cli.out.is_some() {
                    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
                }
            } else {
                eprintln!("error: {f}");
            }
            ExitCode::from(f.code())
        }
    }
}
