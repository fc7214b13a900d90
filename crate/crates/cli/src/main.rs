//! `quartic-els`: local solvability of quadratic twists of a quartic, the
//! resulting criterion, counts of ELS twists and identity checks.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quartic_els::{Error, Quartic};

#[derive(Parser, Debug)]
#[command(name = "quartic-els", version, about = "Everywhere-local solvability of twists q*y^2 = f(x)")]
pub struct Cli {
    /// Worker threads for sieving and counting.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Discriminant, Galois group, local tables, condition sets and F(s) terms.
    Analyze {
        #[command(flatten)]
        poly: PolyArg,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Solvability of q*y^2 = f(x) over Q_p.
    Local {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long, allow_negative_numbers = true)]
        q: i64,
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Whether the twist by q is everywhere locally solvable, by criterion and by direct search.
    Els {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// L(x), the number of ELS twists q <= x, at each checkpoint.
    Count {
        #[command(flatten)]
        poly: PolyArg,
        #[command(flatten)]
        range: CountArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Normalized counts c(x) = L(x) (ln x)^m / x and their trend.
    Fit {
        #[command(flatten)]
        poly: PolyArg,
        #[command(flatten)]
        range: CountArgs,
        /// Refit counts from a CSV written by `count` instead of recounting.
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// The merged term list of F(s) in terms of g and its twists.
    Terms {
        #[command(flatten)]
        poly: PolyArg,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run a verification suite; exits 2 on the first failed check.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[command(flatten)]
        poly: PolyArg,
        /// Coefficient bound for series suites, twist bound for the oracle suite.
        #[arg(long = "N")]
        n: Option<usize>,
        /// Restrict the zeta suite to one group.
        #[arg(long)]
        group: Option<String>,
        /// Prime bound for the density suite.
        #[arg(long, default_value_t = 1_000_000)]
        bound: u64,
        /// Odd moduli for the filtration suite, comma separated.
        #[arg(long, value_delimiter = ',')]
        r: Vec<u64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Dirichlet coefficients as CSV "n,a_n".
    Stream {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long, value_enum, default_value_t = StreamKind::Rho)]
        kind: StreamKind,
        #[arg(long = "N", default_value_t = 1000)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct PolyArg {
    /// Coefficients a3 a2 a1 a0 of x^4 + a3 x^3 + a2 x^2 + a1 x + a0, or a polynomial string.
    #[arg(value_name = "COEFF", num_args = 0..=4, allow_negative_numbers = true)]
    pub coeffs: Vec<String>,
    /// The polynomial, in either form.
    #[arg(long = "f", value_name = "COEFF", num_args = 1..=4, allow_negative_numbers = true, conflicts_with = "coeffs")]
    pub f: Vec<String>,
}

impl PolyArg {
    pub fn optional(&self) -> Result<Option<Quartic>, Error> {
        let words = if self.f.is_empty() { &self.coeffs } else { &self.f };
        if words.is_empty() {
            return Ok(None);
        }
        Quartic::parse(&words.join(" ")).map(Some)
    }

    pub fn required(&self) -> Result<Quartic, Error> {
        self.optional()?
            .ok_or_else(|| Error::InvalidArgument("a polynomial is required".into()))
    }
}

#[derive(Args, Debug, Clone)]
pub struct CountArgs {
    #[arg(long, default_value = "1000000", value_parser = parse_count)]
    pub xmax: u64,
    /// Comma-separated checkpoints; accepts forms like 1e5. Defaults to powers of ten up to xmax.
    #[arg(long, value_delimiter = ',', value_parser = parse_count)]
    pub checkpoints: Vec<u64>,
    /// Build the root table without reading or writing the cache.
    #[arg(long)]
    pub no_cache: bool,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Filtration,
    Terms,
    Zeta,
    Density,
    Oracle,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum StreamKind {
    /// The multiplicative function with rho(p) = 1 when f has a root mod p.
    Rho,
    /// Coefficients of F(s), the indicator of ELS twists.
    F,
}

fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s.parse().map_err(|_| format!("not a count: {s:?}"))?;
    if v >= 0.0 && v.fract() == 0.0 && v < 2f64.powi(63) {
        Ok(v as u64)
    } else {
        Err(format!("not a count: {s:?}"))
    }
}

/// How a command ended, mapped onto the exit status.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Verification(String),
    Tripwire(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_tripwire() {
            Failure::Tripwire(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Tripwire(msg)) => {
            eprintln!("internal check failed: {msg}");
            ExitCode::from(3)
        }
    }
}
