//! `skewhowe`: sampling, exact tables, kernels and asymptotics from the command line.
//!
//! Exit codes: 0 ok, 1 I/O, 2 usage or bad parameters, 3 numeric failure, 4 resource guard.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod selftest;

#[derive(Debug, Parser)]
#[command(name = "skewhowe", version, about = "Random symplectic Young diagrams and their correlation kernel")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Rows of the box (rank of Sp_2n).
    #[arg(long, global = true, default_value_t = 3)]
    pub n: usize,
    /// Columns of the box (rank of Sp_2k).
    #[arg(long, global = true, default_value_t = 3)]
    pub k: usize,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Samples per replicate.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, global = true, default_value_t = 1)]
    pub replicates: usize,
    #[arg(long, global = true, value_enum, default_value_t = Precision::F64)]
    pub precision: Precision,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Csv)]
    pub format: OutFormat,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Precision {
    F64,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Krawtchouk,
    Symplectic,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw diagrams with Proctor's algorithm.
    Sample {
        /// Emit per-site occupation estimates instead of the diagrams.
        #[arg(long)]
        summary: bool,
    },
    /// Exact probabilities of all diagrams in the box, or of one shape.
    Measure {
        /// Row lengths, e.g. "2,1".
        #[arg(long)]
        shape: Option<String>,
    },
    /// Polynomial tables and recurrence coefficients.
    Poly {
        /// Compare degrees up to 6 with the closed-form reference table.
        #[arg(long)]
        check_table1: bool,
        /// Emit QR-step coefficients next to those read off the polynomials.
        #[arg(long)]
        jacobi: bool,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
        /// Krawtchouk parameter as a fraction, e.g. "1/3".
        #[arg(long, default_value = "1/2")]
        p: String,
    },
    /// Kernel matrix, or the slice through one anchor.
    Kernel {
        #[arg(long)]
        anchor: Option<i64>,
        /// Report trace, symmetry and idempotency residuals only.
        #[arg(long)]
        check: bool,
    },
    /// Saddle-point asymptotics against exact values along the lattice.
    Asym {
        #[arg(long, value_enum, default_value_t = Family::Krawtchouk)]
        family: Family,
        /// Degree m; defaults to 2n.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Empirical, exact and sine-kernel ratios around an anchor.
    Compare {
        /// Anchor site; defaults to (n + k)/2.
        #[arg(long)]
        anchor: Option<i64>,
        #[arg(long, default_value_t = 20)]
        window: i64,
    },
    /// Run the exact identities for the given box.
    Selftest,
}

#[derive(Debug)]
pub enum Failure {
    Lib(skewhowe::Error),
    Io(std::io::Error),
    Usage(String),
    /// Checks ran but some failed.
    Checks(usize),
}

impl From<skewhowe::Error> for Failure {
    fn from(e: skewhowe::Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        use skewhowe::Error::*;
        match self {
            Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Lib(Structural(_) | Domain(_) | Region(_)) => 2,
            Failure::Lib(Degenerate(_) | Consistency(_) | Breakdown(_)) => 3,
            Failure::Lib(Resource(_)) => 4,
            Failure::Checks(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "I/O error: {e}"),
            Failure::Usage(m) => write!(f, "usage: {m}"),
            Failure::Checks(n) => write!(f, "{n} check(s) failed"),
        }
    }
}

/// One line on standard output; unlike `println!` a closed pipe is an error, not a panic.
pub fn say(line: std::fmt::Arguments) -> Result<(), Failure> {
    use std::io::Write;
    writeln!(std::io::stdout().lock(), "{line}").map_err(Failure::Io)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let result = match cli.command {
        Command::Sample { summary } => commands::sample(g, summary),
        Command::Measure { shape } => commands::measure(g, shape.as_deref()),
        Command::Poly { check_table1, jacobi, max_degree, p } => {
            commands::poly(g, check_table1, jacobi, max_degree, &p)
        }
        Command::Kernel { anchor, check } => commands::kernel(g, anchor, check),
        Command::Asym { family, degree } => commands::asym(g, family, degree),
        Command::Compare { anchor, window } => commands::compare(g, anchor, window),
        Command::Selftest => selftest::run(g),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        // the reader went away, e.g. `| head`
        Err(Failure::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("skewhowe: {e}");
            ExitCode::from(e.code())
        }
    }
}
