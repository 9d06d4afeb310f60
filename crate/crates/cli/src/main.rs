//! `uag`: batch computations over finite algebras described in the `.alg`
//! text format.
//!
//! Exit codes: 0 computed (or verdict true), 1 verdict false, 2 usage or
//! parse error, 3 cap exceeded.

mod commands;
mod report;
mod witness;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use report::CliError;

#[derive(Parser, Debug)]
#[command(name = "uag", version, about = "Algebraic geometry over finite algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub opts: Opts,
}

#[derive(clap::Args, Debug, Clone, Default)]
pub struct Opts {
    /// File with the algebra (the first `algebra` block is used)
    #[arg(long, global = true)]
    pub algebra: Option<PathBuf>,

    /// File with the second algebra
    #[arg(long, global = true)]
    pub algebra2: Option<PathBuf>,

    /// File with a `system` or `quasi` block
    #[arg(long, global = true)]
    pub system: Option<PathBuf>,

    /// Comma-separated variables, e.g. `x,y`
    #[arg(long, global = true)]
    pub vars: Option<String>,

    #[arg(long, global = true)]
    pub max_vars: Option<usize>,

    #[arg(long, global = true)]
    pub cap_points: Option<usize>,

    #[arg(long, global = true)]
    pub cap_free: Option<usize>,

    #[arg(long, global = true)]
    pub cap_homs: Option<usize>,

    /// Field automorphism: `id` or `frob^k`
    #[arg(long, global = true)]
    pub sigma: Option<String>,

    /// Write the JSON report here
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,

    /// Write a DOT graph here (lattice, category)
    #[arg(long, global = true)]
    pub dot: Option<PathBuf>,

    /// Run the randomized suites with this seed (member)
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Cases per randomized suite
    #[arg(long, global = true, default_value_t = 1000)]
    pub cases: usize,

    /// Close tau transitively
    #[arg(long, global = true)]
    pub strict_tau: bool,

    /// Term depth bound for quasi-compare
    #[arg(long, global = true, default_value_t = 3)]
    pub depth: usize,

    /// Premise bound for quasi-compare
    #[arg(long, global = true, default_value_t = 2)]
    pub max_premises: usize,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Solution set T' of a system
    Solve,
    /// Closed congruence T'' of a system (empty system by default)
    Closure,
    /// Decide a quasi-identity by direct evaluation and by closure lookup
    Member,
    /// Lattice of algebraic sets and closed congruences
    Lattice,
    /// Ascending chain report for the closed-congruence lattice
    Acc,
    /// Geometric equivalence of two algebras
    Equiv,
    /// Check a quasi-identity in an algebra
    QuasiCheck,
    /// Compare bounded quasi-identities of two algebras
    QuasiCompare,
    /// Opposite algebra and the mirror transport check
    Opposite,
    /// Scalar twist and the closure bijection check
    Twist,
    /// Bounded slice of the category of algebraic sets
    Category,
    /// Hom-set duality on a category slice
    Duality,
    /// Check tau(rho(T)) = T for every congruence of W(X)
    TauRho,
    /// Action of an automorphism on closed congruences
    Alpha,
    /// Almost geometric equivalence of two algebras
    AlmostEquiv,
    /// Re-check the witnesses of a JSON report
    VerifyWitness {
        /// Report written by `--json`
        report: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_cap_exceeded() => 3,
            _ => 2,
        }
    }
}
