//! The `unitrace` command line: JSON file formats, rayon drivers around the
//! core searches, property suites, and the report envelope.

pub mod commands;
pub mod formats;
pub mod parallel;
pub mod report;
pub mod suites;

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use unitrace_core::algebra::DEFAULT_EQUIV_BUDGET;
use unitrace_core::unitary::DEFAULT_NODE_BUDGET;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input.
    Input(String),
    Core(unitrace_core::Error),
    /// A suite or cross-check found a counterexample.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_budget() => EXIT_BUDGET,
            CliError::Core(e) if e.is_violation() => EXIT_VIOLATION,
            CliError::Failed(_) => EXIT_VIOLATION,
            _ => EXIT_USAGE,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            EXIT_BUDGET => "budget",
            EXIT_VIOLATION => "theorem-violation",
            _ => "usage",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Failed(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<unitrace_core::Error> for CliError {
    fn from(e: unitrace_core::Error) -> Self {
        CliError::Core(e)
    }
}

#[derive(Debug, Parser)]
#[command(name = "unitrace", version, about = "Unitary groups of group algebras and G-trace forms over GF(2^n)")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Args)]
pub struct RunConfig {
    /// Maximum search nodes for point enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    /// Maximum candidates per hermitian equivalence search.
    #[arg(long, global = true, default_value_t = DEFAULT_EQUIV_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    pub equiv_budget: u64,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,
    /// Branching variables fixed per parallel work item.
    #[arg(long, global = true, default_value_t = 2)]
    pub prefix_depth: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Add wall-clock time to the report (breaks byte-for-byte reproducibility).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derived sets of a group and the self-dual normal basis verdict.
    GroupInfo {
        #[arg(long)]
        group: PathBuf,
    },
    /// |U_G(F_q)| by exhaustive enumeration.
    Count {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        field: String,
    },
    /// Component-group bounds from point counts over several fields.
    Components {
        #[arg(long)]
        group: PathBuf,
        #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
        field: Vec<String>,
    },
    /// Hermitian elements: invariants, equivalence, classes.
    Herm {
        #[command(subcommand)]
        action: HermCommand,
    },
    /// Trace forms of Galois algebras.
    TraceForm(TraceFormArgs),
    /// Run a property suite (or `all`).
    Verify {
        suite: String,
        /// Random samples per context for sampled suites.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum HermCommand {
    /// h_ε and its class for every essential character.
    Invariants {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Exhaustive witness search, cross-checked with the invariant criterion.
    Equiv {
        #[arg(long)]
        lhs: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        /// Take E_G = 1 as given instead of bounding it by point counts.
        #[arg(long)]
        assume_eg_trivial: bool,
    },
    /// Partition all normalized special hermitians into classes.
    Classes {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        field: String,
        #[arg(long)]
        assume_eg_trivial: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TraceAction {
    Gram,
    Hermitian,
    Bna,
    Iso,
    Invariants,
    Construct732,
}

#[derive(Debug, Args)]
pub struct TraceFormArgs {
    pub action: TraceAction,
    #[arg(long, alias = "lhs")]
    pub alg: PathBuf,
    /// Second algebra for `iso`.
    #[arg(long)]
    pub rhs: Option<PathBuf>,
    /// Lift `s` of the Frobenius image for `construct732` (index or name).
    #[arg(long)]
    pub s: Option<String>,
}

/// Parses, runs and renders; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let jobs = cli.run.jobs.map_or_else(
        || std::thread::available_parallelism().map_or(1, |n| n.get()),
        |j| j as usize,
    );
    let pool = parallel::pool(jobs);
    let outcome = pool.install(|| commands::run(&cli));
    match outcome {
        Ok(out) => match commands::emit(&cli.run, &out.json) {
            Ok(()) => out.exit_code,
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_USAGE
            }
        },
        Err(e) => {
            let body = serde_json::json!({
                "tool": report::TOOL,
                "version": report::VERSION,
                "error": { "kind": e.kind(), "message": e.to_string(), "details": commands::error_details(&e) },
            });
            eprintln!("{}", serde_json::to_string_pretty(&body).expect("json"));
            e.exit_code()
        }
    }
}
