//! Command implementations for the `sconv` binary.
//!
//! Exit code contract: 0 success, 1 invariant or verification failure,
//! 2 input/parse error, 3 enumeration budget or size limit exceeded.

use std::fmt;
use std::io::Read;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sconv::bijection::BijectionError;
use sconv::crosscheck::CrosscheckError;
use sconv::digraph::{Multidigraph, ParseError};
use sconv::enumerate::{EnumError, EnumOptions};
use sconv::generate::GenError;

pub mod commands;
pub mod json;
pub mod render;

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(
    name = "sconv",
    version,
    about = "Exact counting and explicit bijections for convergences in balanced multidigraphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct CommonArgs {
    /// Input graph file, or `-` for standard input
    #[arg(long, default_value = "-")]
    pub input: String,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Worker threads for enumeration
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Visited-node budget; enumeration refuses inputs whose work estimate
    /// exceeds it
    #[arg(long)]
    pub budget: Option<u64>,
}

impl CommonArgs {
    pub fn enum_options(&self) -> EnumOptions {
        EnumOptions {
            workers: self.workers.max(1),
            budget: self.budget.unwrap_or(sconv::enumerate::DEFAULT_BUDGET),
            prefix_depth: 8,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count the k-arc convergences of every vertex and print the table
    Gamma {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the full invariant suite against the input digraph
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Corrupt the crossing bijection first (negative-path testing)
        #[arg(long, hide = true)]
        sabotage_beta: bool,
    },
    /// Map the s-convergences of size k bijectively onto the t-convergences
    Bijection {
        #[command(flatten)]
        common: CommonArgs,
        /// Source vertex id (s)
        #[arg(long)]
        from: String,
        /// Target vertex id (t)
        #[arg(long)]
        to: String,
        /// Subset size k
        #[arg(long)]
        k: usize,
        /// Include the full involution trace per pair
        #[arg(long)]
        trace: bool,
    },
    /// Generate a random balanced digraph on standard output
    Gen {
        /// Number of vertices
        #[arg(long, default_value_t = 6)]
        vertices: usize,
        /// Number of random closed walks to superpose
        #[arg(long, default_value_t = 3)]
        circuits: usize,
        /// Maximum walk length
        #[arg(long = "max-len", default_value_t = 4)]
        max_len: usize,
        /// Seed for the SplitMix64 generator
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare the enumeration against the independent oracles
    Crosscheck {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Maximum acyclic subset size and minimum feedback arc set counts
    Maxacyclic {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug)]
pub enum CliError {
    Io(std::io::Error),
    Parse(ParseError),
    Enum(EnumError),
    Bijection(BijectionError),
    Crosscheck(CrosscheckError),
    Gen(GenError),
    UnknownVertex(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Parse(e) => write!(f, "{e}"),
            CliError::Enum(e) => write!(f, "{e}"),
            CliError::Bijection(e) => write!(f, "{e}"),
            CliError::Crosscheck(e) => write!(f, "{e}"),
            CliError::Gen(e) => write!(f, "{e}"),
            CliError::UnknownVertex(id) => write!(f, "unknown vertex id `{id}`"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_)
            | CliError::Parse(_)
            | CliError::Gen(_)
            | CliError::UnknownVertex(_) => EXIT_INPUT,
            CliError::Enum(EnumError::BudgetExceeded { .. }) => EXIT_BUDGET,
            CliError::Crosscheck(CrosscheckError::SizeLimit { .. }) => EXIT_BUDGET,
            _ => EXIT_FAILURE,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e)
    }
}

impl From<EnumError> for CliError {
    fn from(e: EnumError) -> Self {
        CliError::Enum(e)
    }
}

impl From<BijectionError> for CliError {
    fn from(e: BijectionError) -> Self {
        CliError::Bijection(e)
    }
}

impl From<CrosscheckError> for CliError {
    fn from(e: CrosscheckError) -> Self {
        CliError::Crosscheck(e)
    }
}

impl From<GenError> for CliError {
    fn from(e: GenError) -> Self {
        CliError::Gen(e)
    }
}

pub fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

pub fn parse_digraph_input(common: &CommonArgs) -> Result<Multidigraph, CliError> {
    Ok(Multidigraph::parse(&read_input(&common.input)?)?)
}

pub fn vertex(d: &Multidigraph, id: &str) -> Result<usize, CliError> {
    d.vertex_index(id)
        .ok_or_else(|| CliError::UnknownVertex(id.to_string()))
}

/// Run one parsed command; the returned integer is the process exit code.
pub fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Gamma { common } => commands::gamma(&common),
        Command::Verify {
            common,
            sabotage_beta,
        } => commands::verify(&common, sabotage_beta),
        Command::Bijection {
            common,
            from,
            to,
            k,
            trace,
        } => commands::bijection(&common, &from, &to, k, trace),
        Command::Gen {
            vertices,
            circuits,
            max_len,
            seed,
        } => commands::gen(vertices, circuits, max_len, seed),
        Command::Crosscheck { common } => commands::crosscheck(&common),
        Command::Maxacyclic { common } => commands::maxacyclic(&common),
    }
}
