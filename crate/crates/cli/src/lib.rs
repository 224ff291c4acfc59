//! The `qstar` command line.
//!
//! Everything lives behind [`run`] so tests can drive the tool in-process.
//! Exit codes: 0 success, 1 usage error, 2 validation or solver error.

mod commands;
mod documents;

use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

pub use documents::{EvalDocument, EvalState, McCheck, McCheckDocument, ValidateDocument};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qstar", version, about = "Exact MDP solver and environment-design explorer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check an MDP document (or preset) against the model rules
    Validate {
        /// MDP document; same as --mdp
        path: Option<PathBuf>,
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
    },
    /// Optimal action values and optimal action sets
    Solve {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
    },
    /// Action values of a fixed deterministic policy
    Eval {
        #[command(flatten)]
        source: Source,
        /// One action label per state
        #[arg(long, value_delimiter = ',', required = true)]
        actions: Vec<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Grid of exact solves over one parameter
    Sweep1d(SweepArgs),
    /// Grid of exact solves over two parameters
    Sweep2d(SweepArgs),
    /// Optimal-policy regions of a one- or two-parameter sweep
    Regions {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Classify a single state instead of the joint policy
        #[arg(long)]
        state: Option<String>,
    },
    /// Parameter value where two actions swap optimality
    Boundary(BoundaryArgs),
    /// Bundled experiment presets
    Presets {
        #[command(flatten)]
        output: Output,
    },
    /// Transition graph in Graphviz DOT
    Graph {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
    },
    /// Monte Carlo returns against exact policy evaluation
    McCheck(McCheckArgs),
    /// HTTP API (and static UI files, if given)
    Serve {
        #[arg(long, default_value_t = qstar_server::DEFAULT_PORT)]
        port: u16,
        /// Directory served at `/`
        #[arg(long = "static", value_name = "DIR")]
        static_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct Source {
    /// Bundled preset: exp1, exp2, exp3 or exp4
    #[arg(long, conflicts_with = "mdp")]
    preset: Option<String>,
    /// MDP document (JSON)
    #[arg(long, value_name = "PATH")]
    mdp: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Debug, Args)]
struct Overrides {
    /// Parameter override, repeatable: --set r_wait=0.5
    #[arg(long = "set", value_name = "K=V", value_parser = parse_override)]
    set: Vec<(String, f64)>,
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the document here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    preset: String,
    #[command(flatten)]
    overrides: Overrides,
    /// Swept parameter(s); defaults to the preset's
    #[arg(long, value_delimiter = ',')]
    param: Vec<String>,
    /// LO,HI per axis; defaults to the preset's ranges
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    range: Vec<f64>,
    /// Grid points per axis: N or N,M
    #[arg(long, value_delimiter = ',')]
    steps: Vec<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct BoundaryArgs {
    #[arg(long)]
    preset: String,
    #[command(flatten)]
    overrides: Overrides,
    /// Parameter to vary; defaults to the preset's single swept parameter
    #[arg(long)]
    param: Option<String>,
    #[arg(long)]
    state: String,
    /// The two competing actions: A,B
    #[arg(long, value_delimiter = ',', required = true)]
    actions: Vec<String>,
    /// LO,HI search interval; defaults to the preset's range
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    range: Vec<f64>,
    #[arg(long, default_value_t = qstar_core::sweep::DEFAULT_BOUNDARY_TOL)]
    tol: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct McCheckArgs {
    #[command(flatten)]
    source: Source,
    /// Only pairs of this state
    #[arg(long)]
    state: Option<String>,
    /// Policy to follow, one action per state; defaults to an optimal one
    #[arg(long, value_delimiter = ',')]
    actions: Vec<String>,
    #[arg(long, default_value_t = 100_000)]
    episodes: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Dot => "dot",
            Format::Text => "text",
        })
    }
}

fn parse_override(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected K=V, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("`{v}` is not a number"))?;
    Ok((k.trim().to_string(), v))
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Core(qstar_core::Error),
    Io(String),
}

impl From<qstar_core::Error> for Failure {
    fn from(e: qstar_core::Error) -> Self {
        Failure::Core(e)
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match commands::execute(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_FAILURE
        }
        Err(Failure::Core(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_FAILURE
        }
    }
}
