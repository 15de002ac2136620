//! Command-line front end for the `geocurrents` library.
//!
//! Every subcommand writes its whole output to a buffer first; the buffer goes
//! to standard output, or to `--out` through a temporary file and a rename, so
//! a failed run never leaves a partial file behind.

pub mod commands;
pub mod config;
pub mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use geocurrents::currents::CurrentError;
use geocurrents::exponents::ExponentError;
use geocurrents::group::GroupError;
use thiserror::Error;

pub use config::RunConfig;
pub use render::Figure;

/// Subcommands that accept a depth.
pub const SUBCOMMANDS: &[&str] = &["intersect", "dist", "exponent", "verify", "enumerate"];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("lift search did not converge: a crossing is charged to a tile beyond radius {0}")]
    Pruning(f64),
    #[error("{0}")]
    Failed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) => 2,
            CliError::Pruning(_) => 3,
            CliError::Failed(_) | CliError::Io(_) | CliError::Other(_) => 1,
        }
    }
}

impl From<CurrentError> for CliError {
    fn from(e: CurrentError) -> Self {
        match e {
            CurrentError::PruningNotConverged { radius } => CliError::Pruning(radius),
            CurrentError::Parse { .. } | CurrentError::NonPositiveWeight { .. } | CurrentError::EmptyCurrent => {
                CliError::Parse(e.to_string())
            }
            CurrentError::InvalidDepth => CliError::Usage(e.to_string()),
            CurrentError::Geometry(g) => CliError::Other(g.to_string()),
        }
    }
}

impl From<ExponentError> for CliError {
    fn from(e: ExponentError) -> Self {
        match e {
            ExponentError::Current(c) => c.into(),
            ExponentError::InvalidDepth | ExponentError::InvalidParameter(_) => CliError::Usage(e.to_string()),
            _ => CliError::Other(e.to_string()),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::InvalidLetter(_) | GroupError::IdentityClass => CliError::Parse(e.to_string()),
            GroupError::Io(io) => CliError::Io(io),
            _ => CliError::Other(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "geocurrents", version, about = "Geodesic currents on the genus-2 surface")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Maximum word length of the enumeration.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub depth: Option<u64>,
    /// Seed of the only random generator.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Element cache file, created when missing.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Position tolerance of the crossing predicates.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// `key = value` configuration file; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print `i(η, c)`.
    Intersect { current: PathBuf, word: String },
    /// Print `d_η(x, y)` for disk points written `re,im`.
    Dist {
        current: PathBuf,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Growth series, exponent estimates and their gap, as JSON lines.
    Exponent { current: PathBuf },
    /// Run every check and report pass or fail, as JSON lines.
    Verify {
        current: PathBuf,
        /// Random samples per sampled check.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Draw an SVG figure.
    Render {
        current: PathBuf,
        #[arg(value_enum)]
        what: Figure,
        /// Ball radius, or lift distance from the origin.
        #[arg(long)]
        radius: Option<f64>,
        /// Number of sample points of the ball.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// List group elements or conjugacy classes, as JSON lines.
    Enumerate {
        #[arg(value_enum, default_value = "elements")]
        what: commands::Listing,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Intersect { .. } => "intersect",
            Command::Dist { .. } => "dist",
            Command::Exponent { .. } => "exponent",
            Command::Verify { .. } => "verify",
            Command::Render { .. } => "render",
            Command::Enumerate { .. } => "enumerate",
        }
    }
}

/// The file configuration overlaid by the flags.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.global.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let g = &cli.global;
    if let Some(d) = g.depth {
        let d = usize::try_from(d).map_err(|_| CliError::Usage(format!("depth {d} is too large")))?;
        cfg.depths.clear();
        cfg.depths.insert(String::new(), d);
    }
    if let Some(s) = g.seed {
        cfg.seed = s;
    }
    if let Some(c) = &g.cache {
        cfg.cache = Some(c.clone());
    }
    if let Some(o) = &g.out {
        cfg.out = Some(o.clone());
    }
    if let Some(t) = g.tolerance {
        cfg.set("tolerance", &t.to_string())?;
    }
    match &cli.command {
        Command::Verify { samples: Some(n), .. } | Command::Render { samples: Some(n), .. } => cfg.samples = Some(*n),
        _ => {}
    }
    if let Command::Render { radius: Some(r), .. } = &cli.command {
        cfg.set("radius", &r.to_string())?;
    }
    Ok(cfg)
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

/// Parses `args` and runs the subcommand. Clap's own errors, including
/// `--help`, are returned untouched so the caller can print them.
pub fn run<I, T>(args: I) -> Result<Result<(), CliError>, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    Ok(execute(&cli))
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let cfg = resolve_config(cli)?;
    let outcome = commands::dispatch(&cli.command, &cfg)?;
    match &cfg.out {
        Some(path) => write_atomic(path, outcome.output.as_bytes())?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(outcome.output.as_bytes())?;
            stdout.flush()?;
        }
    }
    match outcome.failure {
        Some(msg) => Err(CliError::Failed(msg)),
        None => Ok(()),
    }
}
