//! Run configuration: a `key = value` file overlaid by command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use geocurrents::currents::LiftSearch;
use geocurrents::hyperbolic::Tolerances;

use crate::CliError;

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_DEPTH: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    /// `depth` applies to every subcommand, `<subcommand>.depth` to one.
    pub depths: BTreeMap<String, usize>,
    pub cache: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub tolerances: Tolerances,
    pub radius: Option<f64>,
    pub samples: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            depths: BTreeMap::new(),
            cache: None,
            out: None,
            tolerances: Tolerances::default(),
            radius: None,
            samples: None,
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.parse().map_err(|_| CliError::Usage(format!("config key {key}: cannot parse {value:?}")))
}

fn positive(key: &str, value: f64) -> Result<f64, CliError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(CliError::Usage(format!("{key} must be positive, got {value}")))
    }
}

fn depth(key: &str, value: usize) -> Result<usize, CliError> {
    if value == 0 {
        Err(CliError::Usage(format!("{key} must be at least 1")))
    } else {
        Ok(value)
    }
}

impl RunConfig {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage(format!("config line {}: expected `key = value`", i + 1)));
            };
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "seed" => self.seed = parse_value(key, value)?,
            "cache" => self.cache = Some(PathBuf::from(value)),
            "out" => self.out = Some(PathBuf::from(value)),
            "tolerance" | "tolerance.position" => self.tolerances.position = positive(key, parse_value(key, value)?)?,
            "tolerance.angular" => self.tolerances.angular = positive(key, parse_value(key, value)?)?,
            "tolerance.transverse" => self.tolerances.transverse = positive(key, parse_value(key, value)?)?,
            "tolerance.trace" => self.tolerances.trace = positive(key, parse_value(key, value)?)?,
            "radius" => self.radius = Some(positive(key, parse_value(key, value)?)?),
            "samples" => self.samples = Some(parse_value(key, value)?),
            "depth" => {
                self.depths.insert(String::new(), depth(key, parse_value(key, value)?)?);
            }
            _ => match key.strip_suffix(".depth") {
                Some(cmd) if crate::SUBCOMMANDS.contains(&cmd) => {
                    self.depths.insert(cmd.to_string(), depth(key, parse_value(key, value)?)?);
                }
                _ => return Err(CliError::Usage(format!("unknown config key {key:?}"))),
            },
        }
        Ok(())
    }

    /// Depth for a subcommand: its own key, then the shared one, then the default.
    pub fn depth_for(&self, command: &str) -> usize {
        self.depths.get(command).or_else(|| self.depths.get("")).copied().unwrap_or(DEFAULT_DEPTH)
    }

    pub fn search(&self) -> LiftSearch {
        LiftSearch { tolerances: self.tolerances, ..LiftSearch::default() }
    }
}
