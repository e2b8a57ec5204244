use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;

use clap::ValueEnum;

/// Environment variable naming the default cache directory.
pub const CACHE_DIR_ENV: &str = "QRLAB_CACHE_DIR";
/// Cache directory used when neither the flag nor the variable is set.
pub const DEFAULT_CACHE_DIR: &str = ".qrlab-cache";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum)]
pub enum Pipeline {
    Wedge,
    Cutjoin,
    Toprec,
}

impl Pipeline {
    pub fn name(self) -> &'static str {
        match self {
            Pipeline::Wedge => "wedge",
            Pipeline::Cutjoin => "cutjoin",
            Pipeline::Toprec => "toprec",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug)]
pub struct JobConfig {
    pub q: u32,
    pub r: u32,
    pub g_max: u32,
    pub n_max: usize,
    pub degree: u32,
    pub pipelines: BTreeSet<Pipeline>,
    pub format: Format,
    pub cache_dir: PathBuf,
    pub timestamp: bool,
    /// Keys with `|μ|` up to this size are also checked against the
    /// symmetric-group enumeration. Zero disables the oracle.
    pub oracle_bound: usize,
}

#[derive(Debug, PartialEq, Eq)]
pub enum ConfigError {
    NonPositive(&'static str),
    NoPipeline,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::NonPositive(what) => write!(f, "{what} must be positive"),
            ConfigError::NoPipeline => write!(f, "at least one pipeline must be selected"),
        }
    }
}

impl std::error::Error for ConfigError {}

impl JobConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, v) in [("q", self.q as u64), ("r", self.r as u64), ("nmax", self.n_max as u64), ("degree", self.degree as u64)] {
            if v == 0 {
                return Err(ConfigError::NonPositive(name));
            }
        }
        if self.pipelines.is_empty() {
            return Err(ConfigError::NoPipeline);
        }
        Ok(())
    }
}

impl Default for JobConfig {
    fn default() -> Self {
        Self {
            q: 1,
            r: 1,
            g_max: 1,
            n_max: 3,
            degree: 6,
            pipelines: [Pipeline::Wedge, Pipeline::Cutjoin, Pipeline::Toprec].into(),
            format: Format::Json,
            cache_dir: PathBuf::from(DEFAULT_CACHE_DIR),
            timestamp: true,
            oracle_bound: 0,
        }
    }
}
