use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hurwitz_lab::cache::Cache;
use hurwitz_lab::commands;
use hurwitz_lab::config::{Format, JobConfig, Pipeline, CACHE_DIR_ENV, DEFAULT_CACHE_DIR};
use hurwitz_lab::report::Report;

#[derive(Parser)]
#[command(name = "qrlab", version, about = "Exact q-orbifold r-spin Hurwitz numbers and their cross-checks")]
struct Cli {
    #[arg(long, global = true, default_value_t = 1)]
    q: u32,
    #[arg(long, global = true, default_value_t = 1)]
    r: u32,
    #[arg(long, global = true, default_value_t = 1)]
    gmax: u32,
    #[arg(long, global = true, default_value_t = 3)]
    nmax: usize,
    /// Bound on |μ| (hurwitz) or on each part of μ (elsv03).
    #[arg(long, global = true, default_value_t = 6)]
    degree: u32,
    /// Comma-separated subset of wedge, cutjoin, toprec.
    #[arg(long, global = true, default_value = "wedge,cutjoin,toprec")]
    pipelines: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, env = CACHE_DIR_ENV, default_value = DEFAULT_CACHE_DIR)]
    cache_dir: PathBuf,
    /// Leave the generation time out of the report.
    #[arg(long, global = true)]
    no_timestamp: bool,
    /// Also compare keys with |μ| up to this bound with the symmetric-group
    /// enumeration (0 disables it).
    #[arg(long, global = true, default_value_t = 0)]
    oracle_bound: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Connected Hurwitz numbers on the key box, one row per key.
    Hurwitz,
    /// Linear, quadratic and extended loop equations and the projection property.
    Loopcheck,
    /// Coefficients of the completed cycles up to the given order.
    CompletedCycles {
        #[arg(long, default_value_t = 5)]
        n: u32,
    },
    /// The (0,3) ELSV formula against the wedge numbers.
    Elsv03,
    /// Inspect or empty the correlator cache.
    Cache {
        #[arg(value_enum)]
        action: CacheAction,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CacheAction {
    Verify,
    Clear,
}

fn config(cli: &Cli) -> Result<JobConfig, String> {
    let mut pipelines = BTreeSet::new();
    for name in cli.pipelines.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        pipelines.insert(Pipeline::from_str(name, true).map_err(|_| format!("unknown pipeline {name:?}"))?);
    }
    let cfg = JobConfig {
        q: cli.q,
        r: cli.r,
        g_max: cli.gmax,
        n_max: cli.nmax,
        degree: cli.degree,
        pipelines,
        format: cli.format,
        cache_dir: cli.cache_dir.clone(),
        timestamp: !cli.no_timestamp,
        oracle_bound: cli.oracle_bound,
    };
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn run(cli: &Cli, cfg: &JobConfig) -> anyhow::Result<Report> {
    match &cli.command {
        Command::Hurwitz => commands::hurwitz(cfg),
        Command::Loopcheck => commands::loopcheck(cfg),
        Command::CompletedCycles { n } => commands::completed_cycles(*n, cfg.timestamp),
        Command::Elsv03 => commands::elsv03(cfg),
        Command::Cache { action } => {
            let cache = Cache::new(&cfg.cache_dir);
            match action {
                CacheAction::Verify => commands::cache_verify(&cache, cfg.timestamp),
                CacheAction::Clear => commands::cache_clear(&cache, cfg.timestamp),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("qrlab: configuration error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match run(&cli, &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("qrlab: {e:#}");
            return ExitCode::from(3);
        }
    };
    let text = match cfg.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    match text {
        Ok(t) => print!("{t}"),
        Err(e) => {
            eprintln!("qrlab: {e:#}");
            return ExitCode::from(3);
        }
    }
    for row in &report.rows {
        for c in row.checks.iter().filter(|c| !c.passed) {
            eprintln!("FAILED {} [{}]: {}", c.name, row.describe_key(), c.detail.as_deref().unwrap_or(""));
        }
    }
    if let Some((row, check)) = report.first_failure() {
        eprintln!("qrlab: first failure: {} at {}", check.name, row.describe_key());
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
