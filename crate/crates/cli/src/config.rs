//! Flag parsing and resolution into a [`RunConfig`].
//!
//! Precedence is flag, then `--config` file, then built-in defaults. The
//! seed additionally falls back to `WEHRL_SEED` when neither a flag nor the
//! config file sets it.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const SEED_ENV: &str = "WEHRL_SEED";
pub const DEFAULT_SAMPLES: usize = 100_000;
pub const DEFAULT_TRIALS: usize = 100;

#[derive(Debug, Parser)]
#[command(name = "wehrl", version, about = "Cloning-channel, majorization and Wehrl-entropy checks for SU(N) symmetric spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectrum of the cloning map applied to a state.
    Spectrum(Params),
    /// Compare cloned spectra of random states against the coherent one.
    Majorize(Params),
    /// Run named verification checks.
    Verify(Params),
    /// Wehrl-type entropy of a state and its gap to the coherent value.
    Entropy(Params),
    /// Finite-k traces against their large-k limit.
    LimitScan(Params),
}

impl Command {
    pub fn kind(&self) -> CommandKind {
        match self {
            Self::Spectrum(_) => CommandKind::Spectrum,
            Self::Majorize(_) => CommandKind::Majorize,
            Self::Verify(_) => CommandKind::Verify,
            Self::Entropy(_) => CommandKind::Entropy,
            Self::LimitScan(_) => CommandKind::LimitScan,
        }
    }

    pub fn params(&self) -> &Params {
        match self {
            Self::Spectrum(p) | Self::Majorize(p) | Self::Verify(p) | Self::Entropy(p) | Self::LimitScan(p) => p,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Spectrum,
    Majorize,
    Verify,
    Entropy,
    LimitScan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Every flag, optional so that the config file can fill gaps.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    /// Number of modes N.
    #[arg(long)]
    pub n: Option<usize>,
    /// Particle number M.
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of clones added, k.
    #[arg(long)]
    pub k: Option<usize>,
    /// Random inputs per check.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Monte Carlo sample count.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Concave function: entropy, power:P, kink:T, const:C or table:PATH.
    #[arg(long = "f")]
    pub f: Option<String>,
    /// Root seed (default: $WEHRL_SEED, then 0).
    #[arg(long)]
    pub seed: Option<u64>,
    /// coherent, mixed, random[:SEED], density[:SEED] or file:PATH.
    #[arg(long)]
    pub state: Option<String>,
    /// auto, closed-form or mc.
    #[arg(long)]
    pub method: Option<String>,
    /// Comma-separated checks: identity, gram, trace, resolution,
    /// berezin-lieb, irreducible, defect, or all.
    #[arg(long)]
    pub check: Option<String>,
    /// Override the pass threshold of the command.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Explicit list of k values for limit-scan.
    #[arg(long, value_delimiter = ',')]
    pub ks: Option<Vec<usize>>,
    /// Largest k of the geometric limit-scan grid 0, 1, 2, 4, ...
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Largest dense dimension allowed.
    #[arg(long)]
    pub max_dim: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// JSON file with any of the above keys; flags take precedence.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Present in saved run records; ignored on input.
    #[arg(skip)]
    pub command: Option<CommandKind>,
    #[arg(skip)]
    pub seed_source: Option<SeedSource>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeedSource {
    Flag,
    Config,
    Env,
    Default,
}

/// Fully resolved parameters, embedded in every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub trials: usize,
    pub samples: usize,
    pub f: String,
    pub seed: u64,
    pub seed_source: SeedSource,
    pub state: String,
    pub method: String,
    pub check: String,
    pub tol: Option<f64>,
    pub ks: Vec<usize>,
    pub max_dim: u64,
    pub format: Format,
    pub output: Option<PathBuf>,
}

/// Read a config file. A saved report (`{"config": {...}, "result": ...}`)
/// is accepted as well, so records can be re-run directly; its `output`
/// is dropped so a replay never overwrites the record it came from.
pub fn load_config_file(path: &Path) -> CliResult<Params> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("cannot read config {}: {e}", path.display())))?;
    let mut value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::validation(format!("config {} is not valid JSON: {e}", path.display())))?;
    if let Some(inner) = value.get_mut("config") {
        value = inner.take();
        if let Some(map) = value.as_object_mut() {
            map.remove("output");
        }
    }
    serde_json::from_value(value).map_err(|e| CliError::validation(format!("config {}: {e}", path.display())))
}

fn geometric_ks(k_max: usize) -> Vec<usize> {
    let mut ks = vec![0];
    let mut k = 1;
    while k <= k_max {
        ks.push(k);
        k = match k.checked_mul(2) {
            Some(next) => next,
            None => break,
        };
    }
    ks
}

/// Merge flags, config file and environment into a [`RunConfig`].
/// `env_seed` is the raw value of [`SEED_ENV`], if set.
pub fn resolve(kind: CommandKind, flags: &Params, env_seed: Option<&str>) -> CliResult<RunConfig> {
    let file = match &flags.config {
        Some(path) => load_config_file(path)?,
        None => Params::default(),
    };
    macro_rules! pick {
        ($field:ident) => {
            flags.$field.clone().or_else(|| file.$field.clone())
        };
    }
    let n = pick!(n).ok_or_else(|| CliError::validation("--n is required"))?;
    let m = pick!(m).ok_or_else(|| CliError::validation("--m is required"))?;
    if n == 0 {
        return Err(CliError::validation("--n must be at least 1"));
    }
    let (seed, seed_source) = match (flags.seed, file.seed, env_seed) {
        (Some(s), _, _) => (s, SeedSource::Flag),
        (None, Some(s), _) => (s, SeedSource::Config),
        (None, None, Some(raw)) => {
            let s = raw
                .trim()
                .parse()
                .map_err(|_| CliError::validation(format!("{SEED_ENV}={raw:?} is not an unsigned 64-bit integer")))?;
            (s, SeedSource::Env)
        }
        (None, None, None) => (0, SeedSource::Default),
    };
    let default_state = match kind {
        CommandKind::Majorize => "random",
        _ => "coherent",
    };
    let ks = match (pick!(ks), pick!(k_max)) {
        (Some(ks), _) => ks,
        (None, Some(k_max)) => geometric_ks(k_max),
        (None, None) => geometric_ks(512),
    };
    let tol = pick!(tol);
    if let Some(t) = tol {
        if !(t.is_finite() && t >= 0.0) {
            return Err(CliError::validation("--tol must be a finite non-negative number"));
        }
    }
    let method = pick!(method).unwrap_or_else(|| "auto".into());
    if !matches!(method.as_str(), "auto" | "closed-form" | "mc") {
        return Err(CliError::validation(format!("unknown method {method:?}; expected auto, closed-form or mc")));
    }
    let default_format = if kind == CommandKind::LimitScan { Format::Csv } else { Format::Json };
    Ok(RunConfig {
        command: kind,
        n,
        m,
        k: pick!(k).unwrap_or(1),
        trials: pick!(trials).unwrap_or(DEFAULT_TRIALS),
        samples: pick!(samples).unwrap_or(DEFAULT_SAMPLES),
        f: pick!(f).unwrap_or_else(|| "entropy".into()),
        seed,
        seed_source,
        state: pick!(state).unwrap_or_else(|| default_state.into()),
        method,
        check: pick!(check).unwrap_or_else(|| "all".into()),
        tol,
        ks,
        max_dim: pick!(max_dim).unwrap_or(wehrl_core::DEFAULT_MAX_DIM),
        format: pick!(format).unwrap_or(default_format),
        output: pick!(output),
    })
}
