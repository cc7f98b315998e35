//! Layered run configuration: built-in defaults, then an optional TOML file
//! (from `--config` or the `CPSG_CONFIG` environment variable), then
//! command-line flags.

use crate::error::CliError;
use num_complex::Complex64;
use serde::Deserialize;
use std::path::{Path, PathBuf};

pub const ENV_CONFIG: &str = "CPSG_CONFIG";

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub order: Option<usize>,
    pub trials: Option<usize>,
    pub length: Option<usize>,
    pub rows: Option<usize>,
    pub steps: Option<usize>,
    pub count: Option<usize>,
    pub regime: Option<String>,
    pub format: Option<String>,
    pub timestamp: Option<bool>,
    pub sign_lambda: Option<String>,
    pub sign_mu: Option<String>,
    pub coupling: Option<String>,
}

impl FileConfig {
    /// Loads the file named by the flag, else by the environment variable,
    /// else returns defaults.
    pub fn load(flag_path: Option<&Path>) -> Result<Self, CliError> {
        let path: Option<PathBuf> = match flag_path {
            Some(p) => Some(p.to_path_buf()),
            None => std::env::var_os(ENV_CONFIG).map(PathBuf::from),
        };
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(&path).map_err(|e| {
            CliError::Config(format!("cannot read {}: {e}", path.display()))
        })?;
        toml::from_str(&text)
            .map_err(|e| CliError::Config(format!("cannot parse {}: {e}", path.display())))
    }
}

pub fn parse_regime(text: &str) -> Result<cpsg_core::curve::Regime, CliError> {
    match text {
        "real" => Ok(cpsg_core::curve::Regime::RealBranchSafe),
        "generic" => Ok(cpsg_core::curve::Regime::Generic),
        other => Err(CliError::Config(format!(
            "regime must be \"real\" or \"generic\", got \"{other}\""
        ))),
    }
}

pub fn parse_sign(text: &str) -> Result<cpsg_core::correspondence::Sign, CliError> {
    match text {
        "plus" => Ok(cpsg_core::correspondence::Sign::Plus),
        "minus" => Ok(cpsg_core::correspondence::Sign::Minus),
        other => Err(CliError::Config(format!(
            "sign must be \"plus\" or \"minus\", got \"{other}\""
        ))),
    }
}

pub fn parse_coupling(text: &str) -> Result<Complex64, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Config(format!(
            "coupling must be \"re,im\", got \"{text}\""
        )));
    }
    let re: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|e| CliError::Config(format!("bad coupling real part: {e}")))?;
    let im: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|e| CliError::Config(format!("bad coupling imaginary part: {e}")))?;
    Ok(Complex64::new(re, im))
}
