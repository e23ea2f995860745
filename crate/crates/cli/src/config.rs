//! Flat key=value configuration.
//!
//! Defaults live here; a config file (pointed at by `TCORES_CONFIG`, or
//! `./tcores.conf` when present) overrides them, and command-line flags
//! override both.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

/// Environment variable naming the config file.
pub const CONFIG_ENV: &str = "TCORES_CONFIG";

/// Config file picked up from the working directory when the environment
/// variable is unset.
pub const CONFIG_LOCAL: &str = "tcores.conf";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Settings {
    /// Default number of terms for `verify`.
    pub terms: u64,
    /// Default oracle comparison depth for `verify`.
    pub oracle_cap: u64,
    /// Enumeration budget of the combinatorial oracle.
    pub oracle_max: u64,
    /// Location of the expansion cache file.
    pub cache_file: PathBuf,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            terms: 500,
            oracle_cap: 25,
            oracle_max: 40,
            cache_file: PathBuf::from("tcores-cache.v1.txt"),
        }
    }
}

impl Settings {
    /// Resolve settings: explicit env-var path (must exist), else the local
    /// file (if present), else built-in defaults.
    pub fn load() -> Result<Self> {
        if let Ok(path) = std::env::var(CONFIG_ENV) {
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("cannot read config file {path} from ${CONFIG_ENV}"))?;
            return Self::parse(&text, &path);
        }
        if Path::new(CONFIG_LOCAL).exists() {
            let text = std::fs::read_to_string(CONFIG_LOCAL)
                .with_context(|| format!("cannot read {CONFIG_LOCAL}"))?;
            return Self::parse(&text, CONFIG_LOCAL);
        }
        Ok(Self::default())
    }

    fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut settings = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("{origin}:{}: expected key=value, got '{line}'", idx + 1);
            };
            let (key, value) = (key.trim(), value.trim());
            let parse_u64 = || -> Result<u64> {
                value
                    .parse()
                    .with_context(|| format!("{origin}:{}: bad value for {key}", idx + 1))
            };
            match key {
                "terms" => settings.terms = parse_u64()?,
                "oracle_cap" => settings.oracle_cap = parse_u64()?,
                "oracle_max" => settings.oracle_max = parse_u64()?,
                "cache_file" => settings.cache_file = PathBuf::from(value),
                _ => bail!("{origin}:{}: unknown key '{key}'", idx + 1),
            }
        }
        Ok(settings)
    }
}
