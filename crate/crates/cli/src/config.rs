//! TOML configuration. Recognised keys: `workers`, `search.max_degree`,
//! `search.k_max`, `output_dir`, `mass_limit`, and `level.<ell>` for
//! default levels.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub workers: usize,
    pub max_degree: u64,
    pub k_max: u64,
    pub output_dir: Option<PathBuf>,
    pub mass_limit: u128,
    pub default_levels: BTreeMap<u64, u32>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            workers: 1,
            max_degree: 12,
            k_max: 24,
            output_dir: None,
            mass_limit: cyclounits::unitlattice::DEFAULT_MASS_LIMIT,
            default_levels: BTreeMap::from([(2, 3), (3, 2), (5, 2), (7, 2)]),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSearch {
    max_degree: Option<u64>,
    k_max: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    workers: Option<usize>,
    mass_limit: Option<u64>,
    output_dir: Option<PathBuf>,
    #[serde(default)]
    search: RawSearch,
    #[serde(default)]
    level: BTreeMap<String, u32>,
}

fn positive<T: PartialOrd + Default>(key: &str, x: T) -> Result<T, CliError> {
    if x <= T::default() {
        return Err(CliError::Usage(format!("{key} must be positive")));
    }
    Ok(x)
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, CliError> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))?;
        let mut cfg = Config::default();
        if let Some(w) = raw.workers {
            cfg.workers = positive("workers", w)?;
        }
        if let Some(d) = raw.search.max_degree {
            cfg.max_degree = positive("search.max_degree", d)?;
        }
        if let Some(k) = raw.search.k_max {
            cfg.k_max = positive("search.k_max", k)?;
        }
        if let Some(m) = raw.mass_limit {
            cfg.mass_limit = positive("mass_limit", m)? as u128;
        }
        cfg.output_dir = raw.output_dir.or(cfg.output_dir);
        for (ell, n) in raw.level {
            let ell: u64 = ell
                .parse()
                .map_err(|_| CliError::Usage(format!("level.{ell}: not an integer")))?;
            cfg.default_levels.insert(positive("level", ell)?, positive("level", n)?);
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Config, CliError> {
        Config::parse(&std::fs::read_to_string(path)?)
    }

    pub fn level_for(&self, ell: u64) -> Option<u32> {
        self.default_levels.get(&ell).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys() {
        let c = Config::parse("workers = 4\n# comment\nlevel.11 = 3\nsearch.k_max=10\n").unwrap();
        assert_eq!(c.workers, 4);
        assert_eq!(c.level_for(11), Some(3));
        assert_eq!(c.k_max, 10);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(Config::parse("workers = 0").is_err());
        assert!(Config::parse("colour = \"blue\"").is_err());
        assert!(Config::parse("level.x = 2").is_err());
        assert!(Config::parse("workers").is_err());
    }
}
