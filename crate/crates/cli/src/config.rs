//! Flat `key = value` config files and flag/config parameter resolution.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::error::CliError;
use crate::manifest::Manifest;

/// Parsed config file: keys in kebab-case, values as raw strings.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| {
            CliError::Core(kdescan::Error::Io {
                path: path.to_path_buf(),
                source,
            })
        })?;
        Self::parse(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
    }

    /// `#` starts a comment; blank lines are skipped; duplicate keys are an error.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected `key = value`", lineno + 1))?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(format!("line {}: empty key", lineno + 1));
            }
            if entries.insert(key.to_string(), value.to_string()).is_some() {
                return Err(format!("line {}: duplicate key {key:?}", lineno + 1));
            }
        }
        Ok(Self { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

/// Resolves each parameter from its flag, then the config file, then a
/// default, and records the resolved value in the run manifest.
pub struct Resolver {
    command: &'static str,
    config: Config,
    used: Vec<String>,
    pub manifest: Manifest,
}

impl Resolver {
    pub fn new(command: &'static str, config_path: Option<&Path>) -> Result<Self, CliError> {
        let config = match config_path {
            Some(p) => Config::load(p)?,
            None => Config::default(),
        };
        if let Some(c) = config.get("command") {
            if c != command {
                return Err(CliError::usage(format!(
                    "config was written for `{c}`, not `{command}`"
                )));
            }
        }
        Ok(Self {
            command,
            config,
            used: Vec::new(),
            manifest: Manifest::new(command),
        })
    }

    fn from_config<T>(&mut self, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.used.push(key.to_string());
        self.config
            .get(key)
            .map(|raw| {
                raw.parse::<T>()
                    .map_err(|e| CliError::usage(format!("config key {key}: invalid value {raw:?}: {e}")))
            })
            .transpose()
    }

    pub fn optional<T>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>, CliError>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let from_config = self.from_config(key)?;
        let value = flag.or(from_config);
        if let Some(v) = &value {
            self.manifest.param(key, v);
        }
        Ok(value)
    }

    pub fn value<T>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T, CliError>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let value = match flag {
            Some(v) => v,
            None => self.from_config(key)?.unwrap_or(default),
        };
        self.used.push(key.to_string());
        self.manifest.param(key, &value);
        Ok(value)
    }

    pub fn required<T>(&mut self, key: &str, flag: Option<T>) -> Result<T, CliError>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        self.optional(key, flag)?.ok_or_else(|| {
            CliError::usage(format!("`{}` needs --{key} (or `{key}` in the config file)", self.command))
        })
    }

    /// Rejects config keys that no resolved parameter consumed.
    pub fn finish(&self) -> Result<(), CliError> {
        let informational = |k: &str| k == "command" || k == "version" || k.starts_with("sha256.");
        match self
            .config
            .keys()
            .find(|k| !informational(k) && !self.used.iter().any(|u| u == k))
        {
            Some(k) => Err(CliError::usage(format!("unknown config key {k:?} for `{}`", self.command))),
            None => Ok(()),
        }
    }
}
