//! `key=value` analysis configs, with command-line overrides layered on top.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use k3walls_core::{Constraint, MukaiClass, Rat, RatInterval};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown command `{0}` (expected one of: {list})", list = Command::NAMES.join(", "))]
    UnknownCommand(String),
    #[error("{key}: {msg}")]
    Malformed { key: String, msg: String },
    #[error("missing required field `{field}` for command `{command}`")]
    MissingField { command: Command, field: &'static str },
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("unsupported output format `{0}` (expected text, json or svg)")]
    UnsupportedFormat(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn malformed(key: &str, msg: impl Into<String>) -> ConfigError {
    ConfigError::Malformed {
        key: key.to_string(),
        msg: msg.into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Walls,
    Path,
    GiesekerBound,
    NefDivisor,
    HilbNef,
    Lagrangian,
    IsGeometric,
    SphericalSolve,
    Classify,
}

impl Command {
    pub const NAMES: [&'static str; 9] = [
        "walls",
        "path",
        "gieseker-bound",
        "nef-divisor",
        "hilb-nef",
        "lagrangian",
        "is-geometric",
        "spherical-solve",
        "classify",
    ];

    const ALL: [Command; 9] = [
        Command::Walls,
        Command::Path,
        Command::GiesekerBound,
        Command::NefDivisor,
        Command::HilbNef,
        Command::Lagrangian,
        Command::IsGeometric,
        Command::SphericalSolve,
        Command::Classify,
    ];

    pub fn name(self) -> &'static str {
        Command::NAMES[Command::ALL.iter().position(|c| *c == self).unwrap()]
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Command::NAMES
            .iter()
            .position(|n| *n == s.trim())
            .map(|i| Command::ALL[i])
            .ok_or_else(|| ConfigError::UnknownCommand(s.trim().to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Svg,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Text => "txt",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

impl FromStr for Format {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s.trim() {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(ConfigError::UnsupportedFormat(other.to_string())),
        }
    }
}

/// Everything a run needs. Every field except `command` is optional here;
/// which ones are required depends on the command and is checked by
/// [`AnalysisConfig::require`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub command: Command,
    pub d: Option<i64>,
    pub vector: Option<MukaiClass>,
    pub b: Option<Rat>,
    #[serde(rename = "T")]
    pub t_sq: Option<Rat>,
    pub n: Option<i64>,
    pub b_range: Option<RatInterval>,
    #[serde(rename = "T_range")]
    pub t_range: Option<RatInterval>,
    pub rank_bound: Option<u32>,
    pub constraints: Vec<Constraint>,
    pub formats: Vec<Format>,
    pub out: Option<String>,
}

impl AnalysisConfig {
    pub fn new(command: Command) -> Self {
        AnalysisConfig {
            command,
            d: None,
            vector: None,
            b: None,
            t_sq: None,
            n: None,
            b_range: None,
            t_range: None,
            rank_bound: None,
            constraints: Vec::new(),
            formats: Vec::new(),
            out: None,
        }
    }

    /// Parses a `key = value` file. Blank lines and `#` comments are ignored.
    /// A `command` key is optional when the command comes from the command
    /// line.
    pub fn parse(text: &str, command: Option<Command>) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: i + 1,
                text: raw.to_string(),
            })?;
            entries.insert(key.trim().to_string(), value.trim().to_string());
        }
        let command = match (command, entries.remove("command")) {
            (Some(c), _) => c,
            (None, Some(name)) => name.parse()?,
            (None, None) => return Err(malformed("command", "no command given")),
        };
        let mut config = AnalysisConfig::new(command);
        for (key, value) in &entries {
            config.set(key, value)?;
        }
        Ok(config)
    }

    /// Sets one field from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "d" => self.d = Some(parse_int(key, value)?),
            "n" => self.n = Some(parse_int(key, value)?),
            "vector" => self.vector = Some(parse_vector(key, value)?),
            "b" => self.b = Some(parse_rat(key, value)?),
            "T" => self.t_sq = Some(parse_rat(key, value)?),
            "b_range" => self.b_range = Some(parse_interval(key, value)?),
            "T_range" => self.t_range = Some(parse_interval(key, value)?),
            "rank_bound" => {
                let bound: u32 = value
                    .trim()
                    .parse()
                    .map_err(|_| malformed(key, format!("`{value}` is not a positive integer")))?;
                if bound == 0 {
                    return Err(malformed(key, "must be positive"));
                }
                self.rank_bound = Some(bound);
            }
            "constraints" => self.constraints = parse_constraints(key, value)?,
            "formats" | "format" => {
                self.formats = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(str::parse)
                    .collect::<Result<_, _>>()?;
            }
            "out" => self.out = Some(value.trim().to_string()),
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    pub fn require<'a, T>(&self, field: &'static str, value: &'a Option<T>) -> Result<&'a T, ConfigError> {
        value.as_ref().ok_or(ConfigError::MissingField {
            command: self.command,
            field,
        })
    }

    pub fn formats_or_default(&self) -> Vec<Format> {
        if self.formats.is_empty() {
            vec![Format::Text]
        } else {
            self.formats.clone()
        }
    }
}

fn parse_int(key: &str, value: &str) -> Result<i64, ConfigError> {
    value
        .trim()
        .parse()
        .map_err(|_| malformed(key, format!("`{value}` is not an integer")))
}

pub fn parse_rat(key: &str, value: &str) -> Result<Rat, ConfigError> {
    value
        .trim()
        .trim_matches('"')
        .parse()
        .map_err(|e: k3walls_core::ParseRatError| malformed(key, e.to_string()))
}

/// `r,c,s`, optionally wrapped in brackets or parentheses.
pub fn parse_vector(key: &str, value: &str) -> Result<MukaiClass, ConfigError> {
    let inner = value
        .trim()
        .trim_start_matches(['[', '('])
        .trim_end_matches([']', ')']);
    let parts: Vec<&str> = inner.split(',').collect();
    if parts.len() != 3 {
        return Err(malformed(key, format!("`{value}` needs exactly three components r,c,s")));
    }
    Ok(MukaiClass::new(
        parse_rat(key, parts[0])?,
        parse_rat(key, parts[1])?,
        parse_rat(key, parts[2])?,
    ))
}

fn parse_interval(key: &str, value: &str) -> Result<RatInterval, ConfigError> {
    let iv: RatInterval = value.parse().map_err(|e: k3walls_core::Error| malformed(key, e.to_string()))?;
    if iv.is_empty() {
        return Err(malformed(key, format!("interval `{value}` is empty")));
    }
    Ok(iv)
}

/// `r,c,s = a; r,c,s = a; ...`, each meaning `((r,c,s), ξ) = a`.
fn parse_constraints(key: &str, value: &str) -> Result<Vec<Constraint>, ConfigError> {
    value
        .split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let (lhs, rhs) = item
                .split_once('=')
                .ok_or_else(|| malformed(key, format!("`{item}` should read `r,c,s = value`")))?;
            Ok(Constraint::new(parse_vector(key, lhs)?, parse_rat(key, rhs)?))
        })
        .collect()
}
