//! Run configuration: a flat TOML file plus `key=value` overrides.

use std::path::PathBuf;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use lwe_core::lwe::{LweParams, NoiseSpec, SecretSpec};
use lwe_core::reductions::{HintSource, Stage};

use crate::CliError;

/// Default smoothing slack.
pub const DEFAULT_EPS: f64 = 1.0 / (1u64 << 20) as f64;

/// A modulus given either as a TOML integer or as a decimal string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Modulus {
    Int(u64),
    Text(String),
}

impl Modulus {
    fn value(&self, field: &str) -> Result<BigUint, String> {
        match self {
            Modulus::Int(v) => Ok(BigUint::from(*v)),
            Modulus::Text(s) => s
                .parse()
                .map_err(|_| format!("field `{field}`: {s:?} is not a non-negative integer")),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub seed: Option<u64>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub q: Option<Modulus>,
    /// Shorthand for `noise = "gaussian:<alpha>"`.
    pub alpha: Option<f64>,
    pub noise: Option<String>,
    pub secret: Option<String>,
    pub bits: Option<u32>,
    /// Sample the uniform distribution instead of LWE.
    #[serde(default)]
    pub uniform: bool,
    #[serde(default)]
    pub first_errorless: bool,
    pub eps: Option<f64>,
    /// Batch or challenge file used as the input of `reduce` and `pipeline`.
    pub input: Option<PathBuf>,
    /// Smaller sample counts for `verify`.
    #[serde(default)]
    pub quick: bool,
    #[serde(default, rename = "stage", skip_serializing_if = "Vec::is_empty")]
    pub stages: Vec<StageConfig>,
}

/// One `[[stage]]` table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StageConfig {
    NormalForm {
        s: Option<f64>,
    },
    FirstErrorless {
        m: Option<usize>,
    },
    Extlwe {
        /// "random", "zero" or a comma-separated 0/1 list.
        z: Option<String>,
        r: Option<f64>,
    },
    MultiSecret {
        t: usize,
    },
    BinaryFromHints {
        gamma: Option<f64>,
    },
    BinaryFromLwe {
        n: usize,
        beta: f64,
    },
    BinaryZeroHint,
    PadDimension {
        alpha: f64,
    },
    ModSwitch {
        q_from: Option<Modulus>,
        q_to: Modulus,
        k: Option<usize>,
        r: Option<f64>,
        #[serde(rename = "B")]
        b_bound: f64,
        delta: Option<f64>,
    },
}

impl StageConfig {
    pub fn to_stage(&self) -> Result<Stage, String> {
        Ok(match self {
            StageConfig::NormalForm { s } => Stage::NormalForm { s: *s },
            StageConfig::FirstErrorless { m } => Stage::FirstErrorless { m: *m },
            StageConfig::Extlwe { z, r } => Stage::ExtLwe {
                z: match z.as_deref() {
                    None | Some("random") => HintSource::Random,
                    Some("zero") => HintSource::Zero,
                    Some(list) => HintSource::Fixed(
                        list.split(',')
                            .map(|x| match x.trim() {
                                "0" => Ok(0),
                                "1" => Ok(1),
                                o => Err(format!("field `z`: hint entries must be 0 or 1, got {o:?}")),
                            })
                            .collect::<Result<_, _>>()?,
                    ),
                },
                r: *r,
            },
            StageConfig::MultiSecret { t } => Stage::MultiSecret { t: *t },
            StageConfig::BinaryFromHints { gamma } => Stage::BinaryFromHints { gamma: *gamma },
            StageConfig::BinaryFromLwe { n, beta } => Stage::BinaryFromLwe { n: *n, beta: *beta },
            StageConfig::BinaryZeroHint => Stage::BinaryZeroHint,
            StageConfig::PadDimension { alpha } => Stage::PadDimension { alpha: *alpha },
            StageConfig::ModSwitch {
                q_from,
                q_to,
                k,
                r,
                b_bound,
                delta,
            } => Stage::ModSwitch {
                q_from: q_from.as_ref().map(|q| q.value("q_from")).transpose()?,
                q_to: q_to.value("q_to")?,
                k: k.unwrap_or(1),
                r: *r,
                b_bound: *b_bound,
                delta: delta.unwrap_or(0.0),
            },
        })
    }
}

/// 1-based line of the first `key = ...` assignment in `text`.
pub fn line_of(text: &str, key: &str) -> Option<usize> {
    text.lines()
        .position(|l| {
            let l = l.trim_start();
            l.strip_prefix(key)
                .is_some_and(|rest| rest.trim_start().starts_with('='))
        })
        .map(|i| i + 1)
}

/// Parsed configuration together with its source text, kept for messages
/// and for embedding in reports.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub config: Config,
    /// The effective configuration, overrides applied.
    pub source: String,
    /// The file as written, for line numbers.
    pub text: String,
}

impl Loaded {
    /// Reads `text` and applies `overrides` (`key=value`, the value parsed
    /// as a TOML literal when possible and as a string otherwise).
    pub fn parse(text: &str, overrides: &[String]) -> Result<Loaded, CliError> {
        let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| {
            let line = e.span().map(|s| text[..s.start].lines().count().max(1));
            CliError::Config(match line {
                Some(l) => format!("config line {l}: {}", e.message()),
                None => format!("config: {}", e.message()),
            })
        })?;
        for ov in overrides {
            let (k, v) = ov
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("override {ov:?} is not key=value")))?;
            let k = k.trim();
            let value = format!("v = {}", v.trim())
                .parse::<toml::Table>()
                .ok()
                .and_then(|mut t| t.remove("v"))
                .unwrap_or_else(|| toml::Value::String(v.trim().to_string()));
            table.insert(k.to_string(), value);
        }
        let source = toml::to_string(&table).map_err(|e| CliError::Config(e.to_string()))?;
        let config: Config = table.try_into().map_err(|e: toml::de::Error| {
            let msg = e.message().to_string();
            CliError::Config(locate(text, &msg))
        })?;
        Ok(Loaded {
            config,
            source,
            text: text.to_string(),
        })
    }

    pub fn seed(&self) -> Result<u64, CliError> {
        self.config
            .seed
            .ok_or_else(|| CliError::Config("field `seed` is required (set it or pass --seed)".into()))
    }

    pub fn eps(&self) -> f64 {
        self.config.eps.unwrap_or(DEFAULT_EPS)
    }

    fn need<T: Copy>(&self, v: Option<T>, field: &str) -> Result<T, CliError> {
        v.ok_or_else(|| CliError::Config(format!("field `{field}` is required")))
    }

    pub fn q(&self) -> Result<BigUint, CliError> {
        let q = self
            .config
            .q
            .as_ref()
            .ok_or_else(|| CliError::Config("field `q` is required".into()))?;
        q.value("q").map_err(CliError::Config)
    }

    pub fn noise(&self) -> Result<NoiseSpec, CliError> {
        match (&self.config.noise, self.config.alpha) {
            (Some(_), Some(_)) => Err(CliError::Config("set either `alpha` or `noise`, not both".into())),
            (Some(s), None) => s.parse().map_err(|e: lwe_core::Error| self.core_error(e)),
            (None, Some(a)) => {
                let spec = NoiseSpec::Gaussian(a);
                spec.validate().map_err(|e| self.core_error(e))?;
                Ok(spec)
            }
            (None, None) => Err(CliError::Config("field `alpha` (or `noise`) is required".into())),
        }
    }

    pub fn secret(&self) -> Result<SecretSpec, CliError> {
        match &self.config.secret {
            None => Ok(SecretSpec::UniformModQ),
            Some(s) => s.parse().map_err(|e: lwe_core::Error| self.core_error(e)),
        }
    }

    pub fn params(&self) -> Result<LweParams, CliError> {
        let n = self.need(self.config.n, "n")?;
        let m = self.need(self.config.m, "m")?;
        let q = self.q()?;
        let noise = self.noise()?;
        let p = match self.config.bits {
            Some(b) => LweParams::with_precision(n, m, q, noise, b),
            None => LweParams::new(n, m, q, noise),
        };
        p.map_err(|e| self.core_error(e))
    }

    pub fn stages(&self) -> Result<Vec<Stage>, CliError> {
        self.config
            .stages
            .iter()
            .enumerate()
            .map(|(i, s)| s.to_stage().map_err(|e| CliError::Config(format!("stage {i}: {e}"))))
            .collect()
    }

    /// Maps a parameter error onto the config field (and its line) it names.
    pub fn core_error(&self, e: lwe_core::Error) -> CliError {
        match &e {
            lwe_core::Error::Parameter { field, reason } => {
                let key = match *field {
                    "alpha" if self.config.noise.is_some() => "noise",
                    f => f,
                };
                CliError::Config(match line_of(&self.text, key) {
                    Some(l) => format!("field `{key}` (line {l}): {reason}"),
                    None => format!("field `{key}`: {reason}"),
                })
            }
            lwe_core::Error::Chain { .. } | lwe_core::Error::Parse { .. } => CliError::Config(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

/// Adds the line of the offending key to a deserialization message when the
/// message names one in backticks.
fn locate(text: &str, msg: &str) -> String {
    let key = msg.split('`').nth(1);
    match key.and_then(|k| line_of(text, k).map(|l| (k, l))) {
        Some((_, l)) => format!("config line {l}: {msg}"),
        None => format!("config: {msg}"),
    }
}
