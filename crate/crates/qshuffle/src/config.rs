//! JSON configuration: the schema shared by the CLI.
//!
//! Rationals are written as integer or `"p/q"` strings (bare JSON
//! integers are also accepted). A process supplies either `drift` (the
//! compensated decomposition `X = drift·t + σW + J`) or `raw_drift`
//! (`X = raw_drift·t + σW + Σ Y_i` with uncompensated jumps, converted
//! at load). Schema violations are reported with field paths and never
//! reach library code; moment-sequence data is validated for positive
//! semidefiniteness here.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "processes": [
//!     { "name": "x1", "drift": "0", "sigma": "1" },
//!     { "name": "x2", "sigma": "0",
//!       "jumps": { "type": "finite_atoms", "rate": "2",
//!                  "atoms": [ { "size": "1",  "prob": "1/2" },
//!                             { "size": "-1", "prob": "1/2" } ] } }
//!   ],
//!   "max_grade": 6,
//!   "defaults": { "t": "1", "dt": "1/10000", "paths": 1000, "seed": 1 }
//! }
//! ```

use std::path::Path;

use num_traits::Zero;
use serde::Deserialize;
use thiserror::Error;

use crate::levy::{Atom, JumpLaw, LevySpec};
use crate::rational::{parse_rational, Rational};
use crate::teugels::gram_data;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid JSON in `{path}`: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { field: field.into(), message: message.into() }
}

/// Defaults for simulation parameters, overridable on the command line.
#[derive(Clone, Debug, PartialEq)]
pub struct RunDefaults {
    pub horizon: Rational,
    pub dt: Option<Rational>,
    pub paths: usize,
    pub seed: u64,
}

impl Default for RunDefaults {
    fn default() -> Self {
        RunDefaults {
            horizon: Rational::from_integer(1.into()),
            dt: None,
            paths: 1000,
            seed: 1,
        }
    }
}

/// A validated configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub schema_version: u32,
    pub processes: Vec<LevySpec>,
    pub max_grade: u32,
    pub defaults: RunDefaults,
}

impl Config {
    pub fn process_by_name(&self, name: &str) -> Option<&LevySpec> {
        self.processes.iter().find(|s| s.name == name)
    }
}

// Raw (lenient) input shape; strict validation happens afterwards so
// error messages can carry field paths.

#[derive(Deserialize)]
#[serde(untagged)]
enum RationalField {
    Text(String),
    Int(i64),
}

impl RationalField {
    fn parse(&self, field: &str) -> Result<Rational, ConfigError> {
        match self {
            RationalField::Int(n) => Ok(Rational::from_integer((*n).into())),
            RationalField::Text(s) => {
                parse_rational(s).map_err(|e| invalid(field, e.to_string()))
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    schema_version: Option<u32>,
    processes: Vec<RawProcess>,
    #[serde(default)]
    max_grade: Option<u32>,
    #[serde(default)]
    defaults: Option<RawDefaults>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProcess {
    name: String,
    #[serde(default)]
    drift: Option<RationalField>,
    #[serde(default)]
    raw_drift: Option<RationalField>,
    #[serde(default)]
    sigma: Option<RationalField>,
    #[serde(default)]
    jumps: Option<RawJumps>,
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum RawJumps {
    FiniteAtoms {
        rate: RationalField,
        atoms: Vec<RawAtom>,
    },
    MomentSequence {
        /// `alpha[0]` is `α_2`.
        alpha: Vec<RationalField>,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAtom {
    size: RationalField,
    prob: RationalField,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDefaults {
    #[serde(default)]
    t: Option<RationalField>,
    #[serde(default)]
    dt: Option<RationalField>,
    #[serde(default)]
    paths: Option<usize>,
    #[serde(default)]
    seed: Option<u64>,
}

/// Loads and validates a configuration file.
pub fn load_config(path: &Path) -> Result<Config, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text, &path.display().to_string())
}

/// Parses and validates configuration text; `origin` names the source in
/// error messages.
pub fn parse_config(text: &str, origin: &str) -> Result<Config, ConfigError> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|source| ConfigError::Parse {
        path: origin.to_string(),
        source,
    })?;

    let schema_version = raw.schema_version.unwrap_or(SCHEMA_VERSION);
    if schema_version != SCHEMA_VERSION {
        return Err(invalid(
            "schema_version",
            format!("unsupported version {schema_version}; this build reads {SCHEMA_VERSION}"),
        ));
    }
    if raw.processes.is_empty() {
        return Err(invalid("processes", "at least one process is required"));
    }

    let mut processes = Vec::with_capacity(raw.processes.len());
    for (i, p) in raw.processes.iter().enumerate() {
        let fp = |leaf: &str| format!("processes[{i}].{leaf}");
        let sigma = match &p.sigma {
            None => Rational::zero(),
            Some(s) => s.parse(&fp("sigma"))?,
        };
        let jumps = match &p.jumps {
            None => None,
            Some(RawJumps::FiniteAtoms { rate, atoms }) => {
                let rate = rate.parse(&fp("jumps.rate"))?;
                let mut parsed = Vec::with_capacity(atoms.len());
                for (j, a) in atoms.iter().enumerate() {
                    parsed.push(Atom {
                        size: a.size.parse(&format!("processes[{i}].jumps.atoms[{j}].size"))?,
                        prob: a.prob.parse(&format!("processes[{i}].jumps.atoms[{j}].prob"))?,
                    });
                }
                Some(JumpLaw::FiniteAtoms { rate, atoms: parsed })
            }
            Some(RawJumps::MomentSequence { alpha }) => {
                let mut parsed = Vec::with_capacity(alpha.len());
                for (j, a) in alpha.iter().enumerate() {
                    parsed.push(a.parse(&format!("processes[{i}].jumps.alpha[{j}]"))?);
                }
                Some(JumpLaw::MomentSequence { alpha: parsed })
            }
        };

        let drift = match (&p.drift, &p.raw_drift) {
            (Some(_), Some(_)) => {
                return Err(invalid(
                    fp("drift"),
                    "give either `drift` or `raw_drift`, not both",
                ))
            }
            (Some(d), None) => d.parse(&fp("drift"))?,
            (None, Some(b)) => {
                let raw_drift = b.parse(&fp("raw_drift"))?;
                match &jumps {
                    Some(JumpLaw::FiniteAtoms { rate, atoms }) => {
                        let mean: Rational = atoms.iter().map(|a| &a.size * &a.prob).sum();
                        raw_drift + rate * mean
                    }
                    Some(JumpLaw::MomentSequence { .. }) => {
                        return Err(invalid(
                            fp("raw_drift"),
                            "raw_drift needs a finite-atom jump law to convert; give `drift`",
                        ))
                    }
                    None => raw_drift,
                }
            }
            (None, None) => Rational::zero(),
        };

        let spec = LevySpec { name: p.name.clone(), drift, sigma, jumps };
        spec.validate()
            .map_err(|e| invalid(format!("processes[{i}]"), e.to_string()))?;

        // the moment-only route demands realizable (PSD, monotone
        // degenerate) moment data; reject inconsistent input at the boundary
        if let Some(JumpLaw::MomentSequence { alpha }) = &spec.jumps {
            let n_max = alpha.len().div_ceil(2);
            if n_max >= 1 {
                gram_data(&spec, n_max)
                    .map_err(|e| invalid(fp("jumps.alpha"), e.to_string()))?;
            }
        }

        for earlier in &processes {
            let earlier: &LevySpec = earlier;
            if earlier.name == spec.name {
                return Err(invalid(fp("name"), format!("duplicate name `{}`", spec.name)));
            }
        }
        processes.push(spec);
    }

    let max_grade = raw.max_grade.unwrap_or(6);
    if max_grade < 2 {
        return Err(invalid("max_grade", "must be at least 2"));
    }

    let mut defaults = RunDefaults::default();
    if let Some(d) = &raw.defaults {
        if let Some(t) = &d.t {
            defaults.horizon = t.parse("defaults.t")?;
            if !num_traits::Signed::is_positive(&defaults.horizon) {
                return Err(invalid("defaults.t", "horizon must be positive"));
            }
        }
        if let Some(dt) = &d.dt {
            let step = dt.parse("defaults.dt")?;
            if !num_traits::Signed::is_positive(&step) {
                return Err(invalid("defaults.dt", "grid step must be positive"));
            }
            defaults.dt = Some(step);
        }
        if let Some(paths) = d.paths {
            if paths == 0 {
                return Err(invalid("defaults.paths", "path count must be positive"));
            }
            defaults.paths = paths;
        }
        if let Some(seed) = d.seed {
            defaults.seed = seed;
        }
    }

    Ok(Config { schema_version, processes, max_grade, defaults })
}
