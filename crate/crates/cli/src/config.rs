//! Schedule configuration documents.
//!
//! ```json
//! {"name": "recip",
//!  "levels": {"kind": "range", "start": 3, "end": 2000},
//!  "pinch": {"rule": "reciprocal"}}
//! ```
//!
//! `levels.kind` is `range` (`start`, `end` inclusive, optional `step`) or
//! `explicit` (`values`). `pinch.rule` is `reciprocal`, `exponential` or
//! `superexponential` with an optional positive `scale`, or `explicit` with
//! `values`.

use std::path::Path;

use pinch_core::sequence::{PinchRule, Schedule};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Longest level list a config may expand to.
const MAX_LEVELS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleConfig {
    pub name: String,
    pub levels: LevelSpec,
    pub pinch: PinchSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LevelKind {
    Range,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelSpec {
    pub kind: LevelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleKind {
    Reciprocal,
    Exponential,
    Superexponential,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PinchSpec {
    pub rule: RuleKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl LevelSpec {
    fn expand(&self) -> Result<Vec<u64>, CliError> {
        match self.kind {
            LevelKind::Range => {
                if self.values.is_some() {
                    return Err(usage("levels.values: not allowed for kind `range`"));
                }
                let start = self.start.ok_or_else(|| usage("levels.start: required"))?;
                let end = self.end.ok_or_else(|| usage("levels.end: required"))?;
                let step = self.step.unwrap_or(1);
                if step == 0 {
                    return Err(usage("levels.step: must be at least 1"));
                }
                if end < start {
                    return Err(usage(format!("levels.end: {end} is below start {start}")));
                }
                if (end - start) / step >= MAX_LEVELS {
                    return Err(usage(format!("levels: more than {MAX_LEVELS} levels requested")));
                }
                Ok((start..=end).step_by(step as usize).collect())
            }
            LevelKind::Explicit => {
                if self.start.is_some() || self.end.is_some() || self.step.is_some() {
                    return Err(usage("levels: start/end/step are not allowed for kind `explicit`"));
                }
                self.values
                    .clone()
                    .ok_or_else(|| usage("levels.values: required for kind `explicit`"))
            }
        }
    }
}

impl PinchSpec {
    fn rule(&self) -> Result<PinchRule, CliError> {
        if self.rule == RuleKind::Explicit {
            if self.scale.is_some() {
                return Err(usage("pinch.scale: not allowed for rule `explicit`"));
            }
            let values = self
                .values
                .clone()
                .ok_or_else(|| usage("pinch.values: required for rule `explicit`"))?;
            return Ok(PinchRule::Explicit(values));
        }
        if self.values.is_some() {
            return Err(usage("pinch.values: only allowed for rule `explicit`"));
        }
        let scale = self.scale.unwrap_or(1.0);
        Ok(match self.rule {
            RuleKind::Reciprocal => PinchRule::Reciprocal { scale },
            RuleKind::Exponential => PinchRule::Exponential { scale },
            RuleKind::Superexponential => PinchRule::Superexponential { scale },
            RuleKind::Explicit => unreachable!(),
        })
    }
}

impl ScheduleConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::Usage(format!("config field `{path}`: {}", e.into_inner()))
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn schedule(&self) -> Result<Schedule, CliError> {
        let levels = self.levels.expand()?;
        Schedule::new(self.name.clone(), levels, self.pinch.rule()?)
            .map_err(|e| CliError::Usage(e.to_string()))
    }
}
