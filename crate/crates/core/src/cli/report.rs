use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use super::{CliError, RunConfig};
use crate::qstate::TOLERANCE;
use crate::security::SweepRow;

pub const SCHEMA_VERSION: u32 = 1;

/// One named pass/fail check. When the quantity has a closed form the
/// report carries both the closed-form and the state-level value.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state_level: Option<f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, Value>,
}

impl Check {
    /// `state_level` must reproduce `closed_form` within the tolerance.
    pub fn pair(name: impl Into<String>, closed_form: f64, state_level: f64) -> Self {
        Self {
            name: name.into(),
            pass: (closed_form - state_level).abs() <= TOLERANCE,
            closed_form: Some(closed_form),
            state_level: Some(state_level),
            values: BTreeMap::new(),
        }
    }

    /// `value` must not exceed `limit` by more than the tolerance.
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        let mut c = Self::flag(name, value <= limit + TOLERANCE);
        c.values.insert("value".into(), value.into());
        c.values.insert("limit".into(), limit.into());
        c
    }

    pub fn flag(name: impl Into<String>, pass: bool) -> Self {
        Self {
            name: name.into(),
            pass,
            closed_form: None,
            state_level: None,
            values: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.values
            .insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub config: RunConfig,
    pub pass: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<SweepRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_seconds: Option<f64>,
}

#[derive(Serialize)]
struct CheckRow<'a> {
    name: &'a str,
    pass: bool,
    closed_form: Option<f64>,
    state_level: Option<f64>,
}

impl Report {
    pub fn new(config: &RunConfig, checks: Vec<Check>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            config: config.clone(),
            pass: checks.iter().all(|c| c.pass),
            checks,
            rows: None,
            elapsed_seconds: None,
        }
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> Result<Vec<u8>, CliError> {
        let mut out = serde_json::to_vec_pretty(self).map_err(std::io::Error::other)?;
        out.push(b'\n');
        Ok(out)
    }

    /// Sweep rows when present, otherwise one row per check.
    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        match &self.rows {
            Some(rows) => {
                for r in rows {
                    w.serialize(r).map_err(std::io::Error::other)?;
                }
            }
            None => {
                for c in &self.checks {
                    w.serialize(CheckRow {
                        name: &c.name,
                        pass: c.pass,
                        closed_form: c.closed_form,
                        state_level: c.state_level,
                    })
                    .map_err(std::io::Error::other)?;
                }
            }
        }
        w.into_inner().map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))
    }
}
