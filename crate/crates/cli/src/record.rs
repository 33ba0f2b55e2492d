//! Output records and their JSON and CSV encodings.
//!
//! Every float is written as `{:.16e}` (17 significant digits), which parses
//! back to the identical `f64`. Non-finite values become `null` in JSON and
//! an empty cell in CSV.

use std::collections::BTreeMap;

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::error::{CliError, CliResult};

pub const CSV_COLUMNS: [&str; 9] = [
    "command", "name", "n", "rho", "tau", "method", "value", "err_est", "seed",
];

/// Text form shared by both encodings; `None` for non-finite input.
pub fn format_num(x: f64) -> Option<String> {
    x.is_finite().then(|| format!("{x:.16e}"))
}

/// A float serialized with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match format_num(self.0) {
            Some(text) => RawValue::from_string(text)
                .map_err(serde::ser::Error::custom)?
                .serialize(s),
            None => s.serialize_none(),
        }
    }
}

/// Loosely typed value for the `inputs` and `summary` maps.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Int(i64),
    Num(f64),
    Nums(Vec<f64>),
    Text(String),
    Bool(bool),
    Null,
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Field::Int(v) => s.serialize_i64(*v),
            Field::Num(v) => Num(*v).serialize(s),
            Field::Nums(vs) => {
                let mut seq = s.serialize_seq(Some(vs.len()))?;
                for v in vs {
                    seq.serialize_element(&Num(*v))?;
                }
                seq.end()
            }
            Field::Text(v) => s.serialize_str(v),
            Field::Bool(v) => s.serialize_bool(*v),
            Field::Null => s.serialize_none(),
        }
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as i64)
    }
}

impl From<u64> for Field {
    fn from(v: u64) -> Self {
        Field::Int(v as i64)
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Num(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.to_string())
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

impl From<Vec<f64>> for Field {
    fn from(v: Vec<f64>) -> Self {
        Field::Nums(v)
    }
}

impl From<Option<f64>> for Field {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Field::Null, Field::Num)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultEntry {
    pub name: String,
    pub value: Num,
    pub err_est: Num,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, Num>,
}

impl ResultEntry {
    pub fn new(name: &str, value: f64, err_est: f64) -> Self {
        Self {
            name: name.to_string(),
            value: Num(value),
            err_est: Num(err_est),
            n: None,
            rho: None,
            tau: None,
            method: None,
            tolerance: None,
            pass: None,
            params: BTreeMap::new(),
        }
    }

    pub fn at(mut self, n: usize, rho: Option<f64>, tau: Option<f64>) -> Self {
        self.n = Some(n);
        self.rho = rho.map(Num);
        self.tau = tau.map(Num);
        self
    }

    pub fn method(mut self, m: &str) -> Self {
        self.method = Some(m.to_string());
        self
    }

    pub fn check(mut self, tolerance: f64, pass: bool) -> Self {
        self.tolerance = Some(Num(tolerance));
        self.pass = Some(pass);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tolerances {
    pub rel_tol: Num,
    pub abs_tol: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub seed: Option<u64>,
    pub tolerances: Tolerances,
    pub version: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputRecord {
    pub command: String,
    pub inputs: BTreeMap<String, Field>,
    pub results: Vec<ResultEntry>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub summary: BTreeMap<String, Field>,
    pub metadata: Metadata,
    /// Drives the exit status: false for a verification that did not pass.
    #[serde(skip)]
    pub success: bool,
}

impl OutputRecord {
    pub fn new(command: &str, rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            results: Vec::new(),
            summary: BTreeMap::new(),
            metadata: Metadata {
                seed: None,
                tolerances: Tolerances {
                    rel_tol: Num(rel_tol),
                    abs_tol: Num(abs_tol),
                },
                version: env!("CARGO_PKG_VERSION"),
            },
            success: true,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Field>) {
        self.inputs.insert(key.to_string(), value.into());
    }

    pub fn summarize(&mut self, key: &str, value: impl Into<Field>) {
        self.summary.insert(key.to_string(), value.into());
    }

    pub fn to_json(&self) -> CliResult<String> {
        serde_json::to_string_pretty(self).map_err(|e| CliError::Output(e.to_string()))
    }

    /// One row per result entry under [`CSV_COLUMNS`].
    pub fn to_csv(&self) -> CliResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let out_err = |e: csv::Error| CliError::Output(e.to_string());
        w.write_record(CSV_COLUMNS).map_err(out_err)?;
        let num = |v: Option<Num>| v.and_then(|x| format_num(x.0)).unwrap_or_default();
        let seed = self.metadata.seed.map(|s| s.to_string()).unwrap_or_default();
        for r in &self.results {
            w.write_record([
                self.command.clone(),
                r.name.clone(),
                r.n.map(|n| n.to_string()).unwrap_or_default(),
                num(r.rho),
                num(r.tau),
                r.method.clone().unwrap_or_default(),
                num(Some(r.value)),
                num(Some(r.err_est)),
                seed.clone(),
            ])
            .map_err(out_err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
    }
}
