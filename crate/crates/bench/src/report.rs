//! Line-delimited JSON reports, one record per verdict or value.

use std::io::{self, Write};
use std::time::{SystemTime, UNIX_EPOCH};

use iwasawa_core::mtt::Verdict;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub const REPORT_SCHEMA: u32 = 1;

/// Parameters echoed into every line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub level: u32,
    pub prec: u32,
    pub degree: usize,
    pub nmax: usize,
    pub tol: f64,
    pub denom_bound: u64,
}

impl Default for Params {
    fn default() -> Self {
        Params { level: 1, prec: 6, degree: 4, nmax: 100_000, tol: 1e-6, denom_bound: 256 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportLine {
    pub schema: u32,
    pub command: String,
    pub curves: Vec<String>,
    pub p: Option<u64>,
    pub params: Params,
    /// `holds-at-precision`, `fails`, `indeterminate`, `value` or `error`.
    pub status: String,
    pub claim: Option<String>,
    pub payload: Value,
    pub error_budget: Value,
    pub error: Option<String>,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

impl ReportLine {
    pub fn new(command: &str, curves: &[&str], p: Option<u64>, params: &Params) -> Self {
        ReportLine {
            schema: REPORT_SCHEMA,
            command: command.into(),
            curves: curves.iter().map(|s| s.to_string()).collect(),
            p,
            params: params.clone(),
            status: "value".into(),
            claim: None,
            payload: Value::Object(Map::new()),
            error_budget: Value::Object(Map::new()),
            error: None,
            timestamp: now(),
        }
    }

    pub fn value(mut self, payload: Value, budget: Value) -> Self {
        self.payload = payload;
        self.error_budget = budget;
        self
    }

    pub fn verdict(mut self, v: &Verdict) -> Self {
        self.status = v.status.name().into();
        self.claim = Some(v.claim.clone());
        let mut m = Map::new();
        for (k, val) in &v.evidence {
            m.insert(k.clone(), Value::String(val.clone()));
        }
        self.payload = Value::Object(m);
        self.error_budget = serde_json::json!({ "tolerance": v.tolerance });
        self
    }

    pub fn failed(mut self, err: impl std::fmt::Display) -> Self {
        self.status = "error".into();
        self.error = Some(err.to_string());
        self
    }

    /// A `fails` or `error` line, other than a documented expected failure.
    pub fn is_failure(&self) -> bool {
        matches!(self.status.as_str(), "fails" | "error") && self.payload.get("documented_failure") != Some(&Value::Bool(true))
    }

    /// The line with its timestamp zeroed, for determinism checks.
    pub fn without_timestamp(&self) -> Self {
        ReportLine { timestamp: 0, ..self.clone() }
    }
}

pub fn write_lines(out: &mut impl Write, lines: &[ReportLine]) -> io::Result<()> {
    for l in lines {
        serde_json::to_writer(&mut *out, l)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn read_lines(text: &str) -> serde_json::Result<Vec<ReportLine>> {
    text.lines().filter(|l| !l.trim().is_empty()).map(serde_json::from_str).collect()
}
