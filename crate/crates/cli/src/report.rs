use serde::{Deserialize, Serialize};

/// One measured quantity against its tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    /// The identity or property being checked.
    #[serde(rename = "paper_ref")]
    pub reference: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    /// Non-finite residuals fail and are stored as `f64::MAX` so the JSON stays valid.
    pub fn measured(id: &str, reference: &str, residual: f64, tol: f64) -> Self {
        let (residual, note) = if residual.is_finite() {
            (residual, None)
        } else {
            (f64::MAX, Some(format!("non-finite residual {residual}")))
        };
        Self {
            id: id.into(),
            reference: reference.into(),
            residual,
            tol,
            pass: note.is_none() && residual <= tol,
            note,
        }
    }

    pub fn skipped(id: &str, reference: &str, note: String) -> Self {
        Self {
            id: id.into(),
            reference: reference.into(),
            residual: 0.0,
            tol: 0.0,
            pass: true,
            note: Some(note),
        }
    }

    pub fn failed(id: &str, reference: &str, note: String) -> Self {
        Self {
            pass: false,
            ..Self::skipped(id, reference, note)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub params: serde_json::Value,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub seconds: f64,
}

impl Report {
    pub fn new(suite: &str, params: serde_json::Value, checks: Vec<Check>, seconds: f64) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self {
            suite: suite.into(),
            params,
            checks,
            pass,
            seconds,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports hold only finite numbers")
    }
}
