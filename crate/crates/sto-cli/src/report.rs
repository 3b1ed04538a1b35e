//! Result records. JSON numbers carry 17 significant digits so that
//! regression baselines compare exactly.

use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

/// f64 serialized as `d.dddddddddddddddde±x`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(transparent)]
pub struct Num(pub f64);

impl Num {
    pub fn text(self) -> String {
        format!("{:.16e}", self.0)
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(self.text()).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub value: Num,
    #[serde(rename = "errorEstimate")]
    pub error_estimate: Num,
    #[serde(rename = "muUsed")]
    pub mu_used: u32,
    #[serde(rename = "relDiff")]
    pub rel_diff: Num,
    pub tolerance: Num,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralRecord {
    pub kind: String,
    #[serde(rename = "R")]
    pub r: Num,
    pub value: Num,
    #[serde(rename = "muUsed")]
    pub mu_used: u32,
    #[serde(rename = "tailEstimate")]
    pub tail_estimate: Num,
    #[serde(rename = "termCount")]
    pub term_count: u64,
    /// Seconds; omitted unless timing was requested.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle: Option<OracleComparison>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRecord {
    pub kind: String,
    #[serde(rename = "R")]
    pub r: Num,
    pub value: Num,
    #[serde(rename = "errorEstimate")]
    pub error_estimate: Num,
    #[serde(rename = "muUsed")]
    pub mu_used: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed: Option<Num>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub args: Vec<Num>,
    pub value: Num,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle: Option<Num>,
    #[serde(rename = "oracleError", skip_serializing_if = "Option::is_none", default)]
    pub oracle_error: Option<Num>,
    #[serde(rename = "relDiff", skip_serializing_if = "Option::is_none", default)]
    pub rel_diff: Option<Num>,
}

/// `|a-b|/|b|`, zero when both vanish.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("records always serialize")
}
