use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Structured result of one invocation, emitted verbatim with `--json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub operation: String,
    pub inputs: BTreeMap<String, Value>,
    /// Present iff the exact path applied.
    pub exact: Option<String>,
    pub decimal: f64,
    pub oracle_value: Option<f64>,
    pub oracle_error: Option<f64>,
    /// Present iff an oracle ran.
    pub agreement_sigma: Option<f64>,
    /// `ok`, `disagree` (oracle outside its threshold) or `mismatch`
    /// (the two routes of `reduce` differ).
    pub status: String,
}

pub const STATUS_OK: &str = "ok";
pub const STATUS_DISAGREE: &str = "disagree";
pub const STATUS_MISMATCH: &str = "mismatch";

impl Report {
    pub fn new(operation: &str, decimal: f64) -> Self {
        Self {
            operation: operation.to_string(),
            inputs: BTreeMap::new(),
            exact: None,
            decimal,
            oracle_value: None,
            oracle_error: None,
            agreement_sigma: None,
            status: STATUS_OK.to_string(),
        }
    }

    pub fn input(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn is_ok(&self) -> bool {
        self.status == STATUS_OK
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report fields are serializable")
    }

    /// Text output: `<exact> = <decimal>` followed by oracle lines.
    pub fn write_human(&self, out: &mut dyn Write, digits: usize, extra: &[String]) -> io::Result<()> {
        let decimal = format_significant(self.decimal, digits);
        match &self.exact {
            Some(exact) => writeln!(out, "{exact} = {decimal}")?,
            None => writeln!(out, "{decimal}")?,
        }
        for line in extra {
            writeln!(out, "{line}")?;
        }
        if let Some(value) = self.oracle_value {
            let method = self
                .inputs
                .get("oracle")
                .and_then(Value::as_str)
                .unwrap_or("oracle");
            let error = self
                .oracle_error
                .map(|e| format_significant(e, 3))
                .unwrap_or_else(|| "inf".into());
            writeln!(out, "{method}: {} +/- {error}", format_significant(value, digits))?;
        }
        if let Some(sigma) = self.agreement_sigma {
            writeln!(out, "agreement: {} sigma, {}", format_significant(sigma, 3), self.status)?;
        } else if !self.is_ok() {
            writeln!(out, "status: {}", self.status)?;
        }
        Ok(())
    }
}

/// `%g`-style rendering with `digits` significant digits and trailing zeros
/// removed.
pub fn format_significant(value: f64, digits: usize) -> String {
    if !value.is_finite() {
        return value.to_string();
    }
    if value == 0.0 {
        return "0".into();
    }
    let digits = digits.clamp(1, 17);
    let sci = format!("{:.*e}", digits - 1, value);
    let (mantissa, exponent) = sci.split_once('e').expect("scientific format");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if exponent < -5 || exponent >= digits as i32 {
        return format!("{}e{exponent}", trim_zeros(mantissa));
    }
    let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
    trim_zeros(&format!("{value:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
