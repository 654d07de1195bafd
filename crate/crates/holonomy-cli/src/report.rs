//! Report envelope shared by every subcommand.

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub inputs: Value,
    pub tolerances: Value,
    pub results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl Report {
    pub fn new(command: &str, inputs: Value, tolerances: Value, results: Value) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            inputs,
            tolerances,
            results,
            timestamp: None,
        }
    }

    /// Stamp with wall-clock seconds unless the caller wants reproducible bytes.
    pub fn stamped(mut self, reproducible: bool) -> Self {
        if !reproducible {
            self.timestamp = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .ok()
                .map(|d| d.as_secs());
        }
        self
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}

/// Curve trace rows for CSV output: (time, speed, cumulative length).
pub fn trace_csv(rows: &[(f64, f64, f64)]) -> String {
    let mut out = String::from("time,speed,cumulative_length\n");
    for (t, v, l) in rows {
        out.push_str(&format!("{t:.12e},{v:.12e},{l:.12e}\n"));
    }
    out
}
