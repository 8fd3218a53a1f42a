//! The structured result every subcommand produces: a pass/fail verdict,
//! a sorted key/value detail tree for the JSON format, and pre-rendered
//! lines for the text format.
//!
//! JSON reports are byte-deterministic: `serde_json`'s default map keeps
//! keys sorted, and every collection written into the details tree is
//! built in a fixed order, so identical inputs and seeds serialize to
//! identical bytes regardless of how many worker threads ran.

use serde_json::{json, Map, Value as Json};

/// The JSON report layout version, bumped on any breaking change to the
/// envelope or to a detail payload.
pub const SCHEMA_VERSION: u64 = 1;

#[derive(Clone, Debug)]
pub struct Report {
    command: String,
    pass: bool,
    details: Map<String, Json>,
    lines: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            pass: true,
            details: Map::new(),
            lines: Vec::new(),
        }
    }

    pub fn pass(&self) -> bool {
        self.pass
    }

    /// Marks the report failed; the verdict never recovers to pass.
    pub fn fail(&mut self) {
        self.pass = false;
    }

    /// Records one detail value for the JSON format.
    pub fn set(&mut self, key: impl Into<String>, value: Json) {
        self.details.insert(key.into(), value);
    }

    /// Appends one line to the text rendering.
    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    /// The versioned JSON envelope, pretty-printed with sorted keys.
    pub fn to_json(&self) -> String {
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "status": if self.pass { "pass" } else { "fail" },
            "details": Json::Object(self.details.clone()),
        });
        serde_json::to_string_pretty(&doc).expect("report trees serialize infallibly")
    }

    /// The text rendering: every recorded line, then the verdict.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            out.push_str(line);
            out.push('\n');
        }
        out.push_str("result: ");
        out.push_str(if self.pass { "pass" } else { "fail" });
        out.push('\n');
        out
    }
}

/// Re-parses a canonical document emitted by one of the library writers
/// so it can be embedded in the details tree as structured JSON.
pub fn payload(text: &str) -> Json {
    serde_json::from_str(text).expect("library writers emit valid JSON")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_has_version_and_sorted_keys() {
        let mut report = Report::new("probe");
        report.set("zeta", json!(1));
        report.set("alpha", json!("x"));
        report.line("one line");
        let text = report.to_json();
        assert!(text.contains("\"schema_version\": 1"));
        assert!(text.contains("\"status\": \"pass\""));
        // Sorted serialization: "alpha" precedes "zeta".
        assert!(text.find("\"alpha\"").unwrap() < text.find("\"zeta\"").unwrap());
        report.fail();
        assert!(report.to_json().contains("\"status\": \"fail\""));
        assert_eq!(report.to_text(), "one line\nresult: fail\n");
    }
}
