use serde::{Deserialize, Serialize};

/// Machine-readable output of every subcommand. Identical inputs give
/// identical reports apart from `timing`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    /// The invocation, as typed or as reconstructed from typed arguments.
    pub command: Vec<String>,
    /// Hex SHA-256 of the canonical instance file, for single-instance commands.
    pub instance_digest: Option<String>,
    pub results: serde_json::Value,
    pub timing: Timing,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

impl Report {
    pub fn new(
        command: Vec<String>,
        instance_digest: Option<String>,
        results: serde_json::Value,
    ) -> Self {
        Report {
            command,
            instance_digest,
            results,
            timing: Timing::default(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// The report with `timing` zeroed, for comparisons.
    pub fn without_timing(&self) -> Self {
        Report {
            timing: Timing::default(),
            ..self.clone()
        }
    }
}
