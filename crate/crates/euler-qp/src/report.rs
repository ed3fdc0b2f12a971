//! Verification reports: one record per identity, with the mode (exact in
//! the free algebra, or oracle at sampled points), the status, and the
//! residual or sample log on failure.
//!
//! The canonical JSON is replayable: the same seed and config produce a
//! byte-identical document. Wall-clock timing therefore appears only in the
//! human-readable rendering, never in the JSON.

use serde::Serialize;

#[derive(Serialize, Clone, Debug)]
pub struct Record {
    pub identity: String,
    pub mode: &'static str,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<serde_json::Value>,
}

#[derive(Serialize, Clone, Debug)]
pub struct ConfigSummary {
    pub dims: Vec<(usize, usize)>,
    pub trials: usize,
    pub range: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mutate: Option<String>,
}

#[derive(Serialize, Clone, Debug)]
pub struct Report {
    pub schema: &'static str,
    pub suite: String,
    pub n: usize,
    pub seed: u64,
    pub config: ConfigSummary,
    pub records: Vec<Record>,
    pub passed: bool,
}

pub const REPORT_SCHEMA: &str = "verification-report/1";

impl Report {
    pub fn new(suite: &str, n: usize, seed: u64, config: ConfigSummary) -> Self {
        Report {
            schema: REPORT_SCHEMA,
            suite: suite.to_string(),
            n,
            seed,
            config,
            records: Vec::new(),
            passed: true,
        }
    }

    pub fn push_exact(&mut self, identity: impl Into<String>, ok: bool, residual: Option<String>) {
        if !ok {
            self.passed = false;
        }
        self.records.push(Record {
            identity: identity.into(),
            mode: "exact",
            status: if ok { "pass" } else { "fail" },
            residual: if ok { None } else { residual },
            samples: None,
        });
    }

    pub fn push_oracle(
        &mut self,
        identity: impl Into<String>,
        ok: bool,
        samples: Option<serde_json::Value>,
    ) {
        if !ok {
            self.passed = false;
        }
        self.records.push(Record {
            identity: identity.into(),
            mode: "oracle",
            status: if ok { "pass" } else { "fail" },
            residual: None,
            samples,
        });
    }

    pub fn merge(&mut self, other: Report) {
        if !other.passed {
            self.passed = false;
        }
        self.records.extend(other.records);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self, elapsed_ms: Option<u128>) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "suite {} (n = {}, seed = {})\n",
            self.suite, self.n, self.seed
        ));
        let mut failures = 0usize;
        for r in &self.records {
            if r.status == "fail" {
                failures += 1;
                out.push_str(&format!("  FAIL [{}] {}\n", r.mode, r.identity));
                if let Some(res) = &r.residual {
                    out.push_str(&format!("       residual: {res}\n"));
                }
            }
        }
        out.push_str(&format!(
            "  {} identities, {} failed -> {}",
            self.records.len(),
            failures,
            if self.passed { "PASS" } else { "FAIL" }
        ));
        if let Some(ms) = elapsed_ms {
            out.push_str(&format!(" ({ms} ms)"));
        }
        out.push('\n');
        out
    }
}
