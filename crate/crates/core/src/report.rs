//! Structured verification records.
//!
//! Every check in this crate produces a [`VerificationReport`]: the claim
//! being checked (as a self-describing formula string), the exact parameters
//! and witnesses involved, and a pass/fail status. Reports render to a
//! human-readable text block and to a single machine-readable JSON line;
//! the machine form is byte-stable across reruns with identical inputs.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    /// The window or parameters do not allow the claim to be exercised.
    #[serde(rename = "insufficient-window")]
    InsufficientWindow,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::InsufficientWindow => "insufficient-window",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub id: String,
    /// Statement of the claim being checked, e.g. `d(f(p),r)=d(q,r)=2^-K`.
    pub anchor: String,
    pub params: Vec<(String, String)>,
    pub witnesses: Vec<(String, String)>,
    pub status: Status,
    pub seed: Option<u64>,
}

impl VerificationReport {
    pub fn new(id: impl Into<String>, anchor: impl Into<String>) -> Self {
        VerificationReport {
            id: id.into(),
            anchor: anchor.into(),
            params: Vec::new(),
            witnesses: Vec::new(),
            status: Status::Pass,
            seed: None,
        }
    }

    pub fn param(mut self, key: impl Into<String>, value: impl fmt::Display) -> Self {
        self.params.push((key.into(), value.to_string()));
        self
    }

    pub fn witness(mut self, key: impl Into<String>, value: impl fmt::Display) -> Self {
        self.witnesses.push((key.into(), value.to_string()));
        self
    }

    pub fn seeded(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    pub fn passed(mut self) -> Self {
        self.status = Status::Pass;
        self
    }

    pub fn failed(mut self) -> Self {
        self.status = Status::Fail;
        self
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    /// One JSON record, fields in fixed order.
    pub fn machine_line(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }

    pub fn text_block(&self) -> String {
        let mut out = format!("[{}] {}\n    claim: {}\n", self.status, self.id, self.anchor);
        if let Some(seed) = self.seed {
            out.push_str(&format!("    seed: {}\n", seed));
        }
        for (k, v) in &self.params {
            out.push_str(&format!("    param {} = {}\n", k, v));
        }
        for (k, v) in &self.witnesses {
            out.push_str(&format!("    witness {} = {}\n", k, v));
        }
        out
    }
}
