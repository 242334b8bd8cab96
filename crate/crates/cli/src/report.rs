use idemfact::oracle::VerificationReport;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Status {
    Ok = 0,
    VerificationFailed = 1,
    InvalidInput = 2,
}

impl From<Status> for u8 {
    fn from(s: Status) -> u8 {
        s as u8
    }
}

impl TryFrom<u8> for Status {
    type Error = String;

    fn try_from(v: u8) -> Result<Self, String> {
        match v {
            0 => Ok(Status::Ok),
            1 => Ok(Status::VerificationFailed),
            2 => Ok(Status::InvalidInput),
            _ => Err(format!("unknown status {v}")),
        }
    }
}

/// The record of one command run. Byte-identical for identical input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub input_digest: String,
    pub output: Option<serde_json::Value>,
    pub verification: Option<VerificationReport>,
    pub status: Status,
    pub messages: Vec<String>,
}

impl RunReport {
    pub fn new(command: Vec<String>, input_digest: String) -> RunReport {
        RunReport {
            command,
            input_digest,
            output: None,
            verification: None,
            status: Status::Ok,
            messages: Vec::new(),
        }
    }

    pub fn fail(mut self, status: Status, message: impl Into<String>) -> RunReport {
        self.status = self.status.max(status);
        self.messages.push(message.into());
        self
    }

    /// Attaches an oracle verification; failures set status 1.
    pub fn verified(mut self, v: VerificationReport) -> RunReport {
        if !v.passed() {
            self.status = self.status.max(Status::VerificationFailed);
            self.messages.extend(v.failures.iter().cloned());
        }
        self.verification = Some(v);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{:x}", Sha256::digest(bytes))
}
