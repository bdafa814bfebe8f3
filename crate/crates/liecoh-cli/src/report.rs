//! Report envelope: every command emits a `ReportDoc` with the command name,
//! a digest of its inputs, the conventions version, and the result payload.
//! Serialization is deterministic (struct field order plus BTreeMap keys), so
//! repeated runs are byte-identical.

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Serialize)]
pub struct ReportDoc {
    pub command: String,
    pub inputs_digest: String,
    pub conventions: &'static str,
    pub result: serde_json::Value,
}

pub fn digest_inputs(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    format!("sha256:{:x}", h.finalize())
}

pub fn emit(command: &str, inputs_digest: String, result: serde_json::Value) -> String {
    let doc = ReportDoc {
        command: command.to_string(),
        inputs_digest,
        conventions: liecoh::CONVENTIONS_VERSION,
        result,
    };
    serde_json::to_string_pretty(&doc).expect("report serialization cannot fail")
}
