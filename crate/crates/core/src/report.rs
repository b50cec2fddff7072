//! The machine-readable envelope shared by every CLI command.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::spacefile::SCHEMA_VERSION;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub space: Option<String>,
    pub seed: u64,
    pub samples: usize,
    /// Parameter values actually used, as rational strings.
    pub parameters: BTreeMap<String, String>,
    pub result: Value,
    pub pass: bool,
    pub timing_ms: u128,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            EXIT_OK
        } else {
            EXIT_NEGATIVE
        }
    }
}

/// Malformed or inconsistent input exits with 2; anything raised while
/// computing on a valid space exits with 1.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::Io(_)
        | Error::Json(_)
        | Error::InvalidStructure(_)
        | Error::InvalidNorm(_) => EXIT_INPUT,
        _ => EXIT_NEGATIVE,
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse",
        Error::Io(_) => "io",
        Error::Json(_) => "json",
        Error::InvalidStructure(_) => "invalid_structure",
        Error::InvalidNorm(_) => "invalid_norm",
        Error::Unsolvable { .. } => "unsolvable",
        Error::DenominatorVanishes { .. } => "denominator_vanishes",
        Error::HypothesesNotMet(_) => "hypotheses_not_met",
        Error::RankDeficient { .. } => "rank_deficient",
        Error::SelfCheck(_) => "self_check",
        _ => "internal",
    }
}

pub fn error_json(command: &str, seed: u64, kind: &str, message: &str) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "seed": seed,
        "error": { "kind": kind, "message": message },
    })
}
