use std::fmt;

use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "uag/1";

#[derive(Debug)]
pub enum CliError {
    Core(uag_core::Error),
    Io(String),
    Usage(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(m) | CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}

impl From<uag_core::Error> for CliError {
    fn from(e: uag_core::Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// What a command computed.
#[derive(Debug, Default)]
pub struct Outcome {
    /// `false` makes the process exit with 1.
    pub verdict: bool,
    pub text: String,
    pub result: Value,
    pub witnesses: Vec<Value>,
    pub dot: Option<String>,
}

impl Outcome {
    pub fn new(verdict: bool, text: String, result: Value) -> Outcome {
        Outcome {
            verdict,
            text,
            result,
            ..Outcome::default()
        }
    }
}

pub fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

/// The full report. Keys are sorted, so equal inputs give equal bytes.
pub fn render(command: &str, inputs: Map<String, Value>, outcome: &Outcome) -> String {
    let report = json!({
        "schema": SCHEMA,
        "command": command,
        "inputs": Value::Object(inputs),
        "result": outcome.result,
        "witnesses": outcome.witnesses,
    });
    let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
    s.push('\n');
    s
}
