use std::collections::BTreeMap;
use std::fmt;
use std::io::Read;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

/// Exit statuses of the command-line contract.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_PRECISION: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    /// Input JSON that does not match the expected shape; `path` points at
    /// the offending field.
    Schema { source: String, path: String, message: String },
    Io(String),
    Lib(hdlf::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Schema { source, path, message } => write!(f, "{source}: at {path}: {message}"),
            CliError::Io(m) => write!(f, "{m}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<hdlf::Error> for CliError {
    fn from(e: hdlf::Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(hdlf::Error::PrecisionExhausted(_) | hdlf::Error::BoxExhausted(_)) => EXIT_PRECISION,
            CliError::Lib(hdlf::Error::NoCloseRoot(_)) => EXIT_VIOLATION,
            _ => EXIT_INPUT,
        }
    }

    pub fn to_json(&self) -> Value {
        let kind = match self {
            CliError::Schema { .. } => "schema",
            CliError::Io(_) => "io",
            CliError::Lib(hdlf::Error::PrecisionExhausted(_)) => "precision_exhausted",
            CliError::Lib(hdlf::Error::BoxExhausted(_)) => "box_exhausted",
            CliError::Lib(hdlf::Error::NoCloseRoot(_)) => "no_close_root",
            CliError::Lib(_) => "invalid",
        };
        let mut m = serde_json::json!({ "error": { "kind": kind, "message": self.to_string() } });
        if let CliError::Schema { path, .. } = self {
            m["error"]["path"] = Value::String(path.clone());
        }
        m
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Reads an input given as a path, `-` for stdin, or inline JSON.
pub fn read_source(src: &str) -> CliResult<String> {
    let t = src.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(src.to_string());
    }
    if src == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(src).map_err(|e| CliError::Io(format!("{src}: {e}")))
}

pub fn parse_value(src: &str) -> CliResult<Value> {
    let text = read_source(src)?;
    serde_json::from_str(&text).map_err(|e| CliError::Schema {
        source: src.to_string(),
        path: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })
}

/// Deserializes with the path of the failing field in the error.
pub fn from_value<T: DeserializeOwned>(src: &str, v: Value) -> CliResult<T> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = e.path().to_string();
        CliError::Schema { source: src.to_string(), path, message: e.into_inner().to_string() }
    })
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize to JSON")
}

/// Every artifact carries the config it was produced from and the echoed
/// inputs, so that (config, seed) reproduce it.
pub struct Artifact {
    pub config: Value,
    pub inputs: BTreeMap<String, Value>,
    pub result: Value,
    pub pass: bool,
}

impl Artifact {
    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "tool": concat!("hdlf ", env!("CARGO_PKG_VERSION")),
            "config": self.config,
            "inputs": self.inputs,
            "result": self.result,
            "pass": self.pass,
        })
    }
}

/// Pretty JSON with sorted keys (serde_json maps are ordered) and a final newline.
pub fn canonical(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

pub fn write_text(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
