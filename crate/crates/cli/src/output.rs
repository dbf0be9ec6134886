use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

pub const ARTIFACT: &str = "salagean";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// `{"artifact", "version", "command", "config", "result"}`, pretty-printed.
pub fn json_document<C: Serialize, R: Serialize>(command: &str, config: &C, result: &R) -> String {
    let doc = json!({
        "artifact": ARTIFACT,
        "version": VERSION,
        "command": command,
        "config": config,
        "result": result,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("values are always serializable");
    s.push('\n');
    s
}

/// `# key=value` lines echoing the artifact and every config field.
pub fn csv_header<C: Serialize>(command: &str, config: &C) -> String {
    let mut s = format!("# artifact={ARTIFACT}\n# version={VERSION}\n# command={command}\n");
    // serde_json maps are ordered by key, so the echo is stable.
    if let Value::Object(map) = serde_json::to_value(config).expect("config is serializable") {
        for (k, v) in map {
            match v {
                Value::Null => {}
                Value::String(text) => writeln!(s, "# {k}={text}").unwrap(),
                other => writeln!(s, "# {k}={other}").unwrap(),
            }
        }
    }
    s
}

/// Shortest round-trip form, switching to exponent notation outside `[1e-4, 1e15)`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}
