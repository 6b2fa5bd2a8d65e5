//! `--config FILE`: a JSON object whose keys are long flag names. Values
//! fill in flags that are absent from the command line.

use std::ffi::OsString;

use pauli_access::{Error, Result};
use serde_json::Value;

fn config_path(argv: &[OsString]) -> Option<OsString> {
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(rest) = s.strip_prefix("--config=") {
            return Some(rest.into());
        }
    }
    None
}

fn present(argv: &[OsString], flag: &str) -> bool {
    argv.iter().any(|a| {
        let s = a.to_string_lossy();
        s == flag || s.strip_prefix(flag).is_some_and(|r| r.starts_with('='))
    })
}

fn scalar(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(Error::InvalidInput(format!(
            "unsupported config value {other}"
        ))),
    }
}

pub fn merged_args(mut argv: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.to_string_lossy())))?;
    let Value::Object(map) = serde_json::from_str::<Value>(&text)? else {
        return Err(Error::InvalidInput("config must be a JSON object".into()));
    };
    for (key, value) in map {
        if key == "config" {
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        if present(&argv, &flag) {
            continue;
        }
        match value {
            Value::Bool(true) => argv.push(flag.into()),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) => {
                let joined = items
                    .iter()
                    .map(scalar)
                    .collect::<Result<Vec<_>>>()?
                    .join(",");
                argv.push(format!("{flag}={joined}").into());
            }
            v => argv.push(format!("{flag}={}", scalar(&v)?).into()),
        }
    }
    Ok(argv)
}
