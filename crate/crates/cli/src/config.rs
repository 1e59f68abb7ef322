//! `--config <file.json>` support: the file's keys become `--key=value` flags
//! placed ahead of the user's own flags, so the command line wins.

use std::ffi::OsString;

use serde_json::Value;

use crate::CliError;

/// Finds `--config PATH` / `--config=PATH` in `args`.
fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

/// Converts one JSON object into flags. Unknown keys are left for the
/// argument parser to reject.
pub fn flags_from_json(text: &str) -> Result<Vec<OsString>, CliError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))?;
    let Value::Object(map) = value else {
        return Err(CliError::Usage("config: expected a JSON object".into()));
    };
    let mut flags = Vec::new();
    for (key, v) in map {
        if key == "config" {
            return Err(CliError::Usage("config: nested `config` is not allowed".into()));
        }
        let flag = format!("--{}", key.replace('_', "-"));
        let scalar = |v: &Value| -> Result<String, CliError> {
            match v {
                Value::Number(n) => Ok(n.to_string()),
                Value::String(s) => Ok(s.clone()),
                _ => Err(CliError::Usage(format!("config: unsupported value for `{key}`"))),
            }
        };
        match &v {
            Value::Bool(true) => flags.push(flag.into()),
            Value::Bool(false) => {}
            Value::Array(items) => {
                let parts = items.iter().map(scalar).collect::<Result<Vec<_>, _>>()?;
                flags.push(format!("{flag}={}", parts.join(",")).into());
            }
            other => flags.push(format!("{flag}={}", scalar(other)?).into()),
        }
    }
    Ok(flags)
}

/// Returns `args` with the config file's flags spliced in after the
/// subcommand name.
pub fn expand(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| {
        CliError::Usage(format!("config {}: {e}", path.to_string_lossy()))
    })?;
    let flags = flags_from_json(&text)?;
    let at = args.len().min(2);
    let mut out = args[..at].to_vec();
    out.extend(flags);
    out.extend_from_slice(&args[at..]);
    Ok(out)
}
