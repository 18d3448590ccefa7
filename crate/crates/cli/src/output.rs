//! Number formatting and atomic file output.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use psturm::cocycle::ExtFloat;
use serde_json::{Number, Value};

use crate::config::RunConfig;

/// `x` at 17 significant digits; `null` when not finite.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(fixed(&format!("{x:.16e}")))
}

pub fn ext(x: ExtFloat) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(fixed(&x.to_string()))
}

fn fixed(text: &str) -> Number {
    serde_json::from_str(text).expect("scientific notation is valid JSON")
}

/// CSV cell for a float, matching the JSON digits.
pub fn cell(x: f64) -> String {
    if x.is_finite() { format!("{x:.16e}") } else { String::new() }
}

/// Wraps a payload with the tool version and resolved config.
pub fn envelope(command: &str, cfg: &RunConfig, result: Value) -> Result<Value> {
    Ok(serde_json::json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": serde_json::to_value(cfg)?,
        "result": result,
    }))
}

/// CSV preamble echoing the version and config as `#` comments.
pub fn csv_header(command: &str, cfg: &RunConfig) -> Result<String> {
    let mut out = format!("# {} {} {command}\n", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"));
    for line in cfg.emit()?.lines() {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    Ok(out)
}

/// Writes through a temp file in the target directory, then renames.
pub fn write_atomic(path: Option<&Path>, body: &str) -> Result<()> {
    let Some(path) = path else {
        std::io::stdout().write_all(body.as_bytes())?;
        return Ok(());
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create a temp file in {}", dir.display()))?;
    tmp.write_all(body.as_bytes())?;
    tmp.persist(path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(num(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(num(-2.0).to_string(), "-2.0000000000000000e+0");
        assert_eq!(num(f64::NAN), Value::Null);
    }
}
