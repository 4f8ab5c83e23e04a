use std::ffi::OsString;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::SUBCOMMANDS;
use crate::Failure;

/// Location of the `--config` value in `argv`, if any.
fn config_path(argv: &[OsString]) -> Option<PathBuf> {
    let mut it = argv.iter().skip(1);
    while let Some(arg) = it.next() {
        let s = arg.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(v) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(v));
        }
    }
    None
}

fn flag_args(map: &Map<String, Value>) -> Result<Vec<OsString>, Failure> {
    let mut out = Vec::new();
    for (key, value) in map {
        if key == "command" || key == "config" {
            continue;
        }
        let flag = format!("--{key}");
        match value {
            Value::Null | Value::Bool(false) => {}
            Value::Bool(true) => out.push(flag.into()),
            Value::Number(n) => {
                out.push(flag.into());
                out.push(n.to_string().into());
            }
            Value::String(s) => {
                out.push(flag.into());
                out.push(s.into());
            }
            _ => return Err(Failure::Usage(format!("config key {key:?} must be a scalar"))),
        }
    }
    Ok(out)
}

/// Inserts flags from the `--config` file right after the subcommand name,
/// so that flags given on the command line (which come later) override them.
pub fn merge_config(argv: Vec<OsString>) -> Result<Vec<OsString>, Failure> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("config {} is not valid JSON: {e}", path.display())))?;
    let Value::Object(map) = value else {
        return Err(Failure::Usage(format!("config {} must hold a JSON object", path.display())));
    };
    let Some(pos) = argv
        .iter()
        .position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()))
    else {
        return Ok(argv);
    };
    let mut merged = argv[..=pos].to_vec();
    merged.extend(flag_args(&map)?);
    merged.extend_from_slice(&argv[pos + 1..]);
    Ok(merged)
}

/// `<out>.config.json`
pub fn sidecar(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".config.json");
    PathBuf::from(s)
}

/// Writes the effective parameters next to `out`.
pub fn echo_config<T: Serialize>(command: &str, args: &T, out: &Path) -> Result<(), Failure> {
    let mut value = serde_json::to_value(args).map_err(|e| Failure::Runtime(e.to_string()))?;
    if let Value::Object(map) = &mut value {
        map.insert("command".into(), Value::String(command.into()));
    }
    let mut text = serde_json::to_string_pretty(&value).map_err(|e| Failure::Runtime(e.to_string()))?;
    text.push('\n');
    std::fs::write(sidecar(out), text).map_err(|e| Failure::Runtime(format!("{}: {e}", sidecar(out).display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn flags_follow_the_subcommand() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("c.json");
        std::fs::write(&cfg, r#"{"n-terms": 7, "find-minima": true, "grid": 10, "command": "interval", "x": null}"#).unwrap();
        let argv = os(&["nodal", "--config", cfg.to_str().unwrap(), "interval", "--n-terms", "3"]);
        let merged = merge_config(argv).unwrap();
        let tail: Vec<String> = merged[4..].iter().map(|s| s.to_string_lossy().into_owned()).collect();
        assert_eq!(tail, ["--find-minima", "--grid", "10", "--n-terms", "7", "--n-terms", "3"]);
    }

    #[test]
    fn sidecar_name() {
        assert_eq!(sidecar(Path::new("out/f.csv")), PathBuf::from("out/f.csv.config.json"));
    }
}
