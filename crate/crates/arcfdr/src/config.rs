//! Flat `key=value` config files.
//!
//! Keys are long flag names of the chosen subcommand (`mu-a=3.5`). Values
//! from the file are appended as flags unless the command line already sets
//! them, which gives flags > file > built-in defaults.

use std::ffi::OsString;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::{ArgAction, Command};

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("config line {}: expected key=value, got {raw:?}", n + 1);
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            bail!("config line {}: empty key", n + 1);
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

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

fn has_flag(args: &[OsString], long: &str) -> bool {
    let exact = format!("--{long}");
    let prefixed = format!("--{long}=");
    args.iter().any(|a| {
        let s = a.to_string_lossy();
        s == exact || s.starts_with(&prefixed)
    })
}

/// Returns `args` with the config file's settings appended as flags.
pub fn merge_config(args: Vec<OsString>, cmd: &Command) -> Result<Vec<OsString>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(Path::new(&path))
        .with_context(|| format!("cannot read config file {}", Path::new(&path).display()))?;
    let entries = parse_config(&text)?;
    let Some(sub) = cmd.get_subcommands().find(|s| args.iter().any(|a| a.to_string_lossy() == s.get_name())) else {
        return Ok(args);
    };
    let mut merged = args.clone();
    for (key, value) in entries {
        let Some(arg) = sub.get_arguments().find(|a| a.get_long() == Some(key.as_str())) else {
            let known = cmd.get_subcommands().any(|s| s.get_arguments().any(|a| a.get_long() == Some(key.as_str())));
            if known {
                continue;
            }
            bail!("unknown config key {key:?}");
        };
        if has_flag(&args, &key) {
            continue;
        }
        match arg.get_action() {
            ArgAction::SetTrue => match value.as_str() {
                "true" | "1" | "yes" => merged.push(format!("--{key}").into()),
                "false" | "0" | "no" => {}
                _ => bail!("config key {key:?} expects true or false, got {value:?}"),
            },
            _ => merged.push(format!("--{key}={value}").into()),
        }
    }
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_files() {
        let c = parse_config("# comment\nalpha = 0.05\n\nseed=7 # trailing\n").unwrap();
        assert_eq!(c, vec![("alpha".into(), "0.05".into()), ("seed".into(), "7".into())]);
        assert!(parse_config("alpha").is_err());
        assert!(parse_config("=3").is_err());
    }
}
