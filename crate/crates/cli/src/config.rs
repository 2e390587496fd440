//! Flat `key = value` config files that stand in for command-line flags.
//!
//! Each key is a long flag name without the dashes. Blank lines and lines
//! starting with `#` are ignored. Flags given on the command line win.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

/// Parses `key = value` lines, keeping file order.
pub fn parse(text: &str) -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!(
                "config line {}: expected `key = value`, got `{line}`",
                no + 1
            );
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || k.starts_with('-') {
            bail!("config line {}: bad key `{k}`", no + 1);
        }
        if out.iter().any(|(seen, _)| seen == k) {
            bail!("config line {}: duplicate key `{k}`", no + 1);
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

/// Value of `--config` in `args`, if present.
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

fn has_flag(args: &[OsString], key: &str) -> bool {
    let flag = format!("--{key}");
    let prefixed = format!("--{key}=");
    args.iter().any(|a| {
        let s = a.to_string_lossy();
        s == flag || s.starts_with(&prefixed)
    })
}

/// Appends `--key value` for each config entry not already given as a flag.
pub fn merge_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let path = Path::new(&path);
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))?;
    let entries = parse(&text).with_context(|| format!("in config {}", path.display()))?;
    let mut merged = args.clone();
    for (k, v) in entries {
        if k == "config" {
            bail!("config {} may not name another config", path.display());
        }
        if !has_flag(&args, &k) {
            merged.push(format!("--{k}").into());
            merged.push(v.into());
        }
    }
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn parses_pairs_and_comments() {
        let p = parse("# grid\neps = 0.5\n\ndelta=1e-5\n").unwrap();
        assert_eq!(
            p,
            vec![
                ("eps".into(), "0.5".into()),
                ("delta".into(), "1e-5".into())
            ]
        );
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(parse("eps 0.5").is_err());
        assert!(parse("--eps = 1").is_err());
        assert!(parse("eps = 1\neps = 2").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        fs::write(&path, "eps = 0.5\ndelta = 1e-3\n").unwrap();
        let args = os(&[
            "dpnl",
            "calibrate",
            "--eps",
            "2",
            "--config",
            path.to_str().unwrap(),
        ]);
        let merged = merge_config(args).unwrap();
        let tail: Vec<String> = merged[6..]
            .iter()
            .map(|s| s.to_string_lossy().into())
            .collect();
        assert_eq!(tail, vec!["--delta", "1e-3"]);
    }

    #[test]
    fn no_config_is_identity() {
        let args = os(&["dpnl", "sample", "--n", "3"]);
        assert_eq!(merge_config(args.clone()).unwrap(), args);
    }
}
